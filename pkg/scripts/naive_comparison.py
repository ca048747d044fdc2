"""Spanner-based exploration against path-by-path exploration on a random-Bernoulli grid."""
import argparse

import numpy as np

from spanroute.experiments import grid_bernoulli, run_traces
from spanroute.graph import enumerate_paths
from spanroute.policies import PolicySpec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=4)
    ap.add_argument("--horizon", type=int, default=10**4)
    ap.add_argument("--seeds", type=int, default=50)
    ap.add_argument("--w", type=float, nargs="+", default=[0.05, 0.1, 0.2, 0.5, 1.0])
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    net, model = grid_bernoulli(args.size, args.size)
    paths = enumerate_paths(net)
    print(f"paths {len(paths)}, m {net.m}, d {paths.dimension}")
    print("w,dsee_star,naive_dsee,ratio")
    for w in args.w:
        r = [np.mean([tr.cumulative[-1] for tr in run_traces(paths, model, PolicySpec(name, {"w": w}),
                                                             args.horizon, range(args.seeds), args.jobs)])
             for name in ("dsee-star", "naive-dsee")]
        print(f"{w},{r[0]:.2f},{r[1]:.2f},{r[0] / r[1]:.3f}")
    ucb = run_traces(paths, model, PolicySpec("naive-ucb"), args.horizon, range(args.seeds), args.jobs)
    print(f"naive-ucb,{np.mean([tr.cumulative[-1] for tr in ucb]):.2f}")


if __name__ == "__main__":
    main()
