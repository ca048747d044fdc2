"""dsee-heavy on Pareto edge costs: regret normalized by sqrt(t) and by t."""
import argparse

import numpy as np

from spanroute.experiments import parallel_serial_paths, pareto_parallel_serial, run_traces
from spanroute.policies import PolicySpec
from spanroute.sim import log_checkpoints


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=2.5)
    ap.add_argument("--q", type=float, default=2.0)
    ap.add_argument("--v", type=float, default=1.0)
    ap.add_argument("--horizon", type=int, default=10**5)
    ap.add_argument("--seeds", type=int, default=50)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    spec = PolicySpec("dsee-heavy", {"v": args.v, "q": args.q})
    traces = run_traces(parallel_serial_paths(), pareto_parallel_serial(args.alpha, args.q), spec,
                        args.horizon, range(args.seeds), args.jobs)
    cps = log_checkpoints(args.horizon)
    R = np.mean([tr.cumulative_at(cps) for tr in traces], axis=0)
    print("t,mean_cum_regret,R/sqrt(t),R/t")
    for t, r in zip(cps, R):
        print(f"{t},{r:.4f},{r / np.sqrt(t):.4f},{r / t:.5f}")


if __name__ == "__main__":
    main()
