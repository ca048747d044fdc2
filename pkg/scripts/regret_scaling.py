"""Cumulative regret of dsee-star and dsee-prime on the Bernoulli parallel-serial network."""
import argparse

import numpy as np

from spanroute.experiments import bernoulli_parallel_serial, parallel_serial_paths, run_traces
from spanroute.policies import PolicySpec
from spanroute.sim import log_checkpoints


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--horizon", type=int, default=10**5)
    ap.add_argument("--seeds", type=int, default=50)
    ap.add_argument("--w", type=float, default=5.0)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    paths, model = parallel_serial_paths(), bernoulli_parallel_serial()
    cps = log_checkpoints(args.horizon)
    for spec in (PolicySpec("dsee-star", {"w": args.w}), PolicySpec("dsee-prime")):
        traces = run_traces(paths, model, spec, args.horizon, range(args.seeds), args.jobs)
        R = np.mean([tr.cumulative_at(cps) for tr in traces], axis=0)
        print(f"# {spec.name}")
        print("t,mean_cum_regret,R/ln(t)")
        for t, r in zip(cps, R):
            print(f"{t},{r:.4f},{r / max(np.log(t), 1):.4f}")


if __name__ == "__main__":
    main()
