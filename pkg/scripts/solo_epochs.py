"""Epoch-based policy on the cube {1,2}^3 against uniformly random play, with per-epoch schedule."""
import argparse

import numpy as np

from spanroute.experiments import run_traces, solo_cube
from spanroute.policies import PolicySpec, build_policy, solo_gap


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--horizon", type=int, default=10**5)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--t0", type=int, default=100)
    ap.add_argument("--c-form", default="cbrt-log", choices=["cbrt-log", "log-cbrt"])
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    actions, model = solo_cube()
    spec = PolicySpec("solo-epoch", {"t0": args.t0, "c_form": args.c_form})
    policy = build_policy(spec, actions, model)
    print("epoch,T_k,c_k,w_k")
    for k in range(12):
        T_k = policy.epoch_length(k)
        print(f"{k},{T_k},{solo_gap(T_k, args.c_form):.4g},{policy.epoch_w(T_k):.4g}")
    for s in (spec, PolicySpec("uniform-random")):
        traces = run_traces(actions, model, s, args.horizon, range(args.seeds), args.jobs)
        R = np.mean([tr.cumulative[-1] for tr in traces])
        share = np.mean([tr.explore.mean() for tr in traces])
        print(f"{s.name}: R(T)/T {R / args.horizon:.4f}, exploration share {share:.3f}")


if __name__ == "__main__":
    main()
