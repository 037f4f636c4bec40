"""Moment-driven recovery of 10 spikes with gamma = 0.01 and m = 200 over several seeds."""

import argparse

from sparse_recover.cli import ExperimentSpec, run


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--n", type=int, default=10)
    ap.add_argument("--gamma", type=float, default=0.01)
    ap.add_argument("--m", type=int, default=200)
    args = ap.parse_args()
    for seed in range(args.seeds):
        spec = ExperimentSpec(
            command="recover1d",
            seed=seed,
            n=args.n,
            gamma=args.gamma,
            m=args.m,
            mode="empirical",
            out=f"figure2_seed{seed}.csv",
        )
        s = run(spec)
        print(f"seed {seed}: matched error {s['matched_error']:.4f}  cycle period {s['cycle_period']}")


if __name__ == "__main__":
    main()
