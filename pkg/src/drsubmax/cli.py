"""Command line entry point: ``drsubmax {generate,run,verify}``."""

import argparse
import sys

import numpy as np

from . import harness
from .verify import SUITES


def _generate(args):
    region, objectives = harness.build_adversary(
        args.dim, args.constraints, args.horizon, np.random.default_rng(args.seed),
        args.objective)
    harness.save_instance(args.out, region, objectives, seed=args.seed)
    print(f"wrote {args.out}: d={args.dim} m={args.constraints} T={args.horizon}")
    return 0


def _run(args):
    config = harness.ExperimentConfig.load(args.config)
    summary = harness.run_experiment(config, args.out)
    for s in summary:
        print(f"{s['algorithm']:>14s}  T={s['T']:<6d} avg regret "
              f"{s['avg_regret_mean']:.4g} ± {s['avg_regret_std']:.2g}")
    return 0


def _verify(args):
    failed = 0
    for name, passed, detail in SUITES[args.suite]():
        print(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}".rstrip())
        failed += not passed
    return 1 if failed else 0


def build_parser():
    parser = argparse.ArgumentParser(prog="drsubmax")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a random benchmark instance as JSON")
    g.add_argument("--dim", type=int, required=True)
    g.add_argument("--constraints", type=int, required=True)
    g.add_argument("--horizon", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--objective", choices=["nonmonotone", "monotone"], default="nonmonotone")
    g.add_argument("--out", required=True)
    g.set_defaults(func=_generate)

    r = sub.add_parser("run", help="run an experiment grid from a JSON config")
    r.add_argument("--config", required=True)
    r.add_argument("--out", required=True, help="output directory")
    r.set_defaults(func=_run)

    v = sub.add_parser("verify", help="run a property suite")
    v.add_argument("--suite", choices=sorted(SUITES), required=True)
    v.set_defaults(func=_verify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        print(f"drsubmax: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
