"""Command-line entry point for the experiment suites.

Usage: halfharmonic <suite> [--config PATH] [--out DIR] [--seed INT]
                    [--n INT] [--plot]

Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 bad configuration,
3 internal error.
"""

from __future__ import annotations

import argparse
import sys

from .experiments import SUITE_NAMES, ConfigError, parse_config, run_suite

_CSV_DOC = {
    "identities": "check,trial,error",
    "paraproduct": "case,index,value",
    "commutators": "case,index,value",
    "cancellation": "K,rT,rS,rR3,rStilde,rLone",
    "localization": "case,index,value,refined,drift",
    "solve": "case,iteration,energy,residual",
    "morrey": "case,r,value",
    "seq": "case,index,value,extra",
}


def _build_parser() -> argparse.ArgumentParser:
    schemas = "\n".join(f"  {name}: {cols}" for name, cols in _CSV_DOC.items())
    parser = argparse.ArgumentParser(
        prog="halfharmonic",
        description="Run one diagnostic suite and report pass/fail verdicts.",
        epilog="CSV schemas per suite:\n" + schemas,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("suite", choices=SUITE_NAMES, help="suite to run")
    parser.add_argument("--config", help="flat key = value configuration file")
    parser.add_argument("--out", help="directory for CSV (and SVG) artifacts")
    parser.add_argument("--seed", type=int, help="override the base seed")
    parser.add_argument("--n", type=int, help="override the sample count")
    parser.add_argument("--plot", action="store_true", help="also write an SVG plot")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        text = ""
        if args.config:
            try:
                with open(args.config) as fh:
                    text = fh.read()
            except OSError as exc:
                print(f"config error: {exc}", file=sys.stderr)
                return 2
        overrides = {"out": args.out, "seed": args.seed, "n": args.n}
        if args.plot:
            overrides["plot"] = True
        cfg = parse_config(text, suite=args.suite, overrides=overrides)
        result = run_suite(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    for v in result.verdicts:
        mark = "PASS" if v.passed else "FAIL"
        print(f"[{mark}] {result.suite}.{v.name}: value={v.value:.6g} threshold={v.threshold:.6g}")
    print(f"{result.suite}: {'pass' if result.passed else 'FAIL'} "
          f"({len(result.rows)} rows, {result.wall_clock:.2f}s)")
    return 0 if result.passed else 1


if __name__ == "__main__":
    sys.exit(main())
