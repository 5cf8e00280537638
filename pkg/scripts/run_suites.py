"""Run the theorem suites over a grid of dimensions and scalar kinds.

    python scripts/run_suites.py --out-dir reports --trials 100 --seed 0

Writes one JSON report per (scalar, m) and prints a summary table.
Exit status is 0 iff every report passes.
"""
import argparse
import sys
from pathlib import Path

from quadliouville.suite import CLASSES, SuiteConfig, run_suite


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", type=Path, default=Path("reports"))
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-m", type=int, default=4)
    ap.add_argument("--scalar", choices=("rational", "float", "both"), default="both")
    args = ap.parse_args(argv)

    args.out_dir.mkdir(parents=True, exist_ok=True)
    scalars = ("rational", "float") if args.scalar == "both" else (args.scalar,)
    ok = True
    print(f"{'scalar':<9} {'m':>2} {'records':>8} {'failed':>7} {'max residual':>14} {'seconds':>8}")
    for scalar in scalars:
        for m in range(1, args.max_m + 1):
            out = args.out_dir / f"suite_{scalar}_m{m}.json"
            cfg = SuiteConfig(scalar=scalar, dim=2 * m, classes=CLASSES, trials=args.trials, seed=args.seed, out=out)
            rep = run_suite(cfg)
            s = rep["summary"]
            ok = ok and s["all_passed"]
            print(f"{scalar:<9} {m:>2} {s['records']:>8} {s['failed']:>7} {str(s['max_residual']):>14} "
                  f"{rep['wall_time']:>8.2f}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
