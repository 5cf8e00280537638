"""Evaluate the sympy reference computations and freeze them to JSON.

    python scripts/freeze_oracles.py            # rewrite tests/frozen_values.json
    python scripts/freeze_oracles.py --check    # exit 1 if the frozen file is stale
"""
import argparse
import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from oracles import evaluate_all  # noqa: E402

TARGET = ROOT / "tests" / "frozen_values.json"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true")
    args = ap.parse_args(argv)
    values = evaluate_all()
    text = json.dumps(values, indent=2, sort_keys=True) + "\n"
    if args.check:
        current = TARGET.read_text() if TARGET.exists() else ""
        if current != text:
            print("frozen values are stale", file=sys.stderr)
            return 1
        print(f"{len(values)} frozen values up to date")
        return 0
    TARGET.write_text(text)
    print(f"wrote {len(values)} values to {TARGET.relative_to(ROOT)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
