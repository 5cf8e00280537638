"""Sample Liouville flow trajectories for one generator of each square class.

    python scripts/flow_portrait.py --out flows.json --m 1 --seed 0

The output maps class name to the generator and a list of trajectories
({"t", "z"}), one per initial point on the unit circle of the first plane.
"""
import argparse
import json
import math
import sys

import numpy as np

from quadliouville.flow import trajectory
from quadliouville.suite import CLASSES, SuiteConfig, generate_instance


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="flows.json")
    ap.add_argument("--m", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--points", type=int, default=8)
    ap.add_argument("--t-max", type=float, default=2.0)
    ap.add_argument("--steps", type=int, default=40)
    args = ap.parse_args(argv)

    n = 2 * args.m
    times = np.linspace(-args.t_max, args.t_max, args.steps + 1)
    out = {}
    for ci, cls in enumerate(CLASSES):
        rng = np.random.default_rng([args.seed, ci])
        gen = generate_instance(SuiteConfig(dim=n, classes=(cls,)), cls, rng)
        fgen = gen.as_float()
        trajs = []
        for k in range(args.points):
            z0 = np.zeros(n)
            a = 2 * math.pi * k / args.points
            z0[0], z0[args.m] = math.cos(a), math.sin(a)
            trajs.append(trajectory(fgen, z0, times))
        out[cls] = {"generator": gen.to_json(), "trajectories": trajs}
    with open(args.out, "w") as fh:
        json.dump(out, fh)
    print(f"wrote {sum(len(v['trajectories']) for v in out.values())} trajectories to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
