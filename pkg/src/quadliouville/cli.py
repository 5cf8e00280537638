"""Command-line entry point: ``quadliouville {classify,flow,lift,verify-aut,suite}``.

Inputs and outputs are JSON.  Rationals are written as "p/q" strings.
Exit status is 0 on success, 1 when a verification fails and 2 on bad input.
"""
import argparse
import json
import sys

import numpy as np

from . import linalg as la
from .automorphisms import WrongClass, cotangent_lift, lagrangian_splitting, theorem_for
from .flow import trajectory
from .maps import PolynomialMap, map_from_json
from .quadratic import QuadraticGenerator
from .suite import (
    CLASSES,
    SuiteConfig,
    dumps,
    generate_instance,
    generator_hash,
    random_point,
    random_polynomial_diffeo,
    run_suite,
    verify_automorphism,
    write_json_atomic,
)
from .symplectic import SymplecticSpace


def _emit(obj, out):
    if out:
        write_json_atomic(obj, out)
    else:
        sys.stdout.write(dumps(obj) + "\n")


def _load(path):
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _generator(data):
    """Generator from JSON, with an optional "space" entry for a non-Darboux form."""
    space = SymplecticSpace.from_json(data["space"]) if "space" in data else None
    return QuadraticGenerator.from_json(data, space)


def _generated(args, cls=None):
    cls = cls or args.cls or "zero"
    cfg = SuiteConfig(scalar=args.scalar, dim=args.dim, classes=(cls,), seed=args.seed, tol=args.tol)
    rng = np.random.default_rng([args.seed, CLASSES.index(cls), 0])
    gen = generate_instance(cfg, cls, rng)
    return gen if args.scalar == "rational" else gen.as_float()


def _input_generator(args, cls=None):
    if args.input:
        data = _load(args.input)
        return _generator(data.get("generator", data))
    return _generated(args, cls)


def cmd_classify(args):
    gen = _input_generator(args)
    try:
        clause = theorem_for(gen)
    except WrongClass:
        clause = None
    out = gen.to_json()
    out["hash"] = generator_hash(gen)
    out["theorem"] = clause
    _emit(out, args.out)
    return 0


def _vector(text, n):
    vals = la.decode_array(json.loads(text))
    if vals.shape != (n,):
        raise ValueError(f"--z0 needs {n} entries")
    return la.floating(vals)


def cmd_flow(args):
    gen = _input_generator(args).as_float()
    if args.z0:
        z0 = _vector(args.z0, gen.dim)
    else:
        z0 = np.random.default_rng(args.seed).normal(size=gen.dim)
    times = np.linspace(0.0, args.t_max, args.steps + 1)
    _emit(trajectory(gen, z0, times), args.out)
    return 0


def cmd_lift(args):
    data = _load(args.input) if args.input else {}
    if "generator" in data:
        gen = _generator(data["generator"])
    else:
        gen = _generated(args, "plus")
    split = lagrangian_splitting(gen)
    rng = np.random.default_rng(args.seed)
    if "map" in data:
        f = PolynomialMap.from_json(data["map"])
    else:
        f = random_polynomial_diffeo(split.m, rng)
    lift = cotangent_lift(gen, f, split)
    samples = data.get("samples", args.trials)
    if isinstance(samples, int):
        samples = [random_point(rng, gen.dim, gen.exact) for _ in range(samples)]
    samples = [la.as_array(z) for z in samples]
    report = verify_automorphism(gen, lift, samples, seed=args.seed, tol=args.tol)
    report["base_map"] = f.to_json()
    report["splitting"] = {
        "basis_plus": la.encode_array(split.basis_plus.T),
        "basis_minus": la.encode_array(split.basis_minus.T),
    }
    report["points"] = [{"z": la.encode_array(z), "g": la.encode_array(lift.evaluate(z))} for z in samples]
    _emit(report, args.out)
    return 0 if report["verdict"] == "pass" else 1


def cmd_verify_aut(args):
    data = _load(args.input)
    gen = _generator(data["generator"])
    g = map_from_json(data["map"])
    samples = data.get("samples", args.trials)
    seed = data.get("seed", args.seed)
    tol = float(data.get("tolerance", args.tol))
    report = verify_automorphism(gen, g, samples, seed=seed, tol=tol)
    _emit(report, args.out)
    return 0 if report["verdict"] == "pass" else 1


def cmd_suite(args):
    classes = (args.cls,) if args.cls else CLASSES
    cfg = SuiteConfig(
        scalar=args.scalar,
        dim=args.dim,
        classes=classes,
        trials=args.trials,
        seed=args.seed,
        tol=args.tol,
        out=args.out,
    )
    report = run_suite(cfg)
    s = report["summary"]
    print(
        f"{s['passed']}/{s['records']} records passed, max residual {s['max_residual']}, "
        f"{report['wall_time']:.2f}s",
        file=sys.stderr,
    )
    if not args.out:
        sys.stdout.write(dumps(report) + "\n")
    return 0 if s["all_passed"] else 1


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim", type=int, default=2, help="dimension 2m of V")
    common.add_argument("--class", dest="cls", choices=CLASSES, default=None)
    common.add_argument("--scalar", choices=("rational", "float"), default="rational")
    common.add_argument("--trials", type=int, default=10)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=la.DEFAULT_TOL)
    common.add_argument("--out", default=None, help="write JSON here instead of stdout")

    p = argparse.ArgumentParser(prog="quadliouville", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="square class of a generator")
    c.add_argument("input", nargs="?", help="generator JSON (default: generate one)")
    c.set_defaults(func=cmd_classify)

    f = sub.add_parser("flow", parents=[common], help="Liouville flow trajectory")
    f.add_argument("input", nargs="?", help="generator JSON (default: generate one)")
    f.add_argument("--t-max", type=float, default=1.0)
    f.add_argument("--steps", type=int, default=10)
    f.add_argument("--z0", default=None, help='initial point as a JSON list, e.g. ["1/2", 0]')
    f.set_defaults(func=cmd_flow)

    lf = sub.add_parser("lift", parents=[common], help="cotangent lift of a map of V+ (A^2 = I)")
    lf.add_argument("input", nargs="?", help='JSON with optional "generator", "map", "samples"')
    lf.set_defaults(func=cmd_lift)

    v = sub.add_parser("verify-aut", parents=[common], help="residuals of one map")
    v.add_argument("input", help='JSON {"generator", "map", "samples", "seed", "tolerance"}')
    v.set_defaults(func=cmd_verify_aut)

    s = sub.add_parser("suite", parents=[common], help="randomized theorem suite")
    s.set_defaults(func=cmd_suite)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, WrongClass) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
