"""Randomized verification batteries and their JSON report.

Randomness: numpy's PCG64 through ``np.random.default_rng(key)`` with
``key = [seed, class_index, trial]``; the key is written into every record
so any trial can be replayed on its own.
"""
import hashlib
import json
import math
import os
import tempfile
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import linalg as la
from .linalg import Q
from .automorphisms import (
    bridge_residual,
    canonical_aut_check,
    centralizer_lie_basis,
    cotangent_lift,
    is_centralizer_element,
    lagrangian_splitting,
    preserves_inner_product,
    rank_one_generator,
    rational_centralizer_element,
    theorem_for,
    WrongClass,
)
from .flow import expm, flow, flow_matrix, flow_matrix_expm
from .maps import LinearMap, PolynomialMap, pullback_residual, residual_samples
from .quadratic import QuadraticGenerator, SquareClass, liouville_field, theta, zero_generator
from .symplectic import (
    is_in_Sp,
    omega,
    project_to_sp,
    random_rational_matrix,
    random_rational_Sp_element,
    standard_space,
    symplectic_adjoint,
)

CLASSES = ("zero", "plus", "minus", "other")
RNG_ALGORITHM = "numpy PCG64 via default_rng([seed, class_index, trial])"


@dataclass
class SuiteConfig:
    scalar: str = "rational"
    dim: int = 2
    classes: tuple = ("zero", "plus", "minus")
    trials: int = 10
    seed: int = 0
    tol: float = la.DEFAULT_TOL
    out: object = None
    points: int = 2

    def __post_init__(self):
        if self.scalar not in ("rational", "float"):
            raise ValueError(f"scalar must be 'rational' or 'float', got {self.scalar!r}")
        if self.dim < 2 or self.dim % 2:
            raise ValueError(f"dimension must be a positive even integer, got {self.dim}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")
        self.classes = tuple(self.classes)
        bad = [c for c in self.classes if c not in CLASSES]
        if bad:
            raise ValueError(f"unknown classes {bad}")

    @property
    def m(self):
        return self.dim // 2


# --- instance generation ------------------------------------------------------


def _sp_inverse(space, g):
    return symplectic_adjoint(space, g)


def normal_form(space, cls, rng):
    """Block-diagonal representative of a square class on the Darboux space."""
    m = space.m
    A = la.zeros((space.dim, space.dim))
    if cls == "zero":
        # sum of rank-one maps along the isotropic p-directions
        for i in range(m):
            eps = int(rng.integers(-1, 2))
            if eps:
                e = la.zeros(space.dim)
                e[i] = Q(1)
                A = A + eps * rank_one_generator(space, e).A
    elif cls == "minus":
        for i in range(m):
            eps = Q(int(rng.choice([-1, 1])))
            A[i, m + i] = eps
            A[m + i, i] = -eps
    elif cls == "plus":
        for i in range(m):
            eps = Q(int(rng.choice([-1, 1])))
            A[i, i] = eps
            A[m + i, m + i] = -eps
    else:
        while True:
            S = random_rational_matrix(rng, (space.dim, space.dim), 1)
            A = project_to_sp(space, S)
            if QuadraticGenerator(space, A).square_class is SquareClass.OTHER:
                break
    return A


def generate_instance(config, cls, rng):
    """Exact generator of square class ``cls``: a normal form conjugated by a
    random rational element of Sp(V)."""
    if cls not in CLASSES:
        raise ValueError(f"unsupported class {cls!r}")
    space = standard_space(config.m)
    A0 = normal_form(space, cls, rng)
    g = random_rational_Sp_element(space, rng, factors=2)
    gen = QuadraticGenerator(space, _sp_inverse(space, g) @ A0 @ g)
    if gen.square_class.value != cls:
        raise AssertionError(f"generated {gen.square_class.value!r} for requested {cls!r}")
    return gen


def random_point(rng, n, exact=True, bound=3):
    if exact:
        num = rng.integers(-bound * 2, bound * 2 + 1, size=n)
        den = rng.integers(1, 3, size=n)
        return la.rational([Q(int(a), int(b)) for a, b in zip(num, den)])
    return rng.normal(size=n)


def random_polynomial_diffeo(m, rng, scale=1):
    """Rational polynomial diffeomorphism of R^m: ``L o T`` with T triangular,
    ``T_i(x) = x_i + c_i x_i^3 + q_i(x_1..x_{i-1})`` (c_i >= 0, q_i quadratic)
    and L an invertible integer matrix of determinant +-1.  ``scale``
    multiplies the nonlinear coefficients."""
    scale = Q(scale)
    polys = []
    for i in range(m):
        p = {tuple(int(k == i) for k in range(m)): Q(1)}
        c = Q(int(rng.integers(0, 3)), 2) * scale
        if c:
            p[tuple(3 * int(k == i) for k in range(m))] = c
        for j in range(i):
            for k in range(j, i):
                coeff = int(rng.integers(-1, 2))
                if coeff:
                    e = [0] * m
                    e[j] += 1
                    e[k] += 1
                    p[tuple(e)] = p.get(tuple(e), 0) + coeff * scale
        polys.append(p)
    T = PolynomialMap(m, polys)
    L = la.identity(m)
    for _ in range(2):
        i, j = (int(x) for x in rng.choice(m, size=2, replace=False)) if m > 1 else (0, 0)
        E = la.identity(m)
        if i != j:
            E[i, j] = Q(int(rng.choice([-1, 1])))
        else:
            E[0, 0] = Q(int(rng.choice([-1, 1])))
        L = E @ L
    return PolynomialMap.linear(L).compose(T)


def generator_hash(gen):
    blob = json.dumps(gen.to_json(), separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


# --- records ------------------------------------------------------------------


def _num(x):
    if la.is_rational(x):
        return str(x)
    return float(x)


def _vec(z):
    return [la.encode_scalar(x) if la.is_rational(x) else float(x) for x in np.asarray(z).ravel()]


class _Recorder:
    def __init__(self, config):
        self.config = config
        self.records = []

    def add(self, check, ctx, passed, residuals=None, expect="zero", witness=None, mapdesc=None, detail=None):
        rec = {"check": check}
        rec.update(ctx)
        if mapdesc is not None:
            rec["map"] = mapdesc
        rec["expect"] = expect
        if residuals is not None:
            rec["residuals"] = {k: _num(v) for k, v in residuals.items()}
        if detail is not None:
            rec["detail"] = detail
        rec["verdict"] = "pass" if passed else "fail"
        if witness is not None or not passed:
            rec["witness"] = _vec(witness) if witness is not None else None
        self.records.append(rec)

    def residual_check(self, check, ctx, gen, g, points, tol, t=None, extra=None):
        """Max of each residual over ``points``; pass when all vanish (exact)
        or their relative forms are below ``tol`` (float)."""
        worst = {}
        worst_rel = {}
        witness = None
        worst_score = None
        for z in points:
            for s in residual_samples(gen, g, z, t=t):
                key = s.condition
                if key not in worst or s.value > worst[key]:
                    worst[key] = s.value
                worst_rel[key] = max(worst_rel.get(key, s.relative), s.relative)
                score = float(s.relative)
                if worst_score is None or score > worst_score:
                    worst_score, witness = score, z
            for name, fn in (extra or {}).items():
                val = fn(z)
                if name not in worst or val > worst[name]:
                    worst[name] = val
                worst_rel[name] = max(worst_rel.get(name, val), val)
                if float(val) > (worst_score or 0):
                    worst_score, witness = float(val), z
        if self.config.scalar == "rational" and gen.exact and g.exact:
            passed = all(v == 0 for v in worst.values())
        else:
            passed = all(float(v) <= tol for v in worst_rel.values())
        self.add(check, ctx, passed, worst, witness=witness, mapdesc=g.describe())
        return passed


# --- batteries ----------------------------------------------------------------


def _bridge(gen, g, vs, split):
    return lambda z: bridge_residual(gen, g, z, vs, split)


def _rational_battery(rec, gen, rng, ctx):
    cfg = rec.config
    n = gen.dim
    pts = [random_point(rng, n) for _ in range(cfg.points)]
    cls = gen.square_class

    try:
        rec.add("theorem", ctx, True, detail=theorem_for(gen), expect="classified")
    except WrongClass:
        rec.add("refuses_unclassified", ctx, True, expect="refusal")
        return

    param = Q(int(rng.integers(1, 4)), int(rng.integers(1, 4))) * int(rng.choice([-1, 1]))
    split = lagrangian_splitting(gen) if cls is SquareClass.PLUS else None
    g = rational_centralizer_element(gen, param, split)
    ok = is_centralizer_element(gen, g)
    rec.add("centralizer_member", ctx, ok, expect="true", mapdesc=f"closed_form(param={param})")
    vs = [random_point(rng, n) for _ in range(cfg.points)]
    extra = None
    if split is not None:
        extra = {"tautological": _bridge(gen, LinearMap(g), vs, split)}
    rec.residual_check("centralizer_automorphism", ctx, gen, LinearMap(g), pts, cfg.tol, extra=extra)

    if cls is SquareClass.ZERO:
        space = gen.space
        h = random_rational_Sp_element(space, rng, factors=2)
        decision = canonical_aut_check(LinearMap(h), space)
        rec.add("canonical_sp_member", ctx, decision.member, expect="true", mapdesc="transvection_product")

    if cls is SquareClass.MINUS:
        rot = rational_centralizer_element(gen, Q(1, 2))  # (3/5) I + (4/5) A
        rec.residual_check("centralizer_automorphism", ctx, gen, LinearMap(rot), pts, cfg.tol)
        h = random_rational_Sp_element(gen.space, rng, factors=2)
        agree = all(
            preserves_inner_product(gen, x) == is_centralizer_element(gen, x) for x in (g, h, la.identity(n))
        )
        rec.add("unitary_equals_centralizer", ctx, agree, expect="true")

    if cls is SquareClass.PLUS:
        f = random_polynomial_diffeo(split.m, rng)
        lift = cotangent_lift(gen, f, split)
        extra = {"tautological": _bridge(gen, lift, vs, split)}
        rec.residual_check("cotangent_lift_automorphism", ctx, gen, lift, pts, cfg.tol, extra=extra)
        sympl = all(is_in_Sp(gen.space, lift.jacobian(z)) for z in pts)
        rec.add("lift_derivative_symplectic", ctx, sympl, expect="true", mapdesc=lift.describe())


def _rel_err(a, b):
    a = la.floating(a)
    b = la.floating(b)
    return float(np.max(np.abs(a - b) / (1.0 + np.abs(b)))) if a.size else 0.0


def flow_law_errors(gen, rng, samples=3):
    """Worst relative errors of the flow laws for float generator ``gen``."""
    n = gen.dim
    errs = {"group_law": 0.0, "conformal": 0.0, "form_scaling": 0.0, "closed_vs_expm": 0.0, "ode_slope": 0.0}
    h = 1e-6
    for _ in range(samples):
        s, t = rng.uniform(-1, 1, size=2)
        z, u, v = (rng.normal(size=n) for _ in range(3))
        errs["group_law"] = max(errs["group_law"], _rel_err(flow(gen, s, flow(gen, t, z)), flow(gen, s + t, z)))
        Phi = flow_matrix(gen, t)
        w = math.exp(t)
        errs["conformal"] = max(
            errs["conformal"], _rel_err(omega(gen.space, Phi @ u, Phi @ v), w * omega(gen.space, u, v))
        )
        errs["form_scaling"] = max(
            errs["form_scaling"], _rel_err(theta(gen, Phi @ z, Phi @ v), w * theta(gen, z, v))
        )
        errs["closed_vs_expm"] = max(errs["closed_vs_expm"], _rel_err(Phi, flow_matrix_expm(gen, t)))
        slope = (flow(gen, h, z) - z) / h
        errs["ode_slope"] = max(errs["ode_slope"], _rel_err(slope, liouville_field(gen, z)))
    return errs


ODE_SLOPE_TOL = 1e-5


def _float_battery(rec, gen_exact, rng, ctx):
    cfg = rec.config
    gen = gen_exact.as_float()
    n = gen.dim
    errs = flow_law_errors(gen, rng)
    limits = {k: (ODE_SLOPE_TOL if k == "ode_slope" else cfg.tol) for k in errs}
    rec.add("flow_laws", ctx, all(errs[k] <= limits[k] for k in errs), errs, expect="small")

    if gen.square_class is SquareClass.OTHER:
        return
    pts = [random_point(rng, n, exact=False) for _ in range(cfg.points)]
    basis = centralizer_lie_basis(gen)
    coeffs = rng.normal(size=basis.dim)
    B = basis.element(coeffs)
    B = B / max(1.0, float(la.max_abs(B)))
    g = expm(float(rng.uniform(-1, 1)) * B)
    rec.add("centralizer_member", ctx, is_centralizer_element(gen, g, cfg.tol), expect="true", mapdesc="expm(tB)")
    t = float(rng.uniform(-1, 1))
    rec.residual_check("centralizer_automorphism", ctx, gen, LinearMap(g), pts, cfg.tol, t=t)

    if gen.square_class is SquareClass.PLUS:
        # tame coefficients and small points keep the fiber solve well conditioned
        split = lagrangian_splitting(gen_exact)
        f = random_polynomial_diffeo(split.m, rng, scale=Q(1, 8))
        lift = cotangent_lift(gen_exact, f, split)
        small = [z / (1.0 + float(la.max_abs(la.floating(split.coords_plus) @ z))) for z in pts]
        rec.residual_check("cotangent_lift_automorphism", ctx, gen, lift, small, cfg.tol, t=t)


def negative_controls(rec=None):
    """Curated non-automorphisms; each must show residual >= 1/2 at its witness.
    Returns the records added."""
    rec = rec if rec is not None else _Recorder(SuiteConfig())
    start = len(rec.records)
    R = la.rational
    S = standard_space(1)
    J = QuadraticGenerator(S, R([[0, 1], [-1, 0]]))
    nil = rank_one_generator(S, R([1, 0]))
    shear = PolynomialMap(2, [{(1, 0): 1}, {(0, 1): 1, (2, 0): 1}])
    cases = [
        ("shear_vs_canonical", zero_generator(S), shear, R([1, 0]), [R([1, 0])]),
        ("diag_vs_complex", J, LinearMap(R([[2, 0], [0, "1/2"]])), R([1, 0]), None),
        ("noncommuting_vs_nilpotent", nil, LinearMap(R([[1, 0], [1, 1]])), R([1, 0]), None),
    ]
    ctx = {"class": "negative_control", "m": 1}
    for name, gen, g, z, probes in cases:
        r = pullback_residual(gen, g, z, probes)
        rec.add(name, ctx, r >= Q(1, 2), {"pullback": r}, expect="nonzero", witness=z, mapdesc=g.describe())
    return rec.records[start:]


def run_suite(config):
    """Run every battery for ``config`` and return the report dict; writes it
    to ``config.out`` when set."""
    start = time.perf_counter()
    rec = _Recorder(config)
    for ci, cls in enumerate(CLASSES):
        if cls not in config.classes:
            continue
        for trial in range(config.trials):
            key = [config.seed, ci, trial]
            rng = np.random.default_rng(key)
            gen = generate_instance(config, cls, rng)
            ctx = {"class": cls, "m": config.m, "trial": trial, "rng": key, "generator": generator_hash(gen)}
            got = gen.square_class.value
            rec.add("classify", ctx, got == cls, expect="requested_class", detail=got)
            if config.scalar == "rational":
                _rational_battery(rec, gen, rng, ctx)
            else:
                _float_battery(rec, gen, rng, ctx)
    negative_controls(rec)
    report = build_report(config, rec.records, time.perf_counter() - start)
    if config.out:
        write_json_atomic(report, config.out)
    return report


def build_report(config, records, wall_time):
    passed = sum(r["verdict"] == "pass" for r in records)
    max_res = None
    for r in records:
        if r["expect"] != "zero":
            continue
        for v in r.get("residuals", {}).values():
            val = Q(v) if isinstance(v, str) else v
            if max_res is None or val > max_res:
                max_res = val
    cfg = asdict(config)
    cfg["classes"] = list(config.classes)
    cfg["out"] = str(config.out) if config.out else None
    return {
        "config": cfg,
        "rng": RNG_ALGORITHM,
        "records": records,
        "summary": {
            "records": len(records),
            "passed": passed,
            "failed": len(records) - passed,
            "all_passed": passed == len(records),
            "max_residual": None if max_res is None else _num(max_res),
        },
        "wall_time": wall_time,
    }


def dumps(report):
    return json.dumps(report, indent=2)


def write_json_atomic(obj, path):
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(json.dumps(obj, indent=2))
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


# --- single-map verification ----------------------------------------------------


def verify_automorphism(gen, g, samples=8, seed=0, tol=la.DEFAULT_TOL):
    """Residual report for one map against one generator.

    ``samples`` is a list of points or a count of random ones.  A rational
    generator with an exact map passes only on exact zeros.
    """
    clause = theorem_for(gen)
    rng = np.random.default_rng(seed)
    exact = gen.exact and g.exact
    n = gen.dim
    if isinstance(samples, int):
        pts = [random_point(rng, n, exact) for _ in range(samples)]
    else:
        pts = [la.as_array(z) for z in samples]
    probes = [random_point(rng, n, exact) for _ in range(2)]
    worst, witness, score = {}, None, -1.0
    rel = {}
    split = lagrangian_splitting(gen) if gen.square_class is SquareClass.PLUS else None
    for z in pts:
        found = [(s.condition, s.value, s.relative) for s in residual_samples(gen, g, z)]
        if split is not None:
            b = bridge_residual(gen, g, z, probes, split)
            found.append(("tautological", b, b))
        for cond, val, r in found:
            if cond not in worst or val > worst[cond]:
                worst[cond] = val
            rel[cond] = max(rel.get(cond, r), r)
            if float(r) > score:
                score, witness = float(r), z
    if exact:
        passed = all(v == 0 for v in worst.values())
    else:
        passed = all(float(v) <= tol for v in rel.values())
    out = {
        "generator": gen.to_json(),
        "generator_hash": generator_hash(gen),
        "map": g.describe(),
        "theorem": clause,
        "samples": len(pts),
        "seed": seed,
        "tolerance": tol,
        "residuals": {k: _num(v) for k, v in worst.items()},
        "verdict": "pass" if passed else "fail",
    }
    if not passed:
        out["witness"] = _vec(witness)
    if gen.square_class is SquareClass.ZERO and la.is_zero(gen.A):
        decision = canonical_aut_check(g, gen.space, tol=tol)
        out["canonical"] = {"member": decision.member, "failed_clause": decision.failed_clause}
    return out
