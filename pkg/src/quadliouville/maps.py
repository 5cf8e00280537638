"""Smooth self-maps with pointwise Jacobians, and the automorphism residuals.

Polynomial maps keep a coefficient table and differentiate it exactly, so on
rational points every value, Jacobian and residual is an exact rational.
"""
from dataclasses import dataclass
from itertools import product

import numpy as np

from . import linalg as la
from .linalg import Q
from .flow import flow_matrix

DEFAULT_STEP = 1e-5


def central_difference_jacobian(fn, z, step=DEFAULT_STEP):
    """Central differences with step ``step * (1 + ||z||_inf)``."""
    z = la.floating(z)
    h = step * (1.0 + float(np.max(np.abs(z)))) if z.size else step
    cols = []
    for j in range(z.size):
        e = np.zeros_like(z)
        e[j] = h
        cols.append((la.floating(fn(z + e)) - la.floating(fn(z - e))) / (2 * h))
    return np.column_stack(cols)


class SmoothMap:
    """A map R^dim_in -> R^dim_out with value and Jacobian access.

    Subclasses implement ``_evaluate`` and, when they can do better than
    central differences, ``_jacobian``.
    """

    dim_in: int
    dim_out: int
    exact = False
    step = DEFAULT_STEP

    def _check(self, z):
        z = np.asarray(z)
        if z.shape != (self.dim_in,):
            raise ValueError(f"expected a point of length {self.dim_in}, got shape {z.shape}")
        return z

    def evaluate(self, z):
        z = self._check(z)
        out = self._evaluate(z)
        return out if la.is_exact(z) and self.exact else la.floating(out)

    __call__ = evaluate

    def jacobian(self, z):
        z = self._check(z)
        out = self._jacobian(z)
        return out if la.is_exact(z) and self.exact else la.floating(out)

    def _jacobian(self, z):
        return central_difference_jacobian(self._evaluate, z, self.step)

    def compose(self, inner):
        """``self o inner``."""
        return ComposedMap(self, inner)

    def describe(self):
        return type(self).__name__


# --- polynomial tables: dict mapping exponent tuples to coefficients ---------


def _poly_add(p, q):
    out = dict(p)
    for k, c in q.items():
        s = out.get(k, 0) + c
        if s == 0:
            out.pop(k, None)
        else:
            out[k] = s
    return out


def _poly_mul(p, q):
    out = {}
    for (k1, c1), (k2, c2) in product(p.items(), q.items()):
        k = tuple(a + b for a, b in zip(k1, k2))
        s = out.get(k, 0) + c1 * c2
        if s == 0:
            out.pop(k, None)
        else:
            out[k] = s
    return out


def _poly_deriv(p, j):
    out = {}
    for k, c in p.items():
        if k[j]:
            kk = k[:j] + (k[j] - 1,) + k[j + 1 :]
            out[kk] = out.get(kk, 0) + c * k[j]
    return {k: c for k, c in out.items() if c != 0}


def _poly_eval(p, z, zero):
    total = zero
    for k, c in p.items():
        term = c
        for zi, e in zip(z, k):
            if e:
                term = term * zi**e
        total = total + term
    return total


class PolynomialMap(SmoothMap):
    """Polynomial map given by one coefficient table per output coordinate.

    >>> f = PolynomialMap(2, [{(1, 0): 1}, {(0, 1): 1, (2, 0): 1}])  # (p, q) -> (p, q + p^2)
    >>> [str(x) for x in f(la.rational([2, 1]))]
    ['2', '5']
    """

    exact = True

    def __init__(self, dim_in, polys):
        self.dim_in = dim_in
        self.dim_out = len(polys)
        clean = []
        for p in polys:
            q = {}
            for k, c in p.items():
                k = tuple(int(e) for e in k)
                if len(k) != dim_in or any(e < 0 for e in k):
                    raise ValueError(f"bad monomial exponents {k} for {dim_in} variables")
                c = la.to_fraction(c) if not isinstance(c, float) else c
                if c != 0:
                    q[k] = q.get(k, 0) + c
            clean.append({k: c for k, c in q.items() if c != 0})
        self.polys = tuple(clean)
        self.exact = all(la.is_rational(c) for p in self.polys for c in p.values())
        self._d1 = None
        self._d2 = None

    @classmethod
    def linear(cls, M):
        M = la.as_array(M)
        rows, cols = M.shape
        polys = []
        for i in range(rows):
            polys.append({tuple(int(j == k) for k in range(cols)): M[i, j] for j in range(cols) if M[i, j] != 0})
        return cls(cols, polys)

    @classmethod
    def identity(cls, n):
        return cls.linear(la.identity(n))

    @classmethod
    def from_json(cls, data):
        polys = [dict() for _ in range(data["dim_out"])]
        for term in data["terms"]:
            c = term["coeff"]
            c = la.to_fraction(c) if isinstance(c, (str, int)) else float(c)
            key = tuple(term["monomial"])
            polys[term["out"]][key] = polys[term["out"]].get(key, 0) + c
        return cls(data["dim_in"], polys)

    def to_json(self):
        terms = []
        for i, p in enumerate(self.polys):
            for k in sorted(p):
                terms.append({"out": i, "monomial": list(k), "coeff": la.encode_scalar(p[k])})
        return {"dim_in": self.dim_in, "dim_out": self.dim_out, "terms": terms}

    @property
    def degree(self):
        return max((sum(k) for p in self.polys for k in p), default=0)

    @property
    def is_linear(self):
        return all(sum(k) == 1 for p in self.polys for k in p)

    def _zero(self, z):
        return Q(0) if la.is_exact(z) and self.exact else 0.0

    def _pack(self, values, z):
        if la.is_exact(z) and self.exact:
            out = np.empty(len(values), dtype=object)
            out[:] = values
            return out
        return np.array([float(v) for v in values])

    def _evaluate(self, z):
        zero = self._zero(z)
        return self._pack([_poly_eval(p, z, zero) for p in self.polys], z)

    def _first(self):
        if self._d1 is None:
            self._d1 = [[_poly_deriv(p, j) for j in range(self.dim_in)] for p in self.polys]
        return self._d1

    def _second(self):
        if self._d2 is None:
            self._d2 = [[[_poly_deriv(dp, k) for k in range(self.dim_in)] for dp in row] for row in self._first()]
        return self._d2

    def _jacobian(self, z):
        zero = self._zero(z)
        vals = [_poly_eval(dp, z, zero) for row in self._first() for dp in row]
        return self._pack(vals, z).reshape(self.dim_out, self.dim_in)

    def hessian(self, z):
        """Array ``H[i, j, k] = d^2 f_i / dz_j dz_k``."""
        z = self._check(z)
        zero = self._zero(z)
        vals = [_poly_eval(d, z, zero) for row in self._second() for dj in row for d in dj]
        return self._pack(vals, z).reshape(self.dim_out, self.dim_in, self.dim_in)

    def compose(self, inner):
        """Symbolic composition when ``inner`` is polynomial too."""
        if not isinstance(inner, PolynomialMap):
            return ComposedMap(self, inner)
        if inner.dim_out != self.dim_in:
            raise ValueError("dimension mismatch in composition")
        one = {(0,) * inner.dim_in: Q(1)}
        powers = [[one] for _ in range(self.dim_in)]
        out = []
        for p in self.polys:
            acc = {}
            for k, c in p.items():
                term = {kk: c * cc for kk, cc in one.items()}
                for j, e in enumerate(k):
                    while len(powers[j]) <= e:
                        powers[j].append(_poly_mul(powers[j][-1], inner.polys[j]))
                    if e:
                        term = _poly_mul(term, powers[j][e])
                acc = _poly_add(acc, term)
            out.append(acc)
        return PolynomialMap(inner.dim_in, out)

    def describe(self):
        return f"polynomial(dim={self.dim_in}->{self.dim_out}, degree={self.degree}, terms={sum(map(len, self.polys))})"


class LinearMap(SmoothMap):
    """``z -> M z`` with constant Jacobian ``M``."""

    def __init__(self, M):
        self.matrix = la.as_array(M) if not isinstance(M, np.ndarray) else M
        self.dim_out, self.dim_in = self.matrix.shape
        self.exact = la.is_exact(self.matrix)

    def _evaluate(self, z):
        return la.cast(self.matrix, la.is_exact(z)) @ z

    def _jacobian(self, z):
        return self.matrix.copy()

    def hessian(self, z):
        return la.zeros((self.dim_out, self.dim_in, self.dim_in), self.exact)

    def to_json(self):
        return PolynomialMap.linear(self.matrix).to_json()

    def describe(self):
        return f"linear({self.dim_out}x{self.dim_in})"


class NumericMap(SmoothMap):
    """A black-box map; its Jacobian comes from central differences unless
    ``jacobian_fn`` is supplied."""

    def __init__(self, fn, dim_in, dim_out=None, jacobian_fn=None, step=DEFAULT_STEP, name=None):
        self.fn = fn
        self.dim_in = dim_in
        self.dim_out = dim_in if dim_out is None else dim_out
        self.jacobian_fn = jacobian_fn
        self.step = step
        self.name = name or getattr(fn, "__name__", "numeric")

    def _evaluate(self, z):
        return np.asarray(self.fn(z))

    def _jacobian(self, z):
        if self.jacobian_fn is not None:
            return np.asarray(self.jacobian_fn(z))
        return central_difference_jacobian(self.fn, z, self.step)

    def describe(self):
        return f"numeric({self.name})"


class ComposedMap(SmoothMap):
    """``outer o inner`` with the chain-rule Jacobian."""

    def __init__(self, outer, inner):
        if outer.dim_in != inner.dim_out:
            raise ValueError("dimension mismatch in composition")
        self.outer = outer
        self.inner = inner
        self.dim_in = inner.dim_in
        self.dim_out = outer.dim_out
        self.exact = outer.exact and inner.exact

    def _evaluate(self, z):
        return self.outer.evaluate(self.inner.evaluate(z))

    def _jacobian(self, z):
        return self.outer.jacobian(self.inner.evaluate(z)) @ self.inner.jacobian(z)

    def describe(self):
        return f"({self.outer.describe()}) o ({self.inner.describe()})"


def map_from_json(data):
    if "terms" in data:
        return PolynomialMap.from_json(data)
    if "matrix" in data:
        return LinearMap(la.decode_array(data["matrix"]))
    raise ValueError("unrecognised map JSON: expected 'terms' or 'matrix'")


# --- automorphism residuals ---------------------------------------------------


@dataclass(frozen=True)
class ResidualSample:
    point: np.ndarray
    condition: str  # "pullback" | "pushforward" | "flow_equivariance"
    value: object
    relative: object


def _match(gen, g, z):
    z = np.asarray(z)
    if g.dim_in != gen.dim or g.dim_out != gen.dim:
        raise ValueError(f"map must send R^{gen.dim} to itself")
    if z.shape != (gen.dim,):
        raise ValueError(f"expected a point of length {gen.dim}, got shape {z.shape}")
    return z


def _operands(gen, g, z):
    """Evaluate g at z and put A, J, z, g(z), g'_z in one scalar kind."""
    z = _match(gen, g, z)
    gz = g.evaluate(z)
    D = g.jacobian(z)
    exact = gen.exact and la.all_exact(z, gz, D)
    A = la.cast(gen.A, exact)
    J = gen.space.gram_as(exact)
    return A, J, la.cast(z, exact), gz, D


def _pullback_terms(gen, g, z, probes):
    A, J, z, gz, D = _operands(gen, g, z)
    lhs = (gz - A @ gz) @ J @ D
    rhs = (z - A @ z) @ J
    if probes is None:
        return lhs - rhs, rhs
    diff, P = _probe_matrix(lhs - rhs, probes)
    return diff @ P, la.cast(rhs, la.is_exact(P)) @ P


def _probe_matrix(diff, probes):
    P = np.column_stack([np.asarray(v) for v in probes])
    exact = la.all_exact(diff, P)
    return la.cast(diff, exact), la.cast(P, exact)


def pullback_residual(gen, g, z, probes=None):
    """max over probes v of |omega(g z - A g z, g'_z v) - omega(z - A z, v)|.

    Zero exactly when g preserves theta^A at z in the probe directions
    (the 1/2 in theta is dropped on both sides).
    """
    diff, _ = _pullback_terms(gen, g, z, probes)
    return la.max_abs(diff)


def pushforward_residual(gen, g, z):
    """||g'_z (z - A z) - (g z - A g z)||_inf."""
    A, _, z, gz, D = _operands(gen, g, z)
    return la.max_abs(D @ (z - A @ z) - (gz - A @ gz))


def flow_equivariance_residual(gen, g, t, z):
    """||g(Phi_t z) - Phi_t g(z)||_inf, in floats."""
    z = la.floating(_match(gen, g, z))
    Phi = flow_matrix(gen, t)
    return float(la.max_abs(g.evaluate(Phi @ z) - Phi @ g.evaluate(z)))


def residual_samples(gen, g, z, t=None, probes=None):
    """Raw and relative residuals at ``z`` for each condition.

    The relative form divides by ``1 + scale`` where ``scale`` bounds the
    magnitude of the terms being compared: ``|Omega(z - A z, v)|`` plus the
    absolute-value product behind the left-hand side.  For exact inputs the
    raw value is already exact, so only floats depend on this.
    """
    A, J, z, gz, D = _operands(gen, g, z)
    left = gz - A @ gz
    right = z - A @ z
    diff = left @ J @ D - right @ J
    ref = right @ J
    if la.is_exact(diff):
        size = np.abs(ref)
        tgt = la.max_abs(left)
        one = Q(1)
    else:
        fJ, fD = (np.abs(la.floating(x)) for x in (J, D))
        fg = np.abs(la.floating(gz))
        size = np.abs(la.floating(ref)) + (fg + np.abs(la.floating(A)) @ fg) @ fJ @ fD
        tgt = float(la.max_abs(la.floating(left))) + float(np.max(fD @ np.abs(la.floating(right))))
        one = 1.0
    if probes is not None:
        diff, P = _probe_matrix(diff, probes)
        diff = diff @ P
        size = la.cast(size, la.is_exact(P)) @ np.abs(P)
    raw = la.max_abs(diff)
    rel = max((abs(d) / (one + s) for d, s in zip(diff, size)), default=0 * one)
    out = [ResidualSample(z, "pullback", raw, rel)]

    pf = la.max_abs(D @ right - left)
    out.append(ResidualSample(z, "pushforward", pf, pf / (one + tgt)))

    if t is not None:
        zf = la.floating(z)
        Phi = flow_matrix(gen, t)
        ref = Phi @ la.floating(gz)
        fe = float(la.max_abs(g.evaluate(Phi @ zf) - ref))
        out.append(ResidualSample(z, "flow_equivariance", fe, fe / (1.0 + float(la.max_abs(ref)))))
    return out
