"""Liouville flows ``Phi_t = e^{t/2} exp(-t A / 2)`` and a matrix exponential.

All flows run on one clock: ``d z / d t = (z - A z) / 2``.  Values are floats;
only ``t = 0`` is exact.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .quadratic import SquareClass

TAYLOR_TERMS = 20


def expm(M, terms=TAYLOR_TERMS):
    """Scaling and squaring: scale until ``||M / 2^k||_1 <= 1/2``, sum a
    truncated Taylor series, then square ``k`` times."""
    M = la.floating(M)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError(f"expm needs a square matrix, got {M.shape}")
    norm = np.abs(M).sum(axis=0).max() if n else 0.0
    k = max(0, math.ceil(math.log2(norm / 0.5))) if norm > 0.5 else 0
    S = M / 2.0**k
    E = np.eye(n)
    term = np.eye(n)
    for j in range(1, terms + 1):
        term = term @ S / j
        E = E + term
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(k):
            E = E @ E
    if not np.all(np.isfinite(E)):
        raise OverflowError("matrix exponential overflowed")
    return E


def flow_matrix(gen, t):
    """Matrix of the time-``t`` Liouville flow, closed form per square class."""
    t = float(t)
    A = la.floating(gen.A)
    I = np.eye(gen.dim)
    s = 0.5 * t
    cls = gen.square_class
    if cls is SquareClass.ZERO:
        inner = I - s * A
    elif cls is SquareClass.PLUS:
        inner = math.cosh(s) * I - math.sinh(s) * A
    elif cls is SquareClass.MINUS:
        inner = math.cos(s) * I - math.sin(s) * A
    else:
        inner = expm(-s * A)
    return la.check_finite(math.exp(s) * inner)


def flow_matrix_expm(gen, t):
    """Same flow through the generic exponential of ``(I - A) t / 2``."""
    A = la.floating(gen.A)
    return expm(0.5 * float(t) * (np.eye(gen.dim) - A))


def flow(gen, t, z):
    z = la.floating(z)
    if z.shape != (gen.dim,):
        raise ValueError(f"expected a vector of length {gen.dim}, got shape {z.shape}")
    return flow_matrix(gen, t) @ z


def flow_on_splitting(gen, t, z, splitting=None):
    """Flow via ``V = V+ (+) V-``: fixes the V+ part and scales the V- part by e^t."""
    if gen.square_class is not SquareClass.PLUS:
        raise ValueError("flow_on_splitting needs a generator with A^2 = I")
    if splitting is None:
        from .automorphisms import lagrangian_splitting

        splitting = lagrangian_splitting(gen)
    z = la.floating(z)
    zp = la.floating(splitting.P_plus) @ z
    zm = la.floating(splitting.P_minus) @ z
    return zp + math.exp(float(t)) * zm


@dataclass(frozen=True)
class FlowMap:
    generator: object
    t: float
    matrix: np.ndarray

    @classmethod
    def at(cls, gen, t):
        return cls(gen, float(t), flow_matrix(gen, t))

    def __call__(self, z):
        return self.matrix @ la.floating(z)


def trajectory(gen, z0, times):
    """JSON-ready trajectory ``{"t": [...], "z": [[...], ...]}``."""
    times = [float(t) for t in times]
    return {"t": times, "z": [flow(gen, t, z0).tolist() for t in times]}
