"""Quadratic potentials psi^A, the Liouville forms theta^A and fields zeta^A.

A generator ``A`` in sp(V) determines

    psi(z)        = 1/4 * omega(z, A z)
    dpsi_z(v)     = 1/2 * omega(z, A v)
    theta_z(v)    = 1/2 * omega(z - A z, v)
    zeta(z)       = 1/2 * (z - A z)

with ``A = 0`` giving the canonical structure.
"""
import enum
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .linalg import Q
from .symplectic import SymplecticSpace, is_in_sp, omega


class NotInSp(ValueError):
    pass


class SquareClass(enum.Enum):
    ZERO = "zero"
    PLUS = "plus"
    MINUS = "minus"
    OTHER = "other"


class AmbiguousClass(ValueError):
    """A float generator is within tolerance of two square classes."""


def classify_square(A, tol=la.DEFAULT_TOL):
    """Which of A^2 = 0, A^2 = I, A^2 = -I holds (exactly, for rationals)."""
    A = np.asarray(A)
    A2 = A @ A
    I = la.identity(A.shape[0], la.is_exact(A))
    candidates = [
        (SquareClass.ZERO, A2),
        (SquareClass.PLUS, A2 - I),
        (SquareClass.MINUS, A2 + I),
    ]
    if la.is_exact(A):
        for cls, resid in candidates:
            if la.is_zero(resid):
                return cls
        return SquareClass.OTHER
    hits = [cls for cls, resid in candidates if la.max_abs(resid) <= tol]
    if len(hits) > 1:
        raise AmbiguousClass(f"generator is within {tol} of {[h.value for h in hits]}")
    return hits[0] if hits else SquareClass.OTHER


@dataclass(frozen=True, eq=False)
class QuadraticGenerator:
    """An element ``A`` of sp(V) with its square class computed once."""

    space: SymplecticSpace
    A: np.ndarray
    square_class: SquareClass = field(init=False)

    def __post_init__(self):
        A = np.asarray(self.A)
        if not la.is_exact(A):
            A = la.floating(A)
        if not is_in_sp(self.space, A):
            raise NotInSp("generator is not in sp(V)")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "square_class", classify_square(A))

    @property
    def dim(self):
        return self.space.dim

    @property
    def exact(self):
        return la.is_exact(self.A) and self.space.exact

    def as_float(self):
        return QuadraticGenerator(self.space.as_float(), la.floating(self.A))

    def to_json(self):
        return {"A": la.encode_array(self.A), "class": self.square_class.value}

    @classmethod
    def from_json(cls, data, space=None):
        A = la.decode_array(data["A"])
        if space is None:
            from .symplectic import standard_space

            space = standard_space(A.shape[0] // 2)
            if not la.is_exact(A):
                space = space.as_float()
        gen = cls(space, A)
        claimed = data.get("class")
        if claimed is not None and SquareClass(claimed) is not gen.square_class:
            raise ValueError(f"generator claims class {claimed!r} but squares to {gen.square_class.value!r}")
        return gen


def zero_generator(space):
    return QuadraticGenerator(space, la.zeros((space.dim, space.dim), space.exact))


# A LiouvilleStructure carries nothing beyond its generator.
LiouvilleStructure = QuadraticGenerator


def _operands(gen, *vs):
    """Generator matrix, vectors and the constant 1/2, all in one scalar kind."""
    exact = gen.exact and la.all_exact(*vs)
    vs = [la.cast(np.asarray(v), exact) for v in vs]
    return la.cast(gen.A, exact), vs, (Q(1, 2) if exact else 0.5)


def psi(gen, z):
    A, (z,), half = _operands(gen, z)
    return omega(gen.space, z, A @ z) * half * half


def dpsi(gen, z, v):
    A, (z, v), half = _operands(gen, z, v)
    val = omega(gen.space, z, A @ v) * half
    if __debug__ and la.is_rational(val):
        assert val == -omega(gen.space, A @ z, v) * half
    return val


def theta(gen, z, v):
    A, (z, v), half = _operands(gen, z, v)
    return omega(gen.space, z - A @ z, v) * half


def liouville_field(gen, z):
    A, (z,), half = _operands(gen, z)
    return (z - A @ z) * half


def hessian_form(gen):
    """Matrix of the bilinear form (x, y) -> omega(x, A y)."""
    return gen.space.gram @ gen.A
