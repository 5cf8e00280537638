"""Symplectic vector spaces, adjoints, and membership in sp(V) and Sp(V)."""
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .linalg import Q


@dataclass(frozen=True, eq=False)
class SymplecticSpace:
    """A real vector space of dimension ``2m`` with Gram matrix ``gram``.

    ``omega(x, y) = x^T gram y``.  The Gram matrix may be any nonsingular
    antisymmetric matrix; :func:`standard_space` gives the Darboux one.
    """

    gram: np.ndarray
    gram_inv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        J = la.as_array(self.gram)
        n = J.shape[0]
        if J.ndim != 2 or J.shape != (n, n) or n == 0 or n % 2:
            raise ValueError(f"Gram matrix must be square of even size, got {J.shape}")
        if not la.close(J.T, -J):
            raise ValueError("Gram matrix is not antisymmetric")
        try:
            J_inv = la.invert(J)
        except la.SingularMatrix:
            raise ValueError("Gram matrix is singular") from None
        object.__setattr__(self, "gram", J)
        object.__setattr__(self, "gram_inv", J_inv)

    @property
    def dim(self):
        return self.gram.shape[0]

    @property
    def m(self):
        return self.dim // 2

    @property
    def exact(self):
        return la.is_exact(self.gram)

    def gram_as(self, exact, inverse=False):
        """Gram matrix (or its inverse) in the requested scalar kind."""
        M = self.gram_inv if inverse else self.gram
        return la.cast(M, exact)

    def identity(self, exact=None):
        return la.identity(self.dim, self.exact if exact is None else exact)

    def to_json(self):
        return {"dim": self.dim, "gram": la.encode_array(self.gram)}

    @classmethod
    def from_json(cls, data):
        space = cls(la.decode_array(data["gram"]))
        if "dim" in data and data["dim"] != space.dim:
            raise ValueError("'dim' does not match the Gram matrix")
        return space

    def as_float(self):
        return SymplecticSpace(la.floating(self.gram))

    def __eq__(self, other):
        return isinstance(other, SymplecticSpace) and la.close(self.gram, other.gram)

    def __hash__(self):
        return hash(tuple(str(x) for x in self.gram.flat))


def standard_space(m):
    """Darboux space with coordinates ``(p_1..p_m, q_1..q_m)``:
    ``omega(e_i, e_{m+i}) = 1``."""
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    J = la.zeros((2 * m, 2 * m))
    for i in range(m):
        J[i, m + i] = Q(1)
        J[m + i, i] = Q(-1)
    return SymplecticSpace(J)


def transported_space(space, P):
    """The same symplectic form expressed in the basis given by the columns
    of ``P``: Gram matrix ``P^T J P``."""
    P = la.as_array(P)
    return SymplecticSpace(P.T @ space.gram @ P)


def _check_vec(space, *vs):
    for v in vs:
        if np.shape(v) != (space.dim,):
            raise ValueError(f"expected a vector of length {space.dim}, got shape {np.shape(v)}")


def _check_mat(space, A):
    if np.shape(A) != (space.dim, space.dim):
        raise ValueError(f"expected a {space.dim}x{space.dim} matrix, got shape {np.shape(A)}")


def omega(space, x, y):
    _check_vec(space, x, y)
    exact = la.all_exact(x, y)
    return la.cast(x, exact) @ space.gram_as(exact) @ la.cast(y, exact)


def symplectic_adjoint(space, A):
    """``A^dagger = J^{-1} A^T J``, the map with omega(A^dagger x, y) = omega(x, A y)."""
    _check_mat(space, A)
    exact = la.is_exact(A)
    return space.gram_as(exact, inverse=True) @ A.T @ space.gram_as(exact)


def is_in_sp(space, A, tol=la.DEFAULT_TOL):
    _check_mat(space, A)
    adj = symplectic_adjoint(space, A)
    if la.is_exact(adj):
        return la.is_zero(adj + A)
    return la.max_abs(la.floating(adj + A)) <= tol


def is_in_Sp(space, g, tol=la.DEFAULT_TOL):
    _check_mat(space, g)
    J = space.gram_as(la.is_exact(g))
    lhs = g.T @ J @ g
    if la.is_exact(lhs):
        return la.close(lhs, J)
    return la.max_abs(la.floating(lhs) - la.floating(J)) <= tol


@dataclass(frozen=True, eq=False)
class SpElement:
    """A matrix validated to lie in the symplectic Lie algebra."""

    space: SymplecticSpace
    mat: np.ndarray

    def __post_init__(self):
        if not is_in_sp(self.space, self.mat):
            raise ValueError("matrix is not in sp(V)")

    def to_json(self):
        return {"A": la.encode_array(self.mat), "checked": True}


def project_to_sp(space, S):
    """``(S - S^dagger) / 2``, which always lies in sp(V)."""
    half = Q(1, 2) if la.is_exact(S) else 0.5
    return (S - symplectic_adjoint(space, S)) * half


def random_rational_matrix(rng, shape, bound=3):
    ints = rng.integers(-bound, bound + 1, size=shape)
    return la.rational(ints.tolist())


def random_sp_element(space, seed=None, bound=3):
    """Random element of sp(V) with small rational entries."""
    rng = np.random.default_rng(seed)
    S = random_rational_matrix(rng, (space.dim, space.dim), bound)
    if not space.exact:
        S = la.floating(S)
    return SpElement(space, project_to_sp(space, S))


def transvection(space, a, c):
    """Symplectic transvection ``z -> z + c * omega(a, z) * a``; exact and in Sp."""
    a = np.asarray(a)
    return space.identity(la.is_exact(a)) + c * np.outer(a, a @ space.gram)


def random_rational_Sp_element(space, seed=None, factors=3, support=3):
    """Exact element of Sp(V): a product of transvections ``z -> z +- omega(a, z) a``
    whose directions ``a`` have at most ``support`` entries, each +-1."""
    rng = np.random.default_rng(seed)
    g = space.identity(True)
    for _ in range(factors):
        a = la.zeros(space.dim)
        k = min(support, space.dim)
        for i in rng.choice(space.dim, size=int(rng.integers(1, k + 1)), replace=False):
            a[int(i)] = Q(int(rng.choice([-1, 1])))
        c = Q(int(rng.choice([-1, 1])))
        # transvection(space, a, c) @ g as a rank-one update
        g = g + c * np.outer(a, (a @ space.gram) @ g)
    return g


def random_Sp_element(space, seed=None, scale=0.5, factors=2):
    """Float element of Sp(V): a product of exponentials of random sp elements."""
    from .flow import expm

    rng = np.random.default_rng(seed)
    fspace = space.as_float() if space.exact else space
    g = np.eye(space.dim)
    for _ in range(factors):
        B = project_to_sp(fspace, rng.normal(size=(space.dim, space.dim)))
        g = expm(scale * B) @ g
    return g
