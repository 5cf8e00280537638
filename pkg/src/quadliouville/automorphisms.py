"""Automorphism groups of the quadratic Liouville structures theta^A.

What is built here:

* centralizers of ``A`` in Sp(V) and sp(V), with exact rational members;
* the test that a map preserves the canonical form (A = 0) exactly when it
  is linear symplectic;
* the Hermitian form ``<x|y> = omega(x, A y) + i omega(x, y)`` for A^2 = -I;
* for A^2 = +I: the eigensplitting ``V = V+ (+) V-``, the lift of a
  diffeomorphism ``f`` of V+ to an automorphism of V, the inverse
  restriction, and the bundle map to the cotangent bundle of V+;
* rank-one nilpotent generators ``A z = -omega(a, z) a``.
"""
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg as la
from .linalg import Q
from .maps import SmoothMap, central_difference_jacobian, pullback_residual
from .quadratic import QuadraticGenerator, SquareClass, theta, zero_generator
from .symplectic import is_in_Sp, omega, standard_space


class WrongClass(ValueError):
    """The generator's square class does not support this operation."""


class SingularJacobian(la.SingularMatrix):
    pass


class RestrictionEscapes(ValueError):
    """A map claimed to preserve V+ sends a point of V+ off it."""


def _require(gen, *classes):
    if gen.square_class not in classes:
        wanted = ", ".join(c.value for c in classes)
        raise WrongClass(f"needs square class in {{{wanted}}}, generator is {gen.square_class.value!r}")


def theorem_for(gen):
    """Which classification result governs Aut(V, theta^A)."""
    if gen.square_class is SquareClass.OTHER:
        raise WrongClass("A^2 is not 0, I or -I; the automorphism group is not classified for this generator")
    if gen.square_class is SquareClass.ZERO:
        return "canonical: Aut = Sp" if la.is_zero(gen.A) else "nilpotent: Aut = Sp^A"
    if gen.square_class is SquareClass.MINUS:
        return "complex: Aut = Sp^A = U(<.|.>)"
    return "splitting: Aut = Diff(V+)"


# --- centralizers -------------------------------------------------------------


def is_centralizer_element(gen, g, tol=la.DEFAULT_TOL):
    g = np.asarray(g)
    if not is_in_Sp(gen.space, g, tol):
        return False
    A = la.cast(gen.A, la.is_exact(g))
    comm = g @ A - A @ g
    if la.is_exact(comm):
        return la.is_zero(comm)
    return la.max_abs(comm) <= tol


@dataclass(frozen=True)
class CentralizerBasis:
    generator: QuadraticGenerator
    basis: list

    @property
    def dim(self):
        return len(self.basis)

    def element(self, coeffs):
        out = la.zeros((self.generator.dim,) * 2, self.generator.exact)
        for c, B in zip(coeffs, self.basis):
            out = out + c * B
        return out


def centralizer_lie_basis(gen):
    """Basis of ``{B in sp(V) : B A = A B}``.

    sp(V) is parametrized as ``B = J^{-1} S`` with S symmetric, so only the
    commutation equations need solving.
    """
    n = gen.dim
    exact = gen.exact
    J_inv = gen.space.gram_as(exact, inverse=True)
    A = la.cast(gen.A, exact)
    sym = []
    for i in range(n):
        for j in range(i, n):
            S = la.zeros((n, n), exact)
            S[i, j] = S[j, i] = la.like(S, 1)
            sym.append(J_inv @ S)
    system = np.column_stack([(B @ A - A @ B).ravel() for B in sym])
    if not exact:
        system = la.floating(system)
    basis = []
    for c in la.kernel_basis(system):
        B = la.zeros((n, n), exact)
        for ck, Bk in zip(c, sym):
            if ck != 0:
                B = B + ck * Bk
        basis.append(B)
    return CentralizerBasis(gen, basis)


def cayley(B):
    """``(I + B)(I - B)^{-1}``; lies in Sp(V) when B is in sp(V), exactly."""
    I = la.identity(B.shape[0], la.is_exact(B))
    return (I + B) @ la.invert(I - B)


def pythagorean_pair(u):
    """Rational ``(c, s)`` with ``c^2 + s^2 = 1``, e.g. u = 1/2 gives (3/5, 4/5)."""
    u = la.to_fraction(u)
    d = 1 + u * u
    return (1 - u * u) / d, 2 * u / d


def rational_centralizer_element(gen, param, splitting=None):
    """An exact element of Sp(V)^A from a closed form in A.

    zero:  I - t A               (param t)
    minus: c I + s A             (param u via :func:`pythagorean_pair`)
    plus:  c P+ + (1/c) P-       (param c, nonzero)
    """
    if not gen.exact:
        raise ValueError("closed-form centralizer elements need an exact generator")
    p = la.to_fraction(param)
    I = la.identity(gen.dim)
    cls = gen.square_class
    if cls is SquareClass.ZERO:
        return I - p * gen.A
    if cls is SquareClass.MINUS:
        c, s = pythagorean_pair(p)
        return c * I + s * gen.A
    if cls is SquareClass.PLUS:
        if p == 0:
            raise ValueError("scaling parameter must be nonzero")
        split = splitting or lagrangian_splitting(gen)
        return p * split.P_plus + (1 / p) * split.P_minus
    raise WrongClass("no closed-form centralizer elements for the 'other' class")


# --- the canonical structure --------------------------------------------------


@dataclass(frozen=True)
class CanonicalDecision:
    member: bool
    failed_clause: object  # None, "origin", "pullback" or "linearity"
    witness: object = None

    def __bool__(self):
        return self.member


def default_samples(dim, exact=True):
    """Deterministic sample points: the standard basis, the all-ones vector
    and a mixed-sign vector."""
    I = la.identity(dim, exact)
    pts = [I[i] for i in range(dim)]
    pts.append(la.as_array([1] * dim, exact))
    pts.append(la.as_array([(-1) ** i * (i + 2) for i in range(dim)], exact))
    if exact:
        pts.append(la.as_array([Q(i + 1, 3) for i in range(dim)], True))
    return pts


def canonical_aut_check(g, space=None, samples=None, tol=la.DEFAULT_TOL):
    """Is ``g`` an automorphism of the canonical structure?  Membership means
    g(0) = 0, the pullback residual vanishes at every sample, and g is
    linear there (constant Jacobian ``g'_0`` with ``g(z) = g'_0 z``)."""
    if space is None:
        space = standard_space(g.dim_in // 2)
    gen0 = zero_generator(space)
    samples = default_samples(space.dim) if samples is None else samples
    origin = la.zeros(space.dim)

    def small(x):
        return x == 0 if la.is_rational(x) else abs(x) <= tol

    g0 = g.evaluate(origin)
    if not small(la.max_abs(g0)):
        return CanonicalDecision(False, "origin", origin)
    for z in samples:
        if not small(pullback_residual(gen0, g, z)):
            return CanonicalDecision(False, "pullback", z)
    D0 = g.jacobian(origin)
    for z in samples:
        if not (small(la.max_abs(g.jacobian(z) - D0)) and small(la.max_abs(g.evaluate(z) - D0 @ z))):
            return CanonicalDecision(False, "linearity", z)
    return CanonicalDecision(True, None)


# --- A^2 = -I: the pseudounitary form ------------------------------------------


@dataclass(frozen=True)
class PseudoUnitaryForm:
    """``<x|y> = omega(x, A y) + i omega(x, y)`` as a (real, imag) pair."""

    generator: QuadraticGenerator

    def __post_init__(self):
        _require(self.generator, SquareClass.MINUS)

    @property
    def real_gram(self):
        gen = self.generator
        return gen.space.gram_as(gen.exact) @ la.cast(gen.A, gen.exact)

    @property
    def imag_gram(self):
        return self.generator.space.gram_as(self.generator.exact)

    def __call__(self, x, y):
        gen = self.generator
        return omega(gen.space, x, la.cast(gen.A, la.all_exact(y)) @ y), omega(gen.space, x, y)

    def signature(self):
        """(positive, negative) counts of the real part, as a real symmetric form."""
        return symmetric_signature(self.real_gram)


def pseudo_unitary_inner_product(gen, x, y):
    return PseudoUnitaryForm(gen)(x, y)


def preserves_inner_product(gen, g, tol=la.DEFAULT_TOL):
    """Does ``g`` preserve both parts of <.|.> on all basis pairs?"""
    form = PseudoUnitaryForm(gen)
    g = np.asarray(g)
    for G in (form.real_gram, form.imag_gram):
        G = la.cast(G, la.is_exact(g))
        moved = g.T @ G @ g
        if la.is_exact(moved):
            if not la.close(moved, G):
                return False
        elif la.max_abs(la.floating(moved) - la.floating(G)) > tol:
            return False
    return True


def symmetric_signature(S):
    """Sylvester inertia ``(n_plus, n_minus)`` of a symmetric matrix by exact
    congruence diagonalization (floats use a tolerance for zero pivots)."""
    S = np.array(S, dtype=object if la.is_exact(S) else float, copy=True)
    exact = la.is_exact(S)
    tol = 0 if exact else la.DEFAULT_TOL * max(1.0, float(la.max_abs(S)))
    pos = neg = 0
    while S.shape[0]:
        n = S.shape[0]
        diag = [i for i in range(n) if abs(S[i, i]) > tol]
        if diag:
            i = diag[0]
        else:
            off = [(i, j) for i in range(n) for j in range(i + 1, n) if abs(S[i, j]) > tol]
            if not off:
                break
            i, j = off[0]
            # e_i -> e_i + e_j makes the (i, i) entry 2 S[i, j] nonzero
            S[i, :] = S[i, :] + S[j, :]
            S[:, i] = S[:, i] + S[:, j]
        perm = [i] + [k for k in range(n) if k != i]
        S = S[np.ix_(perm, perm)]
        p = S[0, 0]
        if p > 0:
            pos += 1
        else:
            neg += 1
        S = S[1:, 1:] - np.outer(S[1:, 0], S[0, 1:]) / p
    return pos, neg


# --- A^2 = +I: Lagrangian splitting and lifts ----------------------------------


@dataclass(frozen=True, eq=False)
class LagrangianSplitting:
    """``V = V+ (+) V-`` for A^2 = I.

    ``basis_plus`` / ``basis_minus`` hold basis vectors as columns;
    ``coords_plus`` / ``coords_minus`` read off coordinates along them, so
    ``P_plus = basis_plus @ coords_plus``.
    """

    generator: QuadraticGenerator
    basis_plus: np.ndarray
    basis_minus: np.ndarray
    coords_plus: np.ndarray
    coords_minus: np.ndarray

    @property
    def m(self):
        return self.basis_plus.shape[1]

    @property
    def P_plus(self):
        return self.basis_plus @ self.coords_plus

    @property
    def P_minus(self):
        return self.basis_minus @ self.coords_minus

    @cached_property
    def _float(self):
        return tuple(la.floating(M) for M in (self.basis_plus, self.basis_minus, self.coords_plus, self.coords_minus))

    def matrices(self, exact):
        """``(basis_plus, basis_minus, coords_plus, coords_minus)`` in one scalar kind."""
        if exact:
            return self.basis_plus, self.basis_minus, self.coords_plus, self.coords_minus
        return self._float

    def split(self, z):
        """V+ and V- coordinates of ``z``."""
        _, _, Cp, Cm = self.matrices(la.all_exact(z))
        return Cp @ z, Cm @ z

    def join(self, x, y):
        Bp, Bm, _, _ = self.matrices(la.all_exact(x, y))
        return Bp @ x + Bm @ y


def lagrangian_splitting(gen):
    _require(gen, SquareClass.PLUS)
    I = la.identity(gen.dim, gen.exact)
    plus = la.kernel_basis(gen.A - I)
    minus = la.kernel_basis(gen.A + I)
    m = gen.space.m
    if len(plus) != m or len(minus) != m:
        raise ValueError(f"eigenspaces have dimensions {len(plus)}, {len(minus)}; expected {m} each")
    B_plus = np.column_stack(plus)
    B_minus = np.column_stack(minus)
    C = la.invert(np.hstack([B_plus, B_minus]))
    return LagrangianSplitting(gen, B_plus, B_minus, C[:m], C[m:])


class CotangentLift(SmoothMap):
    """The automorphism of theta^A induced by a diffeomorphism ``f`` of V+:

        g(z) = f(z+) + [ (f'_{z+} o P+)^dagger restricted to V- ]^{-1} (z-)

    ``f`` acts on V+ coordinates.  The restricted inverse is solved at each
    point; f' must be invertible there.
    """

    CACHE_SIZE = 256

    def __init__(self, splitting, f):
        if f.dim_in != splitting.m or f.dim_out != splitting.m:
            raise ValueError(f"base map must act on R^{splitting.m}")
        self.splitting = splitting
        self.f = f
        self.dim_in = self.dim_out = splitting.generator.dim
        self.exact = splitting.generator.exact and f.exact and hasattr(f, "hessian")
        space = splitting.generator.space
        s = splitting
        # K(x) = coords_minus @ F_z^dagger @ basis_minus = L @ f'(x)^T @ R
        self._L = s.coords_minus @ space.gram_inv @ s.coords_plus.T
        self._R = s.basis_plus.T @ space.gram @ s.basis_minus
        self._LR_float = la.floating(self._L), la.floating(self._R)
        self._fibers = {}

    def _fiber_matrix(self, D):
        L, R = (self._L, self._R) if la.is_exact(D) else self._LR_float
        return L @ D.T @ R

    def _fiber(self, x):
        """``(K, K^{-1})`` at base point ``x``, memoized per point because
        residual checks ask for values and Jacobians at the same points."""
        key = (la.is_exact(x), tuple(x.tolist()))
        hit = self._fibers.get(key)
        if hit is None:
            K = self._fiber_matrix(self.f.jacobian(x))
            try:
                hit = K, la.invert(K)
            except la.SingularMatrix:
                raise SingularJacobian(f"f' is singular at {x}") from None
            if len(self._fibers) >= self.CACHE_SIZE:
                self._fibers.clear()
            self._fibers[key] = hit
        return hit

    def _evaluate(self, z):
        x, y = self.splitting.split(z)
        _, K_inv = self._fiber(x)
        return self.splitting.join(self.f.evaluate(x), K_inv @ y)

    def _jacobian(self, z):
        if not hasattr(self.f, "hessian"):
            return central_difference_jacobian(self._evaluate, z, self.step)
        s = self.splitting
        x, y = s.split(z)
        K, K_inv = self._fiber(x)
        u = K_inv @ y
        H = self.f.hessian(x)
        W = np.column_stack([self._fiber_matrix(H[:, :, k]) @ u for k in range(s.m)])
        Bp, Bm, Cp, Cm = s.matrices(la.is_exact(K))
        du = K_inv @ (Cm - W @ Cp)
        return Bp @ self.f.jacobian(x) @ Cp + Bm @ du

    def describe(self):
        return f"cotangent_lift({self.f.describe()})"


def cotangent_lift(gen, f, splitting=None):
    _require(gen, SquareClass.PLUS)
    return CotangentLift(splitting or lagrangian_splitting(gen), f)


class RestrictedMap(SmoothMap):
    """``x -> coords_plus @ g(basis_plus @ x)``: ``g`` seen on V+ coordinates."""

    def __init__(self, splitting, g):
        self.splitting = splitting
        self.g = g
        self.dim_in = self.dim_out = splitting.m
        self.exact = g.exact

    def _evaluate(self, x):
        Bp, _, Cp, _ = self.splitting.matrices(la.all_exact(x))
        gz = self.g.evaluate(Bp @ x)
        return la.cast(Cp, la.is_exact(gz)) @ gz

    def _jacobian(self, x):
        Bp, _, Cp, _ = self.splitting.matrices(la.all_exact(x))
        D = self.g.jacobian(Bp @ x)
        exact = la.is_exact(D)
        return la.cast(Cp, exact) @ D @ la.cast(Bp, exact)

    def describe(self):
        return f"restrict({self.g.describe()})"


def restrict_to_plus(gen, g, samples=None, splitting=None, tol=la.DEFAULT_TOL):
    """``f = g|V+`` in V+ coordinates, after checking at sample points that g
    keeps V+ inside V+."""
    _require(gen, SquareClass.PLUS)
    s = splitting or lagrangian_splitting(gen)
    if samples is None:
        samples = [la.zeros(s.m, gen.exact)] + default_samples(s.m, gen.exact)
    for x in samples:
        Bp, _, _, Cm = s.matrices(la.all_exact(x))
        gz = g.evaluate(Bp @ x)
        off = la.max_abs(la.cast(Cm, la.is_exact(gz)) @ gz)
        if (off != 0) if la.is_rational(off) else (off > tol):
            raise RestrictionEscapes(f"g sends V+ point with coordinates {list(x)} off V+ (V- part {off})")
    return RestrictedMap(s, g)


def alpha_bridge(gen, z, splitting=None):
    """Bundle map to the cotangent bundle of V+: the base point is z+ in V+
    coordinates, the covector has components ``omega(z-, b_i)`` on the V+ basis."""
    _require(gen, SquareClass.PLUS)
    s = splitting or lagrangian_splitting(gen)
    exact = la.all_exact(z)
    Bp, Bm, Cp, Cm = s.matrices(exact)
    z_minus = Bm @ (Cm @ z)
    return Cp @ z, z_minus @ gen.space.gram_as(exact) @ Bp


def tautological_pullback_residual(gen, z, v, splitting=None):
    """|tautological form at alpha(z) on the pushed-forward v  -  theta^A_z(v)|."""
    s = splitting or lagrangian_splitting(gen)
    exact = la.all_exact(z, v)
    z, v = la.cast(z, exact), la.cast(v, exact)
    _, covector = alpha_bridge(gen, z, s)
    _, _, Cp, _ = s.matrices(exact)
    return abs(covector @ (Cp @ v) - theta(gen, z, v))


def bridge_residual(gen, g, z, v, splitting=None):
    """|tautological form at alpha(g z) on alpha_* g_* v  -  theta^A_z(v)|.

    Vanishes when g preserves theta^A, since alpha pulls the tautological
    form back to theta^A.  ``v`` may be one vector or a list of them; the
    result is then the max over the list."""
    s = splitting or lagrangian_splitting(gen)
    vs = [v] if np.ndim(v) == 1 else list(v)
    gz = g.evaluate(z)
    D = g.jacobian(z)
    exact = gen.exact and la.all_exact(gz, D, *vs)
    gz, D, z = la.cast(gz, exact), la.cast(D, exact), la.cast(np.asarray(z), exact)
    _, covector = alpha_bridge(gen, gz, s)
    _, _, Cp, _ = s.matrices(exact)
    pulled = covector @ Cp @ D
    return max(abs(pulled @ w - theta(gen, z, w)) for w in (la.cast(np.asarray(w), exact) for w in vs))


# --- A^2 = 0: rank-one generators ---------------------------------------------


def rank_one_generator(space, a):
    """``A z = -omega(a, z) a``, a nilpotent element of sp(V)."""
    a = la.as_array(a) if not isinstance(a, np.ndarray) else a
    if a.shape != (space.dim,):
        raise ValueError(f"expected a vector of length {space.dim}")
    return QuadraticGenerator(space, -np.outer(a, a @ space.gram_as(la.is_exact(a))))


def linear_symplectic_is_automorphism(gen, g, samples=None, tol=la.DEFAULT_TOL):
    """For linear ``g``: does the pullback residual vanish at all samples?
    Exactly for rationals, within ``tol`` otherwise."""
    from .maps import LinearMap

    lin = LinearMap(g)
    samples = default_samples(gen.dim, gen.exact) if samples is None else samples
    for z in samples:
        r = pullback_residual(gen, lin, z)
        if (r != 0) if la.is_rational(r) else (r > tol):
            return False
    return True
