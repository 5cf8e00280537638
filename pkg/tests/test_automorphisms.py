import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from quadliouville import linalg as la
from quadliouville.automorphisms import (
    RestrictionEscapes,
    SingularJacobian,
    WrongClass,
    alpha_bridge,
    bridge_residual,
    canonical_aut_check,
    cayley,
    centralizer_lie_basis,
    cotangent_lift,
    is_centralizer_element,
    lagrangian_splitting,
    linear_symplectic_is_automorphism,
    preserves_inner_product,
    pseudo_unitary_inner_product,
    PseudoUnitaryForm,
    pythagorean_pair,
    rank_one_generator,
    rational_centralizer_element,
    restrict_to_plus,
    symmetric_signature,
    tautological_pullback_residual,
    theorem_for,
)
from quadliouville.flow import expm
from quadliouville.maps import LinearMap, PolynomialMap, pullback_residual, residual_samples
from quadliouville.quadratic import QuadraticGenerator, SquareClass, psi, theta, zero_generator
from quadliouville.suite import SuiteConfig, generate_instance, random_point, random_polynomial_diffeo
from quadliouville.symplectic import (
    is_in_Sp,
    is_in_sp,
    random_rational_Sp_element,
    random_Sp_element,
    standard_space,
)
from frozen import FROZEN
from strategies import rationals, vectors

S1 = standard_space(1)
R = la.rational
J = QuadraticGenerator(S1, R([[0, 1], [-1, 0]]))
DIAG = QuadraticGenerator(S1, R([[1, 0], [0, -1]]))
ZERO = zero_generator(S1)
SHEAR = PolynomialMap(2, [{(1, 0): 1}, {(0, 1): 1, (2, 0): 1}])
CUBIC = PolynomialMap(1, [{(3,): 1, (1,): 1}])


def instance(cls, m, seed):
    return generate_instance(SuiteConfig(dim=2 * m, classes=(cls,)), cls, np.random.default_rng([seed, 99]))


def test_theorem_labels():
    assert theorem_for(ZERO).startswith("canonical")
    assert theorem_for(rank_one_generator(S1, R([1, 0]))).startswith("nilpotent")
    assert theorem_for(J).startswith("complex")
    assert theorem_for(DIAG).startswith("splitting")
    with pytest.raises(WrongClass):
        theorem_for(QuadraticGenerator(S1, R([[2, 0], [0, -2]])))


def test_centralizer_examples():
    assert is_centralizer_element(J, la.identity(2))
    assert is_centralizer_element(J.as_float(), expm(la.floating(J.A)))
    assert not is_centralizer_element(J, R([[1, 0], [1, 1]]))


def test_centralizer_dimensions_frozen():
    assert centralizer_lie_basis(ZERO).dim == FROZEN["centralizer_dim_zero"]
    basis_J = centralizer_lie_basis(J)
    basis_D = centralizer_lie_basis(DIAG)
    assert basis_J.dim == FROZEN["centralizer_dim_J"]
    assert basis_D.dim == FROZEN["centralizer_dim_diag"]
    # spanned by the generator itself
    assert la.rank(np.column_stack([basis_J.basis[0].ravel(), J.A.ravel()])) == 1
    assert la.rank(np.column_stack([basis_D.basis[0].ravel(), DIAG.A.ravel()])) == 1


@pytest.mark.parametrize("cls", ["zero", "plus", "minus", "other"])
def test_centralizer_basis_invariants(cls):
    for seed in range(5):
        gen = instance(cls, 2, seed)
        for B in centralizer_lie_basis(gen).basis:
            assert is_in_sp(gen.space, B)
            assert la.is_zero(B @ gen.A - gen.A @ B)


def test_canonical_check_examples():
    assert canonical_aut_check(LinearMap(random_rational_Sp_element(standard_space(2), 1))).member
    d = canonical_aut_check(SHEAR)
    assert not d.member and d.failed_clause == "pullback"
    shift = PolynomialMap(2, [{(1, 0): 1, (0, 0): 1}, {(0, 1): 1}])
    assert canonical_aut_check(shift).failed_clause == "origin"
    assert canonical_aut_check(LinearMap(R([[2, 0], [0, 1]]))).failed_clause == "pullback"


def test_pseudo_unitary_examples():
    e1, e2 = R([1, 0]), R([0, 1])
    assert [str(x) for x in pseudo_unitary_inner_product(J, e1, e1)] == FROZEN["unitary_J_e1_e1"]
    assert [str(x) for x in pseudo_unitary_inner_product(J, e1, e2)] == FROZEN["unitary_J_e1_e2"]
    assert preserves_inner_product(J, la.identity(2))
    assert preserves_inner_product(J.as_float(), expm(0.7 * la.floating(J.A)))
    g = R([[2, 0], [0, "1/2"]])
    assert not preserves_inner_product(J, g)
    assert str(pseudo_unitary_inner_product(J, g @ e1, g @ e1)[0]) == FROZEN["unitary_diag_2_half_e1"]


def test_signature_matches_eigenvalues():
    for seed in range(10):
        gen = instance("minus", 3, seed)
        form = PseudoUnitaryForm(gen)
        ev = np.linalg.eigvalsh(la.floating(form.real_gram))
        assert form.signature() == (int((ev > 0).sum()), int((ev < 0).sum()))
    assert symmetric_signature(R([[0, 1], [1, 0]])) == (1, 1)


def test_splitting_examples():
    s = lagrangian_splitting(DIAG)
    assert la.encode_array(s.P_plus) == FROZEN["P_plus_diag"]
    assert la.is_zero(s.P_plus - s.P_minus - DIAG.A)
    with pytest.raises(WrongClass):
        lagrangian_splitting(J)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_splitting_is_lagrangian(m):
    gen = instance("plus", m, m)
    s = lagrangian_splitting(gen)
    for basis in (s.basis_plus, s.basis_minus):
        assert la.is_zero(basis.T @ gen.space.gram @ basis)
    assert la.is_zero(s.P_plus - s.P_minus - gen.A)
    assert la.is_zero(s.P_plus + s.P_minus - la.identity(2 * m))


def test_lift_examples():
    ident = cotangent_lift(DIAG, PolynomialMap.identity(1))
    z = R(["2/3", -5])
    assert la.is_zero(ident(z) - z)
    double = cotangent_lift(DIAG, PolynomialMap(1, [{(1,): 2}]))
    assert la.is_zero(double(z) - R(["4/3", "-5/2"]))
    assert la.encode_array(cotangent_lift(DIAG, CUBIC)(R([2, 3]))) == FROZEN["lift_cubic_at_2_3"]
    x, y = R(["1/2", 3])
    assert la.is_zero(cotangent_lift(DIAG, CUBIC)(R(["1/2", 3])) - R([x**3 + x, y / (3 * x**2 + 1)]))


def test_lift_singular_point():
    fold = PolynomialMap(1, [{(2,): 1}])
    with pytest.raises(SingularJacobian):
        cotangent_lift(DIAG, fold)(R([0, 1]))


def test_restriction_examples():
    z = R(["3/7"])
    assert la.is_zero(restrict_to_plus(DIAG, PolynomialMap.identity(2))(z) - z)
    back = restrict_to_plus(DIAG, PolynomialMap(2, [{(1, 0): 2}, {(0, 1): "1/2"}]))
    assert la.is_zero(back(z) - 2 * z)
    with pytest.raises(RestrictionEscapes):
        restrict_to_plus(DIAG, PolynomialMap(2, [{(1, 0): 1}, {(0, 1): 1, (2, 0): 1}]))


def test_alpha_examples():
    base, cov = alpha_bridge(DIAG, R([1, 2]))
    assert [la.encode_array(base), la.encode_array(cov)] == FROZEN["alpha_diag_12"]
    _, cov0 = alpha_bridge(DIAG, R([5, 0]))
    assert la.is_zero(cov0)
    assert tautological_pullback_residual(DIAG, R([1, 2]), R([3, 4])) == 0
    assert str(theta(DIAG, R([1, 2]), R([3, 4]))) == FROZEN["theta_diag_12_34"]
    assert tautological_pullback_residual(DIAG, R([7, 0]), R([3, 4])) == 0


def test_rank_one_examples():
    assert la.is_zero(rank_one_generator(S1, R([0, 0])).A)
    gen = rank_one_generator(S1, R([1, 0]))
    assert la.encode_array(gen.A) == FROZEN["rank_one_e1"]
    assert gen.square_class is SquareClass.ZERO
    z = R(["2/3", "-5/2"])
    assert psi(gen, z) == z[1] ** 2 / 4


def test_closed_form_elements():
    c, s = pythagorean_pair(la.to_fraction("1/2"))
    assert (c, s) == (la.to_fraction("3/5"), la.to_fraction("4/5"))
    g = rational_centralizer_element(J, "1/2")
    assert la.is_zero(g - (R([["3/5", 0], [0, "3/5"]]) + la.to_fraction("4/5") * J.A))
    with pytest.raises(WrongClass):
        rational_centralizer_element(QuadraticGenerator(S1, R([[2, 0], [0, -2]])), 1)
    with pytest.raises(ValueError):
        rational_centralizer_element(DIAG, 0)


@pytest.mark.parametrize("cls", ["zero", "plus", "minus"])
@given(m=st.integers(1, 3), seed=st.integers(0, 10**6), p=rationals.filter(lambda x: x != 0))
def test_closed_forms_are_automorphisms(cls, m, seed, p):
    gen = instance(cls, m, seed)
    g = rational_centralizer_element(gen, p)
    assert is_centralizer_element(gen, g)
    rng = np.random.default_rng(seed)
    for _ in range(3):
        for s in residual_samples(gen, LinearMap(g), random_point(rng, gen.dim)):
            assert s.value == 0


@pytest.mark.parametrize("cls", ["zero", "plus", "minus", "other"])
@given(m=st.integers(1, 2), seed=st.integers(0, 10**6), data=st.data())
def test_cayley_of_centralizer_algebra(cls, m, seed, data):
    # exact group elements from the Lie basis, for every class
    gen = instance(cls, m, seed)
    basis = centralizer_lie_basis(gen)
    coeffs = [data.draw(rationals) for _ in range(basis.dim)]
    B = basis.element(coeffs)
    I = la.identity(gen.dim)
    assume(la.rank(I - B) == gen.dim)
    g = cayley(B)
    assert is_centralizer_element(gen, g)
    z = random_point(np.random.default_rng(seed), gen.dim)
    assert pullback_residual(gen, LinearMap(g), z) == 0


@pytest.mark.parametrize("cls", ["zero", "plus", "minus", "other"])
def test_exponentials_of_centralizer_algebra(cls):
    for seed in range(25):
        gen = instance(cls, 2, seed).as_float()
        rng = np.random.default_rng(seed)
        basis = centralizer_lie_basis(gen)
        B = basis.element(rng.normal(size=basis.dim))
        g = expm(0.5 * B / max(1.0, float(la.max_abs(B))))
        for _ in range(20):
            for s in residual_samples(gen, LinearMap(g), rng.normal(size=4))[:1]:
                assert s.relative <= 1e-9


@given(seed=st.integers(0, 10**6))
def test_unitary_iff_centralizer(seed):
    gen = instance("minus", 2, seed)
    rng = np.random.default_rng(seed)
    candidates = [random_rational_Sp_element(gen.space, rng), rational_centralizer_element(gen, "2/3")]
    for g in candidates:
        assert preserves_inner_product(gen, g) == is_centralizer_element(gen, g)


@given(seed=st.integers(0, 10**6))
def test_linear_pullback_iff_centralizer(seed):
    for cls in ("zero", "plus", "minus"):
        gen = instance(cls, 2, seed)
        rng = np.random.default_rng(seed)
        for g in (random_rational_Sp_element(gen.space, rng), rational_centralizer_element(gen, 3)):
            assert linear_symplectic_is_automorphism(gen, g) == is_centralizer_element(gen, g)


@given(seed=st.integers(0, 10**6), c=rationals)
def test_nilpotent_shears(seed, c):
    gen = rank_one_generator(S1, R([1, 0]))
    g = PolynomialMap(2, [{(1, 0): 1}, {(0, 1): 1, (2, 0): c}])
    z = R([1, 1])
    assert (pullback_residual(gen, g, z) == 0) == (c == 0)
    if c != 0:
        lin = rational_centralizer_element(gen, c)
        assert pullback_residual(gen, LinearMap(lin), z) == 0


@pytest.mark.parametrize("m", [1, 2])
def test_lift_is_homomorphism_with_inverse(m):
    for trial in range(5):
        rng = np.random.default_rng([m, trial])
        gen = instance("plus", m, trial)
        s = lagrangian_splitting(gen)
        f1, f2 = random_polynomial_diffeo(m, rng), random_polynomial_diffeo(m, rng)
        L1, L2 = cotangent_lift(gen, f1, s), cotangent_lift(gen, f2, s)
        L12 = cotangent_lift(gen, f1.compose(f2), s)
        back = restrict_to_plus(gen, L1, splitting=s)
        ident = cotangent_lift(gen, PolynomialMap.identity(m), s)
        for _ in range(10):
            z = random_point(rng, 2 * m)
            x = random_point(rng, m)
            assert la.is_zero(L12(z) - L1(L2(z)))
            assert la.is_zero(back(x) - f1(x))
            assert la.is_zero(ident(z) - z)


@given(seed=st.integers(0, 10**6), data=st.data())
def test_lift_residuals_exact(seed, data):
    gen = instance("plus", 2, seed)
    s = lagrangian_splitting(gen)
    lift = cotangent_lift(gen, random_polynomial_diffeo(2, np.random.default_rng(seed)), s)
    z, v = data.draw(vectors(4)), data.draw(vectors(4))
    for r in residual_samples(gen, lift, z):
        assert r.value == 0
    assert bridge_residual(gen, lift, z, v, s) == 0
    assert is_in_Sp(gen.space, lift.jacobian(z))


def test_lift_analytic_jacobian_matches_differences():
    gen = instance("plus", 2, 3)
    lift = cotangent_lift(gen, random_polynomial_diffeo(2, np.random.default_rng(3), la.to_fraction("1/8")))
    z = np.array([0.1, -0.2, 0.3, 0.05])
    from quadliouville.maps import central_difference_jacobian

    assert np.allclose(lift.jacobian(z), central_difference_jacobian(lift.evaluate, z), atol=1e-6)


@given(seed=st.integers(0, 10**6), data=st.data())
def test_tautological_bridge_exact(seed, data):
    gen = instance("plus", 2, seed)
    z, v = data.draw(vectors(4)), data.draw(vectors(4))
    assert tautological_pullback_residual(gen, z, v) == 0
    a, b = alpha_bridge(gen, z), alpha_bridge(gen, v)
    c = alpha_bridge(gen, z + v)
    assert la.is_zero(c[0] - a[0] - b[0]) and la.is_zero(c[1] - a[1] - b[1])


def test_float_unitary_iff_centralizer():
    gen = J.as_float()
    for seed in range(10):
        g = random_Sp_element(S1, seed, scale=1.0)
        assert preserves_inner_product(gen, g) == is_centralizer_element(gen, g)
    rot = expm(1.3 * la.floating(J.A))
    assert preserves_inner_product(gen, rot) and is_centralizer_element(gen, rot)
