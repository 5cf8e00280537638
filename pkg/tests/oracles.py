"""Independent reference computations in sympy.

Nothing here imports the package.  Each function recomputes a value from
the defining formulas (Omega(x, y) = x^T J y, A^dagger = J^-1 A^T J, ...)
with sympy's own rationals, linear algebra and symbolic calculus.
``scripts/freeze_oracles.py`` evaluates ORACLES and writes the results to
``tests/frozen_values.json``; the tests compare both the package and these
functions against the frozen file.
"""
import sympy as sp

R = sp.Rational
E = sp.E


def darboux(m):
    J = sp.zeros(2 * m, 2 * m)
    for i in range(m):
        J[i, m + i] = 1
        J[m + i, i] = -1
    return J


J2 = darboux(1)
DIAG = sp.diag(1, -1)
NIL = sp.Matrix([[0, 1], [0, 0]])


def omega(x, y, J=J2):
    return (sp.Matrix(x).T * J * sp.Matrix(y))[0, 0]


def adjoint(A, J=J2):
    return J.inv() * A.T * J


def theta(A, z, v, J=J2):
    z = sp.Matrix(z)
    return R(1, 2) * omega(z - A * z, v, J)


def psi(A, z, J=J2):
    z = sp.Matrix(z)
    return R(1, 4) * omega(z, A * z, J)


def dpsi(A, z, v, J=J2):
    return R(1, 2) * omega(z, A * sp.Matrix(v), J)


def flow_matrix(A, t):
    n = A.shape[0]
    return sp.simplify(((sp.eye(n) - A) * sp.Rational(1, 2) * t).exp())


def pullback_vector(A, g_exprs, syms, z, J=J2):
    """Row vector ((g - A g)^T J Dg - (z - A z)^T J) at the point z."""
    g = sp.Matrix(g_exprs)
    D = g.jacobian(syms)
    sub = dict(zip(syms, z))
    gz = g.subs(sub)
    Dz = D.subs(sub)
    zz = sp.Matrix(z)
    return ((gz - A * gz).T * J * Dz - (zz - A * zz).T * J).applyfunc(sp.simplify)


def centralizer_dim(A, J=J2):
    """Kernel dimension of the stacked system B^dagger + B = 0, BA - AB = 0
    in the n^2 entries of B."""
    n = A.shape[0]
    b = sp.symbols(f"b0:{n * n}")
    B = sp.Matrix(n, n, b)
    eqs = list(adjoint(B, J) + B) + list(B * A - A * B)
    M = sp.Matrix([[sp.diff(e, x) for x in b] for e in eqs])
    return len(M.nullspace())


def lift_formula(fx):
    """Cotangent lift for A = diag(1, -1), m = 1: V+ = span(e1), V- = span(e2).

    Solve F_z^dagger restricted to V- for the fiber coordinate."""
    x, y, w = sp.symbols("x y w")
    f = fx(x)
    F = sp.Matrix([[sp.diff(f, x), 0], [0, 0]])  # f'(z+) composed with P+
    Fd = adjoint(F)
    eq = (Fd * sp.Matrix([0, w]))[1] - y
    sol = sp.solve(eq, w)[0]
    return sp.Matrix([f, sol]), (x, y)


def _mat(M):
    return [[str(sp.nsimplify(v)) for v in row] for row in M.tolist()]


def _vec(v):
    return [str(sp.nsimplify(x)) for x in list(v)]


def _floatvec(v):
    return [float(x) for x in list(v)]


def _lift_cubic_at(z):
    g, syms = lift_formula(lambda x: x**3 + x)
    return _vec(g.subs(dict(zip(syms, z))))


def _shear():
    p, q = sp.symbols("p q")
    return [p, q + p**2], (p, q)


def _negative(A, g, z, probe):
    syms = sp.symbols("p q")
    g = g(*syms)
    row = pullback_vector(A, g, syms, z)
    return str(abs((row * sp.Matrix(probe))[0, 0]))


def _max_abs_row(A, g, z):
    syms = sp.symbols("p q")
    row = pullback_vector(A, g(*syms), syms, z)
    return str(max(abs(x) for x in row))


ORACLES = {
    "solve_diag": lambda: _vec(sp.Matrix([[2, 0], [0, 4]]).LUsolve(sp.Matrix([1, 1]))),
    "invert_J": lambda: _mat(J2.inv()),
    "kernel_nil": lambda: [_vec(v) for v in NIL.nullspace()],
    "omega_12_34": lambda: str(omega([1, 2], [3, 4])),
    "adjoint_J": lambda: _mat(adjoint(J2)),
    "adjoint_diag": lambda: _mat(adjoint(DIAG)),
    "nil_in_sp": lambda: bool(adjoint(NIL) == -NIL),
    "shear_in_Sp": lambda: bool(sp.Matrix([[1, 0], [1, 1]]).T * J2 * sp.Matrix([[1, 0], [1, 1]]) == J2),
    "twoI_in_Sp": lambda: bool((2 * sp.eye(2)).T * J2 * (2 * sp.eye(2)) == J2),
    "exp_J_half_pi": lambda: _mat((J2 * sp.pi / 2).exp()),
    "square_nil": lambda: _mat(NIL * NIL),
    "square_diag": lambda: _mat(DIAG * DIAG),
    "square_J": lambda: _mat(J2 * J2),
    "psi_J_e1": lambda: str(psi(J2, [1, 0])),
    "psi_diag_11": lambda: str(psi(DIAG, [1, 1])),
    "dpsi_diag": lambda: str(dpsi(DIAG, [1, 1], [1, 0])),
    "theta_zero": lambda: str(theta(sp.zeros(2, 2), [1, 0], [0, 1])),
    "theta_diag": lambda: str(theta(DIAG, [1, 1], [1, 0])),
    "zeta_nil": lambda: _vec(R(1, 2) * (sp.Matrix([1, 1]) - NIL * sp.Matrix([1, 1]))),
    "flow_nil_t2": lambda: _floatvec((flow_matrix(NIL, 2) * sp.Matrix([0, 1])).evalf(30)),
    "flow_diag_t1": lambda: _floatvec((flow_matrix(DIAG, 1) * sp.Matrix([1, 1])).evalf(30)),
    "shear_eval": lambda: _vec(sp.Matrix(_shear()[0]).subs(dict(zip(_shear()[1], (2, 1))))),
    "shear_jac": lambda: _mat(sp.Matrix(_shear()[0]).jacobian(_shear()[1]).subs(dict(zip(_shear()[1], (1, 0))))),
    "shear_residual_e1": lambda: _negative(sp.zeros(2, 2), lambda p, q: [p, q + p**2], (1, 0), (1, 0)),
    "diag_vs_J": lambda: _max_abs_row(J2, lambda p, q: [2 * p, q / 2], (1, 0)),
    "lower_vs_nil_rank_one": lambda: _max_abs_row(
        -sp.Matrix([1, 0]) * (sp.Matrix([1, 0]).T * J2), lambda p, q: [p, p + q], (1, 0)
    ),
    "lift_linear_2x": lambda: [str(e) for e in lift_formula(lambda x: 2 * x)[0]],
    "lift_cubic": lambda: [str(e) for e in lift_formula(lambda x: x**3 + x)[0]],
    "lift_cubic_at_2_3": lambda: _lift_cubic_at((2, 3)),
    "lift_cubic_residual": lambda: _vec(
        pullback_vector(DIAG, lift_formula(lambda x: x**3 + x)[0], lift_formula(lambda x: x)[1], (R(1, 2), 3))
    ),
    "centralizer_dim_zero": lambda: centralizer_dim(sp.zeros(2, 2)),
    "centralizer_dim_J": lambda: centralizer_dim(J2),
    "centralizer_dim_diag": lambda: centralizer_dim(DIAG),
    "unitary_J_e1_e1": lambda: [str(omega([1, 0], J2 * sp.Matrix([1, 0]))), str(omega([1, 0], [1, 0]))],
    "unitary_J_e1_e2": lambda: [str(omega([1, 0], J2 * sp.Matrix([0, 1]))), str(omega([1, 0], [0, 1]))],
    "unitary_diag_2_half_e1": lambda: str(omega([2, 0], J2 * sp.Matrix([2, 0]))),
    "P_plus_diag": lambda: _mat(sp.Matrix([[1, 0], [0, 0]])),
    "alpha_diag_12": lambda: [_vec([1]), _vec([omega([0, 2], [1, 0])])],
    "theta_diag_12_34": lambda: str(theta(DIAG, [1, 2], [3, 4])),
    "rank_one_e1": lambda: _mat(-sp.Matrix([1, 0]) * (sp.Matrix([1, 0]).T * J2)),
    "psi_rank_one_e1": lambda: str(
        sp.expand(psi(-sp.Matrix([1, 0]) * (sp.Matrix([1, 0]).T * J2), sp.symbols("p q")))
    ),
}


def evaluate_all():
    return {name: fn() for name, fn in ORACLES.items()}
