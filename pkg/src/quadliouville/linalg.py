"""Dense linear algebra over exact rationals or 64-bit floats.

Rational matrices are numpy object arrays holding ``gmpy2.mpq`` values
(exported here as ``Q``; ``fractions.Fraction`` inputs are converted);
float matrices are ordinary ``float64`` arrays.  Every routine here works on
either kind and never mixes them: the scalar kind of the input decides the
arithmetic.
"""
from fractions import Fraction
from numbers import Rational

import gmpy2
import numpy as np

Q = gmpy2.mpq
_MPQ = type(Q(0))

DEFAULT_TOL = 1e-9


class SingularMatrix(ValueError):
    """Raised when a linear system has no unique solution."""


class NonFiniteError(ValueError):
    """Raised when a float computation produces NaN or Inf."""


def is_rational(x):
    return isinstance(x, (_MPQ, Fraction))


def to_fraction(x):
    """Exact rational from an int, Fraction, mpq, "p/q" string or float."""
    if isinstance(x, _MPQ):
        return x
    if isinstance(x, (np.integer, int)):
        return Q(int(x))
    if isinstance(x, Rational):
        return Q(int(x.numerator), int(x.denominator))
    if isinstance(x, str):
        return Q(Fraction(x.strip()))
    if isinstance(x, (float, np.floating)):
        return Q(float(x))
    raise TypeError(f"cannot interpret {x!r} as a rational")


def _is_rational_like(x):
    return isinstance(x, (Rational, np.integer, str))


def as_array(data, exact=None):
    """Coerce nested sequences into a rational (object) or float array.

    With ``exact=None`` the kind is inferred: all entries rational-like
    (int, Fraction, "p/q" string) gives a rational array, otherwise float.
    """
    if isinstance(data, np.ndarray) and exact is None:
        if data.dtype == object:
            return np.vectorize(to_fraction, otypes=[object])(data) if data.size else data.copy()
        exact = False
    arr = np.array(data, dtype=object)
    if exact is None:
        exact = all(_is_rational_like(x) for x in arr.flat)
    if exact:
        out = np.empty(arr.shape, dtype=object)
        for idx, x in np.ndenumerate(arr):
            out[idx] = to_fraction(x)
        return out
    out = np.array(arr.tolist(), dtype=float)
    check_finite(out)
    return out


def rational(data):
    return as_array(data, exact=True)


def floating(data):
    """Float copy of ``data`` (rational arrays are converted entrywise)."""
    if isinstance(data, np.ndarray) and data.dtype != object:
        out = data.astype(float)
    else:
        out = np.array(np.asarray(data, dtype=object).tolist(), dtype=float)
    check_finite(out)
    return out


def is_exact(arr):
    return isinstance(arr, np.ndarray) and arr.dtype == object


def all_exact(*arrays):
    return all(is_exact(np.asarray(a)) for a in arrays)


def cast(M, exact):
    """``M`` in the requested scalar kind (floats cannot become exact)."""
    if exact or not is_exact(M):
        return M
    return floating(M)


def check_finite(arr):
    if not is_exact(arr) and not np.all(np.isfinite(arr)):
        raise NonFiniteError("non-finite value in float computation")
    return arr


def identity(n, exact=True):
    if exact:
        out = np.empty((n, n), dtype=object)
        out.fill(Q(0))
        for i in range(n):
            out[i, i] = Q(1)
        return out
    return np.eye(n)


def zeros(shape, exact=True):
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(Q(0))
        return out
    return np.zeros(shape)


def like(arr, value):
    """``value`` in the scalar kind of ``arr``."""
    return to_fraction(value) if is_exact(arr) else float(value)


def max_abs(arr):
    """Largest absolute entry (0 for an empty array); exact for rationals."""
    arr = np.asarray(arr)
    if arr.size == 0:
        return Q(0) if arr.dtype == object else 0.0
    return max(abs(x) for x in arr.flat)


def close(a, b, tol=DEFAULT_TOL):
    """Entrywise equality: exact when both sides are rational, else
    ``|a - b| <= tol * (1 + |b|)``."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        return False
    if a.dtype == object and b.dtype == object:
        return bool(np.all(a == b))
    a = floating(a)
    b = floating(b)
    return bool(np.all(np.abs(a - b) <= tol * (1.0 + np.abs(b))))


def is_zero(arr, tol=DEFAULT_TOL):
    arr = np.asarray(arr)
    if arr.dtype == object:
        return all(x == 0 for x in arr.flat)
    return bool(np.all(np.abs(arr) <= tol))


def row_reduce(M, tol=DEFAULT_TOL):
    """Reduced row echelon form of ``M`` and its pivot columns.

    Rationals pivot on the first nonzero entry; floats use partial pivoting
    by magnitude and treat entries below ``tol * scale`` as zero.  Ties go to
    the lowest row index.
    """
    R = np.array(M, dtype=object if is_exact(M) else float, copy=True)
    exact = is_exact(R)
    rows, cols = R.shape
    scale = 1.0 if exact else max(1.0, float(max_abs(R)))
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        if exact:
            p = next((i for i in range(r, rows) if R[i, c] != 0), None)
        else:
            col = np.abs(R[r:, c])
            p = r + int(np.argmax(col)) if col.size and col.max() > tol * scale else None
        if p is None:
            if not exact:
                R[r:, c] = 0.0
            continue
        if p != r:
            R[[r, p]] = R[[p, r]]
        R[r] = R[r] / R[r, c]
        for i in range(rows):
            if i != r and R[i, c] != 0:
                R[i] = R[i] - R[i, c] * R[r]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(M, tol=DEFAULT_TOL):
    return len(row_reduce(M, tol)[1])


def solve_linear(M, b, tol=DEFAULT_TOL):
    """Unique solution of ``M x = b``; raises SingularMatrix otherwise."""
    M = np.asarray(M)
    b = np.asarray(b)
    n = M.shape[0]
    if M.ndim != 2 or M.shape[1] != n:
        raise ValueError(f"solve_linear needs a square matrix, got {M.shape}")
    if b.shape[0] != n:
        raise ValueError(f"right-hand side has length {b.shape[0]}, expected {n}")
    exact = is_exact(M) and is_exact(b)
    if not exact:
        M, b = floating(M), floating(b)
    rhs = b.reshape(n, -1)
    R, pivots = row_reduce(np.hstack([M, rhs]), tol)
    if pivots[:n] != list(range(n)):
        raise SingularMatrix("matrix is singular")
    x = R[:, n:]
    return check_finite(x.reshape(b.shape))


def invert(M, tol=DEFAULT_TOL):
    M = np.asarray(M)
    return solve_linear(M, identity(M.shape[0], exact=is_exact(M)), tol)


def kernel_basis(M, tol=DEFAULT_TOL):
    """Basis of the null space of ``M`` read off its reduced echelon form."""
    M = np.asarray(M)
    exact = is_exact(M)
    R, pivots = row_reduce(M, tol)
    cols = M.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = zeros(cols, exact)
        v[f] = like(v, 1)
        for i, p in enumerate(pivots):
            v[p] = -R[i, f]
        basis.append(v)
    return basis


def encode_scalar(x):
    if is_rational(x):
        return str(x)
    return float(x)


def encode_array(arr):
    arr = np.asarray(arr)
    if arr.ndim == 0:
        return encode_scalar(arr.item())
    return [encode_array(row) for row in arr]


def decode_array(data):
    """Inverse of :func:`encode_array`: strings become rationals, JSON
    numbers become floats unless every entry is an int."""
    flat = np.array(data, dtype=object).ravel()
    if any(isinstance(x, str) for x in flat):
        if any(isinstance(x, float) for x in flat):
            raise ValueError("mixed rational strings and floats in one array")
        return as_array(data, exact=True)
    return as_array(data)
