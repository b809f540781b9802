"""Dense complex linear algebra kernel.

Matrices are 2-D numpy arrays of complex128.  The kernel keeps its own LU
and elimination routines so that pivot thresholds, permutation parity, and
rank decisions are explicit and identical on every platform; numpy is used
as the array substrate only.  Pairings here are bilinear (no conjugation):
a functional with coefficient vector v annihilates a row h iff h @ v == 0.
"""

import numpy as np

# Relative pivot threshold below which a matrix is reported singular.
PIVOT_RTOL = 1e-13


class ShapeError(ValueError):
    pass


class SingularMatrixError(ArithmeticError):
    """Raised when elimination hits a pivot below the threshold."""

    def __init__(self, pivot: int, message: str | None = None):
        self.pivot = pivot
        super().__init__(message or f"matrix is singular at pivot {pivot}")


def _as_cmatrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError("matrix entries must be finite")
    return m


def _require_square(a) -> np.ndarray:
    m = _as_cmatrix(a)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {m.shape}")
    return m


def lu_decompose(a):
    """LU with partial pivoting: returns (lu, perm, sign).

    lu packs the unit lower and upper factors; perm is the row permutation
    as an index array so that a[perm] == L @ U; sign is the permutation
    parity (+1 or -1).  Singularity is not an error here: callers compare
    the U diagonal against PIVOT_RTOL * max|a| (see singular_pivot).
    """
    m = _require_square(a).copy()
    n = m.shape[0]
    perm = np.arange(n)
    sign = 1
    for j in range(n):
        p = j + int(np.argmax(np.abs(m[j:, j])))
        if p != j:
            m[[j, p]] = m[[p, j]]
            perm[[j, p]] = perm[[p, j]]
            sign = -sign
        piv = m[j, j]
        if piv != 0:
            m[j + 1 :, j] /= piv
            m[j + 1 :, j + 1 :] -= np.outer(m[j + 1 :, j], m[j, j + 1 :])
    return m, perm, sign


def singular_pivot(lu: np.ndarray, scale: float) -> int | None:
    """Index of the first pivot below PIVOT_RTOL * scale, or None."""
    diag = np.abs(np.diagonal(lu))
    bad = np.nonzero(diag < PIVOT_RTOL * max(scale, 1e-300))[0]
    return int(bad[0]) if bad.size else None


def det(a) -> complex:
    """Determinant via LU: parity sign times the product of U's diagonal."""
    m = _require_square(a)
    if m.shape[0] == 0:
        return 1.0 + 0.0j
    lu, _, sign = lu_decompose(m)
    return complex(sign * np.prod(np.diagonal(lu)))


def solve_linear(a, b):
    """Solve a @ x = b by LU; b may be a vector or a matrix of columns."""
    m = _require_square(a)
    lu, perm, _ = lu_decompose(m)
    scale = float(np.max(np.abs(m))) if m.size else 0.0
    bad = singular_pivot(lu, scale)
    if bad is not None:
        raise SingularMatrixError(bad)
    rhs = np.asarray(b, dtype=np.complex128)
    vector = rhs.ndim == 1
    if vector:
        rhs = rhs[:, None]
    if rhs.shape[0] != m.shape[0]:
        raise ShapeError(f"rhs has {rhs.shape[0]} rows, expected {m.shape[0]}")
    y = rhs[perm].copy()
    n = m.shape[0]
    for i in range(1, n):
        y[i] -= lu[i, :i] @ y[:i]
    for i in range(n - 1, -1, -1):
        y[i] -= lu[i, i + 1 :] @ y[i + 1 :]
        y[i] /= lu[i, i]
    return y[:, 0] if vector else y


def inverse_transpose(a):
    """(a^-1)^T, used to pass from a basis to its dual basis."""
    m = _require_square(a)
    inv = solve_linear(m, np.eye(m.shape[0], dtype=np.complex128))
    return inv.T.copy()


def numeric_rank(a, tol: float) -> int:
    """Rank by complete-pivoting elimination.

    Counts pivots with magnitude above tol * max|a|, the largest entry of
    the input matrix.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = _as_cmatrix(a).copy()
    if m.size == 0:
        return 0
    threshold = tol * float(np.max(np.abs(m)))
    rank = 0
    rows, cols = m.shape
    for step in range(min(rows, cols)):
        sub = np.abs(m[step:, step:])
        flat = int(np.argmax(sub))
        r, c = divmod(flat, cols - step)
        if sub[r, c] <= threshold:
            break
        r += step
        c += step
        if r != step:
            m[[step, r]] = m[[r, step]]
        if c != step:
            m[:, [step, c]] = m[:, [c, step]]
        rank += 1
        piv = m[step, step]
        factors = m[step + 1 :, step] / piv
        m[step + 1 :, step:] -= np.outer(factors, m[step, step:])
    return rank


def nullspace(a, rtol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (rows) of {v : a @ v = 0}."""
    m = _as_cmatrix(a)
    if m.shape[0] == 0:
        return np.eye(m.shape[1], dtype=np.complex128)
    _, s, vh = np.linalg.svd(m)
    cutoff = rtol * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > cutoff))
    return vh[rank:].conj().copy() if rank < vh.shape[0] else np.zeros((0, m.shape[1]), dtype=np.complex128)


def intersect_rowspaces(a, b) -> np.ndarray:
    """Basis (rows) of rowspace(a) /\\ rowspace(b).

    Solves u @ a = v @ b for coefficient rows (u, v): the stacked matrix
    [a; -b] has the pairs (u, v) as the nullspace of its transpose, and
    u @ a is then a vector of the intersection.  For generic spans the
    dimension is p + q - rank([a; b]).
    """
    ma = _as_cmatrix(a)
    mb = _as_cmatrix(b)
    if ma.shape[1] != mb.shape[1]:
        raise ShapeError("row spaces must live in the same ambient space")
    n = ma.shape[1]
    stacked = np.vstack([ma, -mb])
    coeffs = nullspace(stacked.T)
    vecs = []
    for w in coeffs:
        vec = w[: ma.shape[0]] @ ma
        norm = np.linalg.norm(vec)
        if norm > 1e-12 * max(1.0, float(np.max(np.abs(ma), initial=0.0))):
            vecs.append(vec)
    if not vecs:
        return np.zeros((0, n), dtype=np.complex128)
    return np.array(vecs, dtype=np.complex128)


def operator_norm_2(a, iters: int = 20) -> float:
    """Induced 2-norm estimated by power iteration on a^H a."""
    m = _as_cmatrix(a)
    if m.size == 0:
        return 0.0
    v = np.ones(m.shape[1], dtype=np.complex128)
    v /= np.linalg.norm(v)
    for _ in range(iters):
        w = m.conj().T @ (m @ v)
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v = w / norm
    return float(np.linalg.norm(m @ v))
