"""Complete flags in C^n and their duals.

A flag is stored as an invertible n x n matrix whose row l is the l-th
basis vector, so the span of rows 1..l is the l-dimensional subspace F_l.
Besides the coordinate flags this module builds seeded random flags, the
dual flag on the dual space, and the change of basis that moves a pair of
flags in general position onto the coordinate flag and its opposite.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import (
    PIVOT_RTOL,
    SingularMatrixError,
    intersect_rowspaces,
    inverse_transpose,
    lu_decompose,
    singular_pivot,
)
from .rng import SeededRng


class GeneralPositionError(ValueError):
    """Raised when a required subspace intersection has the wrong dimension."""

    def __init__(self, index: int, dimension: int):
        self.index = index
        self.dimension = dimension
        super().__init__(
            f"flags not in general position: intersection {index} has dimension {dimension}, expected 1"
        )


@dataclass(frozen=True)
class Flag:
    """An n x n basis matrix; rows 1..l span F_l."""

    matrix: np.ndarray
    real_flag: bool = False

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"flag matrix must be square, got shape {m.shape}")
        if self.real_flag and np.any(m.imag != 0.0):
            raise ValueError("real flag must have exactly zero imaginary parts")
        lu, _, _ = lu_decompose(m)
        if singular_pivot(lu, float(np.max(np.abs(m)))) is not None:
            raise SingularMatrixError(0, "flag matrix is singular")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def subspace(self, ell: int) -> np.ndarray:
        """The first ell basis rows, spanning F_ell."""
        return self.matrix[:ell]


def coordinate_flag(n: int) -> Flag:
    """E: the identity basis, F_l = <e_1, ..., e_l>."""
    if n < 2:
        raise ValueError("need n >= 2")
    return Flag(np.eye(n, dtype=np.complex128), real_flag=True)


def opposite_flag(n: int) -> Flag:
    """E': the reversed basis, F_l = <e_n, ..., e_{n+1-l}>."""
    if n < 2:
        raise ValueError("need n >= 2")
    return Flag(np.eye(n, dtype=np.complex128)[::-1].copy(), real_flag=True)


def random_flag(n: int, seed: int, real: bool = False) -> Flag:
    """Seeded random flag; real entries uniform on [-1, 1], complex on the unit square.

    Deterministic for a fixed seed.  Regenerates (up to 8 attempts) in the
    measure-zero event of a singular draw.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    rng = SeededRng(seed)
    for _ in range(8):
        if real:
            entries = [rng.uniform(-1.0, 1.0) for _ in range(n * n)]
            m = np.array(entries, dtype=np.complex128).reshape(n, n)
        else:
            entries = [rng.complex_uniform(0.0, 1.0) for _ in range(n * n)]
            m = np.array(entries, dtype=np.complex128).reshape(n, n)
        lu, _, _ = lu_decompose(m)
        if singular_pivot(lu, float(np.max(np.abs(m)))) is None:
            return Flag(m, real_flag=real)
    raise SingularMatrixError(0, "could not draw a nonsingular flag in 8 attempts")


def dual_flag(f: Flag) -> Flag:
    """The flag of annihilators on the dual space.

    Rows are the dual basis in reverse order, so rows 1..l span the
    annihilator of F_{n-l}.  The pairing is bilinear: row i of the result
    dotted with row j of f is delta_{i, n+1-j}.
    """
    dual_rows = inverse_transpose(f.matrix)[::-1].copy()
    return Flag(dual_rows, real_flag=f.real_flag)


def general_position_transform(f: Flag, fp: Flag) -> np.ndarray:
    """Matrix g whose row i spans F_i /\\ F'_{n+1-i}.

    For flags in general position every such intersection is a line, the
    first l rows of g span F_l, and the last l rows span F'_l; this is the
    change of basis carrying the coordinate flag pair (E, E') to (f, fp).
    Rows are normalized to unit Euclidean norm.
    """
    if f.n != fp.n:
        raise ValueError("flags must share the ambient dimension")
    n = f.n
    rows = []
    for i in range(1, n + 1):
        meet = intersect_rowspaces(f.subspace(i), fp.subspace(n + 1 - i))
        if meet.shape[0] != 1:
            raise GeneralPositionError(i, meet.shape[0])
        row = meet[0]
        # canonical phase: make the largest entry real and positive
        lead = row[int(np.argmax(np.abs(row)))]
        row = row * (lead.conjugate() / abs(lead))
        rows.append(row / np.linalg.norm(row))
    g = np.array(rows, dtype=np.complex128)
    if f.real_flag and fp.real_flag:
        # intersections of real subspaces are real lines; the phase fix
        # leaves at most roundoff in the imaginary parts
        if np.max(np.abs(g.imag)) > 1e-9:
            raise GeneralPositionError(n, 1)
        g = g.real.astype(np.complex128)
    lu, _, _ = lu_decompose(g)
    if singular_pivot(lu, float(np.max(np.abs(g)))) is not None:
        raise GeneralPositionError(n, n)
    return g
