"""Structured coordinates for Schubert cells.

A PatternMatrix is a k x n grid of cells that are zero, one, or a free
variable; it encodes the echelon-style local coordinates of a Schubert
cell, either for a single condition or for a pair of conditions with
respect to opposite flags.  Instantiating a pattern against a flag yields
an AffineMatrix whose entries are degree <= 1 polynomials in the global
variables.
"""

from dataclasses import dataclass

import numpy as np

from .conditions import SchubertCondition, codim, dual_condition, feasible_pair
from .flags import Flag, dual_flag
from .polysys import poly_eval

# Grid cell encoding: nonnegative ints are variable ids, negatives are the
# two constant cells.
CELL_ZERO = -1
CELL_ONE = -2


@dataclass(frozen=True)
class PatternMatrix:
    """Cell coordinates as a grid of CELL_ZERO / CELL_ONE / variable ids."""

    rows: int
    cols: int
    grid: tuple

    @property
    def n_vars(self) -> int:
        return sum(1 for row in self.grid for c in row if c >= 0)

    def var_cells(self):
        for i, row in enumerate(self.grid):
            for j, c in enumerate(row):
                if c >= 0:
                    yield i, j, c


@dataclass(frozen=True)
class AffineMatrix:
    """Matrix of affine-linear polynomials over global variable ids.

    Entries use the polysys dict representation; n_vars is the size of the
    global variable space the entries may reference.
    """

    rows: int
    cols: int
    entries: tuple
    n_vars: int

    def evaluate(self, x) -> np.ndarray:
        out = np.empty((self.rows, self.cols), dtype=np.complex128)
        for i in range(self.rows):
            for j in range(self.cols):
                out[i, j] = poly_eval(self.entries[i][j], x)
        return out

    def transpose(self) -> "AffineMatrix":
        entries = tuple(
            tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)
        )
        return AffineMatrix(rows=self.cols, cols=self.rows, entries=entries, n_vars=self.n_vars)

    def variable_ids(self) -> set:
        used = set()
        for row in self.entries:
            for entry in row:
                for key in entry:
                    for v, _ in key:
                        used.add(v)
        return used


def pattern_single(cond: SchubertCondition) -> PatternMatrix:
    """Echelon coordinates of the cell of a single condition.

    Row i has a one in column beta_i, zeros in the other pivot columns and
    to the right of beta_i, and a fresh variable elsewhere.  Variable ids
    are dense, assigned left to right, top to bottom.
    """
    k, n = cond.k, cond.n
    pivots = set(cond.beta)
    grid = []
    next_var = 0
    for i in range(1, k + 1):
        row = []
        for j in range(1, n + 1):
            if j == cond.beta[i - 1]:
                row.append(CELL_ONE)
            elif j in pivots or j > cond.beta[i - 1]:
                row.append(CELL_ZERO)
            else:
                row.append(next_var)
                next_var += 1
        grid.append(tuple(row))
    pattern = PatternMatrix(rows=k, cols=n, grid=tuple(grid))
    assert pattern.n_vars == k * (n - k) - codim(cond)
    return pattern


def pattern_pair(b: SchubertCondition, g: SchubertCondition) -> PatternMatrix:
    """Coordinates of the intersection cell for conditions (b, g) with
    respect to a flag and an opposite flag.

    Row i is supported on the column interval [n+1-g_{k+1-i}, b_i] with a
    one at column b_i.
    """
    if not feasible_pair(b, g):
        raise ValueError(
            f"conditions beta={b.beta}, gamma={g.beta} cut out an empty intersection"
        )
    k, n = b.k, b.n
    grid = []
    next_var = 0
    for i in range(1, k + 1):
        lo = n + 1 - g.beta[k - i]
        hi = b.beta[i - 1]
        row = []
        for j in range(1, n + 1):
            if j == hi:
                row.append(CELL_ONE)
            elif lo <= j < hi:
                row.append(next_var)
                next_var += 1
            else:
                row.append(CELL_ZERO)
        grid.append(tuple(row))
    pattern = PatternMatrix(rows=k, cols=n, grid=tuple(grid))
    assert pattern.n_vars == k * (n - k) - codim(b) - codim(g)
    return pattern


def instantiate_primal(pattern: PatternMatrix, f: Flag, var_offset: int = 0) -> AffineMatrix:
    """Symbolic product (pattern) @ (flag matrix).

    The row space of the result at any variable assignment is a point of
    the Schubert cell moved to the flag f.  Variable ids are shifted by
    var_offset so charts can share one global variable space.
    """
    if pattern.cols != f.n:
        raise ValueError(f"pattern has {pattern.cols} columns, flag lives in C^{f.n}")
    fm = f.matrix
    entries = []
    max_var = -1
    for i in range(pattern.rows):
        row_entries = []
        for c in range(pattern.cols):
            poly = {}
            const = 0.0 + 0.0j
            for j, cell in enumerate(pattern.grid[i]):
                if cell == CELL_ZERO:
                    continue
                if cell == CELL_ONE:
                    const += fm[j, c]
                else:
                    vid = cell + var_offset
                    max_var = max(max_var, vid)
                    coeff = fm[j, c]
                    if coeff != 0:
                        poly[((vid, 1),)] = poly.get(((vid, 1),), 0.0) + coeff
            if const != 0:
                poly[()] = const
            row_entries.append(poly)
        entries.append(tuple(row_entries))
    return AffineMatrix(
        rows=pattern.rows,
        cols=pattern.cols,
        entries=tuple(entries),
        n_vars=max(max_var + 1, var_offset + pattern.n_vars),
    )


def instantiate_dual(cond: SchubertCondition, f: Flag, var_offset: int = 0) -> AffineMatrix:
    """Chart for the annihilators of the planes satisfying cond at f.

    Builds the cell of the dual condition against the dual flag and
    transposes: columns of the returned n x (n-k) matrix span, for each
    variable assignment, an (n-k)-plane of functionals that annihilates
    some plane of the cell of (cond, f).
    """
    dual_pattern = pattern_single(dual_condition(cond))
    chart = instantiate_primal(dual_pattern, dual_flag(f), var_offset)
    return chart.transpose()


def sample_cell_point(pattern: PatternMatrix, rng) -> np.ndarray:
    """Numeric matrix with the pattern's variables replaced by seeded draws."""
    out = np.zeros((pattern.rows, pattern.cols), dtype=np.complex128)
    values = {}
    for i, j, v in pattern.var_cells():
        values[(i, j)] = rng.complex_uniform(-1.0, 1.0)
    for i in range(pattern.rows):
        for j in range(pattern.cols):
            cell = pattern.grid[i][j]
            if cell == CELL_ONE:
                out[i, j] = 1.0
            elif cell >= 0:
                out[i, j] = values[(i, j)]
    return out
