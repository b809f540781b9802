"""Builders for the four polynomial formulations of a Schubert problem.

Given a problem and one flag per condition, this module emits:

  * minor_system: the determinantal (rank-condition) equations of a single
    condition in a given chart; overdetermined, used for verification.
  * primal_dual: one chart for the first condition and one dual chart per
    remaining condition, coupled by the bilinear equations M @ N_i = 0; a
    square system of k(n-k)(ell-1) equations and variables.
  * paired: conditions consumed two at a time through pair charts, halving
    the variable count to floor((ell-1)/2) k(n-k).
  * hybrid: codimension-one conditions enter as single determinants on the
    primal pair chart instead of spending a dual block on them.
"""

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .cells import AffineMatrix, instantiate_dual, instantiate_primal, pattern_pair, pattern_single
from .conditions import (
    SchubertCondition,
    SchubertProblem,
    codim,
    dual_condition,
    feasible_pair,
    find_feasible_permutation,
    validate_problem,
)
from .flags import Flag, dual_flag, general_position_transform
from .linalg import det
from .polysys import (
    PolynomialSystem,
    _dicts_of,
    poly_add,
    poly_mul,
    poly_scale,
    system_from_dicts,
    system_to_json,
)


@dataclass(frozen=True)
class ChartBlock:
    """One chart of a formulation and the variable range it owns."""

    role: str  # "primal" or "dual"
    condition_indices: tuple  # 1-based positions within the problem
    flag_indices: tuple  # 1-based
    var_start: int
    var_stop: int
    chart: AffineMatrix


@dataclass(frozen=True)
class Formulation:
    system: PolynomialSystem
    chart_blocks: tuple
    problem: SchubertProblem
    mode: str

    def __post_init__(self):
        expected = 0
        for block in self.chart_blocks:
            if block.var_start != expected:
                raise ValueError("chart variable ranges must partition 0..n_vars-1")
            expected = block.var_stop
        if expected != self.system.n_vars:
            raise ValueError("chart variable ranges must cover all variables")


class PairingError(ValueError):
    """Raised when positional pairing hits an infeasible condition pair.

    Carries a suggested permutation (0-based indices, or None) found by
    backtracking search.
    """

    def __init__(self, message: str, suggestion):
        self.suggestion = suggestion
        if suggestion is not None:
            message += f"; reordering conditions as {list(suggestion)} would succeed"
        else:
            message += "; no reordering of the conditions succeeds"
        super().__init__(message)


# ---------------------------------------------------------------------------
# Symbolic determinants.
#
# Minors of a stacked matrix whose top rows are affine chart entries and
# whose bottom rows are constant flag vectors.  Expansion is Laplace along
# the chart rows with memoization over column subsets; the complementary
# constant minors are plain numeric determinants.


class _MinorExpander:
    def __init__(self, chart: AffineMatrix, const_rows: np.ndarray):
        self.chart = chart
        self.const = const_rows
        self._memo = {}

    def chart_minor(self, rows: tuple, cols: tuple) -> dict:
        """Symbolic determinant of chart[rows][:, cols]."""
        if not rows:
            return {(): 1.0 + 0.0j}
        key = (rows, cols)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        out = {}
        top = rows[0]
        for pos, c in enumerate(cols):
            entry = self.chart.entries[top][c]
            if not entry:
                continue
            sub = self.chart_minor(rows[1:], cols[:pos] + cols[pos + 1 :])
            if not sub:
                continue
            term = poly_mul(entry, sub)
            if pos % 2:
                term = poly_scale(term, -1.0)
            out = poly_add(out, term)
        self._memo[key] = out
        return out

    def stacked_minor(self, chart_rows: tuple, const_rows: tuple, cols: tuple) -> dict:
        """Symbolic determinant with chart rows on top, constant rows below."""
        r = len(chart_rows)
        if len(chart_rows) + len(const_rows) != len(cols):
            raise ValueError("minor must be square")
        if r == 0:
            value = det(self.const[np.ix_(const_rows, cols)])
            return {(): value} if value != 0 else {}
        total = {}
        base_sign = (-1) ** (r * (r - 1) // 2)
        for positions in combinations(range(len(cols)), r):
            top_cols = tuple(cols[p] for p in positions)
            sym = self.chart_minor(chart_rows, top_cols)
            if not sym:
                continue
            rest = tuple(cols[p] for p in range(len(cols)) if p not in positions)
            if rest:
                cdet = complex(det(self.const[np.ix_(const_rows, rest)]))
                if cdet == 0:
                    continue
            else:
                cdet = 1.0 + 0.0j
            sign = base_sign * (-1) ** sum(positions)
            total = poly_add(total, poly_scale(sym, sign * cdet))
        return total


def minor_system(chart: AffineMatrix, cond: SchubertCondition, f: Flag) -> PolynomialSystem:
    """All rank-condition minors of [chart; F_{beta_i}] for i = 1..k.

    For each i the stacked (k + beta_i) x n matrix must have rank at most
    beta_i + k - i, i.e. all (beta_i + k - i + 1)-minors vanish.  Vacuous
    indices (minor size exceeding the matrix) are skipped.
    """
    k, n = cond.k, cond.n
    if chart.rows != k or chart.cols != n:
        raise ValueError(f"chart must be {k} x {n}, got {chart.rows} x {chart.cols}")
    if f.n != n:
        raise ValueError(f"flag lives in C^{f.n}, expected C^{n}")
    expander = _MinorExpander(chart, f.matrix)
    polys = []
    labels = []
    for i in range(1, k + 1):
        b = cond.beta[i - 1]
        size = b + k - i + 1
        if size > min(k + b, n):
            continue
        for rows in combinations(range(k + b), size):
            chart_rows = tuple(r for r in rows if r < k)
            const_rows = tuple(r - k for r in rows if r >= k)
            for cols in combinations(range(n), size):
                poly = expander.stacked_minor(chart_rows, const_rows, cols)
                polys.append(poly)
                labels.append(f"minor(i={i}, rows={rows}, cols={cols})")
    return system_from_dicts(chart.n_vars, polys, labels)


def minor_count(cond: SchubertCondition) -> int:
    """Number of minors the rank conditions produce, vacuous terms counting 0."""
    k, n = cond.k, cond.n
    total = 0
    for i in range(1, k + 1):
        size = cond.beta[i - 1] + k - i + 1
        total += comb(n, size) * comb(k + cond.beta[i - 1], size)
    return total


def bilinear_block(m: AffineMatrix, nmat: AffineMatrix, label_prefix: str = "bilinear") -> PolynomialSystem:
    """The entries of the symbolic product m @ nmat as polynomials.

    Identically-zero products are dropped; every surviving equation is
    bilinear across the two charts' variable ranges.
    """
    if m.cols != nmat.rows:
        raise ValueError(f"inner dimensions disagree: {m.cols} vs {nmat.rows}")
    overlap = m.variable_ids() & nmat.variable_ids()
    if overlap:
        raise ValueError(f"charts share variables {sorted(overlap)}")
    polys = []
    labels = []
    for i in range(m.rows):
        for j in range(nmat.cols):
            entry = {}
            for s in range(m.cols):
                entry = poly_add(entry, poly_mul(m.entries[i][s], nmat.entries[s][j]))
            if entry:
                polys.append(entry)
                labels.append(f"{label_prefix}({i},{j})")
    return system_from_dicts(max(m.n_vars, nmat.n_vars), polys, labels)


def _check_problem(problem: SchubertProblem, flags):
    if not validate_problem(problem):
        total = sum(codim(c) for c in problem.conditions)
        box = problem.k * (problem.n - problem.k)
        raise ValueError(f"not a Schubert problem: codimension sum {total} != k(n-k) = {box}")
    if len(flags) != problem.num_conditions:
        raise ValueError(f"need one flag per condition: {len(flags)} flags for {problem.num_conditions} conditions")
    for f in flags:
        if f.n != problem.n:
            raise ValueError(f"flag lives in C^{f.n}, expected C^{problem.n}")


def _merge_blocks(problem, chart_blocks, equation_groups, mode) -> Formulation:
    n_vars = chart_blocks[-1].var_stop if chart_blocks else 0
    polys = []
    labels = []
    for block_sys in equation_groups:
        polys.extend(_dicts_of(block_sys))
        labels.extend(block_sys.labels)
    system = system_from_dicts(n_vars, polys, labels)
    return Formulation(system=system, chart_blocks=tuple(chart_blocks), problem=problem, mode=mode)


def primal_dual(problem: SchubertProblem, flags) -> Formulation:
    """Square bilinear system: a chart for the first condition against one
    dual chart per remaining condition, coupled by M @ N_i = 0."""
    _check_problem(problem, flags)
    ell = problem.num_conditions
    if ell < 2:
        raise ValueError("need at least two conditions")
    primal_chart = instantiate_primal(pattern_single(problem.conditions[0]), flags[0], 0)
    offset = primal_chart.n_vars
    blocks = [
        ChartBlock("primal", (1,), (1,), 0, offset, primal_chart)
    ]
    groups = []
    for i in range(2, ell + 1):
        ncols = problem.n - problem.k
        dual_chart = instantiate_dual(problem.conditions[i - 1], flags[i - 1], offset)
        start = offset
        offset = dual_chart.n_vars
        blocks.append(ChartBlock("dual", (i,), (i,), start, offset, dual_chart))
        groups.append(bilinear_block(primal_chart, dual_chart, label_prefix=f"bilinear[cond{i}]"))
    form = _merge_blocks(problem, blocks, groups, "full")
    kd = problem.k * (problem.n - problem.k)
    if form.system.n_polys != form.system.n_vars or form.system.n_vars != kd * (ell - 1):
        raise AssertionError("full primal-dual formulation must be square of size k(n-k)(ell-1)")
    return form


def _dual_pair_chart(problem, flags, i, j, offset):
    """Pair chart in the dual Grassmannian for conditions i, j (1-based)."""
    ci = dual_condition(problem.conditions[i - 1])
    cj = dual_condition(problem.conditions[j - 1])
    g = general_position_transform(dual_flag(flags[i - 1]), dual_flag(flags[j - 1]))
    real = flags[i - 1].real_flag and flags[j - 1].real_flag
    chart = instantiate_primal(pattern_pair(ci, cj), Flag(g, real_flag=real), offset)
    return chart.transpose()


def paired(problem: SchubertProblem, flags, permutation=None) -> Formulation:
    """Square bilinear system on pair charts.

    Conditions are consumed positionally: (1, 2) become the primal pair
    chart, then (3, 4), (5, 6), ... become dual pair charts; an odd
    trailing condition gets a single dual chart.  An optional permutation
    (0-based) reorders conditions and their flags first.
    """
    _check_problem(problem, flags)
    if permutation is not None:
        order = list(permutation)
        if sorted(order) != list(range(problem.num_conditions)):
            raise ValueError(f"permutation must reorder 0..{problem.num_conditions - 1}")
        problem = SchubertProblem(
            problem.n, problem.k, tuple(problem.conditions[i] for i in order)
        )
        flags = [flags[i] for i in order]
    ell = problem.num_conditions
    if ell < 2:
        raise ValueError("need at least two conditions")
    conds = problem.conditions
    if not feasible_pair(conds[0], conds[1]):
        raise PairingError(
            f"primal pair ({conds[0].beta}, {conds[1].beta}) is infeasible",
            find_feasible_permutation(conds),
        )
    g = general_position_transform(flags[0], flags[1])
    real = flags[0].real_flag and flags[1].real_flag
    primal_chart = instantiate_primal(pattern_pair(conds[0], conds[1]), Flag(g, real_flag=real), 0)
    offset = primal_chart.n_vars
    blocks = [ChartBlock("primal", (1, 2), (1, 2), 0, offset, primal_chart)]
    groups = []
    pos = 3
    while pos <= ell:
        start = offset
        if pos + 1 <= ell:
            di = dual_condition(conds[pos - 1])
            dj = dual_condition(conds[pos])
            if not feasible_pair(di, dj):
                raise PairingError(
                    f"dual pair for conditions ({pos}, {pos + 1}) is infeasible",
                    find_feasible_permutation(conds),
                )
            chart = _dual_pair_chart(problem, flags, pos, pos + 1, offset)
            indices = (pos, pos + 1)
            pos += 2
        else:
            chart = instantiate_dual(conds[pos - 1], flags[pos - 1], offset)
            indices = (pos,)
            pos += 1
        offset = chart.n_vars
        blocks.append(ChartBlock("dual", indices, indices, start, offset, chart))
        groups.append(bilinear_block(primal_chart, chart, label_prefix=f"bilinear[conds{indices}]"))
    form = _merge_blocks(problem, blocks, groups, "paired")
    expected = ((ell - 1) // 2) * problem.k * (problem.n - problem.k)
    if form.system.n_polys != form.system.n_vars or form.system.n_vars != expected:
        raise AssertionError("paired formulation must be square of size floor((ell-1)/2) k(n-k)")
    return form


def hybrid(problem: SchubertProblem, flags, hypersurface_indices) -> Formulation:
    """Paired-style blocks plus one determinant per hypersurface condition.

    Each index in hypersurface_indices (1-based) must name a codimension
    one condition; it contributes det([primal chart; first n-k rows of its
    flag]) = 0 instead of a dual chart.  The remaining conditions are
    consumed as in `paired`.
    """
    _check_problem(problem, flags)
    hyper = sorted(set(int(i) for i in hypersurface_indices))
    n, k = problem.n, problem.k
    for idx in hyper:
        if not (1 <= idx <= problem.num_conditions):
            raise ValueError(f"hypersurface index {idx} out of range")
        cond = problem.conditions[idx - 1]
        if codim(cond) != 1:
            raise ValueError(
                f"condition {idx} has codimension {codim(cond)}, not a hypersurface condition"
            )
    rest = [i for i in range(1, problem.num_conditions + 1) if i not in hyper]
    if len(rest) < 2:
        raise ValueError("hybrid formulation needs at least two non-hypersurface conditions")
    conds = problem.conditions
    c0, c1 = conds[rest[0] - 1], conds[rest[1] - 1]
    if not feasible_pair(c0, c1):
        raise PairingError(
            f"primal pair ({c0.beta}, {c1.beta}) is infeasible",
            find_feasible_permutation([conds[i - 1] for i in rest]),
        )
    g = general_position_transform(flags[rest[0] - 1], flags[rest[1] - 1])
    real = flags[rest[0] - 1].real_flag and flags[rest[1] - 1].real_flag
    primal_chart = instantiate_primal(pattern_pair(c0, c1), Flag(g, real_flag=real), 0)
    offset = primal_chart.n_vars
    blocks = [ChartBlock("primal", (rest[0], rest[1]), (rest[0], rest[1]), 0, offset, primal_chart)]
    groups = []

    pos = 2
    while pos < len(rest):
        start = offset
        if pos + 1 < len(rest):
            i, j = rest[pos], rest[pos + 1]
            di, dj = dual_condition(conds[i - 1]), dual_condition(conds[j - 1])
            if not feasible_pair(di, dj):
                raise PairingError(
                    f"dual pair for conditions ({i}, {j}) is infeasible",
                    find_feasible_permutation([conds[t - 1] for t in rest]),
                )
            chart = _dual_pair_chart(problem, flags, i, j, offset)
            indices = (i, j)
            pos += 2
        else:
            i = rest[pos]
            chart = instantiate_dual(conds[i - 1], flags[i - 1], offset)
            indices = (i,)
            pos += 1
        offset = chart.n_vars
        blocks.append(ChartBlock("dual", indices, indices, start, offset, chart))
        groups.append(bilinear_block(primal_chart, chart, label_prefix=f"bilinear[conds{indices}]"))

    det_polys = []
    det_labels = []
    for idx in hyper:
        flag = flags[idx - 1]
        expander = _MinorExpander(primal_chart, flag.matrix[: n - k])
        poly = expander.stacked_minor(tuple(range(k)), tuple(range(n - k)), tuple(range(n)))
        det_polys.append(poly)
        det_labels.append(f"det(cond={idx})")
    det_system = system_from_dicts(offset, det_polys, det_labels)

    form = _merge_blocks(problem, blocks, groups + [det_system], "hybrid")
    if form.system.n_polys != form.system.n_vars:
        raise AssertionError("hybrid formulation must be square")
    return form


def formulation_to_json(form: Formulation) -> dict:
    """Polysys JSON plus the chart block description."""
    data = system_to_json(form.system)
    data["chart_blocks"] = [
        {
            "role": b.role,
            "conditions": list(b.condition_indices),
            "flags": list(b.flag_indices),
            "var_range": [b.var_start, b.var_stop],
        }
        for b in form.chart_blocks
    ]
    return data
