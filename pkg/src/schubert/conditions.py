"""Schubert conditions on a Grassmannian Gr(k, n).

A condition is a strictly increasing k-subset beta of {1, ..., n}; it
prescribes how a k-plane must meet a complete flag.  This module supplies
the combinatorial layer: codimension, the duality beta -> beta_perp,
validation of Schubert problems, the bridge to partitions, and the
Littlewood-Richardson count of solutions.

All index lists are 1-based, matching the classical conventions.
"""

from dataclasses import dataclass
from itertools import permutations


@dataclass(frozen=True)
class SchubertCondition:
    """A Schubert condition beta on Gr(k, n)."""

    n: int
    k: int
    beta: tuple

    def __post_init__(self):
        object.__setattr__(self, "beta", tuple(int(b) for b in self.beta))
        if not (0 < self.k < self.n):
            raise ValueError(f"need 0 < k < n, got k={self.k}, n={self.n}")
        if len(self.beta) != self.k:
            raise ValueError(f"beta must have {self.k} entries, got {self.beta}")
        prev = 0
        for b in self.beta:
            if not (prev < b <= self.n):
                raise ValueError(f"beta must be strictly increasing in [1, {self.n}]: {self.beta}")
            prev = b


@dataclass(frozen=True)
class SchubertProblem:
    """A list of Schubert conditions on a common Gr(k, n).

    The codimension sum is deliberately not enforced here so that
    validate_problem can report on malformed inputs; constructors only
    reject mixed ambient spaces.
    """

    n: int
    k: int
    conditions: tuple

    def __post_init__(self):
        conds = tuple(self.conditions)
        object.__setattr__(self, "conditions", conds)
        if not conds:
            raise ValueError("a Schubert problem needs at least one condition")
        for c in conds:
            if (c.n, c.k) != (self.n, self.k):
                raise ValueError(
                    f"condition {c.beta} lives on Gr({c.k},{c.n}), expected Gr({self.k},{self.n})"
                )

    @property
    def num_conditions(self) -> int:
        return len(self.conditions)


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing nonnegative parts, fitting a k x (n-k) box."""

    parts: tuple

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        for a, b in zip(parts, parts[1:]):
            if b > a:
                raise ValueError(f"parts must be weakly decreasing: {parts}")
        if parts and parts[-1] < 0:
            raise ValueError(f"parts must be nonnegative: {parts}")

    @property
    def weight(self) -> int:
        return sum(self.parts)


def codim(cond: SchubertCondition) -> int:
    """Codimension of the Schubert variety: k(n-k) - sum_i (beta_i - i)."""
    k, n = cond.k, cond.n
    return k * (n - k) - sum(b - i for i, b in enumerate(cond.beta, start=1))


def dual_condition(cond: SchubertCondition) -> SchubertCondition:
    """The condition beta_perp on Gr(n-k, n) cutting out the annihilators.

    beta_perp = sorted(j : n+1-j not in beta).
    """
    n = cond.n
    beta_set = set(cond.beta)
    dual = sorted(j for j in range(1, n + 1) if (n + 1 - j) not in beta_set)
    return SchubertCondition(n=n, k=n - cond.k, beta=tuple(dual))


def validate_problem(problem: SchubertProblem) -> bool:
    """True iff the condition codimensions sum to dim Gr(k, n) = k(n-k)."""
    total = sum(codim(c) for c in problem.conditions)
    return total == problem.k * (problem.n - problem.k)


def condition_to_partition(cond: SchubertCondition) -> Partition:
    """Shape lambda with lambda_i = n-k+i - beta_i; weight equals codim."""
    k, n = cond.k, cond.n
    parts = tuple(n - k + i - b for i, b in enumerate(cond.beta, start=1))
    return Partition(parts)


def partition_to_condition(p: Partition, n: int, k: int) -> SchubertCondition:
    """Inverse of condition_to_partition for shapes in the k x (n-k) box."""
    parts = tuple(p.parts) + (0,) * (k - len(p.parts))
    if len(parts) != k or (parts and parts[0] > n - k):
        raise ValueError(f"partition {p.parts} does not fit the {k} x {n - k} box")
    beta = tuple(n - k + i - parts[i - 1] for i in range(1, k + 1))
    return SchubertCondition(n=n, k=k, beta=beta)


def feasible_pair(b: SchubertCondition, g: SchubertCondition) -> bool:
    """Whether X_b E meets X_g E' for opposite flags: n+1-g_{k+1-i} <= b_i."""
    if (b.n, b.k) != (g.n, g.k):
        raise ValueError("conditions must share (n, k)")
    n, k = b.n, b.k
    return all(n + 1 - g.beta[k - i] <= b.beta[i - 1] for i in range(1, k + 1))


# ---------------------------------------------------------------------------
# Littlewood-Richardson counting.
#
# Schur classes are indexed by partitions inside the k x (n-k) box; products
# are expanded with the tableau Littlewood-Richardson rule (skew fillings
# whose reverse reading word is a lattice word) and truncated to the box
# after every factor.


def _trim(parts):
    parts = tuple(parts)
    while parts and parts[-1] == 0:
        parts = parts[:-1]
    return parts


def _count_lr_fillings(lam, nu, mu):
    """Number of LR skew tableaux of shape nu/lam with content mu.

    Cells are filled in reverse reading order (rows top to bottom, each row
    right to left) so the lattice-word condition can be checked on prefixes.
    """
    rows = len(nu)
    lam = tuple(lam) + (0,) * (rows - len(lam))
    cells = []
    for r in range(rows):
        for c in range(nu[r] - 1, lam[r] - 1, -1):
            cells.append((r, c))
    if len(cells) != sum(mu):
        return 0

    nvals = len(mu)
    counts = [0] * (nvals + 1)
    fill = {}

    def place(idx):
        if idx == len(cells):
            return 1
        r, c = cells[idx]
        lo, hi = 1, nvals
        right = fill.get((r, c + 1))
        if right is not None:
            hi = min(hi, right)
        above = fill.get((r - 1, c))
        if r > 0 and c >= lam[r - 1]:
            if above is None:
                return 0
            lo = max(lo, above + 1)
        total = 0
        for v in range(lo, hi + 1):
            if counts[v] >= mu[v - 1]:
                continue
            if v > 1 and counts[v] + 1 > counts[v - 1]:
                continue
            counts[v] += 1
            fill[(r, c)] = v
            total += place(idx + 1)
            counts[v] -= 1
            del fill[(r, c)]
        return total

    return place(0)


def _lr_expand(lam, mu, k, width):
    """Expansion of s_lam * s_mu truncated to the k x width box."""
    if not mu:
        return {lam: 1}
    lam_full = tuple(lam) + (0,) * (k - len(lam))
    target = sum(lam) + sum(mu)
    out = {}

    def build(row, shape, remaining):
        if remaining < 0:
            return
        if row == k:
            if remaining == 0:
                nu = tuple(shape)
                c = _count_lr_fillings(lam_full[: len(nu)], nu, mu)
                if c:
                    key = _trim(nu)
                    out[key] = out.get(key, 0) + c
            return
        hi = width if row == 0 else shape[row - 1]
        lo = lam_full[row]
        for v in range(lo, hi + 1):
            build(row + 1, shape + [v], remaining - v)

    build(0, [], target)
    return out


def lr_number(problem: SchubertProblem) -> int:
    """Number of solutions N of a Schubert problem, counted combinatorially.

    Converts each condition to its partition and multiplies the Schur
    classes left to right in the box ring, returning the coefficient of the
    full box.
    """
    if not validate_problem(problem):
        total = sum(codim(c) for c in problem.conditions)
        box = problem.k * (problem.n - problem.k)
        raise ValueError(f"not a Schubert problem: codimension sum {total} != k(n-k) = {box}")
    k, width = problem.k, problem.n - problem.k
    acc = {(): 1}
    for cond in problem.conditions:
        mu = _trim(condition_to_partition(cond).parts)
        nxt = {}
        for lam, mult in acc.items():
            for nu, c in _lr_expand(lam, mu, k, width).items():
                nxt[nu] = nxt.get(nu, 0) + mult * c
        acc = nxt
        if not acc:
            return 0
    return acc.get((width,) * k, 0)


def find_feasible_permutation(conditions):
    """Search for a condition ordering compatible with positional pairing.

    Returns a tuple of 0-based indices such that after reordering, the
    primal pair (positions 0, 1) is feasible and every dual pair
    (positions 2j, 2j+1) is feasible on the dual side, or None if no
    ordering works.  Backtracking over positions keeps this fast even for
    ten conditions.
    """
    conds = list(conditions)
    ell = len(conds)
    if ell < 2:
        return None

    def pair_ok(i, j, primal):
        a, b = conds[i], conds[j]
        if primal:
            return feasible_pair(a, b)
        return feasible_pair(dual_condition(a), dual_condition(b))

    used = [False] * ell
    order = []

    def extend(pos):
        if pos == ell:
            return True
        for i in range(ell):
            if used[i]:
                continue
            if pos % 2 == 1:
                first = order[-1]
                if not pair_ok(first, i, primal=(pos == 1)):
                    continue
            used[i] = True
            order.append(i)
            if extend(pos + 1):
                return True
            order.pop()
            used[i] = False
        return False

    if extend(0):
        return tuple(order)
    return None
