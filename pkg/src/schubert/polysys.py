"""Sparse multivariate polynomial systems over the complex numbers.

Polynomials are lists of monomials; a monomial is a complex coefficient
with a sparse exponent map.  Construction-side arithmetic works on plain
dicts keyed by exponent tuples; evaluation and differentiation compile the
system once into flat numpy gather tapes so that path tracking stays cheap.
"""

from dataclasses import dataclass, field

import numpy as np

# Absolute threshold below which coefficients are dropped after combining
# like monomials.
COEFF_DROP = 1e-14

# Internal polynomial representation: dict mapping an exponent key to a
# complex coefficient.  An exponent key is a tuple of (var, exp) pairs
# sorted by var, with exp >= 1; the constant term has key ().


def poly_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for key, coeff in b.items():
        c = out.get(key, 0.0) + coeff
        if abs(c) < COEFF_DROP:
            out.pop(key, None)
        else:
            out[key] = c
    return out


def poly_mul(a: dict, b: dict) -> dict:
    out = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            if not kb:
                key = ka
            elif not ka:
                key = kb
            else:
                merged = dict(ka)
                for v, e in kb:
                    merged[v] = merged.get(v, 0) + e
                key = tuple(sorted(merged.items()))
            c = out.get(key, 0.0) + ca * cb
            if abs(c) < COEFF_DROP:
                out.pop(key, None)
            else:
                out[key] = c
    return out


def poly_scale(a: dict, s: complex) -> dict:
    if s == 0:
        return {}
    return {k: c * s for k, c in a.items()}


def poly_eval(a: dict, x) -> complex:
    total = 0.0 + 0.0j
    for key, coeff in a.items():
        term = coeff
        for v, e in key:
            term *= x[v] ** e
        total += term
    return complex(total)


def poly_diff(a: dict, var: int) -> dict:
    out = {}
    for key, coeff in a.items():
        for idx, (v, e) in enumerate(key):
            if v != var:
                continue
            if e == 1:
                new_key = key[:idx] + key[idx + 1 :]
            else:
                new_key = key[:idx] + ((v, e - 1),) + key[idx + 1 :]
            out[new_key] = out.get(new_key, 0.0) + coeff * e
    return {k: c for k, c in out.items() if abs(c) >= COEFF_DROP}


def poly_degree(a: dict) -> int:
    if not a:
        return 0
    return max(sum(e for _, e in key) for key in a)


@dataclass(frozen=True)
class Monomial:
    """A coefficient times a product of variable powers."""

    coeff: complex
    exponents: dict

    def __post_init__(self):
        if self.coeff == 0:
            raise ValueError("zero coefficients are not stored")
        for v, e in self.exponents.items():
            if e < 1:
                raise ValueError(f"exponent of x_{v} must be >= 1, got {e}")

    @property
    def degree(self) -> int:
        return sum(self.exponents.values())


class PolynomialSystem:
    """A list of sparse polynomials in n_vars complex variables.

    Each polynomial carries a provenance label naming the block or
    condition that generated it.  Degree metadata is always recomputed
    from the monomials.
    """

    def __init__(self, n_vars: int, polys, labels=None):
        self.n_vars = int(n_vars)
        self.polys = tuple(tuple(p) for p in polys)
        if labels is None:
            labels = tuple(f"p{i}" for i in range(len(self.polys)))
        self.labels = tuple(labels)
        if len(self.labels) != len(self.polys):
            raise ValueError("one label per polynomial required")
        for poly in self.polys:
            for mono in poly:
                for v in mono.exponents:
                    if not (0 <= v < self.n_vars):
                        raise ValueError(f"variable id {v} out of range [0, {self.n_vars})")
        self.degrees = tuple(
            max((m.degree for m in poly), default=0) for poly in self.polys
        )
        self._tape = None
        self._jac_tape = None

    @property
    def n_polys(self) -> int:
        return len(self.polys)

    def is_square(self) -> bool:
        return self.n_polys == self.n_vars


def system_from_dicts(n_vars: int, dict_polys, labels=None) -> PolynomialSystem:
    """Build a system from internal dict polynomials."""
    polys = []
    for d in dict_polys:
        monos = []
        for key in sorted(d, key=lambda k: (sum(e for _, e in k), k)):
            coeff = d[key]
            if abs(coeff) < COEFF_DROP:
                continue
            monos.append(Monomial(coeff=complex(coeff), exponents=dict(key)))
        polys.append(monos)
    return PolynomialSystem(n_vars, polys, labels)


def _dicts_of(system: PolynomialSystem):
    return [
        {tuple(sorted(m.exponents.items())): m.coeff for m in poly}
        for poly in system.polys
    ]


# ---------------------------------------------------------------------------
# Compiled evaluation.
#
# A tape flattens every monomial into a row of variable indices (repeated
# per exponent, padded with a slot that always reads 1).  Evaluation is a
# gather, a row product, and a segmented sum.


def _build_tape(entries, n_vars, n_rows):
    """entries: list of (row, coeff, exponents dict)."""
    width = 0
    for _, _, exps in entries:
        width = max(width, sum(exps.values()))
    count = len(entries)
    gather = np.full((count, max(width, 1)), n_vars, dtype=np.int64)
    coeffs = np.empty(count, dtype=np.complex128)
    rows = np.empty(count, dtype=np.int64)
    for i, (row, coeff, exps) in enumerate(entries):
        rows[i] = row
        coeffs[i] = coeff
        pos = 0
        for v in sorted(exps):
            for _ in range(exps[v]):
                gather[i, pos] = v
                pos += 1
    return gather, coeffs, rows, n_rows


def _run_tape(tape, x):
    gather, coeffs, rows, n_rows = tape
    if len(coeffs) == 0:
        return np.zeros(n_rows, dtype=np.complex128)
    ext = np.concatenate([x, [1.0 + 0.0j]])
    vals = coeffs * np.prod(ext[gather], axis=1)
    out = np.bincount(rows, weights=vals.real, minlength=n_rows).astype(np.complex128)
    out += 1j * np.bincount(rows, weights=vals.imag, minlength=n_rows)
    return out


def _eval_tape(system: PolynomialSystem):
    if system._tape is None:
        entries = []
        for p, poly in enumerate(system.polys):
            for mono in poly:
                entries.append((p, mono.coeff, mono.exponents))
        system._tape = _build_tape(entries, system.n_vars, system.n_polys)
    return system._tape


def _jacobian_tape(system: PolynomialSystem):
    if system._jac_tape is None:
        nv = system.n_vars
        entries = []
        for p, poly in enumerate(system.polys):
            for mono in poly:
                for v, e in mono.exponents.items():
                    exps = dict(mono.exponents)
                    if e == 1:
                        del exps[v]
                    else:
                        exps[v] = e - 1
                    entries.append((p * nv + v, mono.coeff * e, exps))
        system._jac_tape = _build_tape(entries, nv, system.n_polys * nv)
    return system._jac_tape


def evaluate(system: PolynomialSystem, x) -> np.ndarray:
    """Value of every polynomial at the point x."""
    x = np.asarray(x, dtype=np.complex128)
    if x.shape != (system.n_vars,):
        raise ValueError(f"point has length {x.shape}, expected ({system.n_vars},)")
    return _run_tape(_eval_tape(system), x)


def jacobian(system: PolynomialSystem, x) -> np.ndarray:
    """Matrix of partial derivatives at x, one row per polynomial."""
    x = np.asarray(x, dtype=np.complex128)
    if x.shape != (system.n_vars,):
        raise ValueError(f"point has length {x.shape}, expected ({system.n_vars},)")
    flat = _run_tape(_jacobian_tape(system), x)
    return flat.reshape(system.n_polys, system.n_vars)


def derivative_tensor(system: PolynomialSystem, x, order: int) -> np.ndarray:
    """All order-th partial derivatives at x, shape (n_polys, n_vars^order).

    Entry [p, flat(i_1, ..., i_m)] is d^m f_p / dx_{i_1} ... dx_{i_m}; the
    tensor is symmetric in the differentiation indices.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    nv = system.n_vars
    x = np.asarray(x, dtype=np.complex128)
    out = np.zeros((system.n_polys, nv**order), dtype=np.complex128)
    from itertools import combinations_with_replacement, permutations

    for p, d in enumerate(_dicts_of(system)):
        for combo in combinations_with_replacement(range(nv), order):
            dd = d
            for v in combo:
                dd = poly_diff(dd, v)
                if not dd:
                    break
            if not dd:
                continue
            val = poly_eval(dd, x)
            for perm in set(permutations(combo)):
                flat = 0
                for v in perm:
                    flat = flat * nv + v
                out[p, flat] = val
    return out


def second_derivative_norm(system: PolynomialSystem):
    """Second-derivative data for curvature bounds.

    For systems of degree at most 2 the Hessians are constant and returned
    as an ndarray of shape (n_polys, n_vars, n_vars).  For higher degree,
    returns an evaluator f(order, x) yielding the order-th derivative
    tensor at x.
    """
    nv = system.n_vars
    max_deg = max(system.degrees, default=0)
    if max_deg <= 2:
        zero = np.zeros(nv, dtype=np.complex128)
        return derivative_tensor(system, zero, 2).reshape(system.n_polys, nv, nv)
    return lambda order, x: derivative_tensor(system, x, order)


def shape(system: PolynomialSystem):
    """(n_vars, n_polys, degree histogram)."""
    hist = {}
    for d in system.degrees:
        hist[d] = hist.get(d, 0) + 1
    return system.n_vars, system.n_polys, hist


def format_shape(system: PolynomialSystem) -> str:
    nv, np_, hist = shape(system)
    inner = ", ".join(f"{d}:{hist[d]}" for d in sorted(hist))
    return f"({nv}, {np_}, {{{inner}}})"


# ---------------------------------------------------------------------------
# JSON round trip: {"n_vars": V, "polys": [[[re, im, {"var": exp}], ...]],
# "labels": [...]}.  Writing preserves stored monomial order and sorts
# exponent keys numerically so a load/dump cycle is byte-identical.


def system_to_json(system: PolynomialSystem) -> dict:
    polys = []
    for poly in system.polys:
        monos = []
        for m in poly:
            exps = {str(v): int(e) for v, e in sorted(m.exponents.items())}
            monos.append([m.coeff.real, m.coeff.imag, exps])
        polys.append(monos)
    return {"n_vars": system.n_vars, "polys": polys, "labels": list(system.labels)}


def system_from_json(data: dict) -> PolynomialSystem:
    polys = []
    for poly in data["polys"]:
        monos = []
        for re, im, exps in poly:
            monos.append(
                Monomial(coeff=complex(re, im), exponents={int(v): int(e) for v, e in exps.items()})
            )
        polys.append(monos)
    labels = data.get("labels")
    return PolynomialSystem(data["n_vars"], polys, labels)
