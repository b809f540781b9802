"""Total-degree homotopy continuation with Newton refinement.

The start system x_i^{d_i} - 1 = 0 is deformed into the target along
H(x, t) = (1 - t) f(x) + t c g(x) as t runs from 1 to 0, where c is a
seeded random unit complex constant; a random phase makes path crossings
a probability-zero event.  Paths are tracked by an Euler predictor and a
Newton corrector with adaptive step halving.  Endpoints are refined,
certified elsewhere, and grouped into clusters of provably identical
roots.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product

import numpy as np

from .certify import Certificate, certify, distinct
from .linalg import SingularMatrixError, solve_linear
from .polysys import Monomial, PolynomialSystem, evaluate, jacobian
from .rng import SeededRng

# Environment variable naming the tracking thread count; the default is
# the available parallelism.
THREADS_ENV = "SCHUBERT_THREADS"

# Refuse to enumerate absurd start-point sets; such problems need a
# different formulation, not more patience.
MAX_PATHS = 1 << 20


@dataclass(frozen=True)
class TrackerOptions:
    initial_step: float = 0.05
    min_step: float = 1e-7
    max_corrections: int = 3
    correction_tol: float = 1e-10
    divergence_norm: float = 1e8
    refine_iters: int = 5
    seed: int = 0

    def __post_init__(self):
        if not (0 < self.min_step < self.initial_step):
            raise ValueError("need 0 < min_step < initial_step")
        if min(self.max_corrections, self.refine_iters) < 1:
            raise ValueError("iteration counts must be positive")
        if min(self.correction_tol, self.divergence_norm) <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class RawSolution:
    x: np.ndarray
    status: str  # "converged" | "diverged" | "failed"
    path_id: int


class NewtonError(RuntimeError):
    def __init__(self, iteration: int):
        self.iteration = iteration
        super().__init__(f"singular Jacobian at Newton iterate {iteration}")


def newton_refine(system: PolynomialSystem, x0, iters: int) -> np.ndarray:
    """iters plain Newton steps x -> x - Df(x)^-1 f(x)."""
    if not system.is_square():
        raise ValueError("system not square")
    x = np.asarray(x0, dtype=np.complex128).copy()
    for j in range(iters):
        try:
            step = solve_linear(jacobian(system, x), evaluate(system, x))
        except SingularMatrixError as exc:
            raise NewtonError(j) from exc
        x -= step
    return x


def start_system(system: PolynomialSystem):
    """Total-degree start: g_i = x_i^{d_i} - 1 and all root-of-unity tuples."""
    if not system.is_square():
        raise ValueError("system not square")
    degrees = list(system.degrees)
    if any(d < 1 for d in degrees):
        raise ValueError("every equation must have positive degree")
    total = 1
    for d in degrees:
        total *= d
        if total > MAX_PATHS:
            raise ValueError(f"start system would have more than {MAX_PATHS} paths")
    polys = []
    for i, d in enumerate(degrees):
        polys.append(
            [Monomial(coeff=1.0 + 0.0j, exponents={i: d}), Monomial(coeff=-1.0 + 0.0j, exponents={})]
        )
    g = PolynomialSystem(system.n_vars, polys, [f"start[{i}]" for i in range(len(degrees))])
    roots_per_var = [
        [np.exp(2j * np.pi * r / d) for r in range(d)] for d in degrees
    ]
    points = [np.array(combo, dtype=np.complex128) for combo in product(*roots_per_var)]
    return g, points


def _fast_solve(a, b):
    """LAPACK solve for the tracking hot loop; failures surface as None."""
    try:
        x = np.linalg.solve(a, b)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(x)):
        return None
    return x


def _track_path(system, g, gamma, x0, opts: TrackerOptions, path_id: int) -> RawSolution:
    x = x0.copy()
    t = 1.0
    dt = opts.initial_step
    streak = 0

    def h_value(xx, tt):
        return (1.0 - tt) * evaluate(system, xx) + tt * gamma * evaluate(g, xx)

    def h_jac(xx, tt):
        return (1.0 - tt) * jacobian(system, xx) + tt * gamma * jacobian(g, xx)

    while t > 1e-6:
        norm_x = float(np.linalg.norm(x))
        if norm_x > opts.divergence_norm:
            return RawSolution(x=x, status="diverged", path_id=path_id)
        step = min(dt, t)
        t_new = t - step
        ok = False
        jac_t = h_jac(x, t)
        dh_dt = gamma * evaluate(g, x) - evaluate(system, x)
        xdot = _fast_solve(jac_t, dh_dt)
        if xdot is not None:
            x_try = x - xdot * step
            for _ in range(opts.max_corrections):
                delta = _fast_solve(h_jac(x_try, t_new), h_value(x_try, t_new))
                if delta is None:
                    break
                x_try = x_try - delta
                if float(np.linalg.norm(delta)) <= opts.correction_tol * (
                    1.0 + float(np.linalg.norm(x_try))
                ):
                    ok = True
                    break
        if ok:
            x = x_try
            t = t_new
            streak += 1
            if streak >= 4:
                dt = min(dt * 2.0, opts.initial_step)
                streak = 0
        else:
            dt *= 0.5
            streak = 0
            if dt < opts.min_step:
                return RawSolution(x=x, status="failed", path_id=path_id)

    # Endgame: land on the target system with plain Newton.
    try:
        x = newton_refine(system, x, opts.refine_iters)
    except NewtonError:
        return RawSolution(x=x, status="failed", path_id=path_id)
    if not np.all(np.isfinite(x)):
        return RawSolution(x=x, status="diverged", path_id=path_id)
    residual = float(np.linalg.norm(evaluate(system, x)))
    if residual < 1e-8 * (1.0 + float(np.linalg.norm(x))):
        return RawSolution(x=x, status="converged", path_id=path_id)
    return RawSolution(x=x, status="diverged", path_id=path_id)


def thread_count() -> int:
    value = os.environ.get(THREADS_ENV, "")
    if value.strip():
        return max(1, int(value))
    return os.cpu_count() or 1


def track_all(system: PolynomialSystem, opts: TrackerOptions) -> list:
    """Track every total-degree path of the system; deterministic per seed.

    Paths are independent and may run on several threads; results are
    reported in path order regardless of scheduling.
    """
    g, points = start_system(system)
    gamma = SeededRng(opts.seed).unit_complex()
    if system.n_vars == 0:
        # A zero-variable square system is a single (empty) point.
        return [RawSolution(x=np.zeros(0, dtype=np.complex128), status="converged", path_id=0)]

    def run(args):
        pid, x0 = args
        return _track_path(system, g, gamma, x0, opts, pid)

    jobs = list(enumerate(points))
    workers = min(thread_count(), len(jobs)) or 1
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(job) for job in jobs]
    results.sort(key=lambda r: r.path_id)
    return results


def deduplicate(solutions, certificates):
    """Group certified points into clusters of provably equal roots.

    solutions: list of points (aligned with certificates).  Returns
    (clusters, unclustered): clusters is a list of index lists whose
    representatives are pairwise certified-distinct; indices whose
    certificate failed are reported in unclustered.
    """
    n = len(solutions)
    if len(certificates) != n:
        raise ValueError("one certificate per solution required")
    unclustered = [i for i in range(n) if not certificates[i].certified]
    active = [i for i in range(n) if certificates[i].certified]

    # provisional grouping by relative distance
    provisional = []
    for i in active:
        placed = False
        for group in provisional:
            rep = group[0]
            scale = 1.0 + float(np.linalg.norm(solutions[rep]))
            if float(np.linalg.norm(solutions[i] - solutions[rep])) <= 1e-6 * scale:
                group.append(i)
                placed = True
                break
        if not placed:
            provisional.append([i])

    # final grouping defers to certified distinctness of representatives
    clusters = []
    for group in provisional:
        merged = False
        for cluster in clusters:
            if not distinct(certificates[cluster[0]], certificates[group[0]]):
                cluster.extend(group)
                merged = True
                break
        if not merged:
            clusters.append(list(group))
    return clusters, unclustered


def classify_real(system: PolynomialSystem, cert: Certificate) -> bool:
    """Whether a certified solution of a real system approximates a real root.

    The conjugate of an approximate root of a real system approximates the
    conjugate root; the root is real exactly when the two certified points
    fail the distinctness test.
    """
    for poly in system.polys:
        for mono in poly:
            if mono.coeff.imag != 0.0:
                raise ValueError("system has complex coefficients")
    if not cert.certified:
        raise ValueError("classify_real requires a certified point")
    conj_cert = certify(system, np.conj(cert.x))
    if not conj_cert.certified:
        return False
    return not distinct(cert, conj_cert)
