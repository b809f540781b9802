"""Alpha-theory certification of approximate solutions to square systems.

For a square system f and a point x, beta is the Newton step length,
gamma bounds the higher derivative data, and alpha = beta * gamma.  If
alpha is below the threshold ALPHA0, Newton iteration from x converges
quadratically to a nearby true root, and the point is certified.

Certification runs in ordinary double precision.  A fully rigorous
certificate would evaluate the same quantities in interval or rational
arithmetic; the arithmetic sits behind this module's small surface so such
a backend can be swapped in.
"""

import math
from dataclasses import dataclass

import numpy as np

from .linalg import SingularMatrixError, solve_linear
from .polysys import PolynomialSystem, derivative_tensor, evaluate, jacobian

# Standard quadratic-convergence threshold (13 - 3 sqrt(17)) / 4.
ALPHA0 = (13.0 - 3.0 * math.sqrt(17.0)) / 4.0


@dataclass(frozen=True)
class Certificate:
    """Certified (or not) approximate solution with its alpha data.

    When the Jacobian at x is singular the values are infinite and the
    point is not certifiable.  The originating system is kept so that
    distinctness checks can refuse to compare across systems.
    """

    x: np.ndarray
    beta_val: float
    gamma_val: float
    alpha_val: float
    certified: bool
    system: PolynomialSystem


def alpha_beta_gamma(system: PolynomialSystem, x):
    """(alpha, beta, gamma) at x.

    beta is the 2-norm of the Newton step Df(x)^-1 f(x).  gamma takes, for
    each derivative order m from 2 up to the system degree, the Frobenius
    norm of Df(x)^-1 D^m f(x) / m! as an upper bound for the operator norm
    of the corresponding multilinear map, raised to 1/(m-1); the maximum
    over m is gamma.  For an affine system the range is empty and gamma
    is 0.  A singular Jacobian yields (inf, inf, inf).
    """
    if not system.is_square():
        raise ValueError("system not square")
    x = np.asarray(x, dtype=np.complex128)
    values = evaluate(system, x)
    jac = jacobian(system, x)
    try:
        step = solve_linear(jac, values)
    except SingularMatrixError:
        return math.inf, math.inf, math.inf
    beta = float(np.linalg.norm(step))
    gamma = 0.0
    max_deg = max(system.degrees, default=0)
    for order in range(2, max_deg + 1):
        tensor = derivative_tensor(system, x, order)
        try:
            pulled = solve_linear(jac, tensor)
        except SingularMatrixError:
            return math.inf, math.inf, math.inf
        bound = float(np.linalg.norm(pulled)) / math.factorial(order)
        gamma = max(gamma, bound ** (1.0 / (order - 1)))
    return beta * gamma, beta, gamma


def certify(system: PolynomialSystem, x) -> Certificate:
    """Certificate for x; certified iff alpha < ALPHA0."""
    alpha, beta, gamma = alpha_beta_gamma(system, x)
    return Certificate(
        x=np.asarray(x, dtype=np.complex128).copy(),
        beta_val=beta,
        gamma_val=gamma,
        alpha_val=alpha,
        certified=bool(alpha < ALPHA0),
        system=system,
    )


def distinct(c1: Certificate, c2: Certificate) -> bool:
    """Whether two certificates provably approximate different roots.

    Each certified point lies within 2 beta of its root, so separation
    beyond 2 (beta_1 + beta_2) forces the roots apart.
    """
    if c1.system is not c2.system:
        raise ValueError("certificates come from different systems")
    if not (c1.certified and c2.certified):
        raise ValueError("distinctness requires certified inputs")
    return float(np.linalg.norm(c1.x - c2.x)) > 2.0 * (c1.beta_val + c2.beta_val)
