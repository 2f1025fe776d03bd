"""Scaled fractional Laguerre functions on (0, inf).

The basis is L_m^(theta) composed with the map Y(x) = (beta+1) x^gamma, so it
spans the fractional monomials {1, x^gamma, x^{2 gamma}, ...}.  The classical
rule transplants to a mapped Gauss rule that is exact on that span up to
degree 2M+1.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import laguerre

__all__ = [
    "FracParams",
    "FracQuadrature",
    "map_forward",
    "map_inverse",
    "eval_flf",
    "eval_flf_column",
    "eval_flf_explicit",
    "frac_weight",
    "frac_log_weight",
    "frac_quadrature",
    "apply_mapped_derivative",
    "derivative_coefficient_shift",
    "sturm_liouville_residual",
]

EXPLICIT_DEGREE_CAP = 12


@dataclass(frozen=True)
class FracParams:
    """Parameter triple (theta, beta, gamma) of the scaled fractional family.

    gamma = 1 is admitted as the classical limit (needed to compare against
    plain Laguerre runs); the mapped construction is the identity there.
    """

    theta: float
    beta: float
    gamma: float

    def __post_init__(self):
        if not self.theta > -1.0:
            raise ValueError(f"theta must be > -1, got {self.theta}")
        if not self.beta > -1.0:
            raise ValueError(f"beta must be > -1, got {self.beta}")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in (0, 1], got {self.gamma}")

    @property
    def classical_limit(self):
        return self.gamma == 1.0


def _check_positive(x, name="x"):
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0.0) or not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be strictly positive and finite")
    return arr


def map_forward(params, x):
    """Y(x) = (beta+1) x^gamma."""
    x = _check_positive(x)
    y = (params.beta + 1.0) * x ** params.gamma
    return float(y) if np.ndim(x) == 0 else y


def map_inverse(params, y):
    """x = (y/(beta+1))^(1/gamma)."""
    y = _check_positive(y, "y")
    x = (y / (params.beta + 1.0)) ** (1.0 / params.gamma)
    return float(x) if np.ndim(y) == 0 else x


def eval_flf(params, m, x):
    """Fractional Laguerre function of degree m at x > 0.

    Runs the classical recurrence on the mapped argument, so values coincide
    bit-for-bit with eval_laguerre at gamma=1, beta=0.
    """
    return laguerre.eval_laguerre(params.theta, m, map_forward(params, x))


def eval_flf_column(params, M, x):
    """[basis_0(x), ..., basis_M(x)] in one recurrence pass."""
    return laguerre.eval_laguerre_column(params.theta, M, map_forward(params, x))


def eval_flf_explicit(params, m, x):
    """Binomial-sum evaluation; degree capped at 12 (cancellation guard)."""
    if m > EXPLICIT_DEGREE_CAP:
        raise ValueError(
            f"explicit representation limited to m <= {EXPLICIT_DEGREE_CAP}, "
            f"got {m}"
        )
    laguerre._check_degree(m)
    x = np.asarray(x, dtype=float)
    theta, beta, gamma = params.theta, params.beta, params.gamma
    total = np.zeros_like(x)
    for r in range(m + 1):
        # (-1)^r (beta+1)^r / r! * C(m+theta, m-r)
        logc = (r * math.log(beta + 1.0) - math.lgamma(r + 1.0)
                + math.lgamma(m + theta + 1.0) - math.lgamma(m - r + 1.0)
                - math.lgamma(theta + r + 1.0))
        total = total + (-1.0) ** r * math.exp(logc) * x ** (r * gamma)
    return float(total) if total.ndim == 0 else total


def frac_log_weight(params, x):
    """log of the orthogonality weight (canonical internal representation)."""
    x = _check_positive(x)
    theta, beta, gamma = params.theta, params.beta, params.gamma
    return ((theta + 1.0) * math.log(beta + 1.0) + math.log(gamma)
            + (gamma * (theta + 1.0) - 1.0) * np.log(x)
            - (beta + 1.0) * x ** gamma)


def frac_weight(params, x):
    """Weight (beta+1)^(theta+1) gamma x^(gamma(theta+1)-1) e^(-(beta+1)x^gamma)."""
    w = np.exp(frac_log_weight(params, x))
    return float(w) if np.ndim(x) == 0 else w


@dataclass(frozen=True)
class FracQuadrature:
    """Mapped Gauss rule: x_nodes = (y_i/(beta+1))^(1/gamma), classical weights.

    Exact on span{1, x^gamma, ..., x^((2M+1)gamma)}.  y_nodes keeps the
    classical nodes so basis evaluation can skip the map round trip.
    """

    params: FracParams
    order: int
    x_nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    y_nodes: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.x_nodes.setflags(write=False)
        self.y_nodes.setflags(write=False)

    def __len__(self):
        return self.order + 1


@lru_cache(maxsize=512)
def frac_quadrature(params, M):
    """Scaled fractional Laguerre-Gauss rule of order M for the given params."""
    rule = laguerre.gauss_rule(params.theta, M)
    x = map_inverse(params, rule.nodes)
    return FracQuadrature(params=params, order=M, x_nodes=x,
                          weights=rule.weights, y_nodes=rule.nodes)


def _central_difference(f, x, h):
    return (f(x + h) - f(x - h)) / (2.0 * h)


def apply_mapped_derivative(params, f, x, dfdx=None):
    """D f(x) = x^(1-gamma)/((beta+1) gamma) * f'(x).

    f' comes from `dfdx` when supplied, otherwise from central differences
    with step 1e-6 * max(1, |x|) (halved if needed to stay inside (0, inf)).
    """
    x = float(_check_positive(x))
    if dfdx is not None:
        deriv = dfdx(x)
    else:
        h = min(1e-6 * max(1.0, abs(x)), 0.5 * x)
        deriv = _central_difference(f, x, h)
    return x ** (1.0 - params.gamma) / ((params.beta + 1.0) * params.gamma) * deriv


def derivative_coefficient_shift(coeffs):
    """Coefficients of D(sum c_m basis_m) in the same basis.

    The mapped derivative lowers degree: the new coefficients are
    v_r = -sum_{m > r} c_m, a single backward cumulative sum.  Input of
    length N+1 yields length N.
    """
    c = np.asarray(coeffs, dtype=float)
    if c.size <= 1:
        return np.zeros(0)
    return -np.cumsum(c[::-1])[::-1][1:]


def sturm_liouville_residual(params, m, x):
    """|LHS| of the fractional Sturm-Liouville equation at x, analytically.

    With A = (beta+1)^theta x^(gamma theta + 1) e^(-(beta+1)x^gamma) the
    equation is (A u')'/rho + m gamma u = 0.  The exponential factors cancel
    against the weight, leaving

        A'/rho = (gamma theta + 1) x^(1-gamma)/((beta+1) gamma) - x,
        A /rho = x^(2-gamma)/((beta+1) gamma),

    and u', u'' follow from the degree-lowering derivative identity.
    """
    laguerre._check_degree(m)
    x = float(_check_positive(x))
    theta, beta, gamma = params.theta, params.beta, params.gamma
    u = eval_flf(params, m, x)
    if m == 0:
        return 0.0
    b1g = (beta + 1.0) * gamma
    lower1 = eval_flf(FracParams(theta + 1.0, beta, gamma), m - 1, x)
    du = -b1g * x ** (gamma - 1.0) * lower1
    ddu = -b1g * (gamma - 1.0) * x ** (gamma - 2.0) * lower1
    if m >= 2:
        lower2 = eval_flf(FracParams(theta + 2.0, beta, gamma), m - 2, x)
        ddu += (b1g * x ** (gamma - 1.0)) ** 2 * lower2
    a_ratio = (gamma * theta + 1.0) * x ** (1.0 - gamma) / b1g - x
    b_ratio = x ** (2.0 - gamma) / b1g
    return abs(a_ratio * du + b_ratio * ddu + m * gamma * u)
