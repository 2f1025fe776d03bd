"""Generalized Laguerre polynomials L_m^(theta) and Laguerre-Gauss quadrature.

Evaluation is always by the three-term recurrence (the explicit binomial sum
cancels catastrophically for m beyond ~20).  Nodes and weights come from the
Golub-Welsch eigenproblem of the Jacobi matrix; the textbook weight formula is
kept as a low-order cross-check.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError
from .tridiag import tridiag_eigh_first_row

__all__ = [
    "QuadratureRule",
    "DerivativeIdentityReport",
    "eval_laguerre",
    "eval_laguerre_column",
    "laguerre_norm",
    "gauss_rule",
    "gauss_weights_explicit",
    "laguerre_derivative_identities_check",
    "gamma_ratio_bound",
]


def _check_theta(theta):
    if not theta > -1.0:
        raise ValueError(f"theta must satisfy theta > -1, got {theta}")


def _check_degree(m):
    if m < 0 or int(m) != m:
        raise ValueError(f"degree must be a nonnegative integer, got {m}")


def recurrence_column(theta, M, y):
    """All of L_0..L_M at y (scalar or array) in one upward recurrence pass.

    Shared kernel: the fractional basis calls this with the mapped argument,
    so the classical limit (beta=0, gamma=1) follows the identical code path.
    """
    y = np.asarray(y, dtype=float)
    out = np.empty((M + 1,) + y.shape)
    out[0] = 1.0
    if M >= 1:
        out[1] = -y + theta + 1.0
    for m in range(1, M):
        out[m + 1] = ((2.0 * m + theta + 1.0 - y) * out[m]
                      - (m + theta) * out[m - 1]) / (m + 1.0)
    return out


def eval_laguerre(theta, m, y):
    """L_m^(theta)(y) by upward recurrence from L_0 = 1, L_1 = -y + theta + 1."""
    _check_theta(theta)
    _check_degree(m)
    col = recurrence_column(theta, m, y)
    val = col[m]
    return float(val) if np.ndim(y) == 0 else val


def eval_laguerre_column(theta, M, y):
    """Array [L_0(y), ..., L_M(y)] from a single recurrence pass."""
    _check_theta(theta)
    _check_degree(M)
    return recurrence_column(theta, M, y)


def laguerre_norm(theta, m):
    """Squared weighted norm h_m = Gamma(m+theta+1)/Gamma(m+1), in log domain."""
    _check_theta(theta)
    _check_degree(m)
    return math.exp(math.lgamma(m + theta + 1.0) - math.lgamma(m + 1.0))


def laguerre_norms(theta, M):
    """Vector of h_0..h_M."""
    m = np.arange(M + 1, dtype=float)
    return np.exp([math.lgamma(v + theta + 1.0) - math.lgamma(v + 1.0) for v in m])


@dataclass(frozen=True)
class QuadratureRule:
    """Laguerre-Gauss rule: nodes are the M+1 zeros of L_{M+1}^(theta).

    Integrates y^k against y^theta e^{-y} exactly for k <= 2M+1.  Weights of
    remote nodes underflow to zero for orders beyond ~190; such entries are
    harmless in sums but are excluded from the positivity contract.
    """

    theta: float
    order: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def __len__(self):
        return self.order + 1


@lru_cache(maxsize=512)
def gauss_rule(theta, M):
    """Golub-Welsch construction of the (M+1)-point Laguerre-Gauss rule.

    The Jacobi matrix has diagonal a_m = 2m+theta+1 and off-diagonal
    b_m = sqrt(m(m+theta)); its eigenvalues are the nodes and
    Gamma(theta+1) * (first eigenvector component)^2 are the weights.
    """
    _check_theta(theta)
    _check_degree(M)
    n = M + 1
    i = np.arange(n, dtype=float)
    d = 2.0 * i + theta + 1.0
    j = np.arange(1.0, n)
    e = np.sqrt(j * (j + theta))
    try:
        nodes, z0 = tridiag_eigh_first_row(d, e)
    except ConvergenceError as exc:
        raise ConvergenceError(
            f"Laguerre-Gauss node solve failed for theta={theta}, M={M}"
        ) from exc
    weights = math.gamma(theta + 1.0) * z0 ** 2
    if not (np.all(np.isfinite(nodes)) and nodes[0] > 0.0
            and np.all(np.diff(nodes) > 0.0)):
        raise ConvergenceError(
            f"invalid node set for theta={theta}, M={M}"
        )
    return QuadratureRule(theta=float(theta), order=int(M),
                          nodes=nodes, weights=weights)


def gauss_weights_explicit(theta, M):
    """Textbook weight formula, for cross-checking Golub-Welsch at small M.

    pi_i = Gamma(M+theta+1) / ((M+theta+1) (M+1)!) * y_i / L_M(y_i)^2,
    evaluated in log domain.  Under/overflows beyond M ~ 15; use gauss_rule
    for production work.
    """
    rule = gauss_rule(theta, M)
    y = rule.nodes
    lm = recurrence_column(theta, M, y)[M]
    logw = (math.lgamma(M + theta + 1.0) - math.log(M + theta + 1.0)
            - math.lgamma(M + 2.0) + np.log(y) - 2.0 * np.log(np.abs(lm)))
    return np.exp(logw)


@dataclass(frozen=True)
class DerivativeIdentityReport:
    """Max absolute residuals of the classical derivative identities at a point."""

    theta: float
    degree: int
    y: float
    residual_connection: float    # L_m = dL_m - dL_{m+1}
    residual_three_term: float    # y dL_m = m L_m - (m+theta) L_{m-1}
    residual_fd: float            # analytic dL_m vs central differences

    @property
    def max_residual(self):
        return max(self.residual_connection, self.residual_three_term,
                   self.residual_fd)


def laguerre_derivative_identities_check(theta, M, y):
    """Residuals of the derivative/connection identities for all m <= M at y.

    The derivative is taken analytically as dL_m = -L_{m-1}^(theta+1) and
    cross-checked by central differences with step 1e-6 * max(1, |y|).
    """
    _check_theta(theta)
    _check_degree(M)
    y = float(y)
    cols = recurrence_column(theta, M + 1, y)          # L_0..L_{M+1}
    dcols = np.zeros(M + 2)
    dcols[1:] = -recurrence_column(theta + 1.0, M, y)  # dL_m, m=1..M+1
    res_a = 0.0
    res_b = 0.0
    for m in range(M + 1):
        res_a = max(res_a, abs(cols[m] - (dcols[m] - dcols[m + 1])))
        if m >= 1:
            res_b = max(res_b, abs(y * dcols[m]
                                   - (m * cols[m] - (m + theta) * cols[m - 1])))
    h = 1e-6 * max(1.0, abs(y))
    plus = recurrence_column(theta, M, y + h)
    minus = recurrence_column(theta, M, y - h)
    fd = (plus - minus) / (2.0 * h)
    res_fd = float(np.max(np.abs(fd - dcols[:M + 1])))
    return DerivativeIdentityReport(theta=theta, degree=M, y=y,
                                    residual_connection=float(res_a),
                                    residual_three_term=float(res_b),
                                    residual_fd=res_fd)


def gamma_ratio_bound(kappa, xi, zeta):
    """Exponential-constant estimate c * kappa^(xi-zeta) for a gamma ratio.

    c = exp((xi-zeta)/(2(kappa+zeta-1)) + 1/(12(kappa+xi-1)) + (xi-zeta)^2/kappa)
    for integer kappa with kappa+xi > 1 and kappa+zeta > 1.  Dominates
    Gamma(kappa+xi)/Gamma(kappa+zeta) on the factorial-ratio family
    (xi = 2-mu, zeta = 2) that the projection estimates consume; it is not a
    universal bound for arbitrary (xi, zeta) -- e.g. it fails at
    (kappa, xi, zeta) = (10, -5, -2.5).
    """
    if int(kappa) != kappa or kappa < 1:
        raise ValueError(f"kappa must be a positive integer, got {kappa}")
    if not (kappa + xi > 1.0 and kappa + zeta > 1.0):
        raise ValueError(
            f"need kappa+xi > 1 and kappa+zeta > 1, got kappa={kappa}, "
            f"xi={xi}, zeta={zeta}"
        )
    c = math.exp((xi - zeta) / (2.0 * (kappa + zeta - 1.0))
                 + 1.0 / (12.0 * (kappa + xi - 1.0))
                 + (xi - zeta) ** 2 / kappa)
    return c * float(kappa) ** (xi - zeta)
