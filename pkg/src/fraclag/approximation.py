"""Weighted projection and interpolation operators, Sobolev seminorms, bounds.

Both operators are realized as the discrete modal transform

    c_m = h_m^-1 sum_i pi_i u(x_i) basis_m(x_i)

on a mapped Gauss rule: with an oversampled rule this is the pseudo-projection
(the reported "projection"), with the M-order rule it coincides with Lagrange
interpolation at the mapped nodes because the rule is exact on products of
interpolant and basis.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import fractional, generalized, laguerre
from .errors import EvaluationError
from .fractional import FracParams
from .generalized import GenParams
from .laguerre import gamma_ratio_bound

__all__ = [
    "Expansion",
    "SobolevReport",
    "BoundReport",
    "project",
    "interpolate",
    "gen_project",
    "gen_interpolate",
    "weighted_l2_error",
    "sobolev_seminorms",
    "mapped_derivative_values",
    "fornberg_weights",
    "projection_bound",
    "interpolation_bound",
    "stability_bound",
    "quadrature_error_bound",
    "gen_projection_bound",
]


def default_oversample(M):
    """Node count of the coefficient rule: 4M + 64 (aliasing guard)."""
    return 4 * M + 64


@dataclass(frozen=True)
class Expansion:
    """Modal coefficients against one of the two basis families."""

    family: str
    params: object
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.family not in ("fractional", "generalized"):
            raise ValueError(f"unknown family {self.family!r}")
        expected = FracParams if self.family == "fractional" else GenParams
        if not isinstance(self.params, expected):
            raise TypeError(f"{self.family} expansion needs {expected.__name__}")
        self.coeffs.setflags(write=False)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, x):
        if self.degree < 0:
            arr = np.zeros_like(np.asarray(x, dtype=float))
            return float(arr) if arr.ndim == 0 else arr
        if self.family == "fractional":
            cols = fractional.eval_flf_column(self.params, self.degree, x)
            val = np.tensordot(self.coeffs, cols, axes=1)
        else:
            cols = generalized.eval_gflf_column(self.params, self.degree, x)
            val = np.tensordot(self.coeffs, cols, axes=1)
        return float(val) if np.ndim(x) == 0 else val


def _eval_at_nodes(u, x):
    try:
        vals = np.asarray(u(x), dtype=float)
        if vals.shape != x.shape:
            raise TypeError
    except (TypeError, ValueError):
        vals = np.array([float(u(v)) for v in x])
    bad = ~np.isfinite(vals)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise EvaluationError(
            f"non-finite value {vals[i]} at node index {i}, x = {x[i]!r}"
        )
    return vals


def _transform(params, order, node_values, rule):
    """Modal coefficients from weighted nodal data on the given rule."""
    mask = rule.weights > 0.0
    basis = laguerre.recurrence_column(params.theta, order, rule.y_nodes[mask])
    h = laguerre.laguerre_norms(params.theta, order)
    return (basis @ (rule.weights[mask] * node_values[mask])) / h


def project(u, M, params, oversample=None):
    """Pseudo-projection of u onto the fractional span of degree M.

    Coefficients use a Q-point mapped rule (default Q = 4M+64, at least 2M);
    exact on the span itself by quadrature exactness.
    """
    Q = default_oversample(M) if oversample is None else int(oversample)
    if Q < 2 * M:
        raise ValueError(f"oversample Q={Q} must be at least 2M={2 * M}")
    rule = fractional.frac_quadrature(params, Q - 1)
    mask = rule.weights > 0.0
    vals = np.zeros(len(rule))
    vals[mask] = _eval_at_nodes(u, rule.x_nodes[mask])
    coeffs = _transform(params, M, vals, rule)
    return Expansion(family="fractional", params=params, coeffs=coeffs)


def interpolate(u, M, params):
    """Interpolant at the M+1 mapped Gauss nodes, stored modally.

    The transform on the M-order rule equals Lagrange interpolation at the
    mapped nodes (rule exactness covers interpolant-times-basis products).
    """
    rule = fractional.frac_quadrature(params, M)
    vals = _eval_at_nodes(u, rule.x_nodes)
    coeffs = _transform(params, M, vals, rule)
    return Expansion(family="fractional", params=params, coeffs=coeffs)


def _prefactor_strip(params, u, x):
    # z(x) = x^-eta u(x), evaluated without forming x^eta * x^-eta round trips
    vals = _eval_at_nodes(u, x)
    return vals * x ** (-params.eta)


def gen_project(u, M, params, oversample=None):
    """Weighted projection onto x^eta times the fractional span.

    Implemented through the conjugation z = x^-eta u: the generalized
    coefficients equal the fractional coefficients of z.
    """
    Q = default_oversample(M) if oversample is None else int(oversample)
    if Q < 2 * M:
        raise ValueError(f"oversample Q={Q} must be at least 2M={2 * M}")
    rule = fractional.frac_quadrature(params.frac, Q - 1)
    mask = rule.weights > 0.0
    vals = np.zeros(len(rule))
    vals[mask] = _prefactor_strip(params, u, rule.x_nodes[mask])
    coeffs = _transform(params.frac, M, vals, rule)
    return Expansion(family="generalized", params=params, coeffs=coeffs)


def gen_interpolate(u, M, params):
    """Generalized interpolant x^eta I_M{x^-eta u}, stored modally."""
    rule = fractional.frac_quadrature(params.frac, M)
    vals = _prefactor_strip(params, u, rule.x_nodes)
    coeffs = _transform(params.frac, M, vals, rule)
    return Expansion(family="generalized", params=params, coeffs=coeffs)


def weighted_l2_error(u, approx, oversample=None):
    """Discrete weighted L2 distance between u and an Expansion.

    Uses the Q-point rule matching the expansion's weight; the generalized
    case is evaluated on the conjugated side, where the algebraic prefactor
    cancels exactly.
    """
    M = approx.degree
    Q = default_oversample(M) if oversample is None else int(oversample)
    if approx.family == "fractional":
        rule = fractional.frac_quadrature(approx.params, Q - 1)
        mask = rule.weights > 0.0
        basis = laguerre.recurrence_column(approx.params.theta, M,
                                           rule.y_nodes[mask])
        diff = (_eval_at_nodes(u, rule.x_nodes[mask])
                - approx.coeffs @ basis)
        return math.sqrt(float(np.sum(rule.weights[mask] * diff ** 2)))
    rule = fractional.frac_quadrature(approx.params.frac, Q - 1)
    mask = rule.weights > 0.0
    x = rule.x_nodes[mask]
    zvals = _prefactor_strip(approx.params, u, x)
    basis = laguerre.recurrence_column(approx.params.theta, M, rule.y_nodes[mask])
    diff = zvals - approx.coeffs @ basis
    return math.sqrt(float(np.sum(rule.weights[mask] * diff ** 2)))


# ---------------------------------------------------------------------------
# mapped derivatives of plain functions

def fornberg_weights(offsets, k):
    """Finite-difference weights for the k-th derivative at 0 (Fornberg)."""
    xs = np.asarray(offsets, dtype=float)
    n = xs.size
    c = np.zeros((n, k + 1))
    c[0, 0] = 1.0
    c1 = 1.0
    c4 = xs[0]
    for i in range(1, n):
        mn = min(i, k)
        c2 = 1.0
        c5 = c4
        c4 = xs[i]
        for j in range(i):
            c3 = xs[i] - xs[j]
            c2 *= c3
            if j == i - 1:
                for s in range(mn, 0, -1):
                    c[i, s] = c1 * (s * c[i - 1, s - 1] - c5 * c[i - 1, s]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for s in range(mn, 0, -1):
                c[j, s] = (c4 * c[j, s] - s * c[j, s - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, k]


def _fd_derivative(u, j, x, step_scale=1e-4):
    """j-th ordinary derivative by a centered order-4 stencil at each x."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    npts = j + 4 + ((j + 4 + 1) % 2)   # odd stencil, accuracy >= 4
    half = (npts - 1) // 2
    offs = np.arange(-half, half + 1, dtype=float)
    for idx, xv in np.ndenumerate(x):
        h = min(step_scale * max(1.0, abs(xv)), xv / (half + 1))
        shifts = offs * h
        w = fornberg_weights(shifts, j)
        out[idx] = float(w @ np.array([u(xv + s) for s in shifts]))
    return out


def _mapped_coefficients(params, r):
    """kappa_{r,j} with D^r u = sum_j kappa_{r,j} x^(j - r gamma) u^(j)."""
    b1g = (params.beta + 1.0) * params.gamma
    kappa = np.zeros(r + 1)
    if r == 0:
        kappa[0] = 1.0
        return kappa
    kappa[1] = 1.0 / b1g
    for step in range(1, r):
        nxt = np.zeros(r + 1)
        for j in range(1, step + 1):
            if kappa[j] == 0.0:
                continue
            nxt[j] += kappa[j] * (j - step * params.gamma) / b1g
            nxt[j + 1] += kappa[j] / b1g
        kappa = nxt
    return kappa


def mapped_derivative_values(params, r, x, derivatives):
    """D^r u at points x from ordinary derivatives of u.

    `derivatives` is the sequence [u, u', ..., u^(r)] of callables; the mapped
    power (c(x) d/dx)^r expands over monomial coefficients kappa_{r,j}.
    """
    x = np.asarray(x, dtype=float)
    if r == 0:
        return np.asarray(derivatives[0](x), dtype=float)
    kappa = _mapped_coefficients(params, r)
    total = np.zeros_like(x)
    for j in range(1, r + 1):
        if kappa[j] == 0.0:
            continue
        total += kappa[j] * x ** (j - r * params.gamma) \
            * np.asarray(derivatives[j](x), dtype=float)
    return total


@dataclass(frozen=True)
class SobolevReport:
    """Seminorms |v|_r for r = 0..mu and the full norm."""

    mu: int
    seminorms: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.seminorms.setflags(write=False)

    @property
    def norm(self):
        return math.sqrt(float(np.sum(self.seminorms ** 2)))


def _ordinary_derivative_stack(u, mu, derivatives):
    if derivatives is not None:
        if len(derivatives) < mu + 1:
            raise ValueError(
                f"need {mu + 1} derivative callables, got {len(derivatives)}"
            )
        return list(derivatives)
    stack = [u]
    for j in range(1, mu + 1):
        stack.append(lambda x, _j=j: _fd_derivative(u, _j, x))
    return stack


def sobolev_seminorms(u, mu, params, oversample=None, derivatives=None,
                      mapped_derivatives=None):
    """Discrete seminorms of the mapped-derivative Sobolev scale.

    Seminorm r integrates (D^r u)^2 against the weight with parameter order
    raised by r, on a Q-point rule of that raised parameter.  D^r values come
    from `mapped_derivatives` (callables, one per order) when given, else from
    ordinary `derivatives` (analytic or, by default, centered order-4 finite
    differences with step 1e-4 max(1, x)).

    For GenParams both theta and sigma are raised; the computation runs on the
    conjugated side, where the prefactor cancels against the weight.
    """
    Q = default_oversample(32) if oversample is None else int(oversample)
    is_gen = isinstance(params, GenParams)
    frac = params.frac if is_gen else params
    if mapped_derivatives is None:
        if is_gen:
            base = _ordinary_derivative_stack(u, mu, derivatives)
            eta = params.eta

            def _z_deriv(j):
                # z = x^-eta u; Leibniz with (x^-eta)^(k) = ff_k x^(-eta-k)
                def z_j(x, _j=j):
                    x = np.asarray(x, dtype=float)
                    total = np.zeros_like(x)
                    for i in range(_j + 1):
                        ff = 1.0
                        for t in range(_j - i):
                            ff *= (-eta - t)
                        total += (math.comb(_j, i) * ff * x ** (-eta - (_j - i))
                                  * np.asarray(base[i](x), dtype=float))
                    return total
                return z_j

            zstack = [_z_deriv(j) for j in range(mu + 1)]

            def d_r(r, x):
                return x ** eta * mapped_derivative_values(frac, r, x, zstack)
        else:
            stack = _ordinary_derivative_stack(u, mu, derivatives)

            def d_r(r, x):
                return mapped_derivative_values(frac, r, x, stack)
    else:
        if len(mapped_derivatives) < mu + 1:
            raise ValueError(
                f"need {mu + 1} mapped-derivative callables, "
                f"got {len(mapped_derivatives)}"
            )

        def d_r(r, x):
            return np.asarray(mapped_derivatives[r](x), dtype=float)

    semis = np.empty(mu + 1)
    for r in range(mu + 1):
        if is_gen:
            rule = generalized.gen_quadrature(params.shifted(r), Q - 1)
            mask = rule.lambda_weights > 0.0
            vals = d_r(r, rule.x_nodes[mask])
            semis[r] = math.sqrt(float(np.sum(
                rule.lambda_weights[mask] * vals ** 2)))
        else:
            shifted = FracParams(frac.theta + r, frac.beta, frac.gamma)
            rule = fractional.frac_quadrature(shifted, Q - 1)
            mask = rule.weights > 0.0
            vals = d_r(r, rule.x_nodes[mask])
            semis[r] = math.sqrt(float(np.sum(rule.weights[mask] * vals ** 2)))
    return SobolevReport(mu=mu, seminorms=semis)


# ---------------------------------------------------------------------------
# theoretical bound evaluators

@dataclass(frozen=True)
class BoundReport:
    """Value of a theoretical error-bound expression.

    constant_included is False where the underlying estimate carries an
    unspecified constant C (interpolation, stability); such bounds are only
    meaningful as rates.
    """

    kind: str
    value: float
    constant_included: bool
    asymptotic_value: float | None = None

    def __post_init__(self):
        if self.kind not in ("projection", "interpolation", "stability",
                             "quadrature"):
            raise ValueError(f"unknown bound kind {self.kind!r}")
        if self.value < 0.0:
            raise ValueError("bound value must be nonnegative")


def _mu_hat(mu, M):
    return min(mu, M + 1)


def _factorial_ratio_sqrt(num, den):
    # sqrt(num! / den!) in log-gamma domain
    return math.exp(0.5 * (math.lgamma(num + 1.0) - math.lgamma(den + 1.0)))


def projection_bound(M, mu, s, theta):
    """Factor [(M-mu^+1)!/(M-s+1)!]^(1/2) of the projection estimate.

    The first-form bound holds with constant one.  For theta = s = 0 and
    mu < M+1 the asymptotic form C M^(-mu/2) is reported alongside, with C
    taken from the gamma-ratio estimate.
    """
    muh = _mu_hat(mu, M)
    if not 0 <= s <= muh:
        raise ValueError(f"need 0 <= s <= mu^ = {muh}, got s = {s}")
    value = _factorial_ratio_sqrt(M - muh + 1, M - s + 1)
    asym = None
    if theta == 0 and s == 0 and mu < M + 1 and M >= 1:
        asym = math.sqrt(gamma_ratio_bound(M, 2.0 - mu, 2.0))
    return BoundReport(kind="projection", value=value, constant_included=True,
                       asymptotic_value=asym)


def gen_projection_bound(M, mu, s):
    """Generalized-family projection factor (identical factorial ratio)."""
    muh = _mu_hat(mu, M)
    if not 0 <= s <= muh:
        raise ValueError(f"need 0 <= s <= mu^ = {muh}, got s = {s}")
    value = _factorial_ratio_sqrt(M - muh + 1, M - s + 1)
    return BoundReport(kind="projection", value=value, constant_included=True)


def interpolation_bound(M, mu, theta, seminorm_hi, seminorm_hi_minus):
    """C-free interpolation estimate.

    [(M+1-mu^)!/M!]^(1/2) (seminorm_hi_minus + 2 sqrt(log M) seminorm_hi);
    the caller evaluates the two seminorms of D^mu^ v at weight orders
    theta+mu-1 and theta+mu as printed in the estimate.
    """
    if M < 2:
        raise ValueError(f"need M >= 2, got {M}")
    del theta  # recorded by the caller's seminorms; kept for signature parity
    muh = _mu_hat(mu, M)
    factor = _factorial_ratio_sqrt(M + 1 - muh, M)
    value = factor * (seminorm_hi_minus
                      + 2.0 * math.sqrt(math.log(M)) * seminorm_hi)
    return BoundReport(kind="interpolation", value=value,
                       constant_included=False)


def stability_bound(M, d1, n1):
    """C-free stability estimate M^(-1/2) d1 + 2 sqrt(log M) n1."""
    if M < 2:
        raise ValueError(f"need M >= 2, got {M}")
    value = d1 / math.sqrt(M) + 2.0 * math.sqrt(math.log(M)) * n1
    return BoundReport(kind="stability", value=value, constant_included=False)


def quadrature_error_bound(theta, interp_error):
    """sqrt(Gamma(theta+1)) times the interpolation error (Cauchy-Schwarz)."""
    if not theta > -1.0:
        raise ValueError(f"theta must be > -1, got {theta}")
    if interp_error < 0.0:
        raise ValueError("interp_error must be nonnegative")
    return math.sqrt(math.gamma(theta + 1.0)) * interp_error
