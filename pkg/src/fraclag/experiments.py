"""Experiment harness: the convergence studies behind the figure commands.

Every command maps a deterministic grid of parameter cells to CSV rows.
Cells are independent; a thread pool may evaluate them concurrently, but rows
are always emitted in declared grid order, so output bytes are identical for
any thread count.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields

import numpy as np

from . import approximation, fractional, laguerre, special
from .fractional import FracParams
from .generalized import GenParams

__all__ = [
    "RunConfig",
    "ErrorCurve",
    "FRAC_FIGURE_CELLS",
    "GEN_FIGURE_CELLS",
    "RATE_TARGETS",
    "cmd_nodes",
    "cmd_proj_frac",
    "cmd_proj_gen",
    "cmd_rates",
]

RATE_M_GRID = tuple(range(16, 65, 8))
NODE_SWEEP_BETAS = (0.0, 5.0, 20.0)
NODE_SWEEP_THETAS = (-0.5, 0.0, 2.0)
NODE_SWEEP_GAMMAS = (0.25, 1.0 / 3.0, 0.5, 1.0)


def error_oversample(M, oversample=None):
    """Node count of the error/coefficient rule: max(256, 4M+64)."""
    return max(256, 4 * M + 64) if oversample is None else int(oversample)


@dataclass(frozen=True)
class RunConfig:
    """Fully serializable description of one harness invocation."""

    command: str
    thetas: tuple = ()
    sigmas: tuple = ()
    betas: tuple = ()
    gammas: tuple = ()
    m_min: int = 4
    m_max: int = 64
    m_step: int = 4
    oversample: int | None = None
    functions: tuple = ()
    out: str | None = None
    threads: int = 1
    plot: bool = True

    def m_values(self):
        if self.m_step <= 0 or self.m_max < self.m_min:
            raise ValueError("invalid M range")
        return tuple(range(self.m_min, self.m_max + 1, self.m_step))

    def header_items(self):
        # delivery knobs (out, threads, plot) stay out of the echo: output
        # bytes must not depend on where or how parallel the run was
        skip = ("command", "out", "threads", "plot")
        items = []
        for f in fields(self):
            if f.name in skip:
                continue
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = ";".join(repr(x) for x in v)
            items.append(f"{f.name}={v}")
        return items


@dataclass(frozen=True)
class ErrorCurve:
    """One (M, error) sequence with its parameter cell."""

    label: str
    family: str
    params: dict
    points: tuple = field(default=())

    def __post_init__(self):
        ms = [p[0] for p in self.points]
        if any(b <= a for a, b in zip(ms, ms[1:])):
            raise ValueError("M values must be strictly increasing")
        if any((not math.isfinite(p[1])) or p[1] < 0.0 for p in self.points):
            raise ValueError("errors must be finite and nonnegative")


# ---------------------------------------------------------------------------
# default study grids

@dataclass(frozen=True)
class FracCell:
    figure: str
    function: str
    alpha: float
    params: FracParams

    def label(self):
        p = self.params
        return (f"{self.figure}:{self.function}:a={self.alpha:g}:"
                f"th={p.theta:g}:b={p.beta:g}:g={p.gamma:g}")


@dataclass(frozen=True)
class GenCell:
    figure: str
    function: str
    alpha: float
    params: GenParams

    def label(self):
        p = self.params
        return (f"{self.figure}:{self.function}:a={self.alpha:g}:th={p.theta:g}:"
                f"s={p.sigma:g}:g={p.gamma:g}:b={p.beta:g}")


def _frac_cells():
    cells = []
    for fid in ("u1_sin", "u2_exp", "u3_ml"):
        for g in (1.0, 1.0 / 6.0, 1.0 / 3.0):
            cells.append(FracCell("gamma-sweep-a13", fid, 1.0 / 3.0,
                                  FracParams(0.0, 20.0, g)))
    for fid in ("u1_sin", "u2_exp", "u3_ml"):
        for b in (1.0, 5.0, 20.0):
            cells.append(FracCell("beta-sweep-a23", fid, 2.0 / 3.0,
                                  FracParams(0.0, b, 2.0 / 3.0)))
    for fid in ("u1_sin", "u2_exp", "u3_ml"):
        for g in (1.0, 0.25, 0.125):
            cells.append(FracCell("gamma-sweep-a14", fid, 0.25,
                                  FracParams(0.0, 20.0, g)))
    return tuple(cells)


def _gen_cells():
    cells = []
    for b in (1.0, 16.0, 24.0):
        cells.append(GenCell("gen-beta-sweep", "g1_sinc", 1.0,
                             GenParams(0.0, 2.0, 1.0, b)))
    for b in (1.0, 8.0, 16.0):
        cells.append(GenCell("gen-beta-sweep", "g2_invsqrt", 0.5,
                             GenParams(0.0, 2.0, 0.5, b)))
    for b in (4.0, 16.0, 24.0):
        cells.append(GenCell("gen-beta-sweep", "g3_sqrtexp", 0.5,
                             GenParams(2.0, 0.0, 0.5, b)))
    for g in (0.25, 0.5, 1.0):
        cells.append(GenCell("gen-gamma-sweep", "h1", g, GenParams(0.0, 2.0, g, 16.0)))
    for g in (0.25, 0.5, 1.0):
        cells.append(GenCell("gen-gamma-sweep", "h2", g, GenParams(0.0, 2.0, g, 8.0)))
    for g in (0.5, 2.0 / 3.0, 1.0):
        cells.append(GenCell("gen-gamma-sweep", "h3", g, GenParams(2.0, 0.0, g, 16.0)))
    return tuple(cells)


FRAC_FIGURE_CELLS = _frac_cells()
GEN_FIGURE_CELLS = _gen_cells()


def _map_cells(work, items, threads):
    if threads <= 1:
        return [work(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(work, items))


# ---------------------------------------------------------------------------
# nodes (point distributions)

def cmd_nodes(config):
    """Node positions for the three point-distribution panels."""
    M = config.m_max
    betas = config.betas or NODE_SWEEP_BETAS
    thetas = config.thetas or NODE_SWEEP_THETAS
    gammas = config.gammas or NODE_SWEEP_GAMMAS
    panels = []
    for b in betas:
        panels.append(("beta", b, FracParams(0.0, b, 1.0 / 3.0)))
    for th in thetas:
        panels.append(("theta", th, FracParams(th, 20.0, 1.0 / 3.0)))
    for g in gammas:
        panels.append(("gamma", g, FracParams(0.0, 20.0, g)))

    def work(panel):
        _, _, params = panel
        return fractional.frac_quadrature(params, M).x_nodes

    nodesets = _map_cells(work, panels, config.threads)
    rows = []
    for (panel, value, _), xs in zip(panels, nodesets):
        for i, x in enumerate(xs):
            rows.append((panel, value, i, float(x)))
    header = ("panel", "sweep_value", "index", "x")
    return header, rows, panels


# ---------------------------------------------------------------------------
# projection error curves

def projection_error(u, M, params, oversample=None):
    """Weighted projection error of u at degree M (either family)."""
    Q = error_oversample(M, oversample)
    if isinstance(params, GenParams):
        exp = approximation.gen_project(u, M, params, oversample=Q)
    else:
        exp = approximation.project(u, M, params, oversample=Q)
    return approximation.weighted_l2_error(u, exp, oversample=Q)


def _curve_points(u, params, m_values, oversample):
    """(M, error, doubled-Q drift) triples for one cell.

    Equivalent to project + weighted_l2_error per M, but the target is
    evaluated once per distinct rule and the modal transform is shared
    across degrees (the pseudo-projection coefficients do not depend on M).
    """
    is_gen = isinstance(params, GenParams)
    frac = params.frac if is_gen else params

    need = {}
    for M in m_values:
        Q = error_oversample(M, oversample)
        for order in (Q - 1, 2 * Q - 1):
            need[order] = max(need.get(order, 0), M)

    state = {}
    for order, m_max in need.items():
        rule = fractional.frac_quadrature(frac, order)
        mask = rule.weights > 0.0
        if is_gen:
            z = approximation._prefactor_strip(params, u, rule.x_nodes[mask])
        else:
            z = approximation._eval_at_nodes(u, rule.x_nodes[mask])
        basis = laguerre.recurrence_column(frac.theta, m_max, rule.y_nodes[mask])
        h = laguerre.laguerre_norms(frac.theta, m_max)
        coeffs = (basis @ (rule.weights[mask] * z)) / h
        state[order] = (rule.weights[mask], z, basis, coeffs)

    def err_at(order, M):
        w, z, basis, coeffs = state[order]
        resid = z - coeffs[:M + 1] @ basis[:M + 1]
        return math.sqrt(float(np.sum(w * resid ** 2)))

    pts = []
    for M in m_values:
        Q = error_oversample(M, oversample)
        e1 = err_at(Q - 1, M)
        e2 = err_at(2 * Q - 1, M)
        pts.append((M, e1, abs(e1 - e2)))
    return pts


def cmd_proj_frac(config):
    """Fractional-family projection errors over the fig-2/3/4 cells."""
    cells = [c for c in FRAC_FIGURE_CELLS
             if not config.functions or c.function in config.functions]
    m_values = config.m_values()

    def work(cell):
        u = special.test_function(cell.function, cell.alpha)
        return _curve_points(u, cell.params, m_values, config.oversample)

    results = _map_cells(work, cells, config.threads)
    rows = []
    curves = []
    for cell, pts in zip(cells, results):
        p = cell.params
        for M, err, drift in pts:
            rows.append((cell.figure, cell.function, cell.alpha, p.theta,
                         p.beta, p.gamma, M, err, drift))
        curves.append(ErrorCurve(label=cell.label(), family="fractional",
                                 params={"figure": cell.figure,
                                         "function": cell.function,
                                         "alpha": cell.alpha,
                                         "theta": p.theta, "beta": p.beta,
                                         "gamma": p.gamma},
                                 points=tuple((M, e) for M, e, _ in pts)))
    header = ("figure", "function", "alpha", "theta", "beta", "gamma",
              "M", "error", "q_drift")
    return header, rows, curves


def cmd_proj_gen(config):
    """Generalized-family projection errors over the fig-5/6 cells."""
    cells = [c for c in GEN_FIGURE_CELLS
             if not config.functions or c.function in config.functions]
    m_values = config.m_values()

    def work(cell):
        u = special.test_function(cell.function, cell.alpha)
        return _curve_points(u, cell.params, m_values, config.oversample)

    results = _map_cells(work, cells, config.threads)
    rows = []
    curves = []
    for cell, pts in zip(cells, results):
        p = cell.params
        for M, err, drift in pts:
            rows.append((cell.figure, cell.function, cell.alpha, p.theta,
                         p.sigma, p.gamma, p.beta, M, err, drift))
        curves.append(ErrorCurve(label=cell.label(), family="generalized",
                                 params={"figure": cell.figure,
                                         "function": cell.function,
                                         "alpha": cell.alpha,
                                         "theta": p.theta, "sigma": p.sigma,
                                         "gamma": p.gamma, "beta": p.beta},
                                 points=tuple((M, e) for M, e, _ in pts)))
    header = ("figure", "function", "alpha", "theta", "sigma", "gamma",
              "beta", "M", "error", "q_drift")
    return header, rows, curves


# ---------------------------------------------------------------------------
# algebraic-rate study (mapped-variable targets y^p e^{-y})

RATE_TARGETS = (("p4_3", 4.0 / 3.0), ("p7_3", 7.0 / 3.0),
                ("p10_3", 10.0 / 3.0), ("smooth", 0.0))
RATE_SCAN_ORDERS = 8
RATE_SCAN_GROWTH = 1.25   # per Q-doubling; above = divergent seminorm


def mapped_power_target(p, params):
    """u(x) = Y^p e^{-Y} with Y = (beta+1) x^gamma (p = 0: smooth e^{-Y})."""
    def u(x):
        y = fractional.map_forward(params, x)
        return y ** p * np.exp(-y)
    return u


def _mapped_power_derivative(p, r):
    # d^r/dy^r [y^p e^{-y}] as a callable of y (Leibniz, falling factorials)
    coeffs = []
    for j in range(r + 1):
        ff = 1.0
        for t in range(j):
            ff *= (p - t)
        coeffs.append(math.comb(r, j) * (-1.0) ** (r - j) * ff)

    def d(y):
        y = np.asarray(y, dtype=float)
        total = np.zeros_like(y)
        for j, c in enumerate(coeffs):
            if c != 0.0:
                total += c * y ** (p - j)
        return total * np.exp(-y)
    return d


def _single_seminorm(params, r, mapped_r, q):
    # seminorm of order r alone, on the q-point rule of raised parameter
    shifted = FracParams(params.theta + r, params.beta, params.gamma)
    rule = fractional.frac_quadrature(shifted, q - 1)
    mask = rule.weights > 0.0
    vals = np.asarray(mapped_r(rule.x_nodes[mask]), dtype=float)
    return math.sqrt(float(np.sum(rule.weights[mask] * vals ** 2)))


def seminorm_scan(p, params, orders=RATE_SCAN_ORDERS, q0=160):
    """Largest r whose discrete seminorm is stable under Q-doubling.

    A seminorm is classified divergent when it grows by more than
    RATE_SCAN_GROWTH per doubling at both tested doublings; borderline
    slowly-divergent orders (sub-threshold growth) count as finite, matching
    what any fixed-Q computation of the norm sees.
    """
    mu = orders
    ratios = {}
    for r in range(orders + 1):
        d = _mapped_power_derivative(p, r)
        mapped_r = lambda x, _d=d: _d(fractional.map_forward(params, x))
        vals = [_single_seminorm(params, r, mapped_r, q)
                for q in (q0, 2 * q0, 4 * q0)]
        r1 = vals[1] / vals[0] if vals[0] > 0 else 1.0
        r2 = vals[2] / vals[1] if vals[1] > 0 else 1.0
        ratios[r] = (r1, r2)
        if r1 > RATE_SCAN_GROWTH and r2 > RATE_SCAN_GROWTH:
            mu = r - 1
            break
    return mu, ratios


def fit_loglog_slope(ms, errors, floor=1e-300):
    """Least-squares slope of log error against log M."""
    x = np.log(np.asarray(ms, dtype=float))
    y = np.log(np.maximum(np.asarray(errors, dtype=float), floor))
    A = np.vstack([x, np.ones_like(x)]).T
    slope, _ = np.linalg.lstsq(A, y, rcond=None)[0]
    return float(slope)


def cmd_rates(config):
    """Fitted convergence rates vs the -mu/2 prediction."""
    betas = config.betas or (1.0, 20.0)
    m_values = config.m_values() if config.m_min != 4 or config.m_max != 64 \
        else RATE_M_GRID
    theta, gamma = 0.0, 0.5
    items = [(name, p, b) for name, p in RATE_TARGETS for b in betas]

    def work(item):
        name, p, b = item
        params = FracParams(theta, b, gamma)
        u = mapped_power_target(p, params)
        errs = [projection_error(u, M, params, config.oversample)
                for M in m_values]
        slope = fit_loglog_slope(m_values, errs)
        mu, _ = seminorm_scan(p, params)
        return errs, slope, mu

    results = _map_cells(work, items, config.threads)
    rows = []
    curves = []
    for (name, p, b), (errs, slope, mu) in zip(items, results):
        predicted = -mu / 2.0
        for M, err in zip(m_values, errs):
            rows.append((name, p, b, M, err, slope, mu, predicted))
        curves.append(ErrorCurve(label=f"rates:{name}:b={b:g}",
                                 family="fractional",
                                 params={"target": name, "p": p, "beta": b,
                                         "slope": slope, "mu": mu},
                                 points=tuple(zip(m_values, errs))))
    header = ("target", "p", "beta", "M", "error", "slope", "mu_scan",
              "predicted_slope")
    return header, rows, curves
