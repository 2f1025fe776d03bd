"""Figure rendering for the report path.

Each figure command writes a PNG next to its CSV.  The Agg backend is forced
and PNG metadata is pinned so rendering stays byte-deterministic.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["render_nodes", "render_curves", "render_rates", "figure_path"]

_SAVE_KW = dict(dpi=120, metadata={"Software": "fraclag"})


def figure_path(out_path):
    base = str(out_path)
    if base.endswith(".csv"):
        base = base[:-4]
    return base + ".png"


def render_nodes(rows, path):
    """Strip plots of the node positions, one panel per swept parameter."""
    panels = {}
    for panel, value, index, x in rows:
        panels.setdefault(panel, {}).setdefault(value, []).append(x)
    fig, axes = plt.subplots(1, len(panels), figsize=(4.2 * len(panels), 3.4))
    if len(panels) == 1:
        axes = [axes]
    for ax, (panel, sweeps) in zip(axes, panels.items()):
        for offset, (value, xs) in enumerate(sweeps.items()):
            ax.semilogx(xs, [offset] * len(xs), ".", markersize=3,
                        label=f"{panel}={value:g}")
        ax.set_yticks(range(len(sweeps)))
        ax.set_yticklabels([f"{v:g}" for v in sweeps])
        ax.set_xlabel("x")
        ax.set_ylabel(panel)
        ax.set_title(f"nodes vs {panel}")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def render_curves(curves, path, title):
    """Semilog error curves, one panel per (figure, function) group."""
    groups = {}
    for curve in curves:
        key = (curve.params.get("figure", ""), curve.params["function"])
        groups.setdefault(key, []).append(curve)
    ncols = min(3, max(1, len(groups)))
    nrows = (len(groups) + ncols - 1) // ncols
    fig, axes = plt.subplots(nrows, ncols,
                             figsize=(4.2 * ncols, 3.2 * nrows),
                             squeeze=False)
    flat = axes.ravel()
    for ax in flat[len(groups):]:
        ax.set_visible(False)
    for ax, (key, group) in zip(flat, sorted(groups.items())):
        for curve in group:
            ms = [p[0] for p in curve.points]
            errs = [max(p[1], 1e-18) for p in curve.points]
            swept = {k: v for k, v in curve.params.items()
                     if k not in ("figure", "function")}
            label = ",".join(f"{k}={v:g}" for k, v in swept.items()
                             if isinstance(v, float))
            ax.semilogy(ms, errs, "o-", markersize=3, label=label)
        ax.set_xlabel("M")
        ax.set_ylabel("weighted L2 error")
        ax.set_title(f"{key[0]} {key[1]}")
        ax.legend(fontsize=6)
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def render_rates(curves, path):
    """Rate curves with the fitted slope in the legend."""
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    for curve in curves:
        ms = [p[0] for p in curve.points]
        errs = [max(p[1], 1e-18) for p in curve.points]
        ax.loglog(ms, errs, "o-", markersize=3,
                  label=(f"{curve.params['target']} b={curve.params['beta']:g} "
                         f"slope={curve.params['slope']:.2f}"))
    ax.set_xlabel("M")
    ax.set_ylabel("weighted L2 error")
    ax.set_title("algebraic-rate targets")
    ax.legend(fontsize=6)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
