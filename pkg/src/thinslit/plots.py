"""Matplotlib renderings of sweep tables, min-reflection curves and fields.

Figures are drawn on an off-screen Agg canvas so no display or global
backend selection is needed.  Each PNG carries the run identifier in its
metadata.
"""

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .io import field_image

_QUANTITIES = (("abs_r", r"$|R|$"), ("abs_tp", r"$|T_+|$"), ("abs_tm", r"$|T_-|$"))


def _save(fig, path, run_id):
    FigureCanvasAgg(fig)
    fig.savefig(path, dpi=120, metadata={"Description": f"run_id={run_id}"})
    return path


def plot_sweep(table, path, run_id=""):
    """Maps of |R|, |T+|, |T-| over the grid; one row per available source."""
    sources = ["asym"] + (["fem"] if table.has_fem else [])
    fig = Figure(figsize=(11, 3.4 * len(sources)), layout="constrained")
    axes = np.atleast_2d(fig.subplots(len(sources), 3))
    beta_axes = table.grid.kind == "beta"
    xp, xm = table.axis_plus, table.axis_minus
    for row, src in zip(axes, sources):
        for ax, (q, label) in zip(row, _QUANTITIES):
            vals = table.values(src, q)
            im = ax.pcolormesh(xp, xm, vals.T, shading="nearest", vmin=0.0, vmax=1.0, cmap="viridis")
            ax.set_title(f"{label} ({src})")
            ax.set_xlabel(r"$\beta_+$" if beta_axes else r"$L^\varepsilon_+$")
            ax.set_ylabel(r"$\beta_-$" if beta_axes else r"$L^\varepsilon_-$")
            ax.set_aspect("equal")
        fig.colorbar(im, ax=row, shrink=0.9)
    return _save(fig, path, run_id)


def plot_curve(curve, path, run_id=""):
    """Coefficients along the min-|R| curve against ``L+``."""
    fig = Figure(figsize=(6, 4), layout="constrained")
    ax = fig.subplots()
    x = curve.column("length_plus")
    ax.plot(x, curve.column("abs_r"), "k-", label=r"$|R|$")
    ax.plot(x, curve.column("abs_tp"), "C0--", label=r"$|T_+|$")
    ax.plot(x, curve.column("abs_tm"), "C1-.", label=r"$|T_-|$")
    ax.set_xlabel(r"$L^\varepsilon_+$")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title(f"min-|R| curve ({curve.source})")
    ax.legend(frameon=False)
    return _save(fig, path, run_id)


def plot_field(fld, path, mode="abs", run_id="", pixels_per_unit=60):
    img, mask = field_image(fld, pixels_per_unit, mode)
    x0, x1, y0, y1 = fld.mesh.domain.bounding_box
    data = np.ma.array(img, mask=~mask)
    fig = Figure(figsize=(8, 8 * (y1 - y0) / (x1 - x0) + 0.8), layout="constrained")
    ax = fig.subplots()
    cmap = "magma" if mode == "abs" else "RdBu_r"
    lim = float(np.max(np.abs(img))) or 1.0
    im = ax.imshow(data, extent=(x0, x1, y0, y1), cmap=cmap,
                   vmin=0.0 if mode == "abs" else -lim, vmax=lim)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    fig.colorbar(im, ax=ax, shrink=0.8, label=r"$|u|$" if mode == "abs" else r"Re $u$")
    return _save(fig, path, run_id)
