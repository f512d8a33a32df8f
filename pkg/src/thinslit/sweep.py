"""Grid sweeps over the two slit lengths, min-reflection curves and the
ratio-to-lengths design pipeline."""

import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import asymptotic as asym
from .constants import aux_for_config, coupling_eta
from .errors import DomainError, EmptyTableError, InputError, ThinSlitError
from .fem.solver import FemOptions, solve_config
from .geometry import resonant_length
from .scattering import ScatteringTriple

CSV_HEADER = (
    "Lp_eps,Lm_eps,beta_p,beta_m,R_re,R_im,Tp_re,Tp_im,Tm_re,Tm_im,energy_residual,source"
).split(",")
DEFAULT_POINTS = 41


def fmt(x):
    """Lossless decimal form of a double."""
    return format(float(x), ".17g")


@dataclass(frozen=True)
class GridSpec:
    """Rectangular grid in ``beta`` space or in true-length space.

    Each axis is ``(lo, hi, n)`` with ``n`` points including both ends.
    """

    kind: str
    plus: tuple
    minus: tuple

    def __post_init__(self):
        if self.kind not in ("beta", "length"):
            raise InputError(f"grid kind must be 'beta' or 'length', got {self.kind!r}")
        for lo, hi, n in (self.plus, self.minus):
            if int(n) != n or n < 1:
                raise InputError(f"grid needs a positive integer point count, got {n!r}")
            if n > 1 and not hi > lo:
                raise InputError(f"grid axis [{lo}, {hi}] is not increasing")
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise InputError("grid bounds must be finite")

    def axes(self):
        return tuple(
            np.linspace(lo, hi, int(n)) if n > 1 else np.array([float(lo)])
            for lo, hi, n in (self.plus, self.minus)
        )

    @classmethod
    def parse(cls, text):
        """``kind:lo:hi:n`` (both axes) or ``kind:lo:hi:n,lo:hi:n``."""
        try:
            kind, rest = text.split(":", 1)
            parts = rest.split(",")
            axes = []
            for p in parts:
                lo, hi, n = p.split(":")
                axes.append((float(lo), float(hi), int(n)))
        except ValueError as exc:
            raise InputError(f"cannot parse grid {text!r}; expected kind:lo:hi:n[,lo:hi:n]") from exc
        if len(axes) == 1:
            axes.append(axes[0])
        if len(axes) != 2:
            raise InputError(f"grid {text!r} has more than two axes")
        return cls(kind.strip(), axes[0], axes[1])

    def __str__(self):
        ax = ",".join(f"{fmt(lo)}:{fmt(hi)}:{int(n)}" for lo, hi, n in (self.plus, self.minus))
        return f"{self.kind}:{ax}"


def default_grid(config, n=DEFAULT_POINTS):
    """Lengths bracketing the resonance: ``[L - 10 eps, L + 2 eps]`` per slit."""
    eps = config.epsilon
    Lp = resonant_length(config.omega, config.m_plus)
    Lm = resonant_length(config.omega, config.m_minus)
    return GridSpec("length", (Lp - 10 * eps, Lp + 2 * eps, n), (Lm - 10 * eps, Lm + 2 * eps, n))


@dataclass
class SweepCell:
    i: int
    j: int
    length_plus: float
    length_minus: float
    beta: asym.BetaPair
    asym: ScatteringTriple
    fem: ScatteringTriple = None
    seconds: float = float("nan")
    error: str = None

    @property
    def failed(self):
        return self.error is not None


@dataclass
class SweepTable:
    config: object
    grid: GridSpec
    axis_plus: np.ndarray
    axis_minus: np.ndarray
    cells: list  # cells[i][j], i along the plus axis
    eta: float = float("nan")
    run_id: str = ""

    @property
    def shape(self):
        return (len(self.axis_plus), len(self.axis_minus))

    @property
    def has_fem(self):
        return any(c.fem is not None for c in self.iter_cells())

    def iter_cells(self):
        for row in self.cells:
            yield from row

    def values(self, source, quantity="abs_r"):
        """2D array of a derived quantity; failed cells are NaN."""
        out = np.full(self.shape, np.nan)
        for c in self.iter_cells():
            tr = c.fem if source == "fem" else c.asym
            if tr is None:
                continue
            out[c.i, c.j] = {
                "abs_r": abs(tr.r),
                "abs_tp": abs(tr.t_plus),
                "abs_tm": abs(tr.t_minus),
                "energy": tr.energy_residual,
            }[quantity]
        return out

    def rows(self):
        """CSV rows in grid order; every cell has an ``asym`` row, FEM cells
        a following ``fem`` row (NaN values when the solve failed)."""
        nan = ScatteringTriple(math.nan, math.nan, math.nan)
        for c in self.iter_cells():
            sources = [("asym", c.asym)]
            if c.fem is not None or c.failed:
                sources.append(("fem", c.fem if c.fem is not None else nan))
            for name, tr in sources:
                yield [
                    c.length_plus, c.length_minus, c.beta.beta_plus, c.beta.beta_minus,
                    tr.r.real, tr.r.imag, tr.t_plus.real, tr.t_plus.imag,
                    tr.t_minus.real, tr.t_minus.imag, tr.energy_residual, name,
                ]

    def write_csv(self, path, run_id=None):
        run_id = run_id or self.run_id
        with open(path, "w", newline="") as fh:
            fh.write(f"# run_id={run_id}\n")
            fh.write(f"# grid={self.grid} eta={fmt(self.eta)}\n")
            for c in self.iter_cells():
                if c.failed:
                    fh.write(f"# failed cell {c.i} {c.j}: {c.error}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for row in self.rows():
                w.writerow([fmt(v) for v in row[:-1]] + [row[-1]])
        return path


def read_csv(path):
    """Rows of a sweep CSV as dicts of floats (``source`` kept as text)."""
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    out = []
    for rec in csv.DictReader(lines):
        out.append({k: (v if k == "source" else float(v)) for k, v in rec.items()})
    return out


def _fem_job(args):
    config, options = args
    t0 = time.perf_counter()
    try:
        _, triple = solve_config(config, options)
    except ThinSlitError as exc:
        return None, time.perf_counter() - t0, f"{type(exc).__name__}: {exc}"
    return triple, time.perf_counter() - t0, None


def _map(fn, jobs, workers):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs, chunksize=1))


def run_sweep(config, grid=None, with_fem=False, workers=1, aux=None, fem_options=FemOptions(),
              model="coupled"):
    """Evaluate the leading-order model (and optionally the FEM) on a grid.

    ``model="decoupled"`` drops the inter-slit coupling from the asymptotic
    values (the lengths still use the full detuning constants).

    Cells are independent; with ``workers > 1`` the FEM solves run in a
    process pool and are gathered back in grid order.  A cell whose lengths
    are invalid or whose solve fails is kept and marked failed.
    """
    if model not in ("coupled", "decoupled"):
        raise InputError(f"unknown model {model!r}")
    grid = grid or default_grid(config)
    aux = aux if aux is not None else aux_for_config(config)
    ax_p, ax_m = grid.axes()
    cells = []
    jobs, slots = [], []
    for i, vp in enumerate(ax_p):
        row = []
        for j, vm in enumerate(ax_m):
            try:
                if grid.kind == "beta":
                    beta = asym.BetaPair(float(vp), float(vm))
                    lp, lm = asym.lengths_from_beta(beta, config, aux)
                    cfg = config.with_lengths(lp, lm)
                else:
                    lp, lm = float(vp), float(vm)
                    cfg = config.with_lengths(lp, lm)
                    beta = asym.beta_from_config(cfg, aux)
                if model == "decoupled":
                    triple = asym.scattering_decoupled(beta, config.m_plus, config.m_minus)
                else:
                    triple = asym.evaluate_beta(beta, cfg, aux).triple
            except DomainError as exc:
                nan = ScatteringTriple(math.nan, math.nan, math.nan)
                bp = float(vp) if grid.kind == "beta" else math.nan
                bm = float(vm) if grid.kind == "beta" else math.nan
                lp = float(vp) if grid.kind == "length" else math.nan
                lm = float(vm) if grid.kind == "length" else math.nan
                row.append(SweepCell(i, j, lp, lm, _raw_beta(bp, bm), nan, error=str(exc)))
                continue
            row.append(SweepCell(i, j, lp, lm, beta, triple))
            if with_fem:
                jobs.append((cfg, fem_options))
                slots.append((i, j))
        cells.append(row)
    if jobs:
        for (i, j), (triple, secs, err) in zip(slots, _map(_fem_job, jobs, workers)):
            cells[i][j].fem, cells[i][j].seconds, cells[i][j].error = triple, secs, err
    eta = float((config.omega * aux.gamma_tilde).real)
    return SweepTable(config, grid, ax_p, ax_m, cells, eta)


def _raw_beta(bp, bm):
    # BetaPair rejects non-finite values; failed cells may not have one
    b = object.__new__(asym.BetaPair)
    object.__setattr__(b, "beta_plus", bp)
    object.__setattr__(b, "beta_minus", bm)
    return b


@dataclass(frozen=True)
class CurvePoint:
    length_plus: float
    length_minus: float
    beta_plus: float
    beta_minus: float
    abs_r: float
    abs_tp: float
    abs_tm: float

    @property
    def ratio(self):
        return self.abs_tp / self.abs_tm if self.abs_tm > 0 else math.inf


@dataclass
class MinReflectionCurve:
    points: list = field(default_factory=list)
    source: str = "asym"

    def column(self, name):
        return np.array([getattr(p, name) for p in self.points])

    def write_csv(self, path, run_id=""):
        with open(path, "w", newline="") as fh:
            fh.write(f"# run_id={run_id}\n# source={self.source}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["Lp_eps", "Lm_eps", "beta_p", "beta_m", "abs_R", "abs_Tp", "abs_Tm", "ratio"])
            for p in self.points:
                w.writerow([fmt(v) for v in (
                    p.length_plus, p.length_minus, p.beta_plus, p.beta_minus,
                    p.abs_r, p.abs_tp, p.abs_tm, p.ratio,
                )])
        return path


def extract_min_reflection_curve(table, source=None):
    """Per column of fixed ``L_+`` the cell minimizing ``|R|``.

    Uses FEM values when the table has them, otherwise the asymptotic ones.
    Ties go to the smaller ``L_-`` (the earlier grid index).  Columns with no
    valid cell are skipped.
    """
    if source is None:
        source = "fem" if table.has_fem else "asym"
    absr = table.values(source, "abs_r")
    if absr.size == 0 or np.all(np.isnan(absr)):
        raise EmptyTableError(f"no valid {source} cells to extract a curve from")
    points = []
    for i in range(table.shape[0]):
        col = absr[i]
        if np.all(np.isnan(col)):
            continue
        j = int(np.nanargmin(col))
        c = table.cells[i][j]
        tr = c.fem if source == "fem" else c.asym
        points.append(CurvePoint(
            c.length_plus, c.length_minus, c.beta.beta_plus, c.beta.beta_minus,
            abs(tr.r), abs(tr.t_plus), abs(tr.t_minus),
        ))
    return MinReflectionCurve(points, source)


@dataclass
class DesignReport:
    target_ratio: float
    branch: int
    beta: asym.BetaPair
    length_corrections: tuple
    lengths: tuple
    eta: float
    predicted_decoupled: ScatteringTriple
    predicted: ScatteringTriple
    achieved: ScatteringTriple = None
    fem_seconds: float = float("nan")

    def as_dict(self):
        def triple(t):
            if t is None:
                return None
            d = t.as_dict()
            d["ratio"] = t.ratio
            return d

        return {
            "target_ratio": self.target_ratio,
            "branch": self.branch,
            "beta_plus": self.beta.beta_plus,
            "beta_minus": self.beta.beta_minus,
            "Lp_plus": self.length_corrections[0],
            "Lp_minus": self.length_corrections[1],
            "L_plus": self.lengths[0],
            "L_minus": self.lengths[1],
            "eta": self.eta,
            "predicted_decoupled": triple(self.predicted_decoupled),
            "predicted": triple(self.predicted),
            "achieved": triple(self.achieved),
            "fem_seconds": self.fem_seconds,
        }


def design(config, target_ratio, branch=+1, aux=None):
    """Detunings and slit lengths for a target ``|T+| / |T-|``, no FEM."""
    aux = aux if aux is not None else aux_for_config(config)
    eta = coupling_eta(aux)
    beta = asym.design_for_ratio(target_ratio, branch)
    corr = asym.length_corrections(beta, config, aux)
    lengths = asym.lengths_from_beta(beta, config, aux)
    cfg = config.with_lengths(*lengths)
    return DesignReport(
        float(target_ratio), branch, beta, corr, lengths, eta,
        asym.scattering_decoupled(beta, config.m_plus, config.m_minus),
        asym.evaluate_beta(beta, cfg, aux).triple,
    )


def design_and_verify(config, target_ratio, branch=+1, aux=None, fem_options=FemOptions()):
    """Design for ``target_ratio`` and check the lengths with one FEM solve."""
    if config.epsilon > 0.1:
        raise DomainError(f"epsilon={config.epsilon} is outside the thin-slit regime (<= 0.1)")
    report = design(config, target_ratio, branch, aux)
    t0 = time.perf_counter()
    _, report.achieved = solve_config(config.with_lengths(*report.lengths), fem_options)
    report.fem_seconds = time.perf_counter() - t0
    return report
