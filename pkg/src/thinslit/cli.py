"""Command-line entry point.

Exit codes: 0 on success, 1 for invalid input (bad config, out-of-range
parameters, usage errors), 2 when a numerical procedure fails.
"""

import argparse
import sys
import time
from dataclasses import asdict
from pathlib import Path

from . import asymptotic as asym
from .constants import ConstantCache, aux_for_config
from .errors import ComputationError, InputError
from .fem.solver import solve_config
from .io import (
    RunManifest, dumps, emit_field_pixmap, new_run_id, parse_config, write_field_text,
)
from .sweep import (
    GridSpec, default_grid, design, design_and_verify, extract_min_reflection_curve, run_sweep,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(f"{self.prog}: {message}")


def _build_parser():
    p = _Parser(prog="thinslit", description="Thin-slit energy distributor: design and verification.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def add(name, help_text):
        s = sub.add_parser(name, help=help_text)
        s.add_argument("--config", required=True, help="key = value config file")
        s.add_argument("--out", help="output directory (files and a manifest are written there)")
        s.add_argument("--no-cache", action="store_true", help="do not read or write the constant cache")
        return s

    add("constants", "boundary-layer and Green's function constants for the config")
    add("asym", "leading-order detunings, amplitudes and scattering coefficients")
    add("fem", "finite-element scattering coefficients")
    for name, text in (("sweep", "grid sweep over the slit lengths"),
                       ("curve", "sweep and extract the min-|R| curve")):
        s = add(name, text)
        s.add_argument("--grid", help="kind:lo:hi:n[,lo:hi:n] with kind 'beta' or 'length'")
        s.add_argument("--fem", action="store_true", help="also run the FEM on every cell")
        s.add_argument("--workers", type=int, default=1)
        s.add_argument("--model", choices=("coupled", "decoupled"), default="coupled")
        s.add_argument("--no-figures", action="store_true")
    s = add("design", "slit lengths for a target |T+|/|T-|, verified by FEM")
    s.add_argument("--ratio", type=float, required=True)
    s.add_argument("--branch", type=int, choices=(1, -1), default=1)
    s.add_argument("--no-fem", action="store_true", help="skip the verification solve")
    s = add("field", "solve and export the field (text, PPM pixmap, PNG)")
    s.add_argument("--mode", choices=("abs", "real"), default="abs")
    s.add_argument("--colormap", default="gray")
    s.add_argument("--ratio", type=float, help="first retune the lengths for this target ratio")
    s.add_argument("--pixels-per-unit", type=int, default=40)
    s.add_argument("--no-figures", action="store_true")
    return p


def _aux(run, args, manifest):
    cache = False if args.no_cache else ConstantCache()
    aux = aux_for_config(run.config, cache=cache)
    manifest.cache_entries.append(asdict(aux))
    return aux


def _outdir(args, default=None):
    out = args.out or default
    if out is None:
        return None
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _emit_json(obj, outdir, name, manifest):
    text = dumps(obj)
    print(text)
    if outdir is not None:
        path = outdir / f"{name}-{manifest.run_id}.json"
        path.write_text(text + "\n")
        manifest.add_output(path)


def cmd_constants(run, args, manifest):
    aux = _aux(run, args, manifest)
    out = asdict(aux)
    out["lemma_residuals"] = aux.lemma_residuals()
    out["run_id"] = manifest.run_id
    _emit_json(out, _outdir(args), "constants", manifest)


def cmd_asym(run, args, manifest):
    aux = _aux(run, args, manifest)
    res = asym.evaluate(run.config, aux)
    out = {
        "run_id": manifest.run_id,
        "beta_plus": res.beta.beta_plus,
        "beta_minus": res.beta.beta_minus,
        "a_plus": res.amplitudes.a_plus,
        "a_minus": res.amplitudes.a_minus,
        "slit_amplitude": asym.slit_amplitude(res.amplitudes, run.config.epsilon),
        "eta": res.eta,
        **res.triple.as_dict(),
    }
    _emit_json(out, _outdir(args), "asym", manifest)


def cmd_fem(run, args, manifest):
    fld, triple = solve_config(run.config, run.options)
    out = {"run_id": manifest.run_id, **triple.as_dict(), "solver": fld.stats,
           "relative_residual": fld.residual, "n_nodes": fld.mesh.n_nodes}
    _emit_json(out, _outdir(args), "fem", manifest)


def _sweep(run, args, manifest):
    aux = _aux(run, args, manifest)
    grid = GridSpec.parse(args.grid) if args.grid else default_grid(run.config)
    table = run_sweep(run.config, grid, with_fem=args.fem, workers=args.workers, aux=aux,
                      fem_options=run.options, model=args.model)
    table.run_id = manifest.run_id
    outdir = _outdir(args, ".")
    path = table.write_csv(outdir / f"sweep-{manifest.run_id}.csv")
    manifest.add_output(path)
    if not args.no_figures:
        from .plots import plot_sweep

        manifest.add_output(plot_sweep(table, outdir / f"sweep-{manifest.run_id}.png", manifest.run_id))
    failed = sum(c.failed for c in table.iter_cells())
    print(f"sweep {grid}: {table.shape[0]}x{table.shape[1]} cells, {failed} failed -> {path}")
    return table, outdir


def cmd_sweep(run, args, manifest):
    _sweep(run, args, manifest)


def cmd_curve(run, args, manifest):
    table, outdir = _sweep(run, args, manifest)
    curve = extract_min_reflection_curve(table)
    path = curve.write_csv(outdir / f"curve-{manifest.run_id}.csv", manifest.run_id)
    manifest.add_output(path)
    if not args.no_figures:
        from .plots import plot_curve

        manifest.add_output(plot_curve(curve, outdir / f"curve-{manifest.run_id}.png", manifest.run_id))
    print(f"curve ({curve.source}): {len(curve.points)} points -> {path}")


def cmd_design(run, args, manifest):
    aux = _aux(run, args, manifest)
    if args.no_fem:
        report = design(run.config, args.ratio, args.branch, aux)
    else:
        report = design_and_verify(run.config, args.ratio, args.branch, aux, run.options)
    out = {"run_id": manifest.run_id, **report.as_dict()}
    _emit_json(out, _outdir(args), "design", manifest)


def cmd_field(run, args, manifest):
    config = run.config
    if args.ratio is not None:
        aux = _aux(run, args, manifest)
        config = config.with_lengths(*design(config, args.ratio, aux=aux).lengths)
    fld, triple = solve_config(config, run.options)
    outdir = _outdir(args, ".")
    rid = manifest.run_id
    manifest.add_output(write_field_text(fld, outdir / f"field-{rid}.txt", rid))
    manifest.add_output(emit_field_pixmap(fld, outdir / f"field-{rid}.ppm", args.colormap, args.mode,
                                          args.pixels_per_unit, rid))
    if not args.no_figures:
        from .plots import plot_field

        manifest.add_output(plot_field(fld, outdir / f"field-{rid}.png", args.mode, rid))
    print(dumps({"run_id": rid, **triple.as_dict(), "outputs": manifest.outputs}))


COMMANDS = {
    "constants": cmd_constants, "asym": cmd_asym, "fem": cmd_fem, "sweep": cmd_sweep,
    "curve": cmd_curve, "design": cmd_design, "field": cmd_field,
}


def main(argv=None):
    manifest = None
    try:
        args = _build_parser().parse_args(argv)
        run = parse_config(args.config)
        manifest = RunManifest(new_run_id(), args.command, run.snapshot())
        t0 = time.perf_counter()
        COMMANDS[args.command](run, args, manifest)
        manifest.timings[args.command] = time.perf_counter() - t0
        if manifest.outputs:
            manifest.write(Path(manifest.outputs[0]).parent)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ComputationError as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
