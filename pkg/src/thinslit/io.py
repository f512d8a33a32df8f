"""Config files, field exports and run manifests."""

import ast
import json
import math
import operator
import os
import time
import uuid
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, InputError
from .fem.mesh import MeshSpec
from .fem.solver import FemOptions
from .geometry import DEFAULT_TRUNC_V, WaveguideConfig, build_domain

__version__ = "0.1.0"

CONFIG_KEYS = {
    "omega", "epsilon", "p_plus", "p_minus", "m_plus", "m_minus", "Lp_plus", "Lp_minus",
    "wall_x", "trunc_h", "trunc_v", "n_dtn_modes", "mesh_h0", "mesh_grading",
}
REQUIRED_KEYS = ("omega", "epsilon", "p_plus", "p_minus")

_OPS = {
    ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
    ast.Div: operator.truediv, ast.Pow: operator.pow, ast.USub: operator.neg, ast.UAdd: operator.pos,
}
_NAMES = {"pi": math.pi}


def _eval_number(text, line):
    """Arithmetic on numbers and ``pi`` only, e.g. ``0.8*pi`` or ``-5/2``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return node.value
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        raise ValueError

    try:
        value = ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError, TypeError) as exc:
        raise ConfigError(f"cannot read {text.strip()!r} as a number", line) from exc
    if not math.isfinite(value):
        raise ConfigError(f"value {text.strip()!r} is not finite", line)
    return float(value)


@dataclass(frozen=True)
class RunConfig:
    config: WaveguideConfig
    options: FemOptions
    source: str = None

    def snapshot(self):
        snap = asdict(self.config)
        snap["trunc_h"] = self.options.trunc_h
        snap["trunc_v"] = self.options.trunc_v
        snap["n_dtn_modes"] = self.options.n_modes
        snap["mesh_h0"] = self.options.mesh.h0
        snap["mesh_grading"] = self.options.mesh.growth
        return snap


def parse_config_text(text, source=None):
    """Parse flat ``key = value`` lines (``#`` starts a comment).

    ``p_plus``/``p_minus`` may be ``flush``: the slit then touches the end
    wall, ``p = wall_x - epsilon/2``.
    """
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"expected 'key = value', got {body!r}", lineno)
        key, value = (s.strip() for s in body.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in raw:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        if not value:
            raise ConfigError(f"missing value for {key!r}", lineno)
        raw[key] = (value, lineno)
    for key in REQUIRED_KEYS:
        if key not in raw:
            raise ConfigError(f"missing required key {key!r}")

    vals = {}
    for key, (value, lineno) in raw.items():
        if key in ("p_plus", "p_minus") and value.lower() == "flush":
            vals[key] = "flush"
        else:
            vals[key] = _eval_number(value, lineno)
    eps = vals["epsilon"]
    wall = vals.get("wall_x", 0.0)
    for key in ("p_plus", "p_minus"):
        if vals[key] == "flush":
            vals[key] = wall - 0.5 * eps

    geo = {k: vals[k] for k in
           ("omega", "epsilon", "p_plus", "p_minus", "m_plus", "m_minus", "Lp_plus", "Lp_minus", "wall_x")
           if k in vals}
    config = WaveguideConfig(**geo)
    mesh = MeshSpec()
    if "mesh_h0" in vals or "mesh_grading" in vals:
        mesh = MeshSpec(h0=vals.get("mesh_h0", mesh.h0), growth=vals.get("mesh_grading", mesh.growth))
        if not mesh.growth > 1.0:
            raise ConfigError(f"mesh_grading={mesh.growth} must exceed 1", raw["mesh_grading"][1])
    n_modes = vals.get("n_dtn_modes", 15)
    if int(n_modes) != n_modes or n_modes < 1:
        raise ConfigError(f"n_dtn_modes={n_modes} must be a positive integer", raw["n_dtn_modes"][1])
    options = FemOptions(
        trunc_h=vals.get("trunc_h"),
        trunc_v=vals.get("trunc_v", DEFAULT_TRUNC_V),
        n_modes=int(n_modes),
        mesh=mesh,
    )
    # the FEM geometry must be buildable for every subcommand
    build_domain(config, options.trunc_h, options.trunc_v)
    return RunConfig(config, options, source)


def parse_config(path):
    """Read and validate a config file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    return parse_config_text(text, str(path))


def new_run_id():
    return time.strftime("%Y%m%dT%H%M%S") + "-" + uuid.uuid4().hex[:8]


def write_field_text(fld, path, run_id=""):
    """Plain-text export: one header block per rectangle, then nodal values."""
    with open(path, "w") as fh:
        fh.write(f"# run_id={run_id}\n# omega={fld.omega!r} nodes={fld.mesh.n_nodes}\n")
        for rm in fld.mesh.rects.values():
            fh.write(
                f"# rect {rm.name} x=[{rm.x_edges[0]!r}, {rm.x_edges[-1]!r}]"
                f" y=[{rm.y_edges[0]!r}, {rm.y_edges[-1]!r}]\n"
            )
            fh.write("# x_lines " + " ".join(repr(float(v)) for v in rm.x_edges) + "\n")
            fh.write("# y_lines " + " ".join(repr(float(v)) for v in rm.y_edges) + "\n")
        fh.write("x y re im\n")
        for (x, y), u in zip(fld.mesh.nodes, fld.values):
            fh.write(f"{x:.17g} {y:.17g} {u.real:.17g} {u.imag:.17g}\n")
    return path


def read_field_text(path):
    with open(path) as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    body = np.loadtxt(lines[1:], ndmin=2)
    return body[:, :2], body[:, 2] + 1j * body[:, 3]


def field_image(fld, pixels_per_unit=40, mode="abs", domain=None):
    """Sample ``|u|`` (or ``Re u``) on a uniform pixel grid over the domain's
    bounding box.  Returns ``(image, mask)`` with rows running top to bottom.
    """
    if mode not in ("abs", "real"):
        raise InputError(f"pixmap mode must be 'abs' or 'real', got {mode!r}")
    if domain is None:
        domain = fld.mesh.domain
    x0, x1, y0, y1 = domain.bounding_box
    nx = max(2, int(round((x1 - x0) * pixels_per_unit)))
    ny = max(2, int(round((y1 - y0) * pixels_per_unit)))
    xs = x0 + (np.arange(nx) + 0.5) * (x1 - x0) / nx
    ys = y1 - (np.arange(ny) + 0.5) * (y1 - y0) / ny
    X, Y = np.meshgrid(xs, ys)
    u = fld.evaluate(X, Y, fill=np.nan)
    mask = np.isfinite(u)
    img = np.where(mask, np.abs(u) if mode == "abs" else u.real, 0.0)
    return img, mask


def emit_field_pixmap(fld, path, colormap="gray", mode="abs", pixels_per_unit=40, run_id=""):
    """Binary PPM image of the field, linearly scaled to its maximum.

    ``mode="real"`` maps ``Re u`` symmetrically around mid-scale.  Points
    outside the domain are drawn black.
    """
    img, mask = field_image(fld, pixels_per_unit, mode)
    peak = float(np.max(np.abs(img))) if img.size else 0.0
    if mode == "abs":
        scaled = img / peak if peak > 0 else np.zeros_like(img)
    else:
        scaled = 0.5 + 0.5 * img / peak if peak > 0 else np.full_like(img, 0.5)
    scaled = np.clip(scaled, 0.0, 1.0)
    if colormap == "gray":
        rgb = np.repeat(scaled[..., None], 3, axis=2)
    else:
        from matplotlib import colormaps

        try:
            cmap = colormaps[colormap]
        except KeyError as exc:
            raise InputError(f"unknown colormap {colormap!r}") from exc
        rgb = cmap(scaled)[..., :3]
    rgb = np.where(mask[..., None], rgb, 0.0)
    pixels = np.round(rgb * 255).astype(np.uint8)
    h, w = pixels.shape[:2]
    with open(path, "wb") as fh:
        fh.write(f"P6\n# run_id={run_id} mode={mode} max={peak!r}\n{w} {h}\n255\n".encode())
        fh.write(pixels.tobytes())
    return path


def read_ppm(path):
    """Minimal reader for the pixmaps written above: ``(comments, array)``."""
    raw = Path(path).read_bytes()
    tokens, comments, pos = [], [], 0
    while len(tokens) < 4:
        end = raw.index(b"\n", pos)
        line = raw[pos:end].decode()
        pos = end + 1
        if line.startswith("#"):
            comments.append(line[1:].strip())
        else:
            tokens.extend(line.split())
    w, h = int(tokens[1]), int(tokens[2])
    arr = np.frombuffer(raw[pos:pos + 3 * w * h], dtype=np.uint8).reshape(h, w, 3)
    return comments, arr


@dataclass
class RunManifest:
    run_id: str
    command: str
    config: dict = None
    version: str = __version__
    cache_entries: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)

    def add_output(self, path):
        self.outputs.append(str(path))

    def write(self, directory):
        path = Path(directory) / f"manifest-{self.run_id}.json"
        missing = [p for p in self.outputs if not os.path.exists(p)]
        if missing:
            raise InputError(f"manifest lists missing outputs: {missing}")
        path.write_text(json.dumps(asdict(self), indent=2, default=_json_default) + "\n")
        return path


def _json_default(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj):
    return json.dumps(obj, indent=2, default=_json_default)
