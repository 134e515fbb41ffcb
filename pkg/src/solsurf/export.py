"""Run configuration, curve tables and surface meshes.

Numbers are written with 17 significant digits so every double round-trips,
and nothing time-dependent goes into a file: identical configurations give
byte-identical output.  Files are written to a temporary sibling and renamed
into place.
"""

from __future__ import annotations

import math
import os
import re
import tempfile
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Iterable, Optional

import numpy as np
import yaml

from .catalog import ClosedFormSolution, find_entry
from .curvature import CurveState, profile_arrays
from .kernel import COORD, SolPoint, SolTangent, christoffel, isometry, metric_matrix, sectional_curvature
from .ode import (ConditionError, CurvatureCondition, IntegratorOptions, ReachedRangeEnd,
                  SingularEndpoint, StepFailure, Trajectory, integrate_span, make_condition)

CURVE_COLUMNS = ("s", "y", "z", "theta", "H", "K_ext", "K_int", "kappa1", "kappa2")
ATTRIBUTE_COLUMNS = ("vertex", "i", "j", "s", "t", "H", "K_ext", "K_int")
DELIMITERS = {"csv": ",", "tsv": "\t"}


class ConfigError(ValueError):
    """Invalid run configuration; the CLI maps it to exit code 2."""


def fmt(v: float) -> str:
    return format(float(v), ".17g")


# Configuration -------------------------------------------------------------------

@dataclass(frozen=True)
class Sweep:
    t_min: float = 0.0
    t_max: float = 1.0
    steps: int = 11


@dataclass(frozen=True)
class Outputs:
    curve: str = "curve.csv"
    mesh: str = "surface.obj"
    attributes: str = "surface_attributes.csv"


@dataclass(frozen=True)
class RunConfig:
    condition: str = "cmc"
    constants: dict[str, float] = field(default_factory=lambda: {"H": 1.0})
    initial: CurveState = CurveState(0.0, 0.0, 0.0, 0.0)
    s_range: tuple[float, float] = (0.0, 1.0)
    integrator: IntegratorOptions = IntegratorOptions()
    outputs: Outputs = Outputs()
    format: str = "csv"
    sweep: Sweep = Sweep()
    samples: int = 200
    entry: Optional[str] = None

    def validate(self) -> CurvatureCondition:
        """Check every field; returns the condition so callers do not rebuild it."""
        if self.format not in DELIMITERS:
            raise ConfigError(f"format must be one of {sorted(DELIMITERS)}, got {self.format!r}")
        lo, hi = self.s_range
        if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
            raise ConfigError(f"s_range must be finite with s_min <= s_max, got {self.s_range}")
        if lo < hi and not lo <= self.initial.s <= hi:
            raise ConfigError(f"initial s={self.initial.s} lies outside s_range {self.s_range}")
        if self.samples < 2:
            raise ConfigError("samples must be at least 2")
        if self.sweep.steps < 1 or not self.sweep.t_min <= self.sweep.t_max:
            raise ConfigError(f"sweep needs steps >= 1 and t_min <= t_max, got {self.sweep}")
        if self.entry is not None:
            try:
                return find_entry(self.entry).condition
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        try:
            return make_condition(self.condition, self.constants)
        except ConditionError as exc:
            raise ConfigError(str(exc)) from None


_SECTIONS = {"condition", "constants", "initial", "s_range", "integrator", "outputs", "format",
             "sweep", "samples", "entry"}


def _sub(cls, data: Any, where: str):
    if data is None:
        return cls()
    if not isinstance(data, dict):
        raise ConfigError(f"{where} must be a mapping")
    try:
        return cls(**data)
    except TypeError as exc:
        raise ConfigError(f"{where}: {exc}") from None
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def config_from_dict(data: dict) -> RunConfig:
    unknown = set(data) - _SECTIONS
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    kw: dict[str, Any] = {}
    for key in ("condition", "format", "entry"):
        if key in data:
            kw[key] = data[key]
    if "constants" in data:
        if not isinstance(data["constants"], dict):
            raise ConfigError("constants must be a mapping")
        kw["constants"] = {k: float(v) for k, v in data["constants"].items()}
    if "initial" in data:
        init = data["initial"] or {}
        extra = set(init) - {"s", "y", "z", "theta"}
        if extra:
            raise ConfigError(f"initial takes s, y, z, theta; unexpected {sorted(extra)}")
        kw["initial"] = CurveState(*(float(init.get(k, 0.0)) for k in ("s", "y", "z", "theta")))
    if "s_range" in data:
        rng = data["s_range"]
        if not isinstance(rng, (list, tuple)) or len(rng) != 2:
            raise ConfigError("s_range must be a two-element list [s_min, s_max]")
        kw["s_range"] = (float(rng[0]), float(rng[1]))
    if "integrator" in data:
        kw["integrator"] = _sub(IntegratorOptions, data["integrator"], "integrator")
    if "outputs" in data:
        kw["outputs"] = _sub(Outputs, data["outputs"], "outputs")
    if "sweep" in data:
        kw["sweep"] = _sub(Sweep, data["sweep"], "sweep")
    if "samples" in data:
        kw["samples"] = int(data["samples"])
    return RunConfig(**kw)


def load_config(path: str | os.PathLike) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must be a mapping at top level")
    return config_from_dict(data)


def with_overrides(cfg: RunConfig, **changes) -> RunConfig:
    """Apply non-None overrides; nested keys use dotted names ("initial.theta", "sweep.steps")."""
    nested: dict[str, dict[str, Any]] = {}
    flat: dict[str, Any] = {}
    for key, value in changes.items():
        if value is None:
            continue
        if "." in key:
            head, tail = key.split(".", 1)
            nested.setdefault(head, {})[tail] = value
        else:
            flat[key] = value
    for head, vals in nested.items():
        try:
            flat[head] = replace(getattr(cfg, head), **vals)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{head}: {exc}") from None
    return replace(cfg, **flat)


# Atomic writes ---------------------------------------------------------------------

def atomic_write(path: str | os.PathLike, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


# Curve tables ----------------------------------------------------------------------

def describe_termination(term) -> str:
    if isinstance(term, ReachedRangeEnd):
        return f"ReachedRangeEnd s={fmt(term.s)}"
    if isinstance(term, SingularEndpoint):
        return (f"SingularEndpoint s*={fmt(term.s_star)} bracket=[{fmt(term.bracket[0])}, "
                f"{fmt(term.bracket[1])}] reason={term.reason}")
    if isinstance(term, StepFailure):
        return f"StepFailure s={fmt(term.s)} {term.diagnostic}"
    return "none"


def curve_table_text(condition: CurvatureCondition, trajectory: Optional[Trajectory],
                     delimiter: str = ",", source: str = "integrated") -> str:
    consts = " ".join(f"{k}={fmt(v)}" for k, v in condition.constants().items())
    lines = [
        "# solsurf curve table",
        f"# condition: {condition.name}",
        f"# constants: {consts}",
        f"# source: {source}",
    ]
    if trajectory is None:
        lines += ["# start: none (empty s-range)", "# end: none (empty s-range)"]
        rows: list[str] = []
    else:
        lines += [f"# start: {describe_termination(trajectory.start_termination)}",
                  f"# end: {describe_termination(trajectory.termination)}"]
        prof = trajectory.profile()
        cols = [trajectory.s, trajectory.y, trajectory.z, trajectory.theta] + \
            [prof[k] for k in CURVE_COLUMNS[4:]]
        rows = [delimiter.join(fmt(v) for v in row) for row in zip(*cols)]
    lines.append(delimiter.join(CURVE_COLUMNS))
    return "\n".join(lines + rows) + "\n"


@dataclass
class Table:
    metadata: dict[str, str]
    columns: tuple[str, ...]
    data: dict[str, np.ndarray]


def read_table(path: str | os.PathLike) -> Table:
    """Parse a file written by write_curve_table or write_attributes."""
    meta: dict[str, str] = {}
    header: Optional[list[str]] = None
    rows: list[list[float]] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                key, _, value = line[1:].partition(":")
                if value:
                    meta[key.strip()] = value.strip()
                continue
            delim = "\t" if "\t" in line else ","
            fields = line.split(delim)
            if header is None:
                header = fields
            else:
                rows.append([float(v) for v in fields])
    if header is None:
        raise ValueError(f"{path}: no column header")
    arr = np.array(rows, dtype=float).reshape(len(rows), len(header))
    return Table(meta, tuple(header), {name: arr[:, k] for k, name in enumerate(header)})


def _parse_termination(text: str):
    kind, _, rest = text.partition(" ")
    fields = dict(re.findall(r"(\S+?)=(\[[^\]]*\]|\S+)", rest))
    if kind == "ReachedRangeEnd":
        return ReachedRangeEnd(float(fields["s"]))
    if kind == "SingularEndpoint":
        lo, hi = (float(v) for v in fields["bracket"].strip("[]").split(","))
        return SingularEndpoint(float(fields["s*"]), rest.partition("reason=")[2], (lo, hi))
    if kind == "StepFailure":
        return StepFailure(float(fields["s"]), rest)
    raise ValueError(f"unrecognised termination {text!r}")


def trajectory_from_table(table: Table) -> Trajectory:
    """Rebuild a Trajectory from a curve table; derivatives come from the stored curvatures."""
    condition = make_condition(table.metadata["condition"], {
        k: float(v) for k, v in (item.split("=") for item in table.metadata["constants"].split())})
    d = table.data
    theta = d["theta"]
    return Trajectory(d["s"], d["y"], d["z"], theta, np.exp(d["z"]) * np.cos(theta), np.sin(theta),
                      2.0 * d["H"], condition, _parse_termination(table.metadata["end"]),
                      _parse_termination(table.metadata["start"]))


def run_curve(cfg: RunConfig) -> tuple[CurvatureCondition, Optional[Trajectory], str]:
    """Trajectory for a config: the catalog entry if one is named, else the ODE."""
    condition = cfg.validate()
    lo, hi = cfg.s_range
    if lo == hi:
        return condition, None, "empty"
    if cfg.entry is not None:
        entry = find_entry(cfg.entry)
        return condition, entry_trajectory(entry, lo, hi, cfg.samples), f"catalog {entry.id}"
    return condition, integrate_span(condition, cfg.initial, lo, hi, cfg.integrator), "integrated"


def entry_trajectory(entry: ClosedFormSolution, lo: float, hi: float, n: int) -> Trajectory:
    a, b = entry.domain
    if lo <= a or hi >= b:
        raise ConfigError(f"s_range [{lo}, {hi}] must lie inside the open domain ({a}, {b}) of {entry.id}")
    arr = entry.arrays(np.linspace(lo, hi, n))
    return Trajectory(arr["s"], arr["y"], arr["z"], arr["theta"], arr["dy"], arr["dz"], arr["dtheta"],
                      entry.condition, ReachedRangeEnd(hi), ReachedRangeEnd(lo))


def write_curve_table(cfg: RunConfig, path: Optional[str] = None) -> tuple[Path, Optional[Trajectory]]:
    condition, traj, source = run_curve(cfg)
    text = curve_table_text(condition, traj, DELIMITERS[cfg.format], source)
    return atomic_write(path or cfg.outputs.curve, text), traj


# Surface meshes ----------------------------------------------------------------------

@dataclass
class SurfaceMesh:
    """Vertices X(s_i, t_j) = T1_{t_j}(0, y(s_i), z(s_i)) on an (n_s, n_t) grid."""

    vertices: np.ndarray
    s: np.ndarray
    t: np.ndarray
    attributes: dict[str, np.ndarray]

    @property
    def shape(self) -> tuple[int, int]:
        return self.vertices.shape[:2]

    def faces(self) -> np.ndarray:
        """Quads as 0-based vertex indices, counter-clockwise in the (s, t) parameter plane."""
        ns, nt = self.shape
        idx = np.arange(ns * nt).reshape(ns, nt)
        return np.stack([idx[:-1, :-1], idx[1:, :-1], idx[1:, 1:], idx[:-1, 1:]], axis=-1).reshape(-1, 4)

    def translated(self, kind: str, c: float) -> SurfaceMesh:
        moved = np.array([isometry(kind, c, SolPoint(*v)).as_array() for v in self.vertices.reshape(-1, 3)])
        return SurfaceMesh(moved.reshape(self.vertices.shape), self.s, self.t, dict(self.attributes))


def build_mesh(condition: CurvatureCondition, trajectory: Trajectory, sweep: Sweep, samples: int) -> SurfaceMesh:
    s = np.linspace(trajectory.s[0], trajectory.s[-1], samples)
    y, z, theta = trajectory.at(s)
    theta_prime = np.array([condition.theta_prime(float(th)) for th in theta])
    t = np.linspace(sweep.t_min, sweep.t_max, sweep.steps)
    base = np.array([SolPoint(0.0, float(yi), float(zi)) for yi, zi in zip(y, z)])
    verts = np.array([[isometry("T1", float(tj), p).as_array() for tj in t] for p in base])
    prof = profile_arrays(theta, theta_prime)
    attrs = {k: np.repeat(prof[k][:, None], len(t), axis=1) for k in ("H", "K_ext", "K_int")}
    return SurfaceMesh(verts.reshape(len(s), len(t), 3), s, t, attrs)


def obj_text(mesh: SurfaceMesh, comment: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comment]
    lines += ["v " + " ".join(fmt(c) for c in v) for v in mesh.vertices.reshape(-1, 3)]
    lines += ["f " + " ".join(str(i + 1) for i in face) for face in mesh.faces()]
    return "\n".join(lines) + "\n"


def read_obj(path: str | os.PathLike) -> tuple[np.ndarray, np.ndarray]:
    """Vertices (n, 3) and 0-based faces from a Wavefront OBJ with v and f records."""
    verts, faces = [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append([float(v) for v in parts[1:4]])
            elif parts[0] == "f":
                faces.append([int(p.split("/")[0]) - 1 for p in parts[1:]])
    return np.array(verts, dtype=float).reshape(-1, 3), np.array(faces, dtype=int)


def attributes_text(mesh: SurfaceMesh, delimiter: str = ",") -> str:
    ns, nt = mesh.shape
    lines = ["# solsurf surface attributes", delimiter.join(ATTRIBUTE_COLUMNS)]
    for i in range(ns):
        for j in range(nt):
            row = [str(i * nt + j), str(i), str(j), fmt(mesh.s[i]), fmt(mesh.t[j])]
            row += [fmt(mesh.attributes[k][i, j]) for k in ATTRIBUTE_COLUMNS[5:]]
            lines.append(delimiter.join(row))
    return "\n".join(lines) + "\n"


def write_surface(cfg: RunConfig) -> tuple[Path, Path, SurfaceMesh]:
    condition, traj, source = run_curve(cfg)
    if traj is None:
        raise ConfigError("surface export needs a non-empty s_range")
    mesh = build_mesh(condition, traj, cfg.sweep, cfg.samples)
    consts = " ".join(f"{k}={fmt(v)}" for k, v in condition.constants().items())
    comment = ["solsurf surface mesh in Sol coordinates (x, y, z)",
               f"condition: {condition.name} {consts}", f"source: {source}",
               f"grid: {mesh.shape[0]} x {mesh.shape[1]}"]
    obj = atomic_write(cfg.outputs.mesh, obj_text(mesh, comment))
    att = atomic_write(cfg.outputs.attributes, attributes_text(mesh, DELIMITERS[cfg.format]))
    return obj, att, mesh


def mesh_from_files(obj_path, attributes_path) -> SurfaceMesh:
    verts, _ = read_obj(obj_path)
    table = read_table(attributes_path)
    i, j = table.data["i"].astype(int), table.data["j"].astype(int)
    ns, nt = i.max() + 1, j.max() + 1
    s = np.zeros(ns)
    t = np.zeros(nt)
    s[i], t[j] = table.data["s"], table.data["t"]
    attrs = {k: table.data[k].reshape(ns, nt) for k in ("H", "K_ext", "K_int")}
    return SurfaceMesh(verts.reshape(ns, nt, 3), s, t, attrs)


# Curvatures measured on the vertex grid ------------------------------------------------

def estimate_curvatures(mesh: SurfaceMesh) -> dict[str, np.ndarray]:
    """H, K_ext, K_int at interior grid vertices from vertex positions alone.

    Central differences give X_s, X_t and second derivatives; the second
    fundamental form uses the Levi-Civita connection of Sol, and K_int is
    K_ext plus the sectional curvature of the tangent plane.  Returned arrays
    have shape (n_s - 2, n_t - 2); accuracy is second order in the spacing.
    """
    X = mesh.vertices
    ns, nt = mesh.shape
    out = {k: np.zeros((ns - 2, nt - 2)) for k in ("H", "K_ext", "K_int")}
    for i in range(1, ns - 1):
        hs_m, hs_p = mesh.s[i] - mesh.s[i - 1], mesh.s[i + 1] - mesh.s[i]
        for j in range(1, nt - 1):
            ht = 0.5 * (mesh.t[j + 1] - mesh.t[j - 1])
            hs = 0.5 * (hs_m + hs_p)
            xs = (X[i + 1, j] - X[i - 1, j]) / (2 * hs)
            xt = (X[i, j + 1] - X[i, j - 1]) / (2 * ht)
            xss = (X[i + 1, j] - 2 * X[i, j] + X[i - 1, j]) / hs ** 2
            xtt = (X[i, j + 1] - 2 * X[i, j] + X[i, j - 1]) / ht ** 2
            xst = (X[i + 1, j + 1] - X[i + 1, j - 1] - X[i - 1, j + 1] + X[i - 1, j - 1]) / (4 * hs * ht)
            p = SolPoint(*X[i, j])
            g = metric_matrix(p)
            gamma = christoffel(p)
            E, F, G = xs @ g @ xs, xs @ g @ xt, xt @ g @ xt
            n = np.linalg.solve(g, np.cross(xt, xs))  # metric-dual of the Euclidean cross product
            n /= math.sqrt(n @ g @ n)

            def second(a, b, ab):
                return n @ g @ (ab + np.einsum("kij,i,j->k", gamma, a, b))

            e, f, gg = second(xs, xs, xss), second(xs, xt, xst), second(xt, xt, xtt)
            det = E * G - F * F
            k_ext = (e * gg - f * f) / det
            out["H"][i - 1, j - 1] = 0.5 * (E * gg - 2 * F * f + G * e) / det
            out["K_ext"][i - 1, j - 1] = k_ext
            out["K_int"][i - 1, j - 1] = k_ext + sectional_curvature(
                p, SolTangent(p, tuple(xs), COORD), SolTangent(p, tuple(xt), COORD))
    return out


__all__ = [
    "CURVE_COLUMNS", "ATTRIBUTE_COLUMNS", "ConfigError", "RunConfig", "Sweep", "Outputs",
    "config_from_dict", "load_config", "with_overrides", "atomic_write", "curve_table_text",
    "read_table", "run_curve", "write_curve_table", "SurfaceMesh", "build_mesh", "obj_text",
    "read_obj", "attributes_text", "write_surface", "mesh_from_files", "estimate_curvatures",
    "entry_trajectory", "trajectory_from_table",
]
