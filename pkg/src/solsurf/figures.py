"""Generating-curve figures: curve tables plus PNG renderings.

Each panel is an ordinary curve run, so its CSV is exactly what `solsurf
curve` writes for the same settings.  The qualitative claim shown by a
panel is checked by re-reading that CSV and running verify_label on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .classifier import VerificationReport, classify, verify_label  # noqa: E402
from .curvature import CurveState  # noqa: E402
from .export import Outputs, RunConfig, read_table, trajectory_from_table, write_curve_table  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 10,
    "axes.titlesize": 10,
    "lines.linewidth": 1.2,
    "figure.dpi": 150,
    "savefig.bbox": "tight",
}


@dataclass(frozen=True)
class Panel:
    key: str
    title: str
    condition: str
    constants: dict
    initial: CurveState
    s_range: tuple[float, float]
    z_clip: float | None = None

    def config(self, outdir: Path) -> RunConfig:
        return RunConfig(condition=self.condition, constants=self.constants, initial=self.initial,
                         s_range=self.s_range, outputs=Outputs(curve=str(outdir / f"{self.key}.csv")))


def _s(theta: float, s: float = 0.0, y: float = 0.0, z: float = 0.0) -> CurveState:
    return CurveState(s, y, z, theta)


T1 = math.pi
FIGURES: dict[str, tuple[Panel, ...]] = {
    "fig1": (
        Panel("fig1_cmc_H0", "H = 0", "cmc", {"H": 0.0}, _s(math.pi / 4, y=1.0), (-3.0, 3.0)),
        Panel("fig1_cmc_H1", "H = 1", "cmc", {"H": 1.0}, _s(0.0, z=-0.5), (0.0, 3 * T1)),
    ),
    "fig2": (
        Panel("fig2_kint_0", "K_int = 0", "kint", {"c": 0.0}, _s(math.pi / 6, s=2.0, z=math.log(2.0)), (0.0, 6.0)),
        Panel("fig2_kint_m1", "K_int = -1", "kint", {"c": -1.0}, _s(0.0), (-3.0, 3.0)),
        Panel("fig2_kint_entire", "K_int = -1/2, sin^2 theta0 + c < 0", "kint", {"c": -0.5}, _s(0.0), (-4.0, 4.0)),
        Panel("fig2_kint_half_line", "K_int = -1/2, sin^2 theta0 + c > 0", "kint", {"c": -0.5}, _s(1.2),
              (-4.0, 4.0)),
    ),
    "fig3": (
        Panel("fig3_ratio_m3", "m = -3", "ratio", {"m": -3.0}, _s(0.0), (-20.0, 20.0), z_clip=6.0),
        Panel("fig3_ratio_m1.5", "m = -3/2", "ratio", {"m": -1.5}, _s(0.0), (-10.0, 10.0)),
    ),
}


@dataclass
class PanelResult:
    panel: Panel
    csv: Path
    report: VerificationReport


def write_figure_data(name: str, outdir: str | Path, tol: float = 1e-6) -> list[PanelResult]:
    """Write each panel's curve table and verify the panel's case label on the file contents."""
    outdir = Path(outdir)
    results = []
    for panel in FIGURES[name]:
        path, _ = write_curve_table(panel.config(outdir))
        traj = trajectory_from_table(read_table(path))
        label = classify(traj.condition, panel.initial)
        results.append(PanelResult(panel, path, verify_label(label, traj, tol)))
    return results


def render_figure(results: list[PanelResult], path: str | Path) -> Path:
    """Plot z against y for each panel, side by side, as a PNG."""
    with plt.rc_context(STYLE):
        n = len(results)
        cols = 2
        rows = math.ceil(n / cols)
        fig, axes = plt.subplots(rows, cols, figsize=(3.2 * cols, 2.8 * rows), squeeze=False)
        for ax, res in zip(axes.ravel(), results):
            data = read_table(res.csv).data
            y, z = data["y"], data["z"]
            if res.panel.z_clip is not None:
                keep = z <= res.panel.z_clip
                y, z = y[keep], z[keep]
            ax.plot(y, z, color="k")
            ax.set_title(res.panel.title)
            ax.set_xlabel("y")
            ax.set_ylabel("z")
        for ax in axes.ravel()[n:]:
            ax.set_visible(False)
        fig.tight_layout()
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, metadata={"Software": None})
        plt.close(fig)
    return path


def make_figures(outdir: str | Path, names=None, tol: float = 1e-6) -> dict[str, tuple[list[PanelResult], Path]]:
    outdir = Path(outdir)
    out = {}
    for name in names or FIGURES:
        results = write_figure_data(name, outdir, tol)
        out[name] = (results, render_figure(results, outdir / f"{name}.png"))
    return out
