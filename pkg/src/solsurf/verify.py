"""Invariant suites run by `solsurf verify`.

Each check yields one row of a tab-separated pass/fail table.  Random
points come from a seeded generator so a run is reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

import numpy as np

from . import kernel as K
from .catalog import GATE, RESOLUTIONS, catalog_entries
from .classifier import classification_grid
from .curvature import CurveState, curvature_profile, fundamental_forms, graph_curvatures, profile_arrays, \
    second_form_by_differences
from .ode import (CMC, CurvatureCondition, ExtrinsicK, IntrinsicK, LinearWeingartenHK, LinearWeingartenKappa,
                  PrincipalRatio, integrate_span, rhs)
from .rk import single_step

SUITES = ("kernel", "curvature", "catalog", "classify")
SEED = 20240611


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""

    def row(self) -> str:
        status = "pass" if self.passed else "fail"
        return "\t".join([self.suite, self.name, status, f"{self.measured:.3e}", f"{self.tolerance:.0e}", self.detail])


HEADER = "\t".join(["suite", "check", "status", "measured", "tolerance", "detail"])


def _check(suite, name, measured, tol, detail="") -> Check:
    return Check(suite, name, bool(measured < tol), float(measured), tol, detail)


def random_points(n: int, rng: np.random.Generator, scale: float = 2.0) -> list[K.SolPoint]:
    return [K.SolPoint(*rng.uniform(-scale, scale, 3)) for _ in range(n)]


# kernel ----------------------------------------------------------------------------

def connection_error(points, table: Optional[np.ndarray] = None) -> tuple[float, tuple[int, int]]:
    """Largest deviation between the Christoffel-assembled connection and a frame table."""
    ref = K.FrameConnectionTable(K.FrameConnectionTable.sol().coefficients if table is None else np.asarray(table))
    worst, where = 0.0, (1, 1)
    for p in points:
        err, ij = ref.max_deviation(K.connection_from_christoffel(p))
        if err > worst:
            worst, where = err, ij
    return worst, where


def sectional_anchor_error(points) -> float:
    worst = 0.0
    for p in points:
        e = [K.frame_vector(p, i) for i in (1, 2, 3)]
        got = (K.sectional_curvature(p, e[0], e[1]), K.sectional_curvature(p, e[0], e[2]),
               K.sectional_curvature(p, e[1], e[2]))
        worst = max(worst, max(abs(a - b) for a, b in zip(got, (1.0, -1.0, -1.0))))
    return worst


def tangent_plane_sectional_error(points) -> float:
    """K(X_s, X_t) of an invariant surface against cos^2 theta - sin^2 theta."""
    worst = 0.0
    for p in points:
        for theta in (0.0, math.pi / 2, 0.7, 2.3):
            xs = K.SolTangent(p, (0.0, math.cos(theta), math.sin(theta)))
            xt = K.frame_vector(p, 1)
            want = math.cos(theta) ** 2 - math.sin(theta) ** 2
            worst = max(worst, abs(K.sectional_curvature(p, xs, xt) - want))
    return worst


def kernel_checks(table: Optional[np.ndarray] = None, n: int = 100, seed: int = SEED) -> Iterator[Check]:
    rng = np.random.default_rng(seed)
    pts = random_points(n, rng)
    err, (i, j) = connection_error(pts, table)
    yield _check("kernel", "connection_table", err, 1e-12, f"worst entry nabla_E{i} E{j}")
    fd = max(float(np.max(np.abs(K.christoffel(p) - K.christoffel_from_metric(p)))) for p in pts[:20])
    yield _check("kernel", "christoffel_vs_metric_differences", fd, 1e-7)
    ref = K.FrameConnectionTable.sol() if table is None else K.FrameConnectionTable(np.asarray(table))
    yield _check("kernel", "metric_compatibility", ref.compatibility_defect(), 1e-14)
    yield _check("kernel", "sectional_anchors", sectional_anchor_error(pts), 1e-10)
    yield _check("kernel", "tangent_plane_sectional", tangent_plane_sectional_error(pts[:10]), 1e-10)
    iso = 0.0
    for p in pts[:20]:
        u = K.SolTangent(p, tuple(rng.normal(size=3)))
        v = K.SolTangent(p, tuple(rng.normal(size=3)))
        for kind in K.ISOMETRY_KINDS:
            c = float(rng.uniform(-1, 1))
            q = K.isometry(kind, c, p)
            pu, pv = K.push_forward(kind, c, u), K.push_forward(kind, c, v)
            iso = max(iso, abs(K.metric_at(q, pu, pv) - K.metric_at(p, u, v)) / (1 + abs(K.metric_at(p, u, v))))
    yield _check("kernel", "isometries_preserve_metric", iso, 1e-12)
    inv = 0.0
    for p, q in zip(pts[:20], pts[20:40]):
        back = K.group_mul(K.group_inv(p), K.group_mul(p, q)).as_array()
        inv = max(inv, float(np.max(np.abs(back - q.as_array()))))
    yield _check("kernel", "group_inverse", inv, 1e-12)


# curvature ------------------------------------------------------------------------------

def gauss_identity_error(n: int = 100) -> float:
    """max |K_int - K_ext - (cos^2 - sin^2)| on an n x n grid of (theta, theta')."""
    th, tp = np.meshgrid(np.linspace(-math.pi, math.pi, n), np.linspace(-5.0, 5.0, n))
    prof = profile_arrays(th.ravel(), tp.ravel())
    return float(np.max(np.abs(prof["K_int"] - prof["K_ext"] - prof["K_sec"])))


ORACLE_CONDITIONS: tuple[tuple[CurvatureCondition, CurveState, float], ...] = (
    (CMC(1.0), CurveState(0.0, 0.0, -0.5, 0.0), 4.0),
    (CMC(0.5), CurveState(0.0, 0.3, 0.2, 1.0), 6.0),
    (CMC(-2.0), CurveState(0.0, 0.0, 0.0, 2.5), 2.0),
    (CMC(0.0), CurveState(0.0, 1.0, 0.0, math.pi / 4), 2.0),
    (IntrinsicK(-1.0), CurveState(0.0, 0.0, 0.0, 0.0), 3.0),
    (IntrinsicK(-0.5), CurveState(0.0, 0.0, 0.0, 0.2), 3.0),
    (IntrinsicK(0.5), CurveState(0.0, 0.0, 0.0, 0.0), 0.9),
    (IntrinsicK(-3.0), CurveState(0.0, 0.0, 0.0, 0.1), 0.3),
    (ExtrinsicK(0.0), CurveState(0.0, 0.0, 0.0, 0.0), 3.0),
    (ExtrinsicK(-0.5), CurveState(0.0, 0.0, 0.0, 0.0), 3.0),
    (ExtrinsicK(2.0), CurveState(0.0, 0.0, 0.0, 0.0), 0.4),
    (ExtrinsicK(-2.0), CurveState(0.0, 0.0, 0.0, 0.3), 0.3),
    (PrincipalRatio(-3.0), CurveState(0.0, 0.0, 0.0, 0.0), 2.0),
    (PrincipalRatio(-1.5), CurveState(0.0, 0.0, 0.0, 0.0), 3.0),
    (PrincipalRatio(2.0), CurveState(0.0, 0.0, 0.0, 0.0), 1.5),
    (LinearWeingartenKappa(1.0, 2.0, 0.5), CurveState(0.0, 0.0, 0.0, 0.3), 3.0),
    (LinearWeingartenKappa(2.0, -1.0, 1.0), CurveState(0.0, 0.2, -0.3, 1.0), 3.0),
    (LinearWeingartenHK(1.0, 0.2, 0.5), CurveState(0.0, 0.0, 0.0, 0.0), 3.0),
    (LinearWeingartenHK(3.0, 1.0, -0.5), CurveState(0.0, 0.0, 0.0, 1.0), 3.0),
    (LinearWeingartenHK(1.0, -0.3, 0.2), CurveState(0.0, 0.0, 0.4, -0.5), 3.0),
)


def second_form_defect(condition: CurvatureCondition, state: CurveState, h: float = 1e-4) -> float:
    """Finite-difference (E, F, G, e, f, g) against the closed form at one curve state.

    The neighbouring curve points at s +- h come from single DOPRI5 steps out
    of the state; the stencil itself never sees theta.
    """
    f = rhs(condition)
    u0 = [state.y, state.z, state.theta]

    def position(s: float) -> tuple[float, float]:
        if s == state.s:
            return state.y, state.z
        u = single_step(f, state.s, u0, s - state.s)
        return u[0], u[1]

    fd = second_form_by_differences(position, state.s, h)
    exact = fundamental_forms(state, condition.theta_prime(state.theta))
    return max(abs(a - b) for a, b in zip(
        (fd.E, fd.F, fd.G, fd.e, fd.f, fd.g), (exact.E, exact.F, exact.G, exact.e, exact.f, exact.g)))


def oracle_errors(samples_per_curve: int = 5, h: float = 1e-4) -> list[tuple[str, float]]:
    out = []
    for cond, init, length in ORACLE_CONDITIONS:
        traj = integrate_span(cond, init, init.s, init.s + length)
        # spread over s, away from any singular end where samples cluster
        targets = np.linspace(traj.s[0], traj.s[-1], samples_per_curve + 2)[1:-1]
        idx = np.searchsorted(traj.s, targets)
        out.append((cond.label(), max(second_form_defect(cond, traj.state(int(i)), h) for i in idx)))
    return out


def minimal_graph_error() -> float:
    """graph_curvatures on z = log y gives H = 0 (z'' + z'^2 = 0)."""
    ys = np.linspace(0.1, 10.0, 100)
    return max(abs(graph_curvatures(math.log(y), 1 / y, -1 / y ** 2).H) for y in ys)


def curvature_checks() -> Iterator[Check]:
    yield _check("curvature", "gauss_identity", gauss_identity_error(), 1e-14)
    for label, err in oracle_errors():
        yield _check("curvature", f"second_form_oracle[{label}]", err, 1e-5)
    yield _check("curvature", "minimal_graph_H", minimal_graph_error(), 1e-12)
    # profile fields against the fundamental forms they come from
    worst = 0.0
    for th in np.linspace(-3.0, 3.0, 13):
        for tp in (-2.0, 0.0, 1.5):
            state = CurveState(0.0, 0.0, 0.3, float(th))
            ff = fundamental_forms(state, tp)
            prof = curvature_profile(float(th), tp)
            worst = max(worst, abs(ff.mean_curvature() - prof.H), abs(ff.gauss_curvature() - prof.K_ext))
    yield _check("curvature", "forms_vs_profile", worst, 1e-12)


# catalog ----------------------------------------------------------------------------------

def vertical_end_trend(entry) -> tuple[bool, float]:
    """|cos theta| decreases towards each declared vertical end, sampled down to 1e-4 away."""
    lo, hi = entry.domain
    ok, last = True, 0.0
    for end in entry.vertical_ends:
        edge, sign = (lo, 1.0) if end == "lo" else (hi, -1.0)
        d = np.array([1e-1, 1e-2, 1e-3, 1e-4])
        c = np.abs(np.cos(entry.theta(edge + sign * d)))
        ok &= bool(np.all(np.diff(c) < 0)) and c[-1] < 0.05
        last = max(last, float(c[-1]))
    return ok, last


def round_trip_error(entry, n: int = 200) -> float:
    lo, hi = entry.interior_window()
    s0 = entry.y_origin if lo < entry.y_origin < hi else min(max(0.0, lo), hi)
    traj = integrate_span(entry.condition, entry.eval(s0), lo, hi)
    a = entry.arrays(np.linspace(lo, hi, n))
    y, z, _ = traj.at(a["s"])
    return float(max(np.max(np.abs(y - a["y"])), np.max(np.abs(z - a["z"]))))


def catalog_checks(samples: int = 1000) -> Iterator[Check]:
    for e in catalog_entries():
        yield _check("catalog", f"residual[{e.id}]", e.residual(samples), GATE)
        yield _check("catalog", f"round_trip[{e.id}]", round_trip_error(e), 1e-7)
        if e.vertical_ends:
            ok, last = vertical_end_trend(e)
            yield Check("catalog", f"vertical_ends[{e.id}]", ok, last, 0.05, ",".join(e.vertical_ends))
    for r in RESOLUTIONS.values():
        if not r.rejected:
            continue
        rejected = ", ".join(f"{lab}: {res:.2e}" for lab, res in r.rejected)
        yield _check("catalog", f"candidate_resolution[{r.id}]", r.chosen_residual, GATE,
                     f"chose {r.chosen}; rejected {rejected}")


# classify ----------------------------------------------------------------------------------

def classify_checks(tol: float = 1e-6) -> Iterator[Check]:
    for case in classification_grid():
        report = case.run(tol)
        for res in report.results:
            worst = 0.0 if res.passed else 1.0
            yield Check("classify", f"{case.expected}[{case.condition.label()}].{res.predicate.value}",
                        res.passed, worst, 0.5,
                        ";".join(f"{k}={v:.3g}" for k, v in res.measured.items()))


SUITE_RUNNERS: dict[str, Callable[..., Iterator[Check]]] = {
    "kernel": kernel_checks,
    "curvature": curvature_checks,
    "catalog": catalog_checks,
    "classify": classify_checks,
}


def run_suite(name: str, **kw) -> list[Check]:
    """Run one suite ("all" runs every suite).  Keyword arguments go to the suite runner."""
    if name == "all":
        return [c for s in SUITES for c in SUITE_RUNNERS[s]()]
    try:
        runner = SUITE_RUNNERS[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; expected one of {SUITES + ('all',)}") from None
    return list(runner(**kw))


def format_report(checks: list[Check]) -> str:
    return "\n".join([HEADER] + [c.row() for c in checks]) + "\n"
