"""Qualitative classification of invariant surfaces and numerical checks of each claim.

`classify` maps a curvature condition (plus, where the answer depends on
it, the initial state of the generating curve) to a case label carrying a
set of predicates.  `verify_label` measures each predicate on an
integrated trajectory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .curvature import CurveState
from .ode import (CMC, CurvatureCondition, ExtrinsicK, IntrinsicK, PrincipalRatio,
                  ReachedRangeEnd, SingularEndpoint, Trajectory)

BRANCH_TOL = 1e-12
VERTICAL_TOL = 1e-3
ASYMPTOTE_Z = 8.0


class Prop(str, Enum):
    LeafF2 = "LeafF2"
    LeafF3 = "LeafF3"
    LogGraph = "LogGraph"
    GraphSingleMin = "GraphSingleMin"
    GraphSingleMax = "GraphSingleMax"
    MonotoneGraphHalfLine = "MonotoneGraphHalfLine"
    BoundedDomainVerticalEnds = "BoundedDomainVerticalEnds"
    AsymptoticTwoVerticalLines = "AsymptoticTwoVerticalLines"
    AsymptoticOneVerticalLine = "AsymptoticOneVerticalLine"
    PeriodicZ = "PeriodicZ"
    TranslationInvariantY = "TranslationInvariantY"
    SelfIntersecting = "SelfIntersecting"
    TurningVelocity = "TurningVelocity"
    EntireGraph = "EntireGraph"


class ClassificationError(ValueError):
    pass


@dataclass(frozen=True)
class CaseLabel:
    condition: CurvatureCondition
    label: str
    properties: frozenset[Prop]
    note: str = ""
    delegated: bool = False

    def __str__(self) -> str:
        props = ",".join(sorted(p.value for p in self.properties)) or "-"
        return f"{self.label} [{props}]"


def _case(condition, label, *props, note="", delegated=False) -> CaseLabel:
    return CaseLabel(condition, label, frozenset(props), note, delegated)


def _need_branch(condition, branch, what: str):
    if branch is None:
        raise ClassificationError(
            f"{condition.label()} is branch dependent: pass branch_data (an initial CurveState) "
            f"to decide {what}")


def _minimal(condition, branch: Optional[CurveState], prefix: str = "minimal") -> CaseLabel:
    if branch is not None:
        if abs(math.cos(branch.theta)) < BRANCH_TOL:
            return _case(condition, f"{prefix}.f2_leaf", Prop.LeafF2)
        if abs(math.sin(branch.theta)) < BRANCH_TOL:
            return _case(condition, f"{prefix}.f3_leaf", Prop.LeafF3)
    return _case(condition, f"{prefix}.log_graph", Prop.LogGraph)


def _kint(cond: IntrinsicK, branch: Optional[CurveState]) -> CaseLabel:
    c = cond.c
    if branch is not None and abs(math.cos(branch.theta)) < BRANCH_TOL and c != -1:
        raise ClassificationError(f"{cond.label()}: cos(theta0) = 0 is only possible when c = -1")
    if c == 0:
        if branch is not None and abs(math.sin(branch.theta)) < BRANCH_TOL:
            return _case(cond, "kint.c=0.f3_leaf", Prop.LeafF3)
        return _case(cond, "kint.c=0.curve", Prop.MonotoneGraphHalfLine,
                     note="sin(theta) = 1/s, z = log s, s > 1")
    if c == -1:
        if branch is not None and abs(math.cos(branch.theta)) < BRANCH_TOL:
            return _case(cond, "kint.c=-1.f2_leaf", Prop.LeafF2)
        return _case(cond, "kint.c=-1.graph", Prop.GraphSingleMin, Prop.EntireGraph,
                     note="graph of z = log(cosh(y))")
    if -1 < c < 0:
        _need_branch(cond, branch, "the sign of sin^2(theta0) + c")
        sign = math.sin(branch.theta) ** 2 + c
        if abs(sign) < BRANCH_TOL:
            return _case(cond, "kint.log_graph", Prop.LogGraph)
        if sign < 0:
            return _case(cond, "kint.entire", Prop.GraphSingleMin, Prop.EntireGraph)
        return _case(cond, "kint.half_line", Prop.MonotoneGraphHalfLine)
    if c > 0:
        return _case(cond, "kint.bounded_max", Prop.BoundedDomainVerticalEnds, Prop.GraphSingleMax)
    return _case(cond, "kint.bounded_min", Prop.BoundedDomainVerticalEnds, Prop.GraphSingleMin)


def _kext(cond: ExtrinsicK, branch: Optional[CurveState]) -> CaseLabel:
    c = cond.c
    if branch is not None and abs(math.cos(branch.theta)) < BRANCH_TOL and c != 0:
        raise ClassificationError(f"{cond.label()}: cos(theta0) = 0 is only possible when c = 0")
    if c == 0:
        if branch is not None and abs(math.cos(branch.theta)) < BRANCH_TOL:
            return _case(cond, "kext.c=0.f2_leaf", Prop.LeafF2)
        return _case(cond, "kext.c=0.curve", Prop.GraphSingleMax, Prop.AsymptoticTwoVerticalLines,
                     note="y = tanh s, z = -log cosh s")
    if c == -1:
        if branch is not None and abs(math.sin(branch.theta)) < BRANCH_TOL:
            return _case(cond, "kext.c=-1.f3_leaf", Prop.LeafF3)
        return _case(cond, "kext.c=-1.curve", Prop.MonotoneGraphHalfLine, note="z = -log s, s > 1")
    if -1 < c < 0:
        _need_branch(cond, branch, "the sign of sin^2(theta0) - c - 1")
        sign = math.sin(branch.theta) ** 2 - c - 1
        if abs(sign) < BRANCH_TOL:
            return _case(cond, "kext.log_graph", Prop.LogGraph)
        if sign < 0:
            return _case(cond, "kext.two_asymptotes", Prop.GraphSingleMax, Prop.AsymptoticTwoVerticalLines)
        return _case(cond, "kext.one_asymptote", Prop.AsymptoticOneVerticalLine)
    if c > 0:
        return _case(cond, "kext.bounded_max", Prop.BoundedDomainVerticalEnds, Prop.GraphSingleMax)
    return _case(cond, "kext.bounded_min", Prop.BoundedDomainVerticalEnds, Prop.GraphSingleMin)


def _ratio(cond: PrincipalRatio, branch: Optional[CurveState]) -> CaseLabel:
    m = cond.m
    if branch is not None and abs(math.cos(branch.theta)) < BRANCH_TOL:
        return _case(cond, "ratio.f2_leaf", Prop.LeafF2)
    if m == 1:
        return _case(cond, "ratio.umbilical", delegated=True,
                     note="umbilical surfaces; out of scope, not verified here")
    if m == -1:
        return _minimal(cond, branch, prefix="ratio.minimal")
    if m == -2:
        return _case(cond, "ratio.logcosh", Prop.GraphSingleMin, Prop.EntireGraph,
                     note="graph of z = log(cosh(y))")
    if -2 < m < -1:
        return _case(cond, "ratio.entire_min", Prop.GraphSingleMin, Prop.EntireGraph)
    if m > -1:
        return _case(cond, "ratio.two_asymptotes_max", Prop.GraphSingleMax, Prop.AsymptoticTwoVerticalLines)
    return _case(cond, "ratio.two_asymptotes_min", Prop.GraphSingleMin, Prop.AsymptoticTwoVerticalLines)


def classify(condition: CurvatureCondition, branch_data: Optional[CurveState] = None) -> CaseLabel:
    """Qualitative case for a condition.

    branch_data is only required where several generic cases share the same
    constants (c in (-1, 0) for both Gaussian conditions); elsewhere it only
    selects the degenerate leaf cases.
    """
    if isinstance(condition, CMC):
        if condition.H == 0:
            return _minimal(condition, branch_data)
        return _case(condition, "cmc.periodic", Prop.PeriodicZ, Prop.TranslationInvariantY,
                     Prop.SelfIntersecting, Prop.TurningVelocity,
                     note=f"period T = pi/|H| = {math.pi / abs(condition.H):.17g}")
    if isinstance(condition, IntrinsicK):
        return _kint(condition, branch_data)
    if isinstance(condition, ExtrinsicK):
        return _kext(condition, branch_data)
    if isinstance(condition, PrincipalRatio):
        return _ratio(condition, branch_data)
    raise ClassificationError(f"classification is not supported for {condition.label()}")


# Verification ----------------------------------------------------------------------

@dataclass
class PredicateResult:
    predicate: Prop
    passed: bool
    measured: dict[str, float] = field(default_factory=dict)
    detail: str = ""


@dataclass
class VerificationReport:
    label: CaseLabel
    results: list[PredicateResult]
    tol: float

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_rows(self) -> list[dict]:
        return [{"label": self.label.label, "condition": self.label.condition.label(),
                 "predicate": r.predicate.value, "status": "pass" if r.passed else "fail",
                 "measured": ";".join(f"{k}={v:.6g}" for k, v in r.measured.items()),
                 "detail": r.detail} for r in self.results]

    def to_text(self) -> str:
        cols = ("label", "condition", "predicate", "status", "measured", "detail")
        lines = ["\t".join(cols)]
        lines += ["\t".join(str(row[c]) for c in cols) for row in self.to_rows()]
        return "\n".join(lines) + "\n"


def _signs(values: np.ndarray, tol: float) -> np.ndarray:
    v = values[np.abs(values) > tol]
    return np.sign(v)


def _sign_changes(values: np.ndarray, tol: float) -> list[tuple[float, float]]:
    sg = _signs(values, tol)
    idx = np.nonzero(np.diff(sg))[0]
    return [(sg[i], sg[i + 1]) for i in idx]


def _vertical_end(traj: Trajectory, end: str) -> tuple[bool, float]:
    term = traj.termination if end == "hi" else traj.start_termination
    cos_end = abs(math.cos(traj.theta[-1 if end == "hi" else 0]))
    return isinstance(term, SingularEndpoint) and cos_end < VERTICAL_TOL, cos_end


def _asymptote(traj: Trajectory, end: str, tol: float) -> tuple[bool, dict[str, float]]:
    """y converges while |z| grows without bound towards one end of the run.

    The Cauchy tail of y is measured over doubling windows anchored at the
    other end (or the middle of a two-sided run): increments d1, d2, d3 over
    [D/8, D/4], [D/4, D/2], [D/2, D] must decay, and the geometric bound on
    what remains beyond the run, d3 r / (1 - r) with r = d3 / d2, must be
    below tol.  Reading the limit off a single window would need runs so
    long that e^z times the rounding of theta near +-pi/2 swamps y'.
    """
    term = traj.termination if end == "hi" else traj.start_termination
    s_end = float(traj.s[-1] if end == "hi" else traj.s[0])
    if traj.singular_ends:
        anchor = float(traj.s[0] if end == "hi" else traj.s[-1])
    else:
        anchor = 0.5 * float(traj.s[0] + traj.s[-1])
    marks = anchor + (s_end - anchor) * np.array([0.0, 0.125, 0.25, 0.5, 1.0])
    y, z, _ = traj.at(marks)
    d1, d2, d3 = np.abs(np.diff(y[1:]))
    tiny = 1e3 * np.finfo(float).eps * (1.0 + float(np.max(np.abs(y))))
    if d3 <= tiny:
        rate, remainder = 0.0, float(d3)
    else:
        rate = float(d3 / d2) if d2 > 0 else math.inf
        remainder = rate * float(d3) / (1.0 - rate) if rate < 1 else math.inf
    i_half = int(np.searchsorted(traj.s, marks[3]))
    z_tail = traj.z[i_half:] if end == "hi" else traj.z[:i_half + 1][::-1]
    growth = abs(float(z[-1])) - abs(float(z[0]))
    monotone = bool(np.all(np.diff(np.abs(z_tail)) >= -tol))
    decaying = d3 <= tiny or (d3 < d2 < d1)
    ok = (isinstance(term, ReachedRangeEnd) and decaying and remainder < tol
          and growth > ASYMPTOTE_Z and monotone)
    return ok, {f"y_tail_{end}": float(d3), f"tail_rate_{end}": rate,
                f"y_remainder_{end}": remainder, f"z_growth_{end}": growth}


def segments_intersection(pts: np.ndarray, window: Optional[np.ndarray] = None):
    """First proper crossing between non-adjacent polyline segments.

    `window` optionally restricts the first segment of each pair to a boolean mask.
    Returns (i, j, point) or None.
    """
    p, q = pts[:-1], pts[1:]
    lo = np.minimum(p, q)
    hi = np.maximum(p, q)
    n = len(p)
    candidates = range(n) if window is None else np.nonzero(window[:n])[0]
    for i in candidates:
        j = np.arange(i + 2, n)
        if i == 0 and len(j) and np.allclose(q[-1], p[0]):
            j = j[:-1]
        if not len(j):
            continue
        box = ((lo[j, 0] <= hi[i, 0]) & (hi[j, 0] >= lo[i, 0])
               & (lo[j, 1] <= hi[i, 1]) & (hi[j, 1] >= lo[i, 1]))
        j = j[box]
        if not len(j):
            continue
        r = q[i] - p[i]
        sv = q[j] - p[j]
        denom = r[0] * sv[:, 1] - r[1] * sv[:, 0]
        ok = np.abs(denom) > 1e-300
        if not np.any(ok):
            continue
        j, sv, denom = j[ok], sv[ok], denom[ok]
        d = p[j] - p[i]
        t = (d[:, 0] * sv[:, 1] - d[:, 1] * sv[:, 0]) / denom
        u = (d[:, 0] * r[1] - d[:, 1] * r[0]) / denom
        hit = (t > 0) & (t < 1) & (u > 0) & (u < 1)
        if np.any(hit):
            k = int(np.argmax(hit))
            return int(i), int(j[k]), p[i] + t[k] * r
    return None


def _check(pred: Prop, label: CaseLabel, traj: Trajectory, tol: float) -> PredicateResult:
    s, y, z, th = traj.s, traj.y, traj.z, traj.theta
    cos_t, sin_t = np.cos(th), np.sin(th)

    if pred is Prop.LeafF2:
        m = {"max_abs_cos": float(np.max(np.abs(cos_t))), "y_range": float(np.ptp(y))}
        return PredicateResult(pred, m["max_abs_cos"] < tol and m["y_range"] < tol, m)

    if pred is Prop.LeafF3:
        m = {"max_abs_sin": float(np.max(np.abs(sin_t))), "z_range": float(np.ptp(z))}
        return PredicateResult(pred, m["max_abs_sin"] < tol and m["z_range"] < tol, m)

    if pred is Prop.LogGraph:
        th0 = float(th[0])
        sin0, cos0 = math.sin(th0), math.cos(th0)
        m = {"theta_range": float(np.ptp(th)), "abs_sin_cos": abs(sin0 * cos0)}
        if m["abs_sin_cos"] <= tol:
            return PredicateResult(pred, False, m, "theta0 is a leaf direction")
        # dy/dz = e^z cot(theta0), so y - cot(theta0) e^z is constant
        shift = y - cos0 / sin0 * np.exp(z)
        m["log_fit_defect"] = float(np.ptp(shift) / (1.0 + np.max(np.abs(y))))
        ok = m["theta_range"] < tol and m["log_fit_defect"] < tol
        return PredicateResult(pred, ok, m, "z = log(tan(theta0) (y - y_c))")

    if pred in (Prop.GraphSingleMin, Prop.GraphSingleMax):
        changes = _sign_changes(sin_t, tol)
        want = (-1.0, 1.0) if pred is Prop.GraphSingleMin else (1.0, -1.0)
        graph = len(set(_signs(cos_t, 0.0))) == 1
        m = {"z_prime_sign_changes": float(len(changes)), "min_abs_cos": float(np.min(np.abs(cos_t)))}
        ok = graph and len(changes) == 1 and changes[0] == want
        return PredicateResult(pred, ok, m)

    if pred is Prop.EntireGraph:
        dy = np.abs(traj.dy)
        both_open = not traj.singular_ends
        monotone = len(set(_signs(cos_t, 0.0))) == 1
        m = {"min_abs_y_prime": float(np.min(dy)), "y_span": float(np.ptp(y))}
        ok = both_open and monotone and m["min_abs_y_prime"] > tol
        return PredicateResult(pred, ok, m, "|y'| bounded below on an unbounded s-range")

    if pred is Prop.MonotoneGraphHalfLine:
        z_mono = len(set(_signs(sin_t, 0.0))) == 1
        y_mono = len(set(_signs(cos_t, 0.0))) == 1
        vert_lo, c_lo = _vertical_end(traj, "lo")
        vert_hi, c_hi = _vertical_end(traj, "hi")
        m = {"singular_ends": float(traj.singular_ends), "end_abs_cos": min(c_lo, c_hi)}
        ok = z_mono and y_mono and traj.singular_ends == 1 and (vert_lo or vert_hi)
        return PredicateResult(pred, ok, m)

    if pred is Prop.BoundedDomainVerticalEnds:
        vert_lo, c_lo = _vertical_end(traj, "lo")
        vert_hi, c_hi = _vertical_end(traj, "hi")
        m = {"s_length": float(s[-1] - s[0]), "cos_lo": c_lo, "cos_hi": c_hi,
             "y_range": float(np.ptp(y)), "z_range": float(np.ptp(z))}
        ok = vert_lo and vert_hi and np.all(np.isfinite(y)) and np.all(np.isfinite(z))
        return PredicateResult(pred, bool(ok), m)

    if pred is Prop.AsymptoticTwoVerticalLines:
        ok_lo, m_lo = _asymptote(traj, "lo", tol)
        ok_hi, m_hi = _asymptote(traj, "hi", tol)
        return PredicateResult(pred, ok_lo and ok_hi, {**m_lo, **m_hi})

    if pred is Prop.AsymptoticOneVerticalLine:
        vert_lo, c_lo = _vertical_end(traj, "lo")
        vert_hi, c_hi = _vertical_end(traj, "hi")
        if vert_lo == vert_hi:
            return PredicateResult(pred, False, {"cos_lo": c_lo, "cos_hi": c_hi},
                                   "need exactly one vertical end")
        ok, m = _asymptote(traj, "hi" if vert_lo else "lo", tol)
        m["end_abs_cos"] = c_lo if vert_lo else c_hi
        return PredicateResult(pred, ok, m)

    if pred in (Prop.PeriodicZ, Prop.TranslationInvariantY):
        H = label.condition.H
        T = math.pi / abs(H)
        if s[-1] - s[0] <= T:
            return PredicateResult(pred, False, {}, "trajectory shorter than one period")
        grid = np.linspace(s[0], s[-1] - T, 2001)
        y0, z0, _ = traj.at(grid)
        y1, z1, _ = traj.at(grid + T)
        if pred is Prop.PeriodicZ:
            m = {"period": T, "sup_z_defect": float(np.max(np.abs(z1 - z0)))}
            return PredicateResult(pred, m["sup_z_defect"] < tol, m)
        d = y1 - y0
        m = {"period": T, "y_shift": float(np.mean(d)), "y_shift_spread": float(np.ptp(d)),
             "y_shift_variance": float(np.var(d))}
        return PredicateResult(pred, m["y_shift_spread"] < tol, m)

    if pred is Prop.SelfIntersecting:
        T = math.pi / abs(label.condition.H)
        if s[-1] - s[0] < T:
            return PredicateResult(pred, False, {}, "trajectory shorter than one period")
        dense = np.linspace(s[0], s[-1], max(4000, int(2000 * (s[-1] - s[0]) / T)))
        yy, zz, _ = traj.at(dense)
        pts = np.column_stack([yy, zz])
        hit = segments_intersection(pts, window=dense <= s[0] + T)
        if hit is None:
            return PredicateResult(pred, False, {"crossings": 0.0})
        i, j, pt = hit
        m = {"s_first": float(dense[i]), "s_second": float(dense[j]), "y": float(pt[0]), "z": float(pt[1])}
        return PredicateResult(pred, True, m)

    if pred is Prop.TurningVelocity:
        d = np.diff(th)
        monotone = bool(np.all(d > 0) or np.all(d < 0))
        m = {"theta_range": float(np.ptp(th))}
        return PredicateResult(pred, monotone and m["theta_range"] > 2 * math.pi, m,
                               "theta strictly monotone, sweeping more than a full turn")

    raise ClassificationError(f"no check for {pred}")


def verify_label(label: CaseLabel, trajectory: Trajectory, tol: float = 1e-6) -> VerificationReport:
    if trajectory.condition != label.condition:
        raise ClassificationError(
            f"trajectory integrated under {trajectory.condition.label()}, label is for {label.condition.label()}")
    results = [_check(p, label, trajectory, tol) for p in sorted(label.properties, key=lambda p: p.value)]
    return VerificationReport(label, results, tol)


# Documented grid -------------------------------------------------------------------

@dataclass(frozen=True)
class GridCase:
    """One classification case: a condition, a starting state selecting the branch, and an s-window."""

    condition: CurvatureCondition
    initial: CurveState
    s_min: float
    s_max: float
    expected: str

    def trajectory(self, opts=None) -> Trajectory:
        from .ode import integrate_span
        return integrate_span(self.condition, self.initial, self.s_min, self.s_max, opts)

    def run(self, tol: float = 1e-6, opts=None) -> VerificationReport:
        label = classify(self.condition, self.initial)
        if label.label != self.expected:
            raise ClassificationError(f"{self.condition.label()}: expected {self.expected}, got {label.label}")
        return verify_label(label, self.trajectory(opts), tol)


def _state(theta: float, s: float = 0.0, y: float = 0.0, z: float = 0.0) -> CurveState:
    return CurveState(s, y, z, theta)


GRID_H = (0.5, 1.0, 2.0)
GRID_C = (-3.0, -1.5, -1.0, -0.5, 0.0, 0.5, 2.0)
GRID_M = (-3.0, -2.0, -1.5, -1.0, 0.0, 2.0)


def classification_grid() -> list[GridCase]:
    """Every enumerated case over the documented constants, leaves and branches included."""
    q = math.pi / 4
    half = math.pi / 2
    cases = [
        GridCase(CMC(0.0), _state(half), -1.0, 1.0, "minimal.f2_leaf"),
        GridCase(CMC(0.0), _state(0.0), -1.0, 1.0, "minimal.f3_leaf"),
        GridCase(CMC(0.0), _state(q, y=1.0), -3.0, 3.0, "minimal.log_graph"),
    ]
    for H in GRID_H:
        T = math.pi / H
        cases.append(GridCase(CMC(H), _state(0.0, z=-0.5 / H), 0.0, 5 * T, "cmc.periodic"))

    for c in GRID_C:
        k = IntrinsicK(c)
        if c == 0:
            cases += [GridCase(k, _state(0.0), -1.0, 1.0, "kint.c=0.f3_leaf"),
                      GridCase(k, _state(math.pi / 6, s=2.0, z=math.log(2.0)), 0.0, 20.0, "kint.c=0.curve")]
        elif c == -1:
            cases += [GridCase(k, _state(half), -1.0, 1.0, "kint.c=-1.f2_leaf"),
                      GridCase(k, _state(0.0), -10.0, 10.0, "kint.c=-1.graph")]
        elif -1 < c < 0:
            cases += [GridCase(k, _state(math.asin(math.sqrt(-c))), -3.0, 3.0, "kint.log_graph"),
                      GridCase(k, _state(0.0), -10.0, 10.0, "kint.entire"),
                      GridCase(k, _state(1.2), -10.0, 10.0, "kint.half_line")]
        else:
            cases.append(GridCase(k, _state(0.0), -5.0, 5.0, "kint.bounded_max" if c > 0 else "kint.bounded_min"))

    for c in GRID_C:
        k = ExtrinsicK(c)
        if c == 0:
            cases += [GridCase(k, _state(half), -1.0, 1.0, "kext.c=0.f2_leaf"),
                      GridCase(k, _state(0.0), -20.0, 20.0, "kext.c=0.curve")]
        elif c == -1:
            cases += [GridCase(k, _state(0.0), -1.0, 1.0, "kext.c=-1.f3_leaf"),
                      GridCase(k, _state(-math.pi / 6, s=2.0, z=-math.log(2.0)), 0.0, 20.0, "kext.c=-1.curve")]
        elif -1 < c < 0:
            cases += [GridCase(k, _state(math.asin(math.sqrt(c + 1))), -3.0, 3.0, "kext.log_graph"),
                      GridCase(k, _state(0.0), -50.0, 50.0, "kext.two_asymptotes"),
                      GridCase(k, _state(1.2), -50.0, 50.0, "kext.one_asymptote")]
        else:
            cases.append(GridCase(k, _state(0.0), -5.0, 5.0, "kext.bounded_max" if c > 0 else "kext.bounded_min"))

    spans = {-3.0: 20.0, -2.0: 10.0, -1.5: 10.0, 0.0: 20.0, 2.0: 10.0}
    for m in GRID_M:
        r = PrincipalRatio(m)
        if m == -1:
            cases += [GridCase(r, _state(q, y=1.0), -3.0, 3.0, "ratio.minimal.log_graph"),
                      GridCase(r, _state(0.0), -1.0, 1.0, "ratio.minimal.f3_leaf")]
            continue
        expected = classify(r).label
        cases.append(GridCase(r, _state(0.0), -spans[m], spans[m], expected))
    cases.append(GridCase(PrincipalRatio(-3.0), _state(half), -1.0, 1.0, "ratio.f2_leaf"))
    return cases
