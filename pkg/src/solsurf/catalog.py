"""Closed-form generating curves, each paired with the curvature condition it solves.

Formulas are written with numpy ufuncs so they accept complex arguments:
derivatives for the residual gate are taken by complex-step differentiation,
f'(s) = Im f(s + i h) / h, which is exact to rounding and needs no stencil
that could straddle a domain endpoint.

Where a formula admits more than one reading, the family constructor lists
every candidate and `_resolve` keeps the one with the smallest residual.  The outcome is recorded in the entry description and
in RESOLUTIONS.
"""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .curvature import CurveState
from .ode import (CMC, CurvatureCondition, ExtrinsicK, IntrinsicK, PrincipalRatio,
                  ReachedRangeEnd, Trajectory, residual)

Formula = Callable[[np.ndarray], np.ndarray]

_CSTEP = 1e-30
INTERIOR_MARGIN = 1e-3
GATE = 1e-9


class CatalogError(ValueError):
    """Unknown entry id, parameter outside a family's range, or s outside a domain."""


def complex_step(f: Formula, s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    return np.imag(f(s + 1j * _CSTEP)) / _CSTEP


@dataclass(frozen=True, eq=False)
class ClosedFormSolution:
    id: str
    condition: CurvatureCondition
    domain: tuple[float, float]
    theta: Formula
    z: Formula
    y: Optional[Formula]
    description: str
    window: tuple[float, float]
    y_origin: float = 0.0
    vertical_ends: tuple[str, ...] = ()

    def contains(self, s: float) -> bool:
        lo, hi = self.domain
        return lo < s < hi

    def _y_values(self, s: np.ndarray) -> np.ndarray:
        """Quadrature y at many points: integrate between consecutive sorted nodes and accumulate."""
        order = np.argsort(s)
        nodes = s[order]
        out = np.empty_like(nodes)
        o = self.y_origin
        right = np.searchsorted(nodes, o)
        for idx, prev in ((range(right, len(nodes)), o), (range(right - 1, -1, -1), o)):
            acc = 0.0
            for i in idx:
                acc += _quad(self, prev, float(nodes[i]))
                prev = float(nodes[i])
                out[i] = acc
        result = np.empty_like(out)
        result[order] = out
        return result

    def arrays(self, s) -> dict[str, np.ndarray]:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        theta = self.theta(s)
        z = self.z(s)
        if self.y is not None:
            y = self.y(s)
            dy = complex_step(self.y, s)
        else:
            y = self._y_values(s)
            dy = np.exp(z) * np.cos(theta)
        return {"s": s, "y": np.asarray(y, dtype=float), "z": z, "theta": theta,
                "dy": dy, "dz": complex_step(self.z, s), "dtheta": complex_step(self.theta, s)}

    def eval(self, s: float) -> CurveState:
        if not self.contains(s):
            raise CatalogError(f"s={s} outside domain {self.domain} of {self.id}")
        a = self.arrays([s])
        return CurveState(float(s), float(a["y"][0]), float(a["z"][0]), float(a["theta"][0]),
                          (float(a["dy"][0]), float(a["dz"][0]), float(a["dtheta"][0])))

    def interior_window(self, margin: float = INTERIOR_MARGIN) -> tuple[float, float]:
        lo = max(self.window[0], self.domain[0] + margin)
        hi = min(self.window[1], self.domain[1] - margin)
        return lo, hi

    def sample(self, n: int = 1000, margin: float = INTERIOR_MARGIN) -> Trajectory:
        """Wrap n interior samples of the closed form as a Trajectory."""
        lo, hi = self.interior_window(margin)
        a = self.arrays(np.linspace(lo, hi, n))
        return Trajectory(a["s"], a["y"], a["z"], a["theta"], a["dy"], a["dz"], a["dtheta"],
                          self.condition, ReachedRangeEnd(hi), ReachedRangeEnd(lo))

    def residual(self, n: int = 1000) -> float:
        with np.errstate(all="ignore"):
            r = residual(self.condition, self.sample(n))
        return r if math.isfinite(r) else math.inf


def quadrature_y(solution: ClosedFormSolution, s: float) -> float:
    """y(s) = integral from y_origin to s of e^{z} cos(theta), by adaptive quadrature."""
    if not (solution.contains(s) or s == solution.y_origin):
        raise CatalogError(f"s={s} outside domain {solution.domain} of {solution.id}")
    return _quad(solution, solution.y_origin, s)


def _quad(solution: ClosedFormSolution, a: float, b: float) -> float:
    if a == b:
        return 0.0

    def integrand(t: float) -> float:
        return float(np.exp(solution.z(np.array(t))) * np.cos(solution.theta(np.array(t))))

    val, _ = quad(integrand, a, b, epsabs=1e-13, epsrel=1e-13, limit=500)
    return val


# Candidate resolution ------------------------------------------------------------

@dataclass(frozen=True)
class Candidate:
    label: str
    theta: Formula
    z: Formula
    y: Optional[Formula] = None


@dataclass
class Resolution:
    id: str
    chosen: str
    chosen_residual: float
    rejected: list[tuple[str, float]] = field(default_factory=list)


RESOLUTIONS: dict[str, Resolution] = {}


def _resolve(id: str, candidates: list[Candidate], **common) -> ClosedFormSolution:
    scored = []
    for cand in candidates:
        sol = ClosedFormSolution(id=id, theta=cand.theta, z=cand.z, y=cand.y, **common)
        with warnings.catch_warnings():
            # losing candidates may leave the real domain; quad then sees nan
            warnings.simplefilter("ignore", IntegrationWarning)
            scored.append((sol.residual(), cand, sol))
    scored.sort(key=lambda item: item[0])
    best_r, best, sol = scored[0]
    res = Resolution(id, best.label, best_r, [(c.label, r) for r, c, _ in scored[1:]])
    RESOLUTIONS[id] = res
    if len(candidates) > 1:
        losers = "; ".join(f"{lab} (residual {r:.1e})" for lab, r in res.rejected)
        note = f" Candidate chosen by residual gate: {best.label} (residual {best_r:.1e}); rejected: {losers}."
        sol = ClosedFormSolution(id=id, theta=best.theta, z=best.z, y=best.y,
                                 **{**common, "description": common["description"] + note})
    return sol


def _fmt(v: float) -> str:
    return f"{v:g}"


def _require(cond: bool, msg: str):
    if not cond:
        raise CatalogError(msg)


def _gd(x):
    """Gudermannian: arcsin(tanh x) = 2 arctan(tanh(x/2)), analytic on the real line."""
    return 2.0 * np.arctan(np.tanh(0.5 * x))


_INF = math.inf


# Minimal surfaces and leaves -------------------------------------------------------

def f2_leaf(condition: Optional[CurvatureCondition] = None, sign: int = 1) -> ClosedFormSolution:
    condition = condition or CMC(0.0)
    th = sign * math.pi / 2
    return ClosedFormSolution(
        id=f"{_prefix(condition)}.f2_leaf", condition=condition, domain=(-_INF, _INF),
        theta=lambda s: th + 0 * s, z=lambda s: sign * s, y=lambda s: 0 * s,
        description="Leaf of the y = const foliation: vertical line y = 0, theta = +-pi/2. "
                    "Totally geodesic; kappa1 = kappa2 = 0.",
        window=(-5.0, 5.0))


def f3_leaf(condition: Optional[CurvatureCondition] = None) -> ClosedFormSolution:
    condition = condition or CMC(0.0)
    return ClosedFormSolution(
        id=f"{_prefix(condition)}.f3_leaf", condition=condition, domain=(-_INF, _INF),
        theta=lambda s: 0 * s, z=lambda s: 0 * s, y=lambda s: s,
        description="Leaf of the z = const foliation: horizontal line z = 0, y = s. Flat and minimal.",
        window=(-5.0, 5.0))


def log_graph(theta0: float = math.pi / 4, condition: Optional[CurvatureCondition] = None,
              id: Optional[str] = None) -> ClosedFormSolution:
    _require(math.sin(theta0) * math.cos(theta0) != 0, "log graph needs sin(theta0) cos(theta0) != 0")
    condition = condition or CMC(0.0)
    st, ct = math.sin(theta0), math.cos(theta0)
    return ClosedFormSolution(
        id=id or f"{_prefix(condition)}.log_graph", condition=condition, domain=(-_INF, _INF),
        theta=lambda s: theta0 + 0 * s, z=lambda s: st * s, y=lambda s: (ct / st) * np.exp(st * s),
        description=f"theta = {theta0:.17g} constant, z = sin(theta0) s, y = cot(theta0) e^(sin(theta0) s): "
                    f"the graph z = log(tan(theta0) y).",
        window=(-5.0, 5.0))


def _prefix(condition: CurvatureCondition) -> str:
    if isinstance(condition, CMC):
        return "minimal" if condition.H == 0 else f"cmc.H={_fmt(condition.H)}"
    key = {IntrinsicK: "c", ExtrinsicK: "c", PrincipalRatio: "m"}.get(type(condition))
    if key is None:
        return condition.name
    return f"{condition.name}.{key}={_fmt(getattr(condition, key))}"


# Constant mean curvature ------------------------------------------------------------

def cmc(H: float = 1.0) -> ClosedFormSolution:
    _require(H != 0, "cmc family needs H != 0 (H = 0 is the minimal case)")
    T = math.pi / abs(H)
    return ClosedFormSolution(
        id=f"cmc.H={_fmt(H)}", condition=CMC(H), domain=(-_INF, _INF),
        theta=lambda s: 2 * H * s, z=lambda s: -np.cos(2 * H * s) / (2 * H), y=None,
        description=f"theta = 2Hs, z = -cos(2Hs)/(2H), y by quadrature. z has period pi/H = {T:.6g}; "
                    "the curve is invariant under a discrete group of y-translations, self-intersects, "
                    "and its velocity turns monotonically.",
        window=(-T, 2 * T))


# Constant intrinsic curvature ------------------------------------------------------

def kint_zero() -> ClosedFormSolution:
    return _resolve(
        "kint.c=0.curve",
        [Candidate("sin(theta) = 1/s, z = log s",
                   theta=lambda s: np.arcsin(1 / s), z=lambda s: np.log(s),
                   y=lambda s: 0.5 * (s * np.sqrt(s * s - 1) - np.log(s + np.sqrt(s * s - 1))))],
        condition=IntrinsicK(0.0), domain=(1.0, _INF),
        description="K_int = 0: sin(theta) = 1/s, z = log s, "
                    "y = (s sqrt(s^2-1) - log(s + sqrt(s^2-1)))/2 for s > 1; vertical at s = 1.",
        window=(1.0, 10.0), y_origin=1.0, vertical_ends=("lo",))


def kint_logcosh() -> ClosedFormSolution:
    return ClosedFormSolution(
        id="kint.c=-1.graph", condition=IntrinsicK(-1.0), domain=(-_INF, _INF),
        theta=_gd, z=lambda s: np.log(np.cosh(s)), y=lambda s: s,
        description="K_int = -1: sin(theta) = tanh s, z = log cosh s, y = s; the graph z = log(cosh(y)).",
        window=(-10.0, 10.0))


def kint_log_graph(c: float) -> ClosedFormSolution:
    _require(-1 < c < 0, f"kint log-graph branch needs c in (-1, 0), got {c}")
    return log_graph(math.asin(math.sqrt(-c)), IntrinsicK(c))


def kint_entire(c: float) -> ClosedFormSolution:
    _require(-1 < c < 0, f"kint entire-graph branch needs c in (-1, 0), got {c}")
    k = math.sqrt(-c)
    sin_form = lambda s: np.arcsin(k * np.tanh(k * s))  # noqa: E731
    return _resolve(
        f"kint.c={_fmt(c)}.entire",
        [Candidate("z = log cosh(ks)", sin_form, lambda s: np.log(np.cosh(k * s))),
         Candidate("z = log cosh(ks)/k", sin_form, lambda s: np.log(np.cosh(k * s)) / k)],
        condition=IntrinsicK(c), domain=(-_INF, _INF),
        description=f"K_int = c in (-1,0), sin^2(theta) + c < 0: sin(theta) = k tanh(ks), k = sqrt(-c) = {k:.6g}; "
                    "entire graph with a single minimum at s = 0; y by quadrature.",
        window=(-10.0, 10.0))


def kint_half_line(c: float) -> ClosedFormSolution:
    _require(-1 < c < 0, f"kint half-line branch needs c in (-1, 0), got {c}")
    k = math.sqrt(-c)
    a = math.atanh(k) / k
    z = lambda s: np.log(np.sinh(k * s))  # noqa: E731
    return _resolve(
        f"kint.c={_fmt(c)}.half_line",
        [Candidate("sin(theta) = k coth(ks)", lambda s: np.arcsin(k / np.tanh(k * s)), z),
         Candidate("sin(theta) = k cot(ks)", lambda s: np.arcsin(k / np.tan(k * s)), z)],
        condition=IntrinsicK(c), domain=(a, _INF),
        description=f"K_int = c in (-1,0), sin^2(theta) + c > 0: z = log sinh(ks), k = {k:.6g}, "
                    f"s > artanh(k)/k = {a:.6g}; monotone graph over a half-line, vertical at the finite end; "
                    "y by quadrature from s = a + 1.",
        window=(a, a + 10.0), y_origin=a + 1.0, vertical_ends=("lo",))


def kint_bounded(c: float) -> ClosedFormSolution:
    """c > 0 (single maximum) or c < -1 (single minimum); vertical at both ends."""
    if c > 0:
        k = math.sqrt(c)
        M = math.atan(1 / k) / k
        th = lambda s: np.arcsin(-k * np.tan(k * s))  # noqa: E731
        cands = [Candidate("z = log cos(ks)", th, lambda s: np.log(np.cos(k * s))),
                 Candidate("z = log cos(ks)/k", th, lambda s: np.log(np.cos(k * s)) / k)]
        text = f"K_int = c > 0: sin(theta) = -k tan(ks), z = log cos(ks), k = sqrt(c) = {k:.6g}; single maximum"
    elif c < -1:
        k = math.sqrt(-c)
        M = math.atanh(1 / k) / k
        th = lambda s: np.arcsin(k * np.tanh(k * s))  # noqa: E731
        cands = [Candidate("theta = k tanh(ks), z = log cosh(ks)",
                           lambda s: k * np.tanh(k * s), lambda s: np.log(np.cosh(k * s))),
                 Candidate("sin(theta) = k tanh(ks), z = log cosh(ks)", th, lambda s: np.log(np.cosh(k * s))),
                 Candidate("sin(theta) = k tanh(ks), z = log cosh(ks)/k", th,
                           lambda s: np.log(np.cosh(k * s)) / k)]
        text = f"K_int = c < -1: sin(theta) = k tanh(ks), z = log cosh(ks), k = sqrt(-c) = {k:.6g}; single minimum"
    else:
        raise CatalogError(f"kint bounded family needs c > 0 or c < -1, got {c}")
    return _resolve(
        f"kint.c={_fmt(c)}.bounded", cands, condition=IntrinsicK(c), domain=(-M, M),
        description=text + f"; domain |s| < {M:.6g}, vertical at both ends; y by quadrature.",
        window=(-M, M), vertical_ends=("lo", "hi"))


# Constant extrinsic curvature ---------------------------------------------------------

def kext_zero() -> ClosedFormSolution:
    return ClosedFormSolution(
        id="kext.c=0.curve", condition=ExtrinsicK(0.0), domain=(-_INF, _INF),
        theta=lambda s: -_gd(s), z=lambda s: -np.log(np.cosh(s)), y=np.tanh,
        description="K_ext = 0: sin(theta) = -tanh s, z = -log cosh s, y = tanh s; "
                    "single maximum, asymptotic to the vertical lines y = +-1.",
        window=(-10.0, 10.0))


def kext_minus_one() -> ClosedFormSolution:
    root = lambda s: np.sqrt(s * s - 1)  # noqa: E731
    return _resolve(
        "kext.c=-1.curve",
        [Candidate("y = -(s^2-1)/s + log(s + sqrt(s^2-1))", lambda s: np.arcsin(-1 / s), lambda s: -np.log(s),
                   lambda s: -(s * s - 1) / s + np.log(s + root(s))),
         Candidate("y = -sqrt(s^2-1)/s + log(s + sqrt(s^2-1))", lambda s: np.arcsin(-1 / s),
                   lambda s: -np.log(s), lambda s: -root(s) / s + np.log(s + root(s)))],
        condition=ExtrinsicK(-1.0), domain=(1.0, _INF),
        description="K_ext = -1: sin(theta) = -1/s, z = -log s for s > 1; vertical at s = 1.",
        window=(1.0, 10.0), y_origin=1.0, vertical_ends=("lo",))


def kext_log_graph(c: float) -> ClosedFormSolution:
    _require(-1 < c < 0, f"kext log-graph branch needs c in (-1, 0), got {c}")
    return log_graph(math.asin(math.sqrt(c + 1)), ExtrinsicK(c))


def kext_two_asymptotes(c: float) -> ClosedFormSolution:
    _require(-1 < c < 0, f"kext two-asymptote branch needs c in (-1, 0), got {c}")
    k = math.sqrt(c + 1)
    return ClosedFormSolution(
        id=f"kext.c={_fmt(c)}.two_asymptotes", condition=ExtrinsicK(c), domain=(-_INF, _INF),
        theta=lambda s: np.arcsin(-k * np.tanh(k * s)), z=lambda s: -np.log(np.cosh(k * s)), y=None,
        description=f"K_ext = c in (-1,0), sin^2(theta) < c + 1: sin(theta) = -k tanh(ks), z = -log cosh(ks), "
                    f"k = sqrt(c+1) = {k:.6g}; single maximum, y bounded, asymptotic to two vertical lines.",
        window=(-10.0, 10.0))


def kext_one_asymptote(c: float) -> ClosedFormSolution:
    _require(-1 < c < 0, f"kext one-asymptote branch needs c in (-1, 0), got {c}")
    k = math.sqrt(c + 1)
    M = -math.atanh(k) / k
    return ClosedFormSolution(
        id=f"kext.c={_fmt(c)}.one_asymptote", condition=ExtrinsicK(c), domain=(-_INF, M),
        theta=lambda s: np.arcsin(-k / np.tanh(k * s)), z=lambda s: -np.log(np.sinh(-k * s)), y=None,
        description=f"K_ext = c in (-1,0), sin^2(theta) > c + 1: sin(theta) = -k coth(ks), z = -log sinh(-ks), "
                    f"k = {k:.6g}, s < -artanh(k)/k = {M:.6g}; monotone, vertical at the finite end, "
                    "asymptotic to one vertical line as s -> -inf; y by quadrature from s = M - 1.",
        window=(M - 10.0, M), y_origin=M - 1.0, vertical_ends=("hi",))


def kext_bounded(c: float) -> ClosedFormSolution:
    if c > 0:
        k = math.sqrt(c + 1)
        M = math.atanh(1 / k) / k
        theta = lambda s: np.arcsin(-k * np.tanh(k * s))  # noqa: E731
        z = lambda s: -np.log(np.cosh(k * s))  # noqa: E731
        text = f"K_ext = c > 0: sin(theta) = -k tanh(ks), z = -log cosh(ks), k = sqrt(c+1) = {k:.6g}; single maximum"
    elif c < -1:
        k = math.sqrt(-c - 1)
        M = math.atan(1 / k) / k
        theta = lambda s: np.arcsin(k * np.tan(k * s))  # noqa: E731
        z = lambda s: -np.log(np.cos(k * s))  # noqa: E731
        text = f"K_ext = c < -1: sin(theta) = k tan(ks), z = -log cos(ks), k = sqrt(-c-1) = {k:.6g}; single minimum"
    else:
        raise CatalogError(f"kext bounded family needs c > 0 or c < -1, got {c}")
    return ClosedFormSolution(
        id=f"kext.c={_fmt(c)}.bounded", condition=ExtrinsicK(c), domain=(-M, M), theta=theta, z=z, y=None,
        description=text + f"; domain |s| < {M:.6g}, vertical at both ends; y by quadrature.",
        window=(-M, M), vertical_ends=("lo", "hi"))


# kappa1 = m kappa2 ------------------------------------------------------------------

def principal_ratio(m: float) -> ClosedFormSolution:
    _require(m != -1, "ratio family needs m != -1 (m = -1 is the minimal case)")
    n = m + 1
    y = (lambda s: s) if m == -2 else None
    return ClosedFormSolution(
        id=f"ratio.m={_fmt(m)}.graph", condition=PrincipalRatio(m), domain=(-_INF, _INF),
        theta=lambda s: -2 * np.arctan(np.tanh(0.5 * n * s)),
        z=lambda s: -np.log(np.cosh(n * s)) / n, y=y,
        description=f"kappa1 = m kappa2, m = {m:g}: theta = -2 arctan(tanh((m+1)s/2)), sin(theta) = -tanh((m+1)s), "
                    "z = -log(cosh((m+1)s))/(m+1), y' = cosh((m+1)s)^(-(m+2)/(m+1))"
                    + ("; y = s, the graph z = log(cosh(y))." if m == -2 else "; y by quadrature."),
        window=(-10.0, 10.0))


# Registry ------------------------------------------------------------------------

@lru_cache(maxsize=None)
def catalog_entries() -> tuple[ClosedFormSolution, ...]:
    """Representative members of every family (parameterized families at sample constants)."""
    return (
        f2_leaf(), f3_leaf(), log_graph(),
        cmc(1.0), cmc(0.5), cmc(2.0),
        kint_zero(), f3_leaf(IntrinsicK(0.0)),
        kint_logcosh(), f2_leaf(IntrinsicK(-1.0)),
        kint_log_graph(-0.5), kint_entire(-0.5), kint_half_line(-0.5),
        kint_bounded(0.5), kint_bounded(2.0), kint_bounded(-1.5), kint_bounded(-3.0),
        kext_zero(), f2_leaf(ExtrinsicK(0.0)),
        kext_minus_one(), f3_leaf(ExtrinsicK(-1.0)),
        kext_log_graph(-0.5), kext_two_asymptotes(-0.5), kext_one_asymptote(-0.5),
        kext_bounded(0.5), kext_bounded(3.0), kext_bounded(-1.5), kext_bounded(-3.0),
        principal_ratio(-3.0), principal_ratio(-2.0), principal_ratio(-1.5),
        principal_ratio(0.0), principal_ratio(2.0), f2_leaf(PrincipalRatio(-3.0)),
    )


_FAMILIES: dict[tuple[str, str, str], Callable[[float], ClosedFormSolution]] = {
    ("cmc", "H", ""): cmc,
    ("kint", "c", "entire"): kint_entire,
    ("kint", "c", "half_line"): kint_half_line,
    ("kint", "c", "bounded"): kint_bounded,
    ("kint", "c", "log_graph"): kint_log_graph,
    ("kext", "c", "two_asymptotes"): kext_two_asymptotes,
    ("kext", "c", "one_asymptote"): kext_one_asymptote,
    ("kext", "c", "bounded"): kext_bounded,
    ("kext", "c", "log_graph"): kext_log_graph,
    ("ratio", "m", "graph"): principal_ratio,
}

_ID = re.compile(r"^(?P<fam>[a-z]+)\.(?P<key>[A-Za-z]+)=(?P<val>-?\d+(?:\.\d+)?(?:e-?\d+)?)(?:\.(?P<branch>[a-z_0-9]+))?$")


def find_entry(entry_id: str) -> ClosedFormSolution:
    """Look up an entry by id; parameterized families accept any valid constant."""
    for e in catalog_entries():
        if e.id == entry_id:
            return e
    m = _ID.match(entry_id)
    if m:
        ctor = _FAMILIES.get((m["fam"], m["key"], m["branch"] or ""))
        if ctor is not None:
            entry = ctor(float(m["val"]))
            if entry.id == entry_id or math.isclose(float(m["val"]), float(_ID.match(entry.id)["val"])):
                return entry
    raise CatalogError(f"unknown catalog id {entry_id!r}")
