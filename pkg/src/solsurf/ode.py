"""Generating-curve ODE closed by a curvature condition.

The curve satisfies y' = e^z cos(theta), z' = sin(theta); a curvature
condition fixes theta' as a function of theta alone, so the system is
autonomous.  Conditions whose theta' carries a 1/cos(theta) (or
1/(a - 2b cos(theta))) factor reach the zero set of that denominator in
finite arclength; integration stops there with a SingularEndpoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields as dc_fields
from functools import cached_property
from typing import Callable, ClassVar, Optional, Union

import numpy as np
from scipy.interpolate import BPoly, CubicHermiteSpline

from .curvature import CurvatureProfile, CurveState, curvature_profile, profile_arrays
from .rk import advance

STATIONARY_TOL = 1e-13
# cos(pi/2) evaluates to 6e-17, never exactly zero
_ZERO = 1e-15


class SingularInputError(ValueError):
    """theta' is undefined for this (condition, theta); `limit` describes its behavior there."""

    def __init__(self, message: str, limit: str = ""):
        super().__init__(message)
        self.limit = limit


class SingularStateError(ValueError):
    """The initial state lies on (or within singular_eps of) the condition's singular locus."""


class ConditionError(ValueError):
    """Constants outside the range where the condition defines an ODE."""


# Conditions ------------------------------------------------------------------

@dataclass(frozen=True)
class CurvatureCondition:
    name: ClassVar[str] = ""

    def theta_prime(self, theta: float) -> float:
        raise NotImplementedError

    def singular_function(self) -> Optional[Callable[[float], float]]:
        """Denominator g(theta) of theta'; None when theta' is smooth everywhere."""
        return None

    def singular_reason(self) -> str:
        return ""

    def relation(self, prof: dict[str, np.ndarray]) -> np.ndarray:
        """Defining relation evaluated on profile arrays; zero on solutions."""
        raise NotImplementedError

    def constants(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in dc_fields(self)}

    def label(self) -> str:
        args = ", ".join(f"{k}={v:g}" for k, v in self.constants().items())
        return f"{type(self).__name__}({args})"


@dataclass(frozen=True)
class CMC(CurvatureCondition):
    H: float
    name: ClassVar[str] = "cmc"

    def theta_prime(self, theta: float) -> float:
        return 2.0 * self.H

    def relation(self, prof):
        return prof["H"] - self.H


@dataclass(frozen=True)
class IntrinsicK(CurvatureCondition):
    c: float
    name: ClassVar[str] = "kint"

    def theta_prime(self, theta: float) -> float:
        cos_t = math.cos(theta)
        if self.c == -1.0:
            # -(sin^2 - 1)/cos = cos: the singularity is removable
            return cos_t
        if abs(cos_t) < _ZERO:
            raise SingularInputError(
                f"IntrinsicK({self.c:g}): cos(theta) = 0",
                limit=f"|theta'| -> inf (numerator c + sin^2 = {self.c + 1:g})")
        s = math.sin(theta)
        return -(self.c + s * s) / cos_t

    def singular_function(self):
        return None if self.c == -1.0 else math.cos

    def singular_reason(self):
        return "cos(theta) -> 0, theta' unbounded"

    def relation(self, prof):
        return prof["K_int"] - self.c


@dataclass(frozen=True)
class ExtrinsicK(CurvatureCondition):
    c: float
    name: ClassVar[str] = "kext"

    def theta_prime(self, theta: float) -> float:
        cos_t = math.cos(theta)
        if self.c == 0.0:
            return -cos_t
        if abs(cos_t) < _ZERO:
            raise SingularInputError(
                f"ExtrinsicK({self.c:g}): cos(theta) = 0",
                limit=f"|theta'| -> inf (numerator -c = {-self.c:g})")
        return -self.c / cos_t - cos_t

    def singular_function(self):
        return None if self.c == 0.0 else math.cos

    def singular_reason(self):
        return "cos(theta) -> 0, theta' unbounded"

    def relation(self, prof):
        return prof["K_ext"] - self.c


@dataclass(frozen=True)
class PrincipalRatio(CurvatureCondition):
    """kappa1 = m kappa2."""

    m: float
    name: ClassVar[str] = "ratio"

    def theta_prime(self, theta: float) -> float:
        return -(1.0 + self.m) * math.cos(theta)

    def relation(self, prof):
        return prof["kappa1"] - self.m * prof["kappa2"]


@dataclass(frozen=True)
class LinearWeingartenKappa(CurvatureCondition):
    """a kappa1 + b kappa2 = c."""

    a: float
    b: float
    c: float
    name: ClassVar[str] = "lw-kappa"

    def __post_init__(self):
        if self.a == 0.0 and self.b == 0.0:
            raise ConditionError("LinearWeingartenKappa requires (a, b) != (0, 0)")

    def theta_prime(self, theta: float) -> float:
        if self.a == 0.0:
            raise SingularInputError(
                "LinearWeingartenKappa with a = 0 does not determine theta'",
                limit="theta constant with cos(theta) = c/b")
        return (self.c - (self.a - self.b) * math.cos(theta)) / self.a

    def relation(self, prof):
        return self.a * prof["kappa1"] + self.b * prof["kappa2"] - self.c


@dataclass(frozen=True)
class LinearWeingartenHK(CurvatureCondition):
    """a H + b K_ext = c."""

    a: float
    b: float
    c: float
    name: ClassVar[str] = "lw-hk"

    def __post_init__(self):
        if self.a == 0.0 and self.b == 0.0:
            raise ConditionError("LinearWeingartenHK requires (a, b) != (0, 0)")

    def theta_prime(self, theta: float) -> float:
        cos_t = math.cos(theta)
        denom = self.a - 2.0 * self.b * cos_t
        if abs(denom) < _ZERO:
            raise SingularInputError(
                f"LinearWeingartenHK: a - 2b cos(theta) = 0 at theta={theta:g}",
                limit="|theta'| -> inf")
        return (2.0 * self.c + 2.0 * self.b * cos_t * cos_t) / denom

    def singular_function(self):
        a, b = self.a, self.b
        return lambda theta: a - 2.0 * b * math.cos(theta)

    def singular_reason(self):
        return "a - 2b cos(theta) -> 0, theta' unbounded"

    def relation(self, prof):
        return self.a * prof["H"] + self.b * prof["K_ext"] - self.c


CONDITIONS: dict[str, type[CurvatureCondition]] = {
    cls.name: cls for cls in (CMC, IntrinsicK, ExtrinsicK, PrincipalRatio,
                              LinearWeingartenKappa, LinearWeingartenHK)
}


def make_condition(name: str, constants: dict[str, float]) -> CurvatureCondition:
    """Build a condition from its CLI name and constants, validating ranges."""
    try:
        cls = CONDITIONS[name]
    except KeyError:
        raise ConditionError(f"unknown condition {name!r}; expected one of {sorted(CONDITIONS)}") from None
    fields = [f.name for f in dc_fields(cls)]
    missing = [f for f in fields if f not in constants]
    extra = [k for k in constants if k not in fields]
    if missing or extra:
        raise ConditionError(f"{name} takes constants {fields}; missing {missing}, unexpected {extra}")
    values = {}
    for k in fields:
        v = float(constants[k])
        if not math.isfinite(v):
            raise ConditionError(f"{name}: constant {k}={v} must be finite")
        values[k] = v
    if cls is LinearWeingartenKappa and values["a"] == 0.0:
        raise ConditionError("lw-kappa: a must be nonzero (a = 0 forces theta constant, no ODE)")
    return cls(**values)


def theta_prime(condition: CurvatureCondition, theta: float) -> float:
    return condition.theta_prime(theta)


# Trajectories ----------------------------------------------------------------

@dataclass(frozen=True)
class ReachedRangeEnd:
    s: float
    kind: ClassVar[str] = "ReachedRangeEnd"


@dataclass(frozen=True)
class SingularEndpoint:
    s_star: float
    reason: str
    bracket: tuple[float, float]
    kind: ClassVar[str] = "SingularEndpoint"


@dataclass(frozen=True)
class StepFailure:
    s: float
    diagnostic: str
    kind: ClassVar[str] = "StepFailure"


Termination = Union[ReachedRangeEnd, SingularEndpoint, StepFailure]


@dataclass(frozen=True)
class IntegratorOptions:
    tol: float = 1e-10
    singular_eps: float = 1e-8
    event_tol: float = 1e-10
    max_step: float = 0.05
    max_samples: int = 200_000

    def __post_init__(self):
        for name in ("tol", "singular_eps", "event_tol", "max_step"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ConditionError(f"integrator option {name}={v} must be positive")
        if self.max_samples < 2:
            raise ConditionError("integrator option max_samples must be at least 2")


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Integrated generating curve; arrays are sample-aligned and increasing in s.

    `termination` describes the end at the largest s, `start_termination`
    the end at the smallest s (two-sided runs from integrate_span).
    """

    s: np.ndarray
    y: np.ndarray
    z: np.ndarray
    theta: np.ndarray
    dy: np.ndarray
    dz: np.ndarray
    dtheta: np.ndarray
    condition: CurvatureCondition
    termination: Termination
    start_termination: Termination = field(default=None)

    def __post_init__(self):
        for name in ("s", "y", "z", "theta", "dy", "dz", "dtheta"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        if self.start_termination is None:
            object.__setattr__(self, "start_termination", ReachedRangeEnd(float(self.s[0])))

    def __len__(self) -> int:
        return len(self.s)

    def state(self, i: int) -> CurveState:
        return CurveState(float(self.s[i]), float(self.y[i]), float(self.z[i]), float(self.theta[i]),
                          (float(self.dy[i]), float(self.dz[i]), float(self.dtheta[i])))

    @property
    def samples(self) -> list[tuple[CurveState, CurvatureProfile]]:
        return [(self.state(i), curvature_profile(self.theta[i], self.dtheta[i])) for i in range(len(self))]

    def profile(self) -> dict[str, np.ndarray]:
        return profile_arrays(self.theta, self.dtheta)

    @cached_property
    def _splines(self):
        if len(self.s) < 2:
            return None
        # y'' and z'' follow exactly from the state, so y and z get quintic Hermite
        # pieces; theta'' would need the derivative of theta'(theta), so theta stays cubic
        cos_t, sin_t = np.cos(self.theta), np.sin(self.theta)
        ddy = self.dy * self.dz - np.exp(self.z) * sin_t * self.dtheta
        ddz = cos_t * self.dtheta
        quintic = [BPoly.from_derivatives(self.s, np.column_stack([v, dv, ddv]))
                   for v, dv, ddv in ((self.y, self.dy, ddy), (self.z, self.dz, ddz))]
        return quintic + [CubicHermiteSpline(self.s, self.theta, self.dtheta)]

    def at(self, s) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Dense output (y, z, theta) by Hermite interpolation between accepted steps."""
        s = np.asarray(s, dtype=float)
        if self._splines is None or np.any(s < self.s[0] - 1e-12) or np.any(s > self.s[-1] + 1e-12):
            raise ValueError(f"s outside trajectory range [{self.s[0]}, {self.s[-1]}]")
        return tuple(spl(s) for spl in self._splines)

    @property
    def singular_ends(self) -> int:
        return sum(isinstance(t, SingularEndpoint) for t in (self.termination, self.start_termination))


def _straight_branch(condition, initial: CurveState, s_max: float, opts: IntegratorOptions) -> Trajectory:
    """theta' vanishes identically: theta constant, curve known in closed form."""
    span = s_max - initial.s
    n = max(2, int(math.ceil(abs(span) / opts.max_step)) + 1) if span != 0 else 1
    s = np.linspace(initial.s, s_max, n)
    t = s - initial.s
    sin0, cos0 = math.sin(initial.theta), math.cos(initial.theta)
    ez0 = math.exp(initial.z)
    z = initial.z + sin0 * t
    if sin0 == 0.0:
        y = initial.y + ez0 * cos0 * t
    else:
        y = initial.y + ez0 * cos0 * np.expm1(sin0 * t) / sin0
    theta = np.full_like(s, initial.theta)
    dy = np.exp(z) * cos0
    dz = np.full_like(s, sin0)
    order = np.argsort(s)
    return Trajectory(s[order], y[order], z[order], theta[order], dy[order], dz[order],
                      np.zeros_like(s), condition, ReachedRangeEnd(float(s_max)))


def rhs(condition: CurvatureCondition):
    tp = condition.theta_prime

    def f(_s, u):
        th = u[2]
        return [math.exp(u[1]) * math.cos(th), math.sin(th), tp(th)]
    return f


def integrate(condition: CurvatureCondition, initial: CurveState, s_max: float,
              opts: Optional[IntegratorOptions] = None) -> Trajectory:
    """Integrate the generating curve from `initial` to s_max (either direction)."""
    opts = opts or IntegratorOptions()
    g = condition.singular_function()
    if g is not None and abs(g(initial.theta)) <= opts.singular_eps:
        raise SingularStateError(
            f"{condition.label()}: initial theta={initial.theta:.17g} is singular "
            f"(|g| = {abs(g(initial.theta)):.3e} <= singular_eps = {opts.singular_eps:g})")
    if abs(condition.theta_prime(initial.theta)) < STATIONARY_TOL:
        return _straight_branch(condition, initial, s_max, opts)

    f = rhs(condition)
    guard = (lambda u: g(u[2])) if g is not None else None
    kw = dict(tol=opts.tol, max_step=opts.max_step, max_samples=opts.max_samples,
              guard=guard, singular_eps=opts.singular_eps)
    run = advance(f, initial.s, [initial.y, initial.z, initial.theta], s_max, **kw)
    ss, us, dus = run.s, run.u, run.du
    direction = 1.0 if s_max >= initial.s else -1.0

    if run.status == "done":
        term: Termination = ReachedRangeEnd(float(s_max))
    elif run.status == "pinned":
        s_a, u_a = ss[-1], us[-1]
        s_b = run.crossed_at if run.crossed_at is not None else s_a + direction * max(run.h, 1e-14)
        while abs(s_b - s_a) > opts.event_tol:
            mid = 0.5 * (s_a + s_b)
            sub = advance(f, s_a, u_a, mid, h0=abs(mid - s_a), include_start=False, **kw)
            ss += sub.s
            us += sub.u
            dus += sub.du
            if sub.s:
                s_a, u_a = sub.s[-1], sub.u[-1]
            if sub.status != "done":
                s_b = mid
        lo, hi = sorted((s_a, s_b))
        term = SingularEndpoint(0.5 * (s_a + s_b), condition.singular_reason(), (lo, hi))
    else:
        term = StepFailure(float(ss[-1]), run.diagnostic)

    s_arr = np.array(ss)
    u_arr = np.array(us)
    du_arr = np.array(dus)
    if direction < 0:
        s_arr, u_arr, du_arr = s_arr[::-1], u_arr[::-1], du_arr[::-1]
    return Trajectory(s_arr, u_arr[:, 0], u_arr[:, 1], u_arr[:, 2],
                      du_arr[:, 0], du_arr[:, 1], du_arr[:, 2], condition, term)


def integrate_span(condition: CurvatureCondition, initial: CurveState, s_min: float, s_max: float,
                   opts: Optional[IntegratorOptions] = None) -> Trajectory:
    """Integrate both ways from `initial` (s_min <= initial.s <= s_max) and join the halves."""
    if not s_min <= initial.s <= s_max:
        raise ValueError(f"initial s={initial.s} outside [{s_min}, {s_max}]")
    fwd = integrate(condition, initial, s_max, opts)
    if s_min == initial.s:
        return fwd
    bwd = integrate(condition, initial, s_min, opts)
    cat = lambda a, b: np.concatenate([a, b[1:]])  # noqa: E731
    return Trajectory(cat(bwd.s, fwd.s), cat(bwd.y, fwd.y), cat(bwd.z, fwd.z),
                      cat(bwd.theta, fwd.theta), cat(bwd.dy, fwd.dy), cat(bwd.dz, fwd.dz),
                      cat(bwd.dtheta, fwd.dtheta), condition, fwd.termination, bwd.termination)


def residual(condition: CurvatureCondition, trajectory: Trajectory) -> float:
    """max |defining relation| + max unit-speed defect over the samples."""
    rel = np.abs(condition.relation(trajectory.profile()))
    speed = (np.abs(np.exp(-trajectory.z) * trajectory.dy - np.cos(trajectory.theta))
             + np.abs(trajectory.dz - np.sin(trajectory.theta)))
    return float(np.max(rel) + np.max(speed))
