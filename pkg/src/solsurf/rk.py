"""Dormand-Prince 5(4) stepping on small pure-Python state vectors.

The generating-curve system has three components, so plain float lists are
much faster than numpy arrays here.  The driver knows nothing about
geometry; an optional guard function g(u) flags states that cross the
zero set of g (a singular locus of the right-hand side), and such trial
steps are rejected like steps with too large an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

Vector = list[float]
RHS = Callable[[float, Sequence[float]], Vector]
Guard = Callable[[Sequence[float]], float]

# Butcher tableau of DOPRI5
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
# fifth-order weights minus embedded fourth-order weights
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0
NEAR_SINGULAR = 1e-3


def dopri_step(f: RHS, s: float, u: Sequence[float], h: float, k1: Sequence[float]):
    """One DOPRI5 step.  Returns (u_new, error_vector, f(s + h, u_new))."""
    n = len(u)
    ks = [k1]
    for i in range(1, 7):
        a = _A[i]
        ui = [u[j] + h * sum(a[m] * ks[m][j] for m in range(i)) for j in range(n)]
        ks.append(f(s + _C[i] * h, ui))
    u_new = ui
    err = [h * sum(_E[m] * ks[m][j] for m in range(7)) for j in range(n)]
    return u_new, err, ks[6]


def single_step(f: RHS, s: float, u: Sequence[float], h: float) -> Vector:
    """Unchecked DOPRI5 step, for short local excursions (finite-difference stencils)."""
    u_new, _, _ = dopri_step(f, s, u, h, f(s, u))
    return u_new


def _error_norm(err: Sequence[float], u: Sequence[float], u_new: Sequence[float], tol: float) -> float:
    total = 0.0
    for e, a, b in zip(err, u, u_new):
        scale = tol + tol * max(abs(a), abs(b))
        total += (e / scale) ** 2
    return math.sqrt(total / len(err))


@dataclass
class AdvanceResult:
    """Accepted steps of one adaptive run; `status` says why the run stopped.

    status is one of
      "done"        reached the target
      "pinned"      step size underflowed while |g| was small (against a singularity)
      "underflow"   step size underflowed elsewhere
      "max_samples" sample budget exhausted
    """

    s: list[float] = field(default_factory=list)
    u: list[Vector] = field(default_factory=list)
    du: list[Vector] = field(default_factory=list)
    status: str = "done"
    h: float = 0.0
    crossed_at: Optional[float] = None
    diagnostic: str = ""


def advance(f: RHS, s0: float, u0: Sequence[float], target: float, *, tol: float,
            max_step: float, max_samples: int, guard: Optional[Guard] = None,
            singular_eps: float = 0.0, h0: Optional[float] = None,
            include_start: bool = True) -> AdvanceResult:
    """Adaptive integration from s0 to target (either direction)."""
    direction = 1.0 if target >= s0 else -1.0
    s, u = s0, list(u0)
    k1 = f(s, u)
    out = AdvanceResult()
    if include_start:
        out.s.append(s)
        out.u.append(list(u))
        out.du.append(list(k1))
    if target == s0:
        return out

    g_sign = math.copysign(1.0, guard(u)) if guard is not None else 0.0
    h = min(max_step, abs(target - s0), h0 if h0 is not None else 1e-2)
    while True:
        remaining = abs(target - s)
        if remaining <= 1e-15 * max(1.0, abs(target)):
            out.status = "done"
            break
        h = min(h, remaining, max_step)
        h_min = 1e-14 * max(1.0, abs(s))
        if h < h_min:
            near = guard is not None and abs(guard(u)) < NEAR_SINGULAR
            out.status = "pinned" if near else "underflow"
            out.diagnostic = f"step size {h:.3e} below {h_min:.3e} at s={s:.17g}"
            break
        step = direction * h
        crossed = False
        try:
            u_new, err, k_new = dopri_step(f, s, u, step, k1)
            if not all(math.isfinite(v) for v in u_new) or not all(math.isfinite(v) for v in k_new):
                crossed = True
            elif guard is not None:
                g_new = guard(u_new)
                crossed = math.copysign(1.0, g_new) != g_sign or abs(g_new) < singular_eps
        except (ArithmeticError, ValueError):
            crossed = True
        if crossed:
            trial_end = s + step
            if out.crossed_at is None or abs(trial_end - s0) < abs(out.crossed_at - s0):
                out.crossed_at = trial_end
            h *= 0.25
            continue
        en = _error_norm(err, u, u_new, tol)
        if en <= 1.0:
            s = s + step if remaining > h else target
            u, k1 = u_new, k_new
            out.s.append(s)
            out.u.append(list(u))
            out.du.append(list(k1))
            if out.crossed_at is not None and direction * (out.crossed_at - s) <= 0:
                out.crossed_at = None
            if len(out.s) >= max_samples:
                out.status = "max_samples"
                out.diagnostic = f"sample budget {max_samples} exhausted at s={s:.17g}"
                break
            factor = MAX_FACTOR if en == 0 else min(MAX_FACTOR, max(MIN_FACTOR, SAFETY * en ** -0.2))
            h *= factor
        else:
            h *= max(MIN_FACTOR, SAFETY * en ** -0.2)
    out.h = h
    return out
