import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from solsurf.curvature import CurveState
from solsurf.ode import (CMC, ConditionError, ExtrinsicK, IntegratorOptions, IntrinsicK, LinearWeingartenHK,
                         LinearWeingartenKappa, PrincipalRatio, ReachedRangeEnd, SingularEndpoint, SingularInputError,
                         SingularStateError, StepFailure, integrate, integrate_span, make_condition, residual)
from solsurf.rk import advance, single_step

ORIGIN = CurveState(0.0, 0.0, 0.0, 0.0)


def test_dopri_is_fifth_order():
    f = lambda s, u: [u[0]]  # noqa: E731
    errs = [abs(single_step(f, 0.0, [1.0], h)[0] - math.exp(h)) for h in (0.2, 0.1)]
    assert errs[0] / errs[1] == pytest.approx(64, rel=0.2)


def test_advance_backward():
    run = advance(lambda s, u: [math.cos(s)], 1.0, [math.sin(1.0)], -2.0, tol=1e-12, max_step=0.1, max_samples=10_000)
    assert run.status == "done"
    assert run.s[-1] == -2.0
    assert run.u[-1][0] == pytest.approx(math.sin(-2.0), abs=1e-10)


def test_advance_sample_budget():
    run = advance(lambda s, u: [1.0], 0.0, [0.0], 10.0, tol=1e-10, max_step=0.01, max_samples=5)
    assert run.status == "max_samples"
    assert len(run.s) == 5


@pytest.mark.parametrize("cond, theta, expected", [
    (CMC(0.75), 1.0, 1.5),
    (IntrinsicK(0.0), math.pi / 6, -0.25 / math.cos(math.pi / 6)),
    (IntrinsicK(-1.0), 0.4, math.cos(0.4)),
    (ExtrinsicK(0.0), 0.4, -math.cos(0.4)),
    (ExtrinsicK(2.0), 0.0, -3.0),
    (PrincipalRatio(-3.0), 0.0, 2.0),
    (LinearWeingartenKappa(2.0, 1.0, 3.0), 0.0, 1.0),
    (LinearWeingartenHK(1.0, 0.0, 0.5), 0.3, 1.0),
])
def test_theta_prime(cond, theta, expected):
    assert cond.theta_prime(theta) == pytest.approx(expected)


@pytest.mark.parametrize("cond", [
    CMC(0.7), IntrinsicK(-0.4), IntrinsicK(1.3), ExtrinsicK(-0.3), ExtrinsicK(1.2), PrincipalRatio(0.5),
    LinearWeingartenKappa(1.5, -0.5, 0.2), LinearWeingartenHK(2.0, 0.5, 0.3), LinearWeingartenHK(1.0, -0.4, -0.2),
])
@given(theta=st.floats(-1.2, 1.2))
def test_theta_prime_satisfies_relation(cond, theta):
    from solsurf.curvature import profile_arrays
    prof = profile_arrays(np.array([theta]), np.array([cond.theta_prime(theta)]))
    assert abs(cond.relation(prof)[0]) < 1e-12


def test_singular_input_reports_limit():
    with pytest.raises(SingularInputError) as info:
        IntrinsicK(2.0).theta_prime(math.pi / 2)
    assert "inf" in info.value.limit
    with pytest.raises(SingularInputError):
        LinearWeingartenHK(1.0, 0.5, 0.0).theta_prime(0.0)


def test_removable_singularities():
    assert IntrinsicK(-1.0).singular_function() is None
    assert ExtrinsicK(0.0).singular_function() is None
    assert IntrinsicK(-1.0).theta_prime(math.pi / 2) == pytest.approx(0.0, abs=1e-15)


def test_make_condition_validation():
    assert make_condition("kint", {"c": 2}) == IntrinsicK(2.0)
    with pytest.raises(ConditionError):
        make_condition("kint", {"H": 1})
    with pytest.raises(ConditionError):
        make_condition("nope", {})
    with pytest.raises(ConditionError):
        make_condition("cmc", {"H": math.nan})
    with pytest.raises(ConditionError):
        make_condition("lw-kappa", {"a": 0, "b": 1, "c": 1})
    with pytest.raises(ConditionError):
        LinearWeingartenHK(0.0, 0.0, 1.0)


def test_options_validation():
    with pytest.raises(ConditionError):
        IntegratorOptions(tol=0.0)
    with pytest.raises(ConditionError):
        IntegratorOptions(max_samples=1)


def test_singular_start():
    with pytest.raises(SingularStateError):
        integrate(IntrinsicK(2.0), CurveState(0, 0, 0, math.pi / 2), 1.0)


def test_intrinsic_positive_terminates_at_vertical_point():
    # sin(theta) = -sqrt(2) tan(sqrt(2) s) reaches -1 where 2 tan^2(sqrt(2) s) = 1
    traj = integrate(IntrinsicK(2.0), ORIGIN, 2.0)
    s_star = math.atan(1 / math.sqrt(2)) / math.sqrt(2)
    assert isinstance(traj.termination, SingularEndpoint)
    assert traj.termination.s_star == pytest.approx(s_star, abs=1e-6)
    assert traj.termination.bracket[0] <= traj.termination.s_star <= traj.termination.bracket[1]
    assert abs(traj.dtheta[-1]) > 1e3
    assert residual(IntrinsicK(2.0), traj) < 1e-8


def test_backward_run_is_increasing():
    traj = integrate(IntrinsicK(2.0), ORIGIN, -2.0)
    assert np.all(np.diff(traj.s) > 0)
    assert isinstance(traj.termination, SingularEndpoint)
    assert traj.termination.s_star == pytest.approx(-math.atan(1 / math.sqrt(2)) / math.sqrt(2), abs=1e-6)


def test_cmc_matches_closed_form():
    H = 1.0
    traj = integrate(CMC(H), CurveState(0.0, 0.0, -0.5, 0.0), 2 * math.pi)
    assert isinstance(traj.termination, ReachedRangeEnd)
    assert np.allclose(traj.theta, 2 * H * traj.s, atol=1e-10)
    assert np.allclose(traj.z, -np.cos(2 * H * traj.s) / (2 * H), atol=1e-9)


def test_principal_ratio_minus_two_is_logcosh():
    traj = integrate_span(PrincipalRatio(-2.0), ORIGIN, -5.0, 5.0)
    assert np.allclose(traj.y, traj.s, atol=1e-9)
    assert np.allclose(traj.z, np.log(np.cosh(traj.y)), atol=1e-9)


def test_stationary_branch_is_exact():
    th = math.asin(math.sqrt(0.5))
    traj = integrate_span(IntrinsicK(-0.5), CurveState(0.0, 1.0, 0.0, th), -2.0, 2.0)
    assert np.all(traj.dtheta == 0.0)
    assert np.allclose(traj.z, np.log(np.tan(th) * (traj.y - 1.0 + 1.0 / np.tan(th))), atol=1e-12)


def test_step_failure_when_budget_runs_out():
    traj = integrate(CMC(1.0), ORIGIN, 100.0, IntegratorOptions(max_samples=10))
    assert isinstance(traj.termination, StepFailure)
    assert "budget" in traj.termination.diagnostic


def test_trajectory_is_read_only():
    traj = integrate(CMC(1.0), ORIGIN, 1.0)
    with pytest.raises(ValueError):
        traj.y[0] = 1.0


def test_dense_output():
    traj = integrate(CMC(0.5), CurveState(0.0, 0.0, -1.0, 0.0), 3.0)
    s = np.linspace(0.0, 3.0, 77)
    _, z, theta = traj.at(s)
    assert np.allclose(z, -np.cos(s), atol=1e-9)
    assert np.allclose(theta, s, atol=1e-9)
    with pytest.raises(ValueError):
        traj.at(3.5)


def test_span_joins_halves():
    traj = integrate_span(CMC(1.0), ORIGIN, -1.0, 2.0)
    assert traj.s[0] == -1.0 and traj.s[-1] == 2.0
    assert np.all(np.diff(traj.s) > 0)
    assert len(set(traj.s.tolist())) == len(traj)
    with pytest.raises(ValueError):
        integrate_span(CMC(1.0), ORIGIN, 1.0, 2.0)


@given(st.floats(-3.0, 3.0).filter(lambda h: abs(h) > 1e-3), st.floats(-3.0, 3.0), st.floats(-1.0, 1.0))
@settings(max_examples=25, deadline=None)
def test_cmc_residual_small(H, theta0, z0):
    traj = integrate(CMC(H), CurveState(0.0, 0.0, z0, theta0), 3.0)
    assert residual(CMC(H), traj) < 1e-8
    # z + cos(theta)/(2H) is a first integral
    assert np.ptp(traj.z + np.cos(traj.theta) / (2 * H)) < 1e-8


@given(st.floats(-4.0, 3.0), st.floats(-1.4, 1.4))
@settings(max_examples=25, deadline=None)
def test_principal_ratio_residual_small(m, theta0):
    traj = integrate_span(PrincipalRatio(m), CurveState(0.0, 0.0, 0.0, theta0), -2.0, 2.0)
    assert residual(PrincipalRatio(m), traj) < 1e-8
