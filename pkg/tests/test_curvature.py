import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from solsurf import kernel as K
from solsurf.curvature import (CurveState, curvature_profile, fundamental_forms, graph_curvatures, normal_vector,
                               profile_arrays, second_form_by_differences, tangent_vectors)

angles = st.floats(-math.pi, math.pi, allow_nan=False)
rates = st.floats(-10.0, 10.0, allow_nan=False)


@given(angles, rates)
def test_gauss_equation(theta, tp):
    prof = curvature_profile(theta, tp)
    assert prof.K_int - prof.K_ext - prof.K_sec == pytest.approx(0.0, abs=1e-13)


@given(angles, rates)
def test_principal_curvatures(theta, tp):
    prof = curvature_profile(theta, tp)
    assert prof.kappa1 + prof.kappa2 == pytest.approx(2 * prof.H, abs=1e-12)
    assert prof.kappa1 * prof.kappa2 == pytest.approx(prof.K_ext, abs=1e-12)


@given(angles, rates, st.floats(-2.0, 2.0))
def test_forms_agree_with_profile(theta, tp, z):
    ff = fundamental_forms(CurveState(0.0, 0.0, z, theta), tp)
    prof = curvature_profile(theta, tp)
    assert ff.mean_curvature() == pytest.approx(prof.H, abs=1e-10)
    assert ff.gauss_curvature() == pytest.approx(prof.K_ext, abs=1e-10)


def test_sectional_at_axes():
    assert curvature_profile(0.0, 0.0).K_sec == 1.0
    assert curvature_profile(math.pi / 2, 0.0).K_sec == pytest.approx(-1.0)


def test_profile_arrays_match_scalar():
    th = np.linspace(-3, 3, 7)
    tp = np.linspace(-1, 2, 7)
    arr = profile_arrays(th, tp)
    for i in range(7):
        prof = curvature_profile(th[i], tp[i])
        for k in arr:
            assert arr[k][i] == pytest.approx(getattr(prof, k), abs=1e-15)


def test_sectional_of_tangent_plane():
    for theta in (0.0, 0.4, math.pi / 2, 2.0):
        state = CurveState(0.0, 0.2, -0.3, theta)
        xs, xt = tangent_vectors(state)
        got = K.sectional_curvature(state.point(), xs, xt)
        assert got == pytest.approx(math.cos(theta) ** 2 - math.sin(theta) ** 2, abs=1e-12)


@given(angles, st.floats(-2.0, 2.0))
def test_normal_is_unit_and_orthogonal(theta, z):
    state = CurveState(0.0, 0.0, z, theta)
    n = normal_vector(state)
    xs, xt = tangent_vectors(state)
    p = state.point()
    assert K.norm(n) == pytest.approx(1.0)
    assert K.metric_at(p, n, xs) == pytest.approx(0.0, abs=1e-12)
    assert K.metric_at(p, n, xt) == pytest.approx(0.0, abs=1e-12)


def test_speed_defect():
    assert CurveState(0, 0, 0.5, 0.3, (math.exp(0.5) * math.cos(0.3), math.sin(0.3), 1.0)).speed_defect() < 1e-15
    assert CurveState(0, 0, 0, 0, (2.0, 0.0, 0.0)).speed_defect() == pytest.approx(3.0)


def test_minimal_log_graph():
    for y in np.linspace(0.1, 10.0, 25):
        prof = graph_curvatures(math.log(y), 1 / y, -1 / y ** 2)
        assert abs(prof.H) < 1e-12


def test_logcosh_graph_has_intrinsic_curvature_minus_one():
    for y in np.linspace(-4, 4, 17):
        z, dz, ddz = math.log(math.cosh(y)), math.tanh(y), 1 / math.cosh(y) ** 2
        assert graph_curvatures(z, dz, ddz).K_int == pytest.approx(-1.0, abs=1e-12)


def test_difference_oracle_on_straight_line():
    # theta constant (minimal log graph): e = cos(theta), f = 0, g = -e^{2z} cos(theta)
    th = 0.6

    def position(s):
        return math.cos(th) / math.sin(th) * math.exp(math.sin(th) * s), math.sin(th) * s

    for s in (-1.0, 0.0, 0.7):
        y, z = position(s)
        fd = second_form_by_differences(position, s)
        exact = fundamental_forms(CurveState(s, y, z, th), 0.0)
        for a, b in zip((fd.E, fd.F, fd.G, fd.e, fd.f, fd.g), (exact.E, exact.F, exact.G, exact.e, exact.f, exact.g)):
            assert a == pytest.approx(b, abs=1e-6)


def test_difference_oracle_on_cmc_circle_arc():
    # H = 1/2: theta = s, z = -cos s, and y by quadrature of e^z cos(theta)
    from scipy.integrate import quad

    def position(s):
        return quad(lambda t: math.exp(-math.cos(t)) * math.cos(t), 0.0, s, epsabs=1e-13, epsrel=1e-13)[0], -math.cos(s)

    for s in (0.3, 1.2, 2.5):
        y, z = position(s)
        fd = second_form_by_differences(position, s)
        exact = fundamental_forms(CurveState(s, y, z, s), 1.0)
        assert fd.e == pytest.approx(exact.e, abs=1e-6)
        assert fd.g == pytest.approx(exact.g, abs=1e-6)
        assert fd.f == pytest.approx(0.0, abs=1e-6)
