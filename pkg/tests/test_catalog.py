import math

import numpy as np
import pytest
from scipy.integrate import quad

from solsurf.catalog import (GATE, RESOLUTIONS, CatalogError, catalog_entries, cmc, find_entry, kext_bounded,
                             kint_bounded, kint_entire, principal_ratio, quadrature_y)
from solsurf.curvature import CurveState
from solsurf.ode import CMC, ConditionError, integrate

ENTRIES = catalog_entries()


@pytest.mark.parametrize("entry", ENTRIES, ids=[e.id for e in ENTRIES])
def test_residual_gate(entry):
    assert entry.residual(1000) < GATE


def test_ids_unique_and_stable():
    ids = [e.id for e in ENTRIES]
    assert len(ids) == len(set(ids))
    assert "kint.c=-1.graph" in ids
    for e in ENTRIES:
        assert find_entry(e.id) is e


def test_parameterized_lookup():
    e = find_entry("kint.c=-0.25.entire")
    assert e.condition.c == -0.25
    assert e.residual(200) < GATE
    with pytest.raises(CatalogError):
        find_entry("kint.c=0.75.entire")
    with pytest.raises(CatalogError):
        find_entry("nothing.here")


def test_family_ranges_validated():
    with pytest.raises(CatalogError):
        kint_entire(0.5)
    with pytest.raises(CatalogError):
        kint_bounded(-0.5)
    with pytest.raises(CatalogError):
        principal_ratio(-1.0)


def test_logcosh_entry_at_origin():
    st = find_entry("kint.c=-1.graph").eval(0.0)
    assert (st.y, st.z, st.theta) == (0.0, 0.0, 0.0)


def test_intrinsic_flat_entry_at_sqrt2():
    st = find_entry("kint.c=0.curve").eval(math.sqrt(2.0))
    assert st.z == pytest.approx(math.log(math.sqrt(2.0)), abs=1e-15)
    # y' = sqrt(s^2 - 1) on s > 1 with y(1) = 0
    oracle = quad(lambda t: math.sqrt(t * t - 1.0), 1.0, math.sqrt(2.0), epsabs=1e-14)[0]
    assert st.y == pytest.approx(oracle, abs=1e-12)
    assert st.y == pytest.approx(0.5 * (math.sqrt(2.0) - math.log(1.0 + math.sqrt(2.0))), abs=1e-15)


def test_ratio_minus_two_is_logcosh():
    a = principal_ratio(-2.0).arrays(np.linspace(-5, 5, 101))
    b = find_entry("kint.c=-1.graph").arrays(np.linspace(-5, 5, 101))
    for k in ("y", "z", "theta"):
        assert np.allclose(a[k], b[k], atol=1e-12)


def test_quadrature_zero_length():
    assert quadrature_y(cmc(1.0), 0.0) == 0.0


def test_quadrature_outside_domain():
    with pytest.raises(CatalogError):
        quadrature_y(find_entry("kint.c=0.curve"), 0.5)
    with pytest.raises(CatalogError):
        find_entry("kint.c=0.curve").eval(0.5)


def test_cmc_translation_period_matches_ode():
    delta = quadrature_y(cmc(1.0), math.pi)
    traj = integrate(CMC(1.0), CurveState(0.0, 0.0, -0.5, 0.0), math.pi)
    assert delta == pytest.approx(traj.y[-1], abs=1e-9)
    assert delta == pytest.approx(-0.81020, abs=1e-5)


@pytest.mark.parametrize("entry", [e for e in ENTRIES if e.y is not None], ids=lambda e: e.id)
def test_quadrature_matches_closed_form(entry):
    lo, hi = entry.interior_window()
    s = np.linspace(lo, hi, 100)
    q = np.array([quadrature_y(entry, x) for x in s])
    assert np.max(np.abs(q - (entry.y(s) - entry.y(np.array(entry.y_origin))))) < 1e-9


def test_formula_candidates_resolved():
    res = RESOLUTIONS["kext.c=-1.curve"]
    assert res.chosen.startswith("y = -sqrt(s^2-1)/s")
    assert res.chosen_residual < GATE
    assert all(r > 1.0 for _, r in res.rejected)
    assert "rejected" in find_entry("kext.c=-1.curve").description
    assert RESOLUTIONS["kint.c=-0.5.half_line"].chosen == "sin(theta) = k coth(ks)"
    assert RESOLUTIONS["kint.c=-3.bounded"].chosen.startswith("sin(theta)")


@pytest.mark.parametrize("entry", [e for e in ENTRIES if e.vertical_ends], ids=lambda e: e.id)
def test_vertical_ends(entry):
    lo, hi = entry.domain
    for end in entry.vertical_ends:
        edge = lo + 1e-4 if end == "lo" else hi - 1e-4
        assert abs(math.cos(float(entry.theta(np.array(edge))))) < 0.05


def test_bounded_domains_shrink_with_curvature():
    assert kext_bounded(3.0).domain[1] < kext_bounded(0.5).domain[1]
    assert kint_bounded(2.0).domain[1] == pytest.approx(math.atan(1 / math.sqrt(2)) / math.sqrt(2), abs=1e-15)


def test_sample_round_trip_through_ode():
    from solsurf.ode import integrate_span
    e = find_entry("kint.c=-0.5.entire")
    lo, hi = e.interior_window()
    traj = integrate_span(e.condition, e.eval(0.0), lo, hi)
    a = e.arrays(np.linspace(lo, hi, 200))
    y, z, _ = traj.at(a["s"])
    assert np.max(np.abs(y - a["y"])) < 1e-7
    assert np.max(np.abs(z - a["z"])) < 1e-7


def test_condition_constants_checked():
    with pytest.raises((CatalogError, ConditionError)):
        cmc(0.0)
