import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from solsurf.classifier import (ClassificationError, GridCase, Prop, classification_grid, classify, segments_intersection,
                                verify_label)
from solsurf.curvature import CurveState
from solsurf.ode import (CMC, ExtrinsicK, IntrinsicK, LinearWeingartenHK, LinearWeingartenKappa, PrincipalRatio,
                         integrate, integrate_span)


def test_logcosh_label():
    lab = classify(IntrinsicK(-1.0), CurveState(0.0, 0.0, 0.0, 0.3))
    assert lab.label == "kint.c=-1.graph"
    assert lab.properties == {Prop.GraphSingleMin, Prop.EntireGraph}


def test_ratio_entire():
    assert classify(PrincipalRatio(-1.5)).properties == {Prop.GraphSingleMin, Prop.EntireGraph}


def test_extrinsic_positive_bounded():
    assert classify(ExtrinsicK(3.0)).properties == {Prop.BoundedDomainVerticalEnds, Prop.GraphSingleMax}


def test_umbilical_is_delegated():
    lab = classify(PrincipalRatio(1.0))
    assert lab.delegated and not lab.properties


def test_general_weingarten_unsupported():
    for cond in (LinearWeingartenKappa(1.0, 2.0, 0.5), LinearWeingartenHK(1.0, 0.5, 0.2)):
        with pytest.raises(ClassificationError):
            classify(cond)


def test_branch_dependent_needs_data():
    with pytest.raises(ClassificationError, match="branch_data"):
        classify(IntrinsicK(-0.5))
    with pytest.raises(ClassificationError, match="branch_data"):
        classify(ExtrinsicK(-0.5))


def test_branch_selects_case():
    k = IntrinsicK(-0.5)
    assert classify(k, CurveState(0, 0, 0, 0.0)).label == "kint.entire"
    assert classify(k, CurveState(0, 0, 0, 1.2)).label == "kint.half_line"
    assert classify(k, CurveState(0, 0, 0, math.pi / 4)).label == "kint.log_graph"


def test_vertical_start_rejected_where_impossible():
    with pytest.raises(ClassificationError):
        classify(IntrinsicK(2.0), CurveState(0, 0, 0, math.pi / 2))


@given(st.sampled_from(["cmc", "kint", "kext", "ratio"]), st.floats(-10.0, 10.0), st.floats(-3.0, 3.0))
def test_classify_is_total(kind, const, theta):
    if kind == "cmc":
        cond = CMC(const)
    elif kind == "kint":
        cond = IntrinsicK(const)
    elif kind == "kext":
        cond = ExtrinsicK(const)
    else:
        cond = PrincipalRatio(const)
    branch = CurveState(0.0, 0.0, 0.0, theta)
    if abs(math.cos(theta)) < 1e-12:
        return
    lab = classify(cond, branch)
    assert lab.condition == cond
    assert lab.label.split(".")[0] in {"minimal", "cmc", "kint", "kext", "ratio"}
    assert lab.properties or lab.delegated


@pytest.mark.parametrize("c, label", [(-1.0, "kint.c=-1.graph"), (0.0, "kint.c=0.curve"),
                                      (-0.999, "kint.entire"), (1e-9, "kint.bounded_max"),
                                      (-1.001, "kint.bounded_min")])
def test_boundary_constants(c, label):
    assert classify(IntrinsicK(c), CurveState(0, 0, 0, 0.1)).label == label


def test_cmc_report():
    lab = classify(CMC(1.0))
    traj = integrate(CMC(1.0), CurveState(0.0, 0.0, -0.5, 0.0), 4 * math.pi)
    rep = verify_label(lab, traj)
    assert rep.passed
    by = {r.predicate: r for r in rep.results}
    assert by[Prop.PeriodicZ].measured["sup_z_defect"] < 1e-7
    assert by[Prop.SelfIntersecting].passed
    assert "PeriodicZ" in rep.to_text()


def test_condition_mismatch():
    traj = integrate(CMC(1.0), CurveState(0.0, 0.0, -0.5, 0.0), 1.0)
    with pytest.raises(ClassificationError):
        verify_label(classify(CMC(2.0)), traj)


def test_wrong_label_fails():
    # an entire graph checked against a bounded-domain label
    wrong = classify(IntrinsicK(2.0))
    traj = integrate_span(IntrinsicK(-1.0), CurveState(0, 0, 0, 0.0), -5.0, 5.0)
    fake = type(wrong)(IntrinsicK(-1.0), wrong.label, wrong.properties)
    assert not verify_label(fake, traj).passed


def test_ratio_minus_three_asymptotes():
    traj = integrate_span(PrincipalRatio(-3.0), CurveState(0, 0, 0, 0.0), -20.0, 20.0)
    rep = verify_label(classify(PrincipalRatio(-3.0)), traj)
    assert rep.passed, rep.to_text()


def test_full_grid():
    grid = classification_grid()
    assert len(grid) >= 20
    labels = {case.expected for case in grid}
    for want in ("minimal.log_graph", "cmc.periodic", "kint.half_line", "kext.one_asymptote", "ratio.entire_min",
                 "ratio.two_asymptotes_min", "ratio.two_asymptotes_max", "ratio.logcosh"):
        assert want in labels
    failed = [(c.expected, r.to_text()) for c in grid if not (r := c.run()).passed]
    assert not failed


def test_grid_case_rejects_wrong_expectation():
    case = GridCase(IntrinsicK(2.0), CurveState(0, 0, 0, 0.0), -1.0, 1.0, "kint.bounded_min")
    with pytest.raises(ClassificationError):
        case.run()


def test_segments_intersection():
    bowtie = np.array([[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]])
    i, j, p = segments_intersection(bowtie)
    assert (i, j) == (0, 2)
    assert np.allclose(p, (0.5, 0.5))
    assert segments_intersection(np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 1.0], [3.0, 3.0]])) is None
    # a closed square touches itself only at the seam
    square = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.0, 0.0]])
    assert segments_intersection(square) is None
