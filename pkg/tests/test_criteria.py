import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ptmoments import states
from ptmoments.bipartite import moments, validate
from ptmoments.criteria import (VerdictKind, classify, eigenvalue_bounds, exact_ppt,
                                mixture_p2_bound, mixture_ppt_condition, moment_npt_detector,
                                moment_sandwich, npt_p2_consistency, p2_ppt_certificate)
from ptmoments.errors import PremiseError, RangeError, ShapeError
from ptmoments.witness import witness_w

from conftest import random_hermitian


def test_certificate_on_maximally_mixed():
    v = p2_ppt_certificate(states.maximally_mixed(2, 2))
    assert v.kind is VerdictKind.SEPARABLE_CERTIFIED
    v = p2_ppt_certificate(states.maximally_mixed(3, 3))
    assert v.kind is VerdictKind.CERTIFIED_PPT
    assert v.evidence[0].relation == "<=" and v.evidence[0].fired


def test_certificate_silent_on_bell():
    v = p2_ppt_certificate(states.bell("psi-"))
    assert v.kind is VerdictKind.INCONCLUSIVE
    assert not v.evidence[0].fired


def test_werner_state_boundary():
    # Isotropic two-qubit state: PPT iff the singlet fraction f <= 1/2.
    for f, ppt in [(0.3, True), (0.5, True), (0.6, False)]:
        m = f * states.bell("phi+").matrix + (1 - f) * (np.eye(4) - states.bell("phi+").matrix) / 3
        assert exact_ppt(validate(m, 2, 2)).is_ppt is ppt


def test_npt_consistency():
    assert npt_p2_consistency(states.fixture("nptes_2x3"))
    with pytest.raises(PremiseError) as info:
        npt_p2_consistency(states.maximally_mixed(2, 2))
    assert "min_pt_eigenvalue" in info.value.values


def test_sandwich_on_bell_fails_and_detector_fires():
    s = states.bell("phi+")
    assert not moment_sandwich(s).holds
    assert moment_npt_detector(s).kind is VerdictKind.NPT_DETECTED


def test_eigenvalue_bounds_exact_on_two_level_spectrum():
    # One low eigenvalue over n-1 equal ones: the lower bound is tight.
    assert eigenvalue_bounds(np.diag([-1.0, 1.0, 1.0, 1.0])).lower == pytest.approx(-1.0)
    # n-1 equal low eigenvalues under one high one: the upper bound is tight.
    assert eigenvalue_bounds(np.diag([-1.0, -1.0, -1.0, 3.0])).upper == pytest.approx(-1.0)


@given(st.integers(2, 12), st.integers(0, 10**6))
def test_eigenvalue_bounds_hold(n, seed):
    h = random_hermitian(np.random.default_rng(seed), n)
    lam = np.linalg.eigvalsh(h)[0]
    b = eigenvalue_bounds(h)
    assert b.lower - 1e-10 <= lam <= b.upper + 1e-10


def test_eigenvalue_bounds_need_two_dims():
    with pytest.raises(ShapeError):
        eigenvalue_bounds([[1.0]])


def test_mixture_bound_formula_and_ranges():
    assert mixture_p2_bound(0.5, 0.2, 0.3) == pytest.approx(0.25 * 0.2 + 0.25 * 0.3 + 0.5)
    assert mixture_p2_bound(1.0, 0.2, 0.3) == pytest.approx(0.2)
    with pytest.raises(RangeError):
        mixture_p2_bound(-0.1, 0.2, 0.3)
    with pytest.raises(RangeError):
        mixture_p2_bound(0.5, 0.0, 0.3)
    assert mixture_ppt_condition(1.0, 0.1, 0.5, 3, 3)
    assert not mixture_ppt_condition(0.5, 0.1, 0.5, 3, 3)


@given(st.floats(0, 1), st.integers(0, 10**6), st.floats(0.2, 10))
def test_mixture_bound_dominates(p, seed, x):
    sep = states.random_separable(seed, 3, 3)
    ent = states.pptes_family(x)
    true = moments(states.mixture(p, sep, ent)).p2
    assert true <= mixture_p2_bound(p, moments(sep).p2, moments(ent).p2) + 1e-10


@pytest.mark.parametrize("name,kind", [
    ("rho1_2x2", VerdictKind.SEPARABLE_CERTIFIED),
    ("rho2_2x3", VerdictKind.SEPARABLE_CERTIFIED),
    ("rho3_3x3", VerdictKind.CERTIFIED_PPT),
    ("rho4_3x3", VerdictKind.CERTIFIED_PPT),
    ("nptes_2x3", VerdictKind.NPT_DETECTED),
    ("nptes_3x3", VerdictKind.NPT_DETECTED),
    ("rho4b_2x2", VerdictKind.SEPARABLE_CERTIFIED),
    ("rho5_2x3", VerdictKind.SEPARABLE_CERTIFIED),
])
def test_classify_fixtures(name, kind):
    v = classify(states.fixture(name))
    assert v.kind is kind
    assert v.evidence


def test_classify_reports_ppt_path():
    v = classify(states.fixture("rho4b_2x2"))
    path = [e for e in v.evidence if e.criterion == "ppt_established_by"]
    assert path and path[0].note == "pt_spectrum"
    v = classify(states.fixture("rho1_2x2"))
    path = [e for e in v.evidence if e.criterion == "ppt_established_by"]
    assert path[0].note == "p2_dimension_threshold"


def test_classify_with_witness():
    w = witness_w(1.0)
    assert classify(states.pptes_family(4), w).kind is VerdictKind.PPTES_DETECTED
    assert classify(states.pptes_family(2), w).kind is VerdictKind.CERTIFIED_PPT
    with pytest.raises(ShapeError):
        classify(states.bell("phi+"), w)


def test_classify_never_certifies_npt_state():
    for seed in range(200):
        s = states.random_state(seed, 2, 3, rank=2)
        v = classify(s)
        if not exact_ppt(s).is_ppt:
            assert v.kind is VerdictKind.NPT_DETECTED


def test_sandwich_and_p2_p3_on_ppt_states():
    for seed in range(100):
        s = states.random_separable(seed, 3, 3)
        mom = moments(s)
        assert moment_sandwich(s).holds
        assert mom.p2 ** 2 <= mom.p3 + 1e-10
        assert math.isfinite(mom.lower_bound)


def test_witness_zero_is_not_detection():
    # Tr(W(1) pptes(3)) is exactly zero; round-off must not flip the verdict.
    assert classify(states.pptes_family(3), witness_w(1.0)).kind is VerdictKind.CERTIFIED_PPT
