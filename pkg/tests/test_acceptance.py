"""One test per acceptance criterion.

Each test prints ``PASS`` or ``FAIL`` with the measured quantities and then
asserts at the stated tolerance.  The PASS/FAIL lines are repeated in the
terminal summary.
"""

import math

import numpy as np
import pytest

from ptmoments import keyrate, linalg, states
from ptmoments.bipartite import moments, partial_transpose_B, validate
from ptmoments.criteria import (VerdictKind, classify, eigenvalue_bounds, exact_ppt,
                                mixture_p2_bound, moment_sandwich, p2_ppt_certificate)
from ptmoments.witness import (expectation, locate_sign_change, pe_expectation_closed_form,
                               pe_threshold_closed_form, pptes_expectation_closed_form, witness_w)

from conftest import ACCEPTANCE_LINES, random_hermitian, random_psd

pytestmark = pytest.mark.acceptance

SLACK = 1e-10
ENSEMBLE_SIZE = 10_000
ENSEMBLE_SEED = 13


def check(number, title, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}  [{detail}]"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def near(value, target, tol):
    return abs(value - target) <= tol


# ---------------------------------------------------------------------------
# Published-value regression

def test_01_rho1_2x2():
    s = states.fixture("rho1_2x2")
    mom = moments(s)
    cert = p2_ppt_certificate(s)
    kind = classify(s).kind
    ok = (near(mom.p2, 0.3238, 1e-4) and near(mom.dim_threshold, 1 / 3, 1e-15)
          and cert.evidence[0].fired and kind is VerdictKind.SEPARABLE_CERTIFIED)
    check(1, "rho1 2x2 p2 and verdict", ok, f"p2={mom.p2:.6f} threshold={mom.dim_threshold:.6f} "
          f"certificate={cert.evidence[0].fired} verdict={kind.value}")


def test_02_rho2_2x3():
    s = states.fixture("rho2_2x3")
    mom = moments(s)
    kind = classify(s).kind
    ok = near(mom.p2, 0.1994, 1e-4) and mom.p2 < 0.2 and kind is VerdictKind.SEPARABLE_CERTIFIED
    check(2, "rho2 2x3 p2 and verdict", ok, f"p2={mom.p2:.6f} verdict={kind.value}")


def test_03_rho3_3x3():
    s = states.fixture("rho3_3x3")
    mom = moments(s)
    kind = classify(s).kind
    ok = near(mom.p2, 0.114583, 1e-5) and mom.p2 < 0.125 and kind is VerdictKind.CERTIFIED_PPT
    check(3, "rho3 3x3 p2 and verdict", ok, f"p2={mom.p2:.7f} verdict={kind.value}")


def test_04_rho4_3x3():
    s = states.fixture("rho4_3x3")
    mom = moments(s)
    kind = classify(s).kind
    oracle = exact_ppt(s)
    ok = (near(mom.p2, 0.124, 5e-4) and mom.p2 < 0.125 and kind is VerdictKind.CERTIFIED_PPT
          and oracle.is_ppt)
    check(4, "rho4 3x3 p2, verdict, oracle", ok,
          f"p2={mom.p2:.6f} verdict={kind.value} min_pt_eig={oracle.min_pt_eigenvalue:.4g}")


def test_05_nptes_2x3():
    s = states.fixture("nptes_2x3")
    mom = moments(s)
    lam = exact_ppt(s).min_pt_eigenvalue
    ok = near(lam, -0.022, 1e-3) and near(mom.p2, 0.2446, 1e-4) and mom.p2 > 0.2
    check(5, "nptes 2x3 min PT eigenvalue and p2", ok, f"min_pt_eig={lam:.5f} p2={mom.p2:.6f}")


def test_06_nptes_3x3():
    mom = moments(states.fixture("nptes_3x3"))
    ok = near(mom.p2, 0.1872, 1e-4) and mom.p2 > 0.125
    check(6, "nptes 3x3 p2", ok, f"p2={mom.p2:.6f}")


def test_07_rho4b_2x2():
    s = states.fixture("rho4b_2x2")
    mom = moments(s)
    sw = moment_sandwich(s)
    cert = p2_ppt_certificate(s)
    ok = (near(mom.p2, 0.4758, 1e-4) and near(mom.p3, 0.2694, 1e-4)
          and near(mom.lower_bound, 0.038, 2e-3) and sw.holds and exact_ppt(s).is_ppt
          and cert.kind is VerdictKind.INCONCLUSIVE)
    check(7, "rho4b 2x2 moments and window", ok,
          f"p2={mom.p2:.6f} p3={mom.p3:.6f} lower={mom.lower_bound:.5f} holds={sw.holds} "
          f"certificate={cert.kind.value}")


def test_08_rho5_2x3():
    s = states.fixture("rho5_2x3")
    mom = moments(s)
    sw = moment_sandwich(s)
    cert = p2_ppt_certificate(s)
    ok = (near(mom.p2, 0.45046, 1e-4) and near(mom.p3, 0.266987, 1e-5) and sw.holds
          and exact_ppt(s).is_ppt and cert.kind is VerdictKind.INCONCLUSIVE)
    check(8, "rho5 2x3 moments and window", ok,
          f"p2={mom.p2:.6f} p3={mom.p3:.7f} holds={sw.holds} certificate={cert.kind.value}")


def test_09_witness_on_pptes_family():
    w = witness_w(1.0)
    worst, signs_ok = 0.0, True
    for x in (0.5, 1, 2, 3, 4, 10):
        val = expectation(w, states.pptes_family(x))
        worst = max(worst, abs(val - (3 - x) / (18 * (1 + x + x * x))))
        worst = max(worst, abs(val - pptes_expectation_closed_form(x)))
        signs_ok &= (val < -1e-12) == (x > 3)
    check(9, "Tr(W(1) pptes(x)) closed form", worst <= 1e-12 and signs_ok,
          f"max_err={worst:.2e} negative_iff_x_gt_3={signs_ok}")


def test_10_witness_on_mixture():
    w = witness_w(1.0)
    sep = states.sep_family(2.5)
    xs = (0.5, 2.0, 4.0, 6.0, 10.0)
    ps = np.linspace(0.0, 1.0, 20)
    worst = 0.0
    for x in xs:
        ent = states.pptes_family(x)
        for p in ps:
            val = expectation(w, states.mixture(p, sep, ent))
            worst = max(worst, abs(val - pe_expectation_closed_form(p, x)))
    crossing_err = 0.0
    for x in (4.0, 6.0, 10.0):
        found = locate_sign_change(w, sep, states.pptes_family(x))
        crossing_err = max(crossing_err, abs(found - pe_threshold_closed_form(x)))
    ok = worst <= 1e-12 and crossing_err <= 1e-9
    check(10, "Tr(W(1) mixture) closed form and sign change", ok,
          f"max_err={worst:.3e} sign_change_err={crossing_err:.3e}")


def test_11_key_rate_example_1():
    kd = keyrate.key_rate(keyrate.example_sigmas(1)).K_D
    check(11, "key rate example 1", near(kd, 1.00028, 5e-4), f"K_D={kd:.6f} target=1.00028")


def test_12_key_rate_example_2():
    kd = keyrate.key_rate(keyrate.example_sigmas(2)).K_D
    check(12, "key rate example 2", near(kd, 1.0007, 5e-4), f"K_D={kd:.6f} target=1.0007")


# ---------------------------------------------------------------------------
# Seeded property checks

DIMS = ((2, 2), (2, 3), (3, 3))


def _ensemble_member(rng, d1, d2, kind):
    n = d1 * d2
    if kind == 0:
        return validate(states.random_density(rng, n, int(rng.integers(1, n + 1))), d1, d2)
    if kind == 1:
        q = rng.uniform(0.0, 1.0)
        m = q * states.random_density(rng, n, int(rng.integers(1, n + 1))) + (1 - q) * np.eye(n) / n
        return validate(m, d1, d2)
    return states.random_separable(rng, d1, d2, int(rng.integers(1, 2 * n + 1)))


@pytest.fixture(scope="module")
def ensemble():
    rng = np.random.default_rng(ENSEMBLE_SEED)
    out = []
    for i in range(ENSEMBLE_SIZE):
        d1, d2 = DIMS[i % 3]
        s = _ensemble_member(rng, d1, d2, (i // 3) % 3)
        mom = moments(s)
        out.append((s, mom, exact_ppt(s)))
    return out


def test_13_certificate_soundness(ensemble):
    fired = violations = 0
    for s, mom, oracle in ensemble:
        if mom.p2 <= mom.dim_threshold + SLACK:
            fired += 1
            if oracle.min_pt_eigenvalue < -SLACK:
                violations += 1
    check(13, "p2 certificate => PPT", violations == 0 and fired > 0,
          f"samples={len(ensemble)} fired={fired} violations={violations}")


def test_14_npt_implies_large_p2(ensemble):
    npt = violations = 0
    for s, mom, oracle in ensemble:
        if not oracle.is_ppt:
            npt += 1
            if not mom.p2 > mom.dim_threshold - SLACK:
                violations += 1
    check(14, "NPT => p2 > 1/(d1 d2 - 1)", violations == 0 and npt > 0,
          f"npt_samples={npt} violations={violations}")


def test_15_window_and_p2_squared(ensemble):
    ppt = window_bad = square_bad = 0
    for s, mom, oracle in ensemble:
        if oracle.is_ppt:
            ppt += 1
            root = math.sqrt(mom.p3)
            window_bad += not (2 * root - 1 - SLACK <= mom.p2 <= root + SLACK)
            square_bad += not (mom.p2 ** 2 <= mom.p3 + SLACK)
    check(15, "PPT => window and p2^2 <= p3", window_bad == 0 and square_bad == 0 and ppt > 0,
          f"ppt_samples={ppt} window_violations={window_bad} square_violations={square_bad}")


def test_16_eigenvalue_bounds():
    rng = np.random.default_rng(16)
    bad = 0
    for _ in range(1000):
        n = int(rng.integers(2, 13))
        h = random_hermitian(rng, n, rng.uniform(0.1, 10))
        b = eigenvalue_bounds(h)
        lam = linalg.hermitian_eigenvalues(h).min
        bad += not (b.lower - SLACK <= lam <= b.upper + SLACK)
    check(16, "lambda_min bounds from m and s", bad == 0, f"samples=1000 violations={bad}")


def test_17_trace_inequalities():
    rng = np.random.default_rng(17)
    bad = [0, 0, 0]
    for _ in range(1000):
        n = int(rng.integers(2, 9))
        a, b = random_psd(rng, n, int(rng.integers(1, n + 1))), random_psd(rng, n)
        tab = linalg.trace(linalg.multiply(a, b)).real
        ta, tb = linalg.trace(a).real, linalg.trace(b).real
        bad[0] += not (math.sqrt(max(tab, 0.0)) <= (ta + tb) / 2 + SLACK)
        bad[1] += not (tab <= ta * tb + SLACK)
    for _ in range(1000):
        n = int(rng.integers(2, 9))
        h, b = random_hermitian(rng, n), random_psd(rng, n)
        eig = linalg.hermitian_eigenvalues(h)
        thb = linalg.trace(linalg.multiply(h, b)).real
        tb = linalg.trace(b).real
        bad[2] += not (eig.min * tb - SLACK <= thb <= eig.max * tb + SLACK)
    check(17, "trace inequalities", bad == [0, 0, 0],
          f"pairs=1000 each violations sqrt_am={bad[0]} product={bad[1]} spectral={bad[2]}")


def test_18_mixture_bound_dominates():
    rng = np.random.default_rng(18)
    bad = 0
    for _ in range(1000):
        p = rng.uniform()
        sep = states.random_separable(rng, 3, 3) if rng.uniform() < 0.5 else states.sep_family(rng.uniform(2, 3))
        ent = states.pptes_family(rng.uniform(0.1, 10))
        true = moments(states.mixture(p, sep, ent)).p2
        bad += not (true <= mixture_p2_bound(p, moments(sep).p2, moments(ent).p2) + SLACK)
    check(18, "mixture p2 bound dominates", bad == 0, f"triples=1000 violations={bad}")


def test_19_kron_and_pt_involution():
    rng = np.random.default_rng(19)
    kron_err = pt_err = 0.0
    for _ in range(200):
        m1, m2 = (int(k) for k in rng.integers(1, 4, size=2))
        g = lambda k: rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
        a, c, b, d = g(m1), g(m1), g(m2), g(m2)
        lhs = linalg.multiply(linalg.kron(a, b), linalg.kron(c, d))
        rhs = linalg.kron(linalg.multiply(a, c), linalg.multiply(b, d))
        kron_err = max(kron_err, float(np.max(np.abs(lhs - rhs))))
        d1, d2 = DIMS[int(rng.integers(0, 3))]
        x = g(d1 * d2)
        pt_err = max(pt_err, float(np.max(np.abs(partial_transpose_B(partial_transpose_B(x, d1, d2), d1, d2) - x))))
    check(19, "Kronecker mixed product and PT involution", kron_err <= 1e-12 and pt_err <= 1e-12,
          f"kron_err={kron_err:.2e} pt_err={pt_err:.2e}")


def test_20_equal_sigmas_and_rho_c():
    rng = np.random.default_rng(20)
    kd_err = 0.0
    for d1, d2 in DIMS:
        s = validate(states.random_density(rng, d1 * d2), d1, d2)
        kd_err = max(kd_err, abs(keyrate.key_rate(keyrate.SigmaQuad((s, s, s, s))).K_D - 1.0))
    traces = []
    for q in (keyrate.example_sigmas(1), keyrate.example_sigmas(2),
              keyrate.SigmaQuad(tuple(validate(states.random_density(rng, 6), 2, 3) for _ in range(4)))):
        rc = keyrate.rho_c(q)
        traces.append(abs(np.trace(rc.matrix) - 1.0))
    ok = kd_err <= 1e-12 and max(traces) <= 1e-9
    check(20, "equal sigmas give K_D = 1; rho_c is a state", ok,
          f"K_D_err={kd_err:.2e} rho_c_trace_err={max(traces):.2e}")
