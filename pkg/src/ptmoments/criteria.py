"""Detection criteria built on partial-transpose moments.

* :func:`p2_ppt_certificate`: p2 <= 1/(d1 d2 - 1) certifies PPT.
* :func:`moment_sandwich` / :func:`moment_npt_detector`: every PPT state has
  2 sqrt(p3) - 1 <= p2 <= sqrt(p3); leaving that window proves NPT.
* :func:`exact_ppt`: the PT spectrum itself, used as ground truth.
* :func:`mixture_p2_bound` / :func:`mixture_ppt_condition`: the p2 bound for
  p*sep + (1-p)*ent from the two components' moments alone.
* :func:`classify`: moment tests first, then an optional witness for PPT states.

Non-strict inequalities are honoured with a slack of 1e-10.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from . import linalg
from .bipartite import PSD_TOL, BipartiteState, dim_threshold, moments
from .errors import PremiseError, RangeError, ShapeError
from .witness import WitnessOperator, expectation

SLACK = 1e-10
#: Peres-Horodecki: PPT is equivalent to separable up to 2x3.
PH_MAX_DIM = 6


class VerdictKind(str, enum.Enum):
    CERTIFIED_PPT = "CertifiedPPT"
    SEPARABLE_CERTIFIED = "SeparableCertified"
    NPT_DETECTED = "NPTDetected"
    PPTES_DETECTED = "PPTESDetected"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Evidence:
    """One evaluated criterion: ``value`` compared against ``threshold``.

    ``relation`` is the comparison that would make the criterion fire, e.g.
    ``"<="``; ``fired`` says whether it did.
    """

    criterion: str
    value: float
    threshold: float
    relation: str
    fired: bool
    note: str = ""


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    evidence: list = field(default_factory=list)

    def __str__(self) -> str:
        return self.kind.value


class EigBounds(NamedTuple):
    """m = Tr(A)/n, s = sqrt(Tr(A^2)/n - m^2); lower <= lambda_min <= upper."""

    m: float
    s: float
    lower: float
    upper: float
    n: int


class SandwichResult(NamedTuple):
    lower: float
    p2: float
    upper: float
    holds: bool


class PPTCheck(NamedTuple):
    is_ppt: bool
    min_pt_eigenvalue: float


def eigenvalue_bounds(h) -> EigBounds:
    """Bounds on the smallest eigenvalue of a Hermitian matrix from its
    first two power traces only:

        m - s sqrt(n-1)  <=  lambda_min  <=  m - s / sqrt(n-1)
    """
    h = linalg.check_hermitian(h)
    n = h.shape[0]
    if n < 2:
        raise ShapeError("eigenvalue bounds need n >= 2")
    m = float(np.real(np.trace(h))) / n
    tr2 = float(np.real(np.sum(h * h.T)))
    s = math.sqrt(max(tr2 / n - m * m, 0.0))
    root = math.sqrt(n - 1)
    return EigBounds(m, s, m - s * root, m - s / root, n)


def _can_certify_separable(state: BipartiteState) -> bool:
    return state.d1 * state.d2 <= PH_MAX_DIM


def p2_ppt_certificate(state: BipartiteState) -> Verdict:
    """CertifiedPPT when p2 <= 1/(d1 d2 - 1), upgraded to SeparableCertified
    for d1 d2 <= 6; Inconclusive otherwise.  The PT spectrum's sign is never
    inspected."""
    mom = moments(state)
    fired = mom.p2 <= mom.dim_threshold + SLACK
    ev = Evidence("p2_dimension_threshold", mom.p2, mom.dim_threshold, "<=", fired)
    if not fired:
        return Verdict(VerdictKind.INCONCLUSIVE, [ev])
    if _can_certify_separable(state):
        return Verdict(VerdictKind.SEPARABLE_CERTIFIED, [ev])
    return Verdict(VerdictKind.CERTIFIED_PPT, [ev])


def exact_ppt(state: BipartiteState, psd_tol: float = PSD_TOL) -> PPTCheck:
    lam_min = state.pt_spectrum.min
    return PPTCheck(lam_min >= -psd_tol, lam_min)


def npt_p2_consistency(state: BipartiteState, psd_tol: float = PSD_TOL) -> bool:
    """For an NPT state, whether p2 > 1/(d1 d2 - 1) as it must be.

    Raises ``PremiseError`` if the state is in fact PPT.
    """
    check = exact_ppt(state, psd_tol)
    if check.is_ppt:
        raise PremiseError("state is PPT; the consistency check applies to NPT states only",
                           {"min_pt_eigenvalue": check.min_pt_eigenvalue})
    return moments(state).p2 > dim_threshold(state.d1, state.d2)


def moment_sandwich(state: BipartiteState) -> SandwichResult:
    mom = moments(state)
    if mom.p3 < 0:
        # Negative p3 only occurs with a negative PT eigenvalue.
        return SandwichResult(mom.lower_bound, mom.p2, mom.upper_bound, False)
    holds = mom.lower_bound - SLACK <= mom.p2 <= mom.upper_bound + SLACK
    return SandwichResult(mom.lower_bound, mom.p2, mom.upper_bound, holds)


def moment_npt_detector(state: BipartiteState) -> Verdict:
    """NPTDetected when p2 < 2 sqrt(p3) - 1 or p2 > sqrt(p3)."""
    mom = moments(state)
    if mom.p3 < 0:
        ev = Evidence("p3_nonnegative", mom.p3, 0.0, "<", True,
                      "negative third moment requires a negative PT eigenvalue")
        return Verdict(VerdictKind.NPT_DETECTED, [ev])
    low = mom.p2 < mom.lower_bound - SLACK
    high = mom.p2 > mom.upper_bound + SLACK
    evidence = [
        Evidence("p2_below_2sqrt_p3_minus_1", mom.p2, mom.lower_bound, "<", low),
        Evidence("p2_above_sqrt_p3", mom.p2, mom.upper_bound, ">", high),
    ]
    kind = VerdictKind.NPT_DETECTED if (low or high) else VerdictKind.INCONCLUSIVE
    return Verdict(kind, evidence)


def _check_weight(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise RangeError(f"p must lie in [0, 1], got {p}")
    return p


def _check_moment(name: str, v: float) -> float:
    v = float(v)
    if not 0.0 < v <= 1.0 + SLACK:
        raise RangeError(f"{name} must lie in (0, 1], got {v}")
    return v


def mixture_p2_bound(p: float, p2_sep: float, p2_pptes: float) -> float:
    """Upper bound p^2 p2_sep + (1-p)^2 p2_pptes + 2p(1-p) on the PT purity of
    p*sep + (1-p)*pptes, valid whenever both components are PPT."""
    p = _check_weight(p)
    a = _check_moment("p2_sep", p2_sep)
    b = _check_moment("p2_pptes", p2_pptes)
    return p * p * a + (1 - p) ** 2 * b + 2 * p * (1 - p)


def mixture_ppt_condition(p: float, p2_sep: float, p2_pptes: float, d1: int, d2: int) -> bool:
    return mixture_p2_bound(p, p2_sep, p2_pptes) <= dim_threshold(d1, d2) + SLACK


def classify(state: BipartiteState, w: Optional[WitnessOperator] = None,
             psd_tol: float = PSD_TOL) -> Verdict:
    """Two-step identification.

    1. Moment window violated -> NPTDetected.
    2. p2 certificate; if silent, the PT spectrum decides PPT or NPT.
    3. For a PPT state a witness expectation below -1e-10 -> PPTESDetected.
       Otherwise SeparableCertified when d1 d2 <= 6, else CertifiedPPT.

    Every criterion evaluated is listed in the verdict's evidence, including
    which path established PPT-ness.
    """
    if w is not None and w.dims != state.dims:
        raise ShapeError(f"witness acts on {w.d1}x{w.d2}, state is {state.d1}x{state.d2}")

    detector = moment_npt_detector(state)
    evidence = list(detector.evidence)
    if detector.kind is VerdictKind.NPT_DETECTED:
        return Verdict(VerdictKind.NPT_DETECTED, evidence)

    cert = p2_ppt_certificate(state)
    evidence += cert.evidence
    oracle = exact_ppt(state, psd_tol)
    if cert.kind is VerdictKind.INCONCLUSIVE:
        evidence.append(Evidence("pt_min_eigenvalue", oracle.min_pt_eigenvalue, -psd_tol, ">=",
                                 oracle.is_ppt, "exact PT spectrum"))
        if not oracle.is_ppt:
            return Verdict(VerdictKind.NPT_DETECTED, evidence)
        ppt_path = "pt_spectrum"
    else:
        ppt_path = "p2_dimension_threshold"
    evidence.append(Evidence("ppt_established_by", oracle.min_pt_eigenvalue, -psd_tol, ">=",
                             True, ppt_path))

    if w is not None:
        val = expectation(w, state)
        # Round-off can push an exact zero slightly negative.
        detects = val < -SLACK
        evidence.append(Evidence("witness_expectation", val, -SLACK, "<", detects, w.label))
        if detects:
            return Verdict(VerdictKind.PPTES_DETECTED, evidence)

    if _can_certify_separable(state):
        return Verdict(VerdictKind.SEPARABLE_CERTIFIED, evidence)
    return Verdict(VerdictKind.CERTIFIED_PPT, evidence)
