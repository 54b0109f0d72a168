"""Entanglement witnesses: the 3x3 family W(alpha), expectation values and the
mixing-weight threshold below which a witness still flags a mixture.

The closed forms at the bottom hold only on the slice a = 2.5, alpha = 1 of
the separable / PPT-entangled families in :mod:`ptmoments.states`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import bisect

from . import linalg
from .bipartite import BipartiteState
from .errors import NumericalError, PremiseError, RangeError, ShapeError, ValidationError
from .states import mixture, random_product_vectors

#: Product states sampled when a witness is checked at construction.
SEPARABLE_SAMPLES = 4096
SEPARABLE_TOL = 1e-10
IMAG_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class WitnessOperator:
    matrix: np.ndarray
    d1: int
    d2: int
    label: str = "W"

    @property
    def dims(self) -> tuple[int, int]:
        return self.d1, self.d2


def make_witness(matrix, d1: int, d2: int, label: str = "W", *,
                 herm_tol: float = linalg.HERM_TOL) -> WitnessOperator:
    m = linalg.check_hermitian(matrix, herm_tol)
    if m.shape[0] != d1 * d2:
        raise ShapeError(f"witness of size {m.shape[0]} does not act on {d1}x{d2}")
    m = 0.5 * (m + m.conj().T)
    m.setflags(write=False)
    return WitnessOperator(m, int(d1), int(d2), label)


def min_product_expectation(w: WitnessOperator, samples: int = SEPARABLE_SAMPLES,
                            seed=0) -> float:
    """Smallest <v|W|v> over random product unit vectors v.

    Separable states are mixtures of such projectors, so this is a sampled
    lower bound on Tr(W sigma) over separable sigma.
    """
    v = random_product_vectors(seed, w.d1, w.d2, samples)
    vals = np.einsum("si,ij,sj->s", v.conj(), w.matrix, v)
    return float(np.min(vals.real))


def check_separable_positivity(w: WitnessOperator, samples: int = SEPARABLE_SAMPLES,
                               seed=0, tol: float = SEPARABLE_TOL) -> float:
    worst = min_product_expectation(w, samples, seed)
    if worst < -tol:
        raise ValidationError(
            f"{w.label} is negative on a product state (min <W> = {worst:.3e}); not a witness")
    return worst


def witness_w(alpha: float, *, check: bool = True) -> WitnessOperator:
    """The 9x9 operator W(alpha), prefactor 1/(3 + 3 alpha^2).

    With ``check`` (default) the operator is screened against random product
    states and rejected if any expectation is negative; numerically that
    happens for |alpha| above roughly 1.2.
    """
    al = float(alpha)
    if not np.isfinite(al):
        raise RangeError("alpha must be finite")
    m = np.zeros((9, 9))
    m[0, 0] = m[3, 3] = m[8, 8] = al * al
    m[2, 2] = m[4, 4] = m[7, 7] = 1.0
    m[0, 4] = m[4, 0] = -al
    m[0, 8] = m[8, 0] = -al * al
    m[5, 7] = m[7, 5] = -al
    w = make_witness(m / (3 + 3 * al * al), 3, 3, label=f"W(alpha={al:g})")
    if check:
        check_separable_positivity(w)
    return w


def expectation(w: WitnessOperator, state: BipartiteState) -> float:
    """Tr(W rho), real part; a complex residue above 1e-10 is an error."""
    if w.dims != state.dims:
        raise ShapeError(f"witness acts on {w.d1}x{w.d2}, state is {state.d1}x{state.d2}")
    val = complex(np.sum(w.matrix * state.matrix.T))
    if abs(val.imag) > IMAG_TOL:
        raise NumericalError(f"Tr(W rho) has imaginary part {val.imag:.3e}")
    return val.real


@dataclass(frozen=True)
class MixingThreshold:
    """k1 = Tr(W sep), k2 = -Tr(W ent); the witness detects
    p*sep + (1-p)*ent for every p < threshold = k2 / (k1 + k2)."""

    k1: float
    k2: float
    threshold: float


def mixing_threshold(w: WitnessOperator, sep: BipartiteState,
                     ent: BipartiteState) -> MixingThreshold:
    k1 = expectation(w, sep)
    k2 = -expectation(w, ent)
    if k1 < -SEPARABLE_TOL or k2 <= 0:
        raise PremiseError(
            f"need Tr(W sep) >= 0 and Tr(W ent) < 0, measured {k1:.6g} and {-k2:.6g}",
            {"k1": k1, "k2": k2})
    k1 = max(k1, 0.0)
    return MixingThreshold(k1, k2, k2 / (k1 + k2))


def locate_sign_change(w: WitnessOperator, sep: BipartiteState, ent: BipartiteState,
                       xtol: float = 1e-12) -> Optional[float]:
    """Mixing weight p in [0, 1] where Tr(W (p sep + (1-p) ent)) changes sign.

    Found by bisection on the measured expectation; ``None`` when the sign is
    the same at both ends.
    """
    f = lambda p: expectation(w, mixture(p, sep, ent))
    lo, hi = f(0.0), f(1.0)
    if lo == 0.0:
        return 0.0
    if hi == 0.0:
        return 1.0
    if (lo < 0) == (hi < 0):
        return None
    return float(bisect(f, 0.0, 1.0, xtol=xtol, maxiter=200))


# ---------------------------------------------------------------------------
# Closed forms on the a = 2.5, alpha = 1 slice.

def _check_x(x: float) -> float:
    x = float(x)
    if not x > 0:
        raise RangeError(f"x must be positive, got {x}")
    return x


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise RangeError(f"p must lie in [0, 1], got {p}")
    return p


def pptes_expectation_closed_form(x: float) -> float:
    """Tr(W(1) rho_pptes(x)) = (3 - x) / (18 (1 + x + x^2))."""
    x = _check_x(x)
    return (3 - x) / (18 * (1 + x + x * x))


def pe_expectation_closed_form(p: float, x: float) -> float:
    """((3 - x) + p (11x^2 + 25x - 31)) / (18 (x^2 + x + 1)).

    Legacy expression, kept for comparison only: it agrees with the measured
    Tr(W(1) rho) at p = 0 but its p-term is 14 times too large.  Use
    :func:`mixture_expectation_closed_form`.
    """
    p, x = _check_p(p), _check_x(x)
    return ((3 - x) + p * (11 * x * x + 25 * x - 31)) / (18 * (x * x + x + 1))


def mixture_expectation_closed_form(p: float, x: float) -> float:
    """Tr(W(1) [p sep(2.5) + (1-p) pptes(x)]).

    Linear in p between Tr(W(1) sep(2.5)) = 11/252 and the PPT-family value,
    which gives ((3 - x) + p (11x^2 + 25x - 31) / 14) / (18 (x^2 + x + 1)).
    """
    p, x = _check_p(p), _check_x(x)
    return ((3 - x) + p * (11 * x * x + 25 * x - 31) / 14) / (18 * (x * x + x + 1))


def pe_threshold_closed_form(x: float) -> float:
    """(x - 3) / (11x^2 + 25x - 31); the sign change of the legacy expression."""
    x = _check_x(x)
    return (x - 3) / (11 * x * x + 25 * x - 31)


def mixture_threshold_closed_form(x: float) -> float:
    """14 (x - 3) / (11x^2 + 25x - 31): where the measured expectation crosses zero."""
    x = _check_x(x)
    return 14 * (x - 3) / (11 * x * x + 25 * x - 31)
