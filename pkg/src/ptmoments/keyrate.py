"""Distillable-key-rate estimate for states of the form

    rho_c  ~  sum_i |Bell_i><Bell_i| (x) sigma_i,   Bell order (phi+, phi-, psi+, psi-)

with the sigma_i mixtures of a separable and a PPT-entangled state.
K_D = 1 - Q, Q = -(x log2 x + y log2 y + z log2 z + w log2 w), where x, y
(resp. z, w) are half-sums / half-differences of the trace norms of
sigma_0 +- sigma_1 (resp. sigma_2 +- sigma_3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.special import entr

from . import linalg
from .bipartite import BipartiteState, validate
from .errors import NumericalError, RangeError, ShapeError
from .states import BELL_NAMES, bell_vector, mixture, pptes1, pptes2, sep1, sep2

#: Mixing weights of the two worked examples.
EXAMPLE_WEIGHTS = {
    1: (0.43, 0.45, 0.48, 0.50),
    2: (0.45, 0.50, 0.55, 0.58),
}


@dataclass(frozen=True, eq=False)
class SigmaQuad:
    sigmas: tuple

    def __post_init__(self):
        if len(self.sigmas) != 4:
            raise ShapeError(f"need exactly four sigma states, got {len(self.sigmas)}")
        dims = {s.dims for s in self.sigmas}
        if len(dims) != 1:
            raise ShapeError(f"sigma states have mismatched dimensions {sorted(dims)}")

    @property
    def dims(self) -> tuple[int, int]:
        return self.sigmas[0].dims

    def __getitem__(self, i: int) -> BipartiteState:
        return self.sigmas[i]


class XYZW(NamedTuple):
    x: float
    y: float
    z: float
    w: float


@dataclass(frozen=True)
class KeyRateReport:
    x: float
    y: float
    z: float
    w: float
    Q: float
    K_D: float

    @property
    def exceeds_one(self) -> bool:
        return self.K_D > 1.0

    @property
    def note(self) -> str:
        if self.exceeds_one:
            return ("K_D > 1: Q is negative because x, z > 1 for trace-one sigma_i; "
                    "the value exceeds one key bit per copy and is reported as computed")
        return ""


def build_sigmas(weights: Sequence[float], sep: BipartiteState,
                 pptes: BipartiteState) -> SigmaQuad:
    """sigma_i = p_i * sep + (1 - p_i) * pptes, each p_i in (0, 1)."""
    weights = [float(p) for p in weights]
    if len(weights) != 4:
        raise ShapeError(f"need four mixing weights, got {len(weights)}")
    for p in weights:
        if not 0.0 < p < 1.0:
            raise RangeError(f"mixing weights must lie in the open interval (0, 1), got {p}")
    if sep.dims != pptes.dims:
        raise ShapeError(f"cannot mix {sep.d1}x{sep.d2} with {pptes.d1}x{pptes.d2}")
    return SigmaQuad(tuple(mixture(p, sep, pptes, label=f"sigma{i}")
                           for i, p in enumerate(weights)))


def example_sigmas(which: int) -> SigmaQuad:
    if which == 1:
        return build_sigmas(EXAMPLE_WEIGHTS[1], sep1(), pptes1())
    if which == 2:
        return build_sigmas(EXAMPLE_WEIGHTS[2], sep2(), pptes2())
    raise ValueError(f"unknown key-rate example {which!r}; expected 1 or 2")


def xyzw(q: SigmaQuad) -> XYZW:
    # sigma_i enter with trace one, no renormalisation.
    s = [sig.matrix for sig in q.sigmas]
    plus01, minus01 = linalg.trace_norm(s[0] + s[1]), linalg.trace_norm(s[0] - s[1])
    plus23, minus23 = linalg.trace_norm(s[2] + s[3]), linalg.trace_norm(s[2] - s[3])
    return XYZW(
        0.5 * (plus01 + minus01),
        0.5 * (plus01 - minus01),
        0.5 * (plus23 + minus23),
        0.5 * (plus23 - minus23),
    )


def _bits(t: float) -> float:
    """-t log2 t with 0 log 0 = 0."""
    if t < 0:
        if t > -1e-12:
            return 0.0
        raise NumericalError(f"entropy argument is negative: {t!r}")
    return float(entr(t)) / math.log(2)


def key_rate(q: SigmaQuad) -> KeyRateReport:
    v = xyzw(q)
    Q = sum(_bits(t) for t in v)
    return KeyRateReport(v.x, v.y, v.z, v.w, Q, 1.0 - Q)


def key_shield_matrix(q: SigmaQuad) -> np.ndarray:
    """rho_c in key-outermost order A B A' B'.

    Normalised by sum_i Tr(sigma_i), so that the (A B) block structure is
    [[s0+s1, 0, 0, s0-s1], [0, s2+s3, s2-s3, 0], [0, s2-s3, s2+s3, 0],
    [s0-s1, 0, 0, s0+s1]] / (2 sum_i Tr sigma_i) and the trace is one.
    """
    total = sum(float(np.real(np.trace(s.matrix))) for s in q.sigmas)
    out = 0
    for name, sig in zip(BELL_NAMES, q.sigmas):
        v = bell_vector(name)
        out = out + np.kron(np.outer(v, v.conj()), sig.matrix)
    return out / total


def key_shield_to_bipartite(m: np.ndarray, d1: int, d2: int) -> np.ndarray:
    """Reorder A B A' B' to A A' B B' (shield dims d1, d2)."""
    n = 4 * d1 * d2
    t = np.asarray(m).reshape(2, 2, d1, d2, 2, 2, d1, d2)
    return t.transpose(0, 2, 1, 3, 4, 6, 5, 7).reshape(n, n)


def bipartite_to_key_shield(m: np.ndarray, d1: int, d2: int) -> np.ndarray:
    n = 4 * d1 * d2
    t = np.asarray(m).reshape(2, d1, 2, d2, 2, d1, 2, d2)
    return t.transpose(0, 2, 1, 3, 4, 6, 5, 7).reshape(n, n)


def rho_c(q: SigmaQuad) -> BipartiteState:
    """rho_c as a (2 d1) x (2 d2) state across the AA' | BB' cut."""
    d1, d2 = q.dims
    m = key_shield_to_bipartite(key_shield_matrix(q), d1, d2)
    return validate(m, 2 * d1, 2 * d2, label="rho_c")
