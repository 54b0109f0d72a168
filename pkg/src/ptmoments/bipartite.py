"""Bipartite density matrices, partial transposition and PT moments.

Basis convention: the product vector |i>_A |j>_B sits at row ``i * d2 + j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Optional

import numpy as np

from . import linalg
from .errors import HermiticityError, PositivityError, ShapeError, TraceError

TRACE_TOL = 1e-9
PSD_TOL = 1e-10


class Violation(NamedTuple):
    check: str
    measured: float
    tolerance: float


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """A validated density matrix on C^d1 (x) C^d2.

    Build instances through :func:`validate`; the constructor itself does not
    check anything.
    """

    matrix: np.ndarray
    d1: int
    d2: int
    label: Optional[str] = None
    spectrum: Optional[linalg.EigenResult] = field(default=None, repr=False)

    @property
    def dims(self) -> tuple[int, int]:
        return self.d1, self.d2

    @property
    def n(self) -> int:
        return self.d1 * self.d2

    @cached_property
    def pt(self) -> np.ndarray:
        """Partial transpose on B."""
        return partial_transpose_B(self)

    @cached_property
    def pt_spectrum(self) -> linalg.EigenResult:
        return linalg.hermitian_eigenvalues(self.pt)

    def relabel(self, label: Optional[str]) -> "BipartiteState":
        return BipartiteState(self.matrix, self.d1, self.d2, label, self.spectrum)


def validate(matrix, d1: int, d2: int, *, label: Optional[str] = None,
             herm_tol: float = linalg.HERM_TOL, trace_tol: float = TRACE_TOL,
             psd_tol: float = PSD_TOL) -> BipartiteState:
    """Check that ``matrix`` is a density matrix on a ``d1 x d2`` system.

    All failed checks are collected in the raised error's ``violations``; the
    exception type reflects the first of them (shape, Hermiticity, trace,
    positivity in that order).
    """
    d1, d2 = int(d1), int(d2)
    if d1 < 1 or d2 < 1 or d1 * d2 < 2:
        raise ShapeError(f"need positive dimensions with d1*d2 >= 2, got ({d1}, {d2})",
                         [Violation("dims", d1 * d2, 2)])
    m = linalg.as_matrix(matrix)
    n = d1 * d2
    if m.shape != (n, n):
        raise ShapeError(f"matrix shape {m.shape} does not match {d1}x{d2} system ({n}, {n})",
                         [Violation("shape", m.shape[0], n)])

    violations = []
    errors = []
    herm = linalg.hermiticity_defect(m)
    if herm > herm_tol:
        violations.append(Violation("hermiticity", herm, herm_tol))
        errors.append(HermiticityError)
    tr = complex(np.trace(m))
    tr_dev = abs(tr - 1.0)
    if tr_dev > trace_tol:
        violations.append(Violation("trace", tr_dev, trace_tol))
        errors.append(TraceError)
    spectrum = None
    if herm <= herm_tol:
        spectrum = linalg.hermitian_eigenvalues(m, herm_tol=herm_tol)
        if spectrum.min < -psd_tol:
            violations.append(Violation("positivity", spectrum.min, -psd_tol))
            errors.append(PositivityError)
    if violations:
        detail = "; ".join(f"{v.check}: measured {v.measured:.3e}, tolerance {v.tolerance:.1e}"
                           for v in violations)
        raise errors[0](f"invalid {d1}x{d2} state: {detail}", violations)

    m = 0.5 * (m + m.conj().T)
    m.setflags(write=False)
    return BipartiteState(m, d1, d2, label, spectrum)


def _unpack(state_or_matrix, d1, d2):
    if isinstance(state_or_matrix, BipartiteState):
        return state_or_matrix.matrix, state_or_matrix.d1, state_or_matrix.d2
    if d1 is None or d2 is None:
        raise ShapeError("d1 and d2 are required when passing a bare matrix")
    m = linalg.as_matrix(state_or_matrix, square=True)
    if m.shape[0] != d1 * d2:
        raise ShapeError(f"matrix of size {m.shape[0]} is not {d1}x{d2}")
    return m, int(d1), int(d2)


def partial_transpose_B(state, d1: Optional[int] = None, d2: Optional[int] = None) -> np.ndarray:
    """Transpose the second tensor factor.

    Entry ``(i*d2 + j, k*d2 + l)`` of the result is entry ``(i*d2 + l, k*d2 + j)``
    of the input.  Accepts a :class:`BipartiteState` or a matrix plus dims.
    """
    m, d1, d2 = _unpack(state, d1, d2)
    return m.reshape(d1, d2, d1, d2).transpose(0, 3, 2, 1).reshape(d1 * d2, d1 * d2)


def partial_transpose_A(state, d1: Optional[int] = None, d2: Optional[int] = None) -> np.ndarray:
    m, d1, d2 = _unpack(state, d1, d2)
    return m.reshape(d1, d2, d1, d2).transpose(2, 1, 0, 3).reshape(d1 * d2, d1 * d2)


@dataclass(frozen=True)
class MomentReport:
    """Moments of the partially transposed state and the derived thresholds.

    ``dim_threshold`` is 1/(d1*d2 - 1); ``lower_bound`` and ``upper_bound`` are
    2*sqrt(p3) - 1 and sqrt(p3), the window p2 must sit in for a PPT state.
    """

    p2: float
    p3: float
    dim_threshold: float
    lower_bound: float
    upper_bound: float
    d1: int
    d2: int
    extra: dict = field(default_factory=dict)
    pt_eigenvalues: tuple = ()

    def moment(self, k: int) -> float:
        if k == 2:
            return self.p2
        if k == 3:
            return self.p3
        return self.extra[k]


def dim_threshold(d1: int, d2: int) -> float:
    n = d1 * d2
    if n < 2:
        raise ShapeError("threshold 1/(d1*d2 - 1) undefined for d1*d2 < 2")
    return 1.0 / (n - 1)


def moments(state: BipartiteState, orders: Iterable[int] = (2, 3)) -> MomentReport:
    """Spectral moments p_k = sum_i lambda_i**k of the partial transpose.

    p2 and p3 are always computed; any further orders land in ``extra``.
    """
    orders = {int(k) for k in orders}
    bad = [k for k in orders if k < 1]
    if bad:
        raise ValueError(f"moment orders must be positive, got {sorted(bad)}")
    lam = state.pt_spectrum.eigenvalues
    p2 = float(np.sum(lam ** 2))
    p3 = float(np.sum(lam ** 3))
    extra = {k: float(np.sum(lam ** k)) for k in sorted(orders - {2, 3})}
    # p3 can dip below zero only for NPT states; sqrt is then undefined.
    root = math.sqrt(p3) if p3 >= 0 else float("nan")
    return MomentReport(
        p2=p2,
        p3=p3,
        dim_threshold=dim_threshold(state.d1, state.d2),
        lower_bound=2.0 * root - 1.0,
        upper_bound=root,
        d1=state.d1,
        d2=state.d2,
        extra=extra,
        pt_eigenvalues=tuple(float(x) for x in lam),
    )
