"""Dense complex matrix kernel.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.
Arithmetic and Kronecker products delegate to numpy; Hermitian spectra come
from a cyclic Jacobi solver implemented here, so every PSD check, trace norm
and moment in the package is computed from the same eigenvalue routine.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConvergenceError, HermiticityError, NumericalError, ShapeError, ValidationError

#: Default relative convergence tolerance of the Jacobi solver.
EIG_TOL = 1e-12
#: Hard cap on Jacobi sweeps.
MAX_SWEEPS = 100
#: Max-entry deviation from Hermiticity accepted by Hermitian routines.
HERM_TOL = 1e-9


@dataclass(frozen=True)
class EigenResult:
    """Spectrum of a Hermitian matrix, ascending, plus the relative
    off-diagonal norm left when the solver stopped."""

    eigenvalues: np.ndarray
    residual: float
    sweeps: int = 0

    @property
    def min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def max(self) -> float:
        return float(self.eigenvalues[-1])


def as_matrix(a, *, square: bool = False) -> np.ndarray:
    """Coerce ``a`` to a finite 2-D complex array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise ShapeError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if square and m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix contains NaN or Inf entries")
    return m


def multiply(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def adjoint(a) -> np.ndarray:
    return as_matrix(a).conj().T


def trace(a) -> complex:
    return complex(np.trace(as_matrix(a, square=True)))


def kron(a, b) -> np.ndarray:
    """Kronecker product; entry (i*b.n + k, j*b.m + l) is a[i, j] * b[k, l]."""
    return np.kron(as_matrix(a), as_matrix(b))


def hermiticity_defect(a) -> float:
    """Largest entry of ``|a - a^H|``."""
    a = as_matrix(a, square=True)
    return float(np.max(np.abs(a - a.conj().T)))


def check_hermitian(a, tol: float = HERM_TOL) -> np.ndarray:
    a = as_matrix(a, square=True)
    defect = hermiticity_defect(a)
    if defect > tol:
        raise HermiticityError(f"matrix is not Hermitian: max |A - A^H| = {defect:.3e} > {tol:.1e}")
    return a


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    # Circle-method tournament: every unordered pair appears once per sweep and
    # pairs within a round are disjoint, so a round's rotations commute.
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p < n and q < n]
        if pairs:
            p, q = zip(*pairs)
            rounds.append((np.array(p), np.array(q)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _offdiag_norm(a: np.ndarray) -> float:
    # Direct sum; ||A||^2 - ||diag||^2 cancels catastrophically near convergence.
    off = a[~np.eye(a.shape[0], dtype=bool)]
    return float(np.sqrt(np.sum(off.real ** 2 + off.imag ** 2)))


def hermitian_eigenvalues(a, tol: float = EIG_TOL, *, herm_tol: float = HERM_TOL,
                          max_sweeps: Optional[int] = None) -> EigenResult:
    """Eigenvalues of a Hermitian matrix by cyclic Jacobi with complex rotations.

    Each sweep visits every off-diagonal pair once, in round-robin order, so
    the disjoint rotations of one round are applied together.  Iteration stops
    when the off-diagonal Frobenius norm falls to ``tol * ||a||_F``.

    Raises
    ------
    HermiticityError
        If ``max|a - a^H| > herm_tol``.
    ConvergenceError
        If ``max_sweeps`` sweeps do not reach the tolerance.
    """
    if max_sweeps is None:
        max_sweeps = MAX_SWEEPS
    a = check_hermitian(a, herm_tol)
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    scale = float(np.linalg.norm(a))
    if n == 1 or scale == 0.0:
        return EigenResult(np.sort(np.real(np.diag(a))), 0.0, 0)

    # Rotations below this magnitude cannot move the residual; skipping them
    # saves work in the final sweeps.
    negligible = tol * scale / (4 * n)
    rounds = _round_robin(n)
    off = _offdiag_norm(a)
    sweeps = 0
    while off > tol * scale:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(relative off-diagonal norm {off / scale:.3e})", off / scale)
        for p, q in rounds:
            apq = a[p, q]
            r = np.abs(apq)
            active = r > negligible
            if not np.any(active):
                continue
            p, q, apq, r = p[active], q[active], apq[active], r[active]
            phase = apq / r
            app = np.real(a[p, p])
            aqq = np.real(a[q, q])
            theta = (aqq - app) / (2.0 * r)
            t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            se = s * phase
            # A <- J^H A J, J acting on the (p, q) plane of each pair.
            # Fancy indexing below returns copies.
            cols_p, cols_q = a[:, p], a[:, q]
            a[:, p] = cols_p * c - cols_q * np.conj(se)
            a[:, q] = cols_p * se + cols_q * c
            rows_p, rows_q = a[p, :], a[q, :]
            a[p, :] = c[:, None] * rows_p - se[:, None] * rows_q
            a[q, :] = np.conj(se)[:, None] * rows_p + c[:, None] * rows_q
            a[p, q] = 0.0
            a[q, p] = 0.0
            a[p, p] = np.real(a[p, p])
            a[q, q] = np.real(a[q, q])
        sweeps += 1
        off = _offdiag_norm(a)
    return EigenResult(np.sort(np.real(np.diag(a))), off / scale, sweeps)


def trace_norm(a) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(hermitian_eigenvalues(a).eigenvalues)))


def power_trace(a, k: int) -> float:
    """``Tr(a**k)`` for Hermitian ``a``.

    The returned value is the eigenvalue power sum; it is cross-checked against
    repeated multiplication and a disagreement raises ``NumericalError``.
    """
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    k = int(k)
    a = check_hermitian(a)
    spectral = float(np.sum(hermitian_eigenvalues(a).eigenvalues ** k))
    direct = float(np.real(np.trace(np.linalg.matrix_power(a, k))))
    if abs(spectral - direct) > 1e-10 * max(1.0, abs(direct)):
        raise NumericalError(f"Tr(A^{k}) mismatch: spectral {spectral!r} vs direct {direct!r}")
    return spectral
