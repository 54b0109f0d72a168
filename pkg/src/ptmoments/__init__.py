"""Partial-transpose moment criteria for bipartite states.

Submodules: ``linalg`` (Jacobi eigensolver and kernels), ``bipartite``
(states, partial transposes, moments), ``states`` (constructors),
``criteria`` (detection tests and classification), ``witness``, ``keyrate``,
``io`` and ``cli``.
"""

__version__ = "0.1.0"

from .bipartite import BipartiteState, MomentReport, moments, partial_transpose_A, partial_transpose_B, validate
from .criteria import Verdict, VerdictKind, classify, exact_ppt
from .errors import (ConvergenceError, NumericalError, PremiseError, PtMomentsError,
                     ShapeError, ValidationError)

__all__ = [
    "__version__", "BipartiteState", "MomentReport", "moments", "partial_transpose_A",
    "partial_transpose_B", "validate", "Verdict", "VerdictKind", "classify", "exact_ppt",
    "ConvergenceError", "NumericalError", "PremiseError", "PtMomentsError", "ShapeError",
    "ValidationError",
]
