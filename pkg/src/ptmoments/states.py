"""State constructors: Bell projectors, the fixed example matrices, the
parametric separable / PPT-entangled families, mixtures and random ensembles.

Every public constructor returns a validated :class:`BipartiteState`, except
:func:`random_density` which returns a bare matrix.
"""

from __future__ import annotations

import math
from typing import Iterable, Optional

import numpy as np

from .bipartite import BipartiteState, validate
from .errors import RangeError, ShapeError

BELL_NAMES = ("phi+", "phi-", "psi+", "psi-")

_BELL_ALIASES = {
    "phi+": "phi+", "φ+": "phi+", "phi_plus": "phi+",
    "phi-": "phi-", "φ-": "phi-", "phi_minus": "phi-",
    "psi+": "psi+", "ψ+": "psi+", "psi_plus": "psi+",
    "psi-": "psi-", "ψ-": "psi-", "psi_minus": "psi-",
}


def bell_vector(which: str) -> np.ndarray:
    key = _BELL_ALIASES.get(str(which).strip().lower())
    if key is None:
        raise ValueError(f"unknown Bell state {which!r}; expected one of {BELL_NAMES}")
    v = np.zeros(4, dtype=complex)
    if key.startswith("phi"):
        v[0], v[3] = 1.0, (1.0 if key == "phi+" else -1.0)
    else:
        v[1], v[2] = 1.0, (1.0 if key == "psi+" else -1.0)
    return v / math.sqrt(2.0)


def bell(which: str) -> BipartiteState:
    """Rank-one projector onto a two-qubit Bell vector."""
    v = bell_vector(which)
    return validate(np.outer(v, v.conj()), 2, 2, label=f"bell_{_BELL_ALIASES[str(which).strip().lower()]}")


def _ketbra_sum(d: int, terms: Iterable[tuple]) -> np.ndarray:
    """Sum of coef * |ij><kl| on C^d (x) C^d; terms are ((i, j), (k, l), coef)."""
    m = np.zeros((d * d, d * d), dtype=complex)
    for (i, j), (k, l), coef in terms:
        m[i * d + j, k * d + l] += coef
    return m


def _diag_with_block(diag, block_idx, block_val) -> np.ndarray:
    m = np.diag(np.asarray(diag, dtype=complex))
    for i in block_idx:
        for j in block_idx:
            m[i, j] = block_val
    return m


# ---------------------------------------------------------------------------
# Fixed example matrices.  Fractions are written as exact quotients; decimal
# entries are copied as printed.

def _rho1():
    return np.array([
        [27, 0, 8, 4],
        [0, 13, -13, 1],
        [8, -13, 32, -4],
        [4, 1, -4, 28],
    ]) / 100


def _rho2():
    return np.array([
        [9, -4, -3, -1, -3, 3],
        [-4, 21, 0, 2, -1, -1],
        [-3, 0, 20, 0, 6, -2],
        [-1, 2, 0, 13, -1, 0],
        [-3, -1, 6, -1, 17, 4],
        [3, -1, -2, 0, 4, 20],
    ]) / 100


def _rho3():
    m = np.diag([1 / 8, 5 / 48, 5 / 48, 5 / 48, 1 / 8, 5 / 48, 5 / 48, 5 / 48, 1 / 8])
    for i, j in ((0, 4), (0, 8), (4, 8)):
        m[i, j] = m[j, i] = 1 / 48
    return m


def _rho4():
    m = np.diag([3 / 25, 2 / 25, 13 / 100, 14 / 100, 3 / 25, 2 / 25, 2 / 25, 13 / 100, 3 / 25])
    m[4, 8] = m[8, 4] = 1 / 25
    m[5, 7] = m[7, 5] = -1 / 20
    return m


def _nptes_2x3():
    return np.array([
        [0.19, 0, 0, 0, 0, 0.13],
        [0, 0.15, 0.11, 0, 0, 0],
        [0, 0.11, 0.18, 0.02, 0, 0],
        [0, 0, 0.02, 0.16, 0.09, 0],
        [0, 0, 0, 0.09, 0.13, 0],
        [0.13, 0, 0, 0, 0, 0.19],
    ])


def _nptes_3x3():
    return np.array([
        [0.09, 0.05, 0.02, 0, 0.01, 0, 0.02, 0.03, 0.04],
        [0.05, 0.13, 0.03, 0.02, 0.06, 0.04, 0.01, 0, 0.02],
        [0.02, 0.03, 0.10, 0, 0, 0.05, 0.05, 0, 0.03],
        [0, 0.02, 0, 0.10, 0.05, 0.04, 0.02, 0.04, 0],
        [0.01, 0.06, 0, 0.05, 0.14, 0.04, 0, 0.05, 0.04],
        [0, 0.04, 0.05, 0.04, 0.04, 0.10, 0, 0, 0],
        [0.02, 0.01, 0.05, 0.02, 0, 0, 0.10, 0.05, 0.01],
        [0.03, 0, 0, 0.04, 0.05, 0, 0.05, 0.13, 0.06],
        [0.04, 0.02, 0.03, 0, 0.04, 0, 0.01, 0.06, 0.11],
    ])


def _rho4b():
    return np.array([
        [0.35, -0.05, -0.26, -0.01],
        [-0.05, 0.26, -0.10, 0],
        [-0.26, -0.10, 0.34, 0.06],
        [-0.01, 0, 0.06, 0.05],
    ])


def _rho5():
    m = np.array([
        [0.0855788, -0.0130138, -0.0634194, -0.0602343, 0.0151165, 0.0556449],
        [-0.0130138, 0.0319954, 0.0319794, 0.00361884, -0.0293307, -0.0151244],
        [-0.0634194, 0.0319794, 0.326903, 0.075471, 0.00431698, -0.239706],
        [-0.0602343, 0.00361884, 0.075471, 0.0891845, -0.0445194, -0.0865549],
        [0.0151165, -0.0293307, 0.00431698, -0.0445194, 0.100965, 0.0767125],
        [0.0556449, -0.0151244, -0.239706, -0.0865549, 0.0767125, 0.365373],
    ])
    # Six-digit entries leave the trace at 0.9999997; rescale to unit trace.
    return m / np.trace(m)


_FIXTURES = {
    "rho1_2x2": (_rho1, 2, 2),
    "rho2_2x3": (_rho2, 2, 3),
    "rho3_3x3": (_rho3, 3, 3),
    "rho4_3x3": (_rho4, 3, 3),
    "nptes_2x3": (_nptes_2x3, 2, 3),
    "nptes_3x3": (_nptes_3x3, 3, 3),
    "rho4b_2x2": (_rho4b, 2, 2),
    "rho5_2x3": (_rho5, 2, 3),
}

FIXTURE_IDS = tuple(_FIXTURES)


def fixture(name: str) -> BipartiteState:
    try:
        build, d1, d2 = _FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURE_IDS)}") from None
    return validate(build(), d1, d2, label=name)


# ---------------------------------------------------------------------------
# Parametric 3x3 families.

_GHZ_IDX = (0, 4, 8)  # |00>, |11>, |22>


def sep_family(a: float) -> BipartiteState:
    """Separable 3x3 state with populations a/21 and (5 - a)/21, a in [2, 3]."""
    a = float(a)
    if not 2.0 <= a <= 3.0:
        raise RangeError(f"a must lie in [2, 3], got {a}")
    diag = np.array([2, a, 5 - a, 5 - a, 2, a, a, 5 - a, 2]) / 21
    return validate(_diag_with_block(diag, _GHZ_IDX, 2 / 21), 3, 3, label=f"sep_a={a:g}")


def pptes_family(x: float) -> BipartiteState:
    """PPT 3x3 state, normalised by 1 / (3 (1 + x + 1/x)), x > 0."""
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise RangeError(f"x must be a positive finite number, got {x}")
    diag = np.array([1, x, 1 / x, 1 / x, 1, x, x, 1 / x, 1])
    m = _diag_with_block(diag, _GHZ_IDX, 1.0) / (3 * (1 + x + 1 / x))
    return validate(m, 3, 3, label=f"pptes_x={x:g}")


def pptes1_coefficients() -> tuple[float, float, float]:
    """(a, b, c) entering :func:`pptes1`."""
    r5 = math.sqrt(5.0)
    den = 3 + 9 * r5
    return (1 + r5) / den, -2 / den, (-1 + r5) / den


def sep1() -> BipartiteState:
    diag = {(0, 0): 2, (0, 1): 2.3, (0, 2): 2.7,
            (1, 0): 2.7, (1, 1): 2, (1, 2): 2.3,
            (2, 0): 2.3, (2, 1): 2.7, (2, 2): 2}
    terms = [(ij, ij, v / 21) for ij, v in diag.items()]
    terms += [(p, q, 2 / 21) for p in ((0, 0), (1, 1), (2, 2))
              for q in ((0, 0), (1, 1), (2, 2)) if p != q]
    return validate(_ketbra_sum(3, terms), 3, 3, label="sep1")


def pptes1() -> BipartiteState:
    a, b, c = pptes1_coefficients()
    diag = {(0, 0): a, (0, 1): c, (0, 2): a,
            (1, 0): a, (1, 1): a, (1, 2): c,
            (2, 0): c, (2, 1): a, (2, 2): a}
    terms = [(ij, ij, v) for ij, v in diag.items()]
    terms += [((0, 0), (1, 1), b), ((0, 0), (2, 2), b), ((1, 1), (0, 0), b),
              ((1, 2), (2, 1), b), ((2, 1), (1, 2), b), ((2, 2), (0, 0), b)]
    return validate(_ketbra_sum(3, terms), 3, 3, label="pptes1")


def sep2() -> BipartiteState:
    terms = []
    for u, v in (((0, 0), (3, 3)), ((0, 3), (3, 0)), ((1, 1), (2, 2)), ((1, 2), (2, 1))):
        terms += [(p, q, 1 / 8) for p in (u, v) for q in (u, v)]
    return validate(_ketbra_sum(4, terms), 4, 4, label="sep2")


def pptes2() -> BipartiteState:
    # Built exactly as given; this is the maximally entangled projector and is
    # NPT, whatever its name suggests.
    terms = [((i, i), (j, j), 1 / 4) for i in range(4) for j in range(4)]
    return validate(_ketbra_sum(4, terms), 4, 4, label="pptes2")


def maximally_mixed(d1: int, d2: int) -> BipartiteState:
    n = d1 * d2
    return validate(np.eye(n) / n, d1, d2, label=f"maximally_mixed_{d1}x{d2}")


def product(rho_a, rho_b, label: Optional[str] = None) -> BipartiteState:
    rho_a = np.asarray(rho_a, dtype=complex)
    rho_b = np.asarray(rho_b, dtype=complex)
    return validate(np.kron(rho_a, rho_b), rho_a.shape[0], rho_b.shape[0], label=label)


def mixture(p: float, s1: BipartiteState, s2: BipartiteState,
            label: Optional[str] = None) -> BipartiteState:
    """p * s1 + (1 - p) * s2."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise RangeError(f"mixing weight must lie in [0, 1], got {p}")
    if s1.dims != s2.dims:
        raise ShapeError(f"cannot mix {s1.d1}x{s1.d2} with {s2.d1}x{s2.d2}")
    if p == 1.0:
        return s1.relabel(label or s1.label)
    if p == 0.0:
        return s2.relabel(label or s2.label)
    if label is None and s1.label and s2.label:
        label = f"{p:g}*{s1.label}+{1 - p:g}*{s2.label}"
    return validate(p * s1.matrix + (1 - p) * s2.matrix, s1.d1, s1.d2, label=label)


# ---------------------------------------------------------------------------
# Random ensembles.  ``seed`` is anything numpy.random.default_rng accepts,
# including an existing Generator (which is then advanced).

def random_density(seed, n: int, rank: Optional[int] = None) -> np.ndarray:
    """Ginibre-induced density matrix G G^dag / Tr(G G^dag), G of shape n x rank."""
    if n < 2:
        raise ValueError("n must be at least 2")
    rng = np.random.default_rng(seed)
    k = n if rank is None else int(rank)
    g = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_state(seed, d1: int, d2: int, rank: Optional[int] = None) -> BipartiteState:
    return validate(random_density(seed, d1 * d2, rank), d1, d2, label=f"random_{d1}x{d2}")


def random_unit_vectors(rng, d: int, size: int) -> np.ndarray:
    v = rng.standard_normal((size, d)) + 1j * rng.standard_normal((size, d))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_product_vectors(seed, d1: int, d2: int, size: int) -> np.ndarray:
    """``size`` random product unit vectors alpha (x) beta, one per row."""
    rng = np.random.default_rng(seed)
    a = random_unit_vectors(rng, d1, size)
    b = random_unit_vectors(rng, d2, size)
    return np.einsum("si,sj->sij", a, b).reshape(size, d1 * d2)


def random_separable(seed, d1: int, d2: int, k: Optional[int] = None) -> BipartiteState:
    """Convex mixture of k random pure product states, Dirichlet(1,...,1) weights.

    k defaults to 2 * d1 * d2.
    """
    k = 2 * d1 * d2 if k is None else int(k)
    if k < 1:
        raise ValueError("need at least one product term")
    rng = np.random.default_rng(seed)
    vecs = random_product_vectors(rng, d1, d2, k)
    w = rng.dirichlet(np.ones(k))
    rho = np.einsum("s,si,sj->ij", w, vecs, vecs.conj())
    return validate(rho, d1, d2, label=f"random_separable_{d1}x{d2}")


__all__ = [
    "BELL_NAMES", "FIXTURE_IDS", "bell", "bell_vector", "fixture", "sep_family",
    "pptes_family", "pptes1_coefficients", "sep1", "pptes1", "sep2", "pptes2",
    "maximally_mixed", "product", "mixture", "random_density", "random_state",
    "random_unit_vectors", "random_product_vectors", "random_separable",
]
