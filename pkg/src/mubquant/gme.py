"""Genuine multipartite entanglement from two local unbiased bases.

The signed Fourier-basis correlation sum ``C_{n,d}`` and its combinatorial
ingredients are provided for any ``(n, d)``. Certified concurrence bounds
exist only for three qubits and three qutrits, where the construction has
been worked out explicitly; other sizes get the raw ingredients with
``certified=False``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, InvalidDimensionError, MubQuantError
from .qcore import fourier_matrix, ghz, partial_trace, purity

MAX_HILBERT = 2**48


def s_alpha(alpha, d: int) -> int:
    return int(sum(alpha)) % d


def _cases(s: int, d: int) -> list[int]:
    q1_hi = d // 4
    mid_lo, mid_hi = -(-d // 4), (3 * d) // 4
    q3_lo = -(-3 * d // 4)
    cases = [
        (0 <= s <= q1_hi, 1),
        (mid_lo <= s <= mid_hi, -1),
        (q3_lo <= s <= d - 1, 1),
    ]
    return [sign for ok, sign in cases if ok]


def f_alpha(alpha, d: int) -> int:
    """Sign weight of a multi-index; overlapping cases resolve to the first listed."""
    hits = _cases(s_alpha(alpha, d), d)
    if not hits:
        raise MubQuantError(f"s_alpha={s_alpha(alpha, d)} matches no case for d={d}")
    return hits[0]


def sign_boundary_overlap(s: int, d: int) -> bool:
    """True when ``s`` satisfies more than one case of the sign rule."""
    return len(_cases(s, d)) > 1


def sign_vector(n: int, d: int) -> tuple[np.ndarray, bool]:
    """``f_alpha`` for every multi-index in lexicographic order."""
    _guard(n, d)
    s = np.zeros(1, dtype=np.int64)
    for _ in range(n):
        s = (s[:, None] + np.arange(d)[None, :]).reshape(-1) % d
    signs = np.array([f_alpha((l,), d) for l in range(d)], dtype=float)[s]
    ambiguous = any(sign_boundary_overlap(v, d) for v in set(s.tolist()))
    return signs, ambiguous


def _guard(n: int, d: int) -> None:
    if n < 2 or d < 2:
        raise InvalidDimensionError(f"need n >= 2 and d >= 2, got n={n}, d={d}")
    if d**n > MAX_HILBERT:
        raise InvalidDimensionError(f"d**n = {d}**{n} exceeds the supported size 2**48")


def combinatorics(n: int, d: int) -> tuple[list[int], float, float]:
    """Return ``(p, xi, g)``: residue counts of the index sum, ``xi`` and ``g``."""
    _guard(n, d)
    p = [1] + [0] * (d - 1)
    for _ in range(n):
        p = [sum(p[(l - i) % d] for i in range(d)) for l in range(d)]
    total = d**n
    inv_xi = sum(p[l] * abs(math.cos(2 * math.pi * l / d)) for l in range(d)) / (2 * total)
    xi = 1.0 / inv_xi if inv_xi > 0 else math.inf
    g = 1.0 - 2.0 * p[0] / total
    return p, xi, g


def fourier_populations(rho, n: int, d: int) -> np.ndarray:
    """``<k_alpha|rho|k_alpha>`` in the local Fourier basis, lexicographic order."""
    rho = np.asarray(rho, dtype=complex)
    _guard(n, d)
    dim = d**n
    if rho.shape != (dim, dim):
        raise DimensionMismatchError(f"state of shape {rho.shape} is not {n} parties of dimension {d}")
    f = fourier_matrix(d)
    t = rho.reshape((d,) * (2 * n))
    # Apply F^dagger on the ket side and F on the bra side of every party.
    for j in range(n):
        t = np.moveaxis(np.tensordot(f.conj().T, t, axes=([1], [j])), 0, j)
        t = np.moveaxis(np.tensordot(t, f, axes=([n + j], [0])), -1, n + j)
    return np.real(np.diagonal(t.reshape(dim, dim))).copy()


def c_nd(rho, n: int, d: int) -> float:
    """Signed sum ``sum_alpha f_alpha <k_alpha|rho|k_alpha>``."""
    signs, _ = sign_vector(n, d)
    return float(np.dot(signs, fourier_populations(rho, n, d)))


@dataclass
class GmeReport:
    n: int
    d: int
    c_nd: float
    xi: float
    g: float
    bound: float | None
    detected: bool
    certified: bool
    ambiguous_sign_boundary: bool = False
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "c_nd": self.c_nd,
            "xi": self.xi,
            "g": self.g,
            "bound": self.bound,
            "detected": self.detected,
            "certified": self.certified,
            "ambiguous_sign_boundary": self.ambiguous_sign_boundary,
            "notes": list(self.notes),
        }


def _index(label: str, d: int) -> int:
    return int(label, d)


def _sqrt_pairs(pop: np.ndarray, pairs, d: int) -> float:
    return sum(math.sqrt(max(0.0, pop[_index(a, d)]) * max(0.0, pop[_index(b, d)])) for a, b in pairs)


QUBIT_PAIRS = (("001", "110"), ("010", "101"), ("011", "100"))

# Cauchy-Schwarz partners of the non-GHZ coherences, in the canonical order.
# The canonical list has 23 entries; the orbit {001, 112, 220} also couples
# 001 with 112, which is appended when ``complete=True``.
QUTRIT_CS_PAIRS = tuple(
    tuple(p.split("-"))
    for p in (
        "001-220 002-110 002-221 010-121 010-202 011-122 011-200 012-120 "
        "012-201 020-101 020-212 021-102 021-210 022-100 022-211 100-211 "
        "101-212 102-210 110-221 112-220 120-201 121-202 122-200"
    ).split()
)
QUTRIT_MISSING_PAIR = ("001", "112")

# Cross-population terms of the underlying three-qutrit concurrence bound.
QUTRIT_BASE_PAIRS = tuple(
    tuple(p.split("-"))
    for p in "001-110 010-101 100-011 112-221 121-212 122-211 002-220 020-202 022-200".split()
)


def _populations(rho, dim: int) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (dim, dim):
        raise DimensionMismatchError(f"expected a {dim}x{dim} state, got shape {rho.shape}")
    return np.real(np.diagonal(rho))


def gme_bound_3qubit(rho, tol: float = 1e-12) -> GmeReport:
    """Three-qubit GME-concurrence lower bound from Fourier-basis data and populations."""
    pop = _populations(rho, 8)
    c = c_nd(rho, 3, 2)
    _, xi, g = combinatorics(3, 2)
    bound = c - 4.0 * _sqrt_pairs(pop, QUBIT_PAIRS, 2)
    return GmeReport(3, 2, c, xi, g, bound, bound > tol, True)


def qutrit_coherence_sum(c33: float) -> float:
    """Sum of the 27 real coherences ``Re<x|rho|x + t(1,1,1)>`` recovered from ``C_{3,3}``.

    With the normalized Fourier basis ``C_{3,3} = (4/3) X - 1/3``.
    """
    return 0.75 * c33 + 0.25


def gme_bound_3qutrit(rho, tol: float = 1e-12, complete: bool = False) -> GmeReport:
    """Three-qutrit GME-concurrence lower bound.

    ``complete=True`` also subtracts the square-root partner of the 001/112
    coherence, which the canonical 23-term list omits. The canonical list
    (default) has white-noise threshold 32/59 for GHZ; the completed one 11/20.
    """
    pop = _populations(rho, 27)
    c = c_nd(rho, 3, 3)
    _, xi, g = combinatorics(3, 3)
    cs_pairs = QUTRIT_CS_PAIRS + ((QUTRIT_MISSING_PAIR,) if complete else ())
    inner = qutrit_coherence_sum(c) - _sqrt_pairs(pop, cs_pairs, 3)
    bound = 2.0 / math.sqrt(3.0) * (inner - _sqrt_pairs(pop, QUTRIT_BASE_PAIRS, 3))
    notes = [] if complete else ["canonical 23-term list: 001/112 partner not subtracted"]
    return GmeReport(3, 3, c, xi, g, bound, bound > tol, True, notes=notes)


def gme_report(rho, n: int, d: int, tol: float = 1e-12) -> GmeReport:
    """Certified bound where available, raw ingredients otherwise."""
    if (n, d) == (3, 2):
        return gme_bound_3qubit(rho, tol)
    if (n, d) == (3, 3):
        return gme_bound_3qutrit(rho, tol)
    _, xi, g = combinatorics(n, d)
    _, ambiguous = sign_vector(n, d)
    return GmeReport(
        n, d, c_nd(rho, n, d), xi, g, None, False, False, ambiguous,
        notes=["no certified bound for this (n, d); raw ingredients only"],
    )


def noisy_ghz(n: int, d: int, p: float) -> np.ndarray:
    """``p |GHZ><GHZ| + (1-p)/d^n * identity``."""
    if not 0.0 <= p <= 1.0:
        raise MubQuantError(f"p must lie in [0, 1], got {p}")
    psi = ghz(n, d)
    dim = d**n
    return p * np.outer(psi, psi.conj()) + (1.0 - p) / dim * np.eye(dim)


def pure_gme_concurrence(psi, n: int, d: int) -> float:
    """Minimum over bipartitions of ``sqrt(2(1 - Tr rho_A^2))`` for a pure state."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (d**n,):
        raise DimensionMismatchError(f"ket of size {psi.size} is not {n} parties of dimension {d}")
    dims = [d] * n
    best = math.inf
    # Subsets containing the last party enumerate each bipartition once.
    for size in range(1, n):
        for subset in itertools.combinations(range(n - 1), size - 1):
            keep = list(subset) + [n - 1]
            rho_a = partial_trace(psi, dims, keep)
            best = min(best, math.sqrt(max(0.0, 2.0 * (1.0 - purity(rho_a)))))
    return best


def critical_visibility(bound_fn, n: int, d: int, tol: float = 1e-13, **kwargs) -> float:
    """Bisection for the GHZ weight where ``bound_fn(noisy_ghz(n, d, p)).bound`` crosses zero."""
    f = lambda p: bound_fn(noisy_ghz(n, d, p), tol=0.0, **kwargs).bound  # noqa: E731
    lo, hi = 0.0, 1.0
    if f(hi) <= 0:
        return 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
