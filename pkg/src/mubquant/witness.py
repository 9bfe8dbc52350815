"""Bipartite entanglement quantification from two unbiased bases.

The figure of merit ``B`` lower-bounds the generalised concurrence, so it
converts into a lower bound on the entanglement of formation (in e-bits)
and on the Schmidt number. Only populations are needed: diagonal
correlations in the second basis, plus the full coincidence matrix of the
first basis.

Conventions
-----------
Party B measures the complex conjugate of party A's basis vectors, i.e.
correlations are ``<v_m (v_n)^*| rho |v_m (v_n)^*>`` in *both* bases. For a
real first basis (the computational basis) this is the plain
``<v_m v_n|rho|v_m v_n>``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError, InconsistentInputError, MubQuantError
from .qcore import MubPair, joint_populations

_CLAMP = 1e-12


def normalization(d: int) -> float:
    """Prefactor ``sqrt(2 / (d (d - 1)))``."""
    return math.sqrt(2.0 / (d * (d - 1)))


def max_witness_value(d: int) -> float:
    """Value reached by the maximally entangled state, ``sqrt(2 (1 - 1/d))``."""
    return math.sqrt(2.0 * (1.0 - 1.0 / d))


@dataclass
class CoincidenceMatrix:
    """Joint click counts for one basis; row = party A outcome, column = party B.

    ``counts`` is normally integral. Expected (noise-free) counts may be real
    valued; the JSON reader in :mod:`mubquant.io` enforces integers.
    """

    counts: np.ndarray
    basis_label: str = ""

    def __post_init__(self):
        c = np.asarray(self.counts)
        if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] == 0:
            raise DimensionMismatchError(f"coincidence matrix must be square, got shape {c.shape}")
        if not np.all(np.isfinite(c)) or np.any(c < 0):
            raise MubQuantError("coincidence counts must be finite and nonnegative")
        if c.sum() <= 0:
            raise MubQuantError("coincidence matrix has zero total counts")
        self.counts = c

    @property
    def dim(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self):
        return self.counts.sum()

    def probabilities(self) -> np.ndarray:
        return self.counts / self.counts.sum()


@dataclass
class WitnessReport:
    c1: float
    c2: float
    m1: float
    m2: float
    b: float
    eof_lower_bound_ebits: float
    schmidt_lower_bound: int
    detected: bool
    dimension: int
    total1: float | None = None
    total2: float | None = None
    assumptions: list = field(default_factory=lambda: ["basis 2 is unbiased to basis 1"])

    def to_dict(self) -> dict:
        out = asdict(self)
        for k in ("total1", "total2"):
            v = out[k]
            if v is not None and float(v).is_integer():
                out[k] = int(v)
        return out


def correlation_sum(rho, bases: Sequence[np.ndarray]) -> float:
    """Sum of diagonal correlations ``C_m`` over the given bases."""
    total = 0.0
    for basis in bases:
        basis = np.asarray(basis, dtype=complex)
        total += float(np.trace(joint_populations(rho, basis, basis.conj())))
    return total


def cross_sums(p1: np.ndarray) -> tuple[float, float]:
    """The two square-root penalty sums built from first-basis populations.

    ``m1`` runs over ordered tuples ``(m, n, l, o)`` with ``m != n``,
    ``m != l``, ``l != o``, ``n != o`` of ``sqrt(P[m,n] P[l,o])``;
    ``m2`` over ``i != j`` of ``sqrt(P[i,j] P[j,i])``.
    """
    p = np.where(p1 > -_CLAMP, np.maximum(p1, 0.0), p1)
    if np.any(p < 0):
        raise InconsistentInputError("negative population below clamping tolerance")
    s = np.sqrt(p)
    np.fill_diagonal(s, 0.0)
    # Inclusion-exclusion over the constraints m != l and n != o; off-diagonal
    # support of s takes care of m != n and l != o.
    total = s.sum()
    rows = s.sum(axis=1)
    cols = s.sum(axis=0)
    m1 = total**2 - np.dot(rows, rows) - np.dot(cols, cols) + np.sum(s * s)
    m2 = np.sum(s * s.T)
    return float(max(m1, 0.0)), float(m2)


def witness_from_probabilities(p1, p2) -> tuple[float, float, float, float, float]:
    """Return ``(c1, c2, m1, m2, b)`` from normalized joint distributions."""
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    if p1.shape != p2.shape or p1.ndim != 2 or p1.shape[0] != p1.shape[1]:
        raise DimensionMismatchError(f"incompatible matrices {p1.shape} and {p2.shape}")
    d = p1.shape[0]
    if d < 2:
        raise DimensionMismatchError("witness requires dimension >= 2")
    c1 = float(np.trace(p1))
    c2 = float(np.trace(p2))
    m1, m2 = cross_sums(p1)
    b = normalization(d) * (d * c2 - 1.0 - m1 - m2)
    return c1, c2, m1, m2, b


def witness_b_from_state(rho, mubs: MubPair) -> float:
    """Evaluate ``B`` on a density matrix of dimension ``d**2``."""
    rho = np.asarray(rho, dtype=complex)
    d = mubs.dim
    if rho.shape != (d * d, d * d):
        raise DimensionMismatchError(f"state of shape {rho.shape} does not match MUB dimension {d}")
    p1, p2 = expected_populations(rho, mubs)
    return witness_from_probabilities(p1, p2)[4]


def expected_populations(rho, mubs: MubPair) -> tuple[np.ndarray, np.ndarray]:
    """Exact joint distributions of ``rho`` in both bases (no sampling)."""
    b1, b2 = mubs.basis1, mubs.basis2
    return (
        joint_populations(rho, b1, b1.conj()),
        joint_populations(rho, b2, b2.conj()),
    )


def eof_lower_bound(b: float, d: int | None = None) -> float:
    """Entanglement-of-formation bound ``-log2(1 - b^2/2)`` in e-bits, 0 for ``b <= 0``."""
    if b <= 0:
        return 0.0
    if d is not None and b > max_witness_value(d) + 1e-9:
        raise InconsistentInputError(
            f"b={b} exceeds the maximal value {max_witness_value(d):.6g} for d={d}"
        )
    arg = 1.0 - b * b / 2.0
    if arg <= 0:
        raise InconsistentInputError(f"b={b} >= sqrt(2) is not attainable by any state")
    return float(-math.log2(arg))


def schmidt_lower_bound(eof_ebits: float) -> int:
    """Smallest Schmidt number compatible with the given EoF, ``ceil(2**E)``."""
    if eof_ebits < 0:
        raise MubQuantError(f"eof must be nonnegative, got {eof_ebits}")
    # Guard against 2**log2(d) landing a hair above an integer.
    return max(1, math.ceil(2.0**eof_ebits - 1e-9))


def report_from_probabilities(p1, p2, total1=None, total2=None) -> WitnessReport:
    c1, c2, m1, m2, b = witness_from_probabilities(p1, p2)
    d = np.asarray(p1).shape[0]
    eof = eof_lower_bound(b, d)
    return WitnessReport(
        c1=c1,
        c2=c2,
        m1=m1,
        m2=m2,
        b=b,
        eof_lower_bound_ebits=eof,
        schmidt_lower_bound=schmidt_lower_bound(eof),
        detected=b > 0,
        dimension=d,
        total1=total1,
        total2=total2,
    )


def witness_b_from_counts(corr1, corr2) -> WitnessReport:
    """Full report from raw coincidence data.

    ``corr1`` is the first basis (its off-diagonal entries feed the penalty
    sums), ``corr2`` the unbiased basis. Each matrix is normalized by its
    own total. No phase information about the second basis is required.
    """
    if not isinstance(corr1, CoincidenceMatrix):
        corr1 = CoincidenceMatrix(np.asarray(corr1), "basis1")
    if not isinstance(corr2, CoincidenceMatrix):
        corr2 = CoincidenceMatrix(np.asarray(corr2), "basis2")
    if corr1.dim != corr2.dim:
        raise DimensionMismatchError(f"dimension mismatch: {corr1.dim} vs {corr2.dim}")
    return report_from_probabilities(
        corr1.probabilities(),
        corr2.probabilities(),
        total1=float(corr1.total),
        total2=float(corr2.total),
    )


def witness_report_from_state(rho, mubs: MubPair) -> WitnessReport:
    p1, p2 = expected_populations(rho, mubs)
    return report_from_probabilities(p1, p2)
