"""Slow, independent validators for the witness.

Everything here works from full density matrices and explicit index loops;
nothing is shared with the fast paths in :mod:`mubquant.witness` beyond
the basic linear algebra. The functions exist for tests and diagnostics.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DimensionMismatchError, InvalidStateError
from .qcore import MubPair, as_ket, partial_trace, purity, von_neumann_entropy


@dataclass(frozen=True)
class SigmaSplit:
    sigma: float
    sigma1: float
    sigma2: float
    sigma3: float

    @property
    def residual(self) -> float:
        return self.sigma - self.sigma1 - self.sigma2 - self.sigma3


@dataclass(frozen=True)
class ChainReport:
    b: float
    i: float
    pure_concurrence: float | None
    b_below_i: bool
    i_below_concurrence: bool | None

    @property
    def passed(self) -> bool:
        return self.b_below_i and self.i_below_concurrence is not False


def _local_dim(rho: np.ndarray, d: int | None = None) -> int:
    if d is None:
        d = math.isqrt(rho.shape[0])
    if rho.shape != (d * d, d * d):
        raise DimensionMismatchError(f"state of shape {rho.shape} is not bipartite {d}x{d}")
    return d


def to_frame(rho, basis1) -> np.ndarray:
    """Express ``rho`` in the product frame ``|v_m> (x) |v_n^*>`` of ``basis1``."""
    basis1 = np.asarray(basis1, dtype=complex)
    w = np.kron(basis1, basis1.conj())
    return w.conj().T @ np.asarray(rho, dtype=complex) @ w


def _naive_witness(rho, mubs: MubPair) -> float:
    """Term-by-term evaluation of the witness with explicit index loops."""
    d = mubs.dim
    r = to_frame(rho, mubs.basis1).reshape(d, d, d, d)
    pop = lambda m, n: max(0.0, r[m, n, m, n].real)  # noqa: E731
    sigma = 0.0
    for k in range(d):
        v = mubs.basis2[:, k]
        vv = np.kron(v, v.conj())
        sigma += np.vdot(vv, np.asarray(rho) @ vv).real
    m1 = 0.0
    for m, n, l, o in itertools.product(range(d), repeat=4):
        if m != n and m != l and l != o and n != o:
            m1 += math.sqrt(pop(m, n) * pop(l, o))
    m2 = sum(math.sqrt(pop(i, j) * pop(j, i)) for i in range(d) for j in range(d) if i != j)
    return math.sqrt(2 / (d * (d - 1))) * (d * sigma - 1 - m1 - m2)


def concurrence_bound_i(rho, basis1) -> float:
    """Coherence-based concurrence lower bound evaluated in the frame of ``basis1``."""
    rho = np.asarray(rho, dtype=complex)
    basis1 = np.asarray(basis1, dtype=complex)
    d = _local_dim(rho, basis1.shape[0])
    r = to_frame(rho, basis1).reshape(d, d, d, d)
    total = 0.0
    for m in range(d):
        for n in range(d):
            if m == n:
                continue
            coh = abs(r[m, m, n, n])
            cross = math.sqrt(max(0.0, r[m, n, m, n].real) * max(0.0, r[n, m, n, m].real))
            total += coh - cross
    return math.sqrt(2.0 / (d * (d - 1))) * total


def phase_coefficients(mubs: MubPair) -> np.ndarray:
    """``c[m, n, l, o] = sum_k exp(i(phi_m - phi_n + phi_o - phi_l))`` of basis 2 in basis-1 frame."""
    d = mubs.dim
    v = mubs.basis1.conj().T @ mubs.basis2
    c = d * d * np.einsum("mk,nk,ok,lk->mnlo", v.conj(), v, v.conj(), v)
    if np.max(np.abs(c)) > d + 1e-8:
        raise ConsistencyError("phase coefficient exceeds d in magnitude; bases not unbiased?")
    return c


def sigma_split(rho, mubs: MubPair, tol: float = 1e-8) -> SigmaSplit:
    """Split the second-basis diagonal correlation sum into its three parts."""
    rho = np.asarray(rho, dtype=complex)
    d = _local_dim(rho, mubs.dim)
    sigma = 0.0
    for k in range(d):
        v = mubs.basis2[:, k]
        vv = np.kron(v, v.conj())
        sigma += np.vdot(vv, rho @ vv).real

    r = to_frame(rho, mubs.basis1).reshape(d, d, d, d)
    c = phase_coefficients(mubs)
    sigma1 = 1.0 / d
    sigma2 = sum(r[m, m, l, l].real for m in range(d) for l in range(d) if m != l) / d
    sigma3 = 0.0
    for m, n, l, o in itertools.product(range(d), repeat=4):
        if m != n and m != l and l != o and n != o:
            sigma3 += (c[m, n, l, o] * r[m, n, l, o]).real
    sigma3 /= d * d

    split = SigmaSplit(float(sigma), sigma1, float(sigma2), float(sigma3))
    if abs(split.residual) > tol:
        raise ConsistencyError(f"sigma split residual {split.residual:.3g} exceeds {tol}")
    return split


def pure_state_eof(psi, dims=None) -> float:
    """Entropy of entanglement of a bipartite pure state, in e-bits."""
    try:
        psi = as_ket(psi, tol=1e-9)
    except InvalidStateError as exc:
        raise InvalidStateError(f"pure_state_eof needs a normalized ket: {exc}") from None
    if dims is None:
        d = math.isqrt(psi.size)
        dims = (d, d)
    return von_neumann_entropy(partial_trace(psi, dims, 0))


def pure_concurrence(psi, dims) -> float:
    rho_a = partial_trace(np.asarray(psi, dtype=complex), dims, 0)
    return math.sqrt(max(0.0, 2.0 * (1.0 - purity(rho_a))))


def chain_check(rho, mubs: MubPair, tol: float = 1e-9) -> ChainReport:
    """Check ``B <= I`` and, for pure input, ``I <= sqrt(2(1 - Tr rho_A^2))``.

    ``rho`` may be a density matrix or a ket.
    """
    arr = np.asarray(rho, dtype=complex)
    d = mubs.dim
    conc = None
    if arr.ndim == 1:
        conc = pure_concurrence(arr, (d, d))
        arr = np.outer(arr, arr.conj())
    elif abs(purity(arr) - 1.0) < 1e-10:
        w, v = np.linalg.eigh(arr)
        conc = pure_concurrence(v[:, -1], (d, d))
    b = _naive_witness(arr, mubs)
    i = concurrence_bound_i(arr, mubs.basis1)
    return ChainReport(
        b=b,
        i=i,
        pure_concurrence=conc,
        b_below_i=b <= i + tol,
        i_below_concurrence=None if conc is None else i <= conc + tol,
    )
