"""Dense state primitives: kets, density matrices, bases and entropies.

Kets are 1-D complex numpy arrays and density matrices are 2-D complex
numpy arrays. The ``as_ket`` / ``as_density`` helpers validate the physical
invariants and return read-only copies, so validated values can be shared
freely.

Bases are stored as ``(d, d)`` arrays whose *columns* are the basis vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidDimensionError,
    InvalidStateError,
)

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
MUB_TOL = 1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


def as_ket(psi, tol: float = NORM_TOL) -> np.ndarray:
    """Validate ``psi`` as a normalized ket and return a read-only copy."""
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1 or psi.size == 0:
        raise InvalidStateError(f"ket must be a non-empty 1-D array, got shape {psi.shape}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > tol:
        raise InvalidStateError(f"ket norm is {norm!r}, expected 1")
    return _frozen(psi)


def as_density(rho, tol: float = HERMITIAN_TOL, psd_tol: float = PSD_TOL) -> np.ndarray:
    """Validate ``rho`` as a density matrix and return a read-only copy.

    Matrices that are not Hermitian, not unit trace or have eigenvalues below
    ``-psd_tol`` are rejected rather than projected back onto the state space.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] == 0:
        raise InvalidStateError(f"density matrix must be square, got shape {rho.shape}")
    herm_err = np.max(np.abs(rho - rho.conj().T))
    if herm_err > tol:
        raise InvalidStateError(f"density matrix not Hermitian (max deviation {herm_err:.3g})")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TRACE_TOL * max(1.0, rho.shape[0] / 16):
        raise InvalidStateError(f"density matrix trace is {tr!r}, expected 1")
    lam_min = np.linalg.eigvalsh(rho).min()
    if lam_min < -psd_tol:
        raise InvalidStateError(f"density matrix has negative eigenvalue {lam_min:.3g}")
    return _frozen(rho)


def ket(*amplitudes) -> np.ndarray:
    """Normalize raw amplitudes into a ket."""
    psi = np.asarray(amplitudes[0] if len(amplitudes) == 1 else amplitudes, dtype=complex)
    return as_ket(psi / np.linalg.norm(psi))


def basis_ket(index: int, dim: int) -> np.ndarray:
    if not 0 <= index < dim:
        raise InvalidDimensionError(f"index {index} out of range for dimension {dim}")
    e = np.zeros(dim, dtype=complex)
    e[index] = 1.0
    return _frozen(e)


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return _frozen(np.outer(psi, psi.conj()))


def maximally_mixed(dim: int) -> np.ndarray:
    return _frozen(np.eye(dim) / dim)


@dataclass(frozen=True)
class MubPair:
    """Two orthonormal bases of ``C^dim`` that are promised to be unbiased.

    Columns of ``basis1`` and ``basis2`` are the basis vectors.
    """

    basis1: np.ndarray
    basis2: np.ndarray

    def __post_init__(self):
        b1 = _frozen(self.basis1)
        b2 = _frozen(self.basis2)
        if b1.ndim != 2 or b1.shape[0] != b1.shape[1] or b1.shape != b2.shape:
            raise DimensionMismatchError(
                f"bases must be square and equal-shaped, got {b1.shape} and {b2.shape}"
            )
        object.__setattr__(self, "basis1", b1)
        object.__setattr__(self, "basis2", b2)

    @property
    def dim(self) -> int:
        return self.basis1.shape[0]

    def check(self, tol: float = MUB_TOL) -> None:
        """Raise :class:`InvalidStateError` unless both invariants hold."""
        d = self.dim
        eye = np.eye(d)
        for name, b in (("basis1", self.basis1), ("basis2", self.basis2)):
            err = np.max(np.abs(b.conj().T @ b - eye))
            if err > NORM_TOL * 10:
                raise InvalidStateError(f"{name} not orthonormal (max Gram deviation {err:.3g})")
        overlaps = np.abs(self.basis1.conj().T @ self.basis2) ** 2
        err = np.max(np.abs(overlaps - 1.0 / d))
        if err > tol:
            raise InvalidStateError(f"bases not unbiased (max overlap deviation {err:.3g})")


def fourier_matrix(d: int) -> np.ndarray:
    """Unitary DFT matrix, column ``k`` is ``(1/sqrt d) sum_m w^(k m) |m>``."""
    if d < 2:
        raise InvalidDimensionError(f"dimension must be >= 2, got {d}")
    m = np.arange(d)
    return np.exp(2j * np.pi * np.outer(m, m) / d) / np.sqrt(d)


def fourier_mub(d: int) -> MubPair:
    """Computational basis paired with the normalized Fourier basis."""
    f = fourier_matrix(d)
    pair = MubPair(np.eye(d, dtype=complex), f)
    pair.check()
    return pair


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a Ginibre matrix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def random_mub_pair(d: int, seed: int | np.random.Generator) -> MubPair:
    """Random MUB pair ``(U, U F)`` with Haar ``U``; deterministic per seed."""
    if d < 2:
        raise InvalidDimensionError(f"dimension must be >= 2, got {d}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    u = haar_unitary(d, rng)
    return MubPair(u, u @ fourier_matrix(d))


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random mixed state drawn from the induced (Hilbert-Schmidt for full rank) measure."""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def tensor(a, b) -> np.ndarray:
    """Kronecker product of two kets or two density matrices."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != b.ndim or a.ndim not in (1, 2):
        raise DimensionMismatchError(
            f"tensor operands must both be kets or both be matrices, got ndim {a.ndim} and {b.ndim}"
        )
    return np.kron(a, b)


def tensor_all(parts: Sequence) -> np.ndarray:
    out = np.asarray(parts[0], dtype=complex)
    for p in parts[1:]:
        out = tensor(out, p)
    return out


def partial_trace(rho, dims: Sequence[int], keep) -> np.ndarray:
    """Reduced state on the subsystems listed in ``keep`` (an int or a sequence).

    ``rho`` may also be a ket, in which case the reduction of its projector
    is returned without forming the full matrix.
    """
    rho = np.asarray(rho, dtype=complex)
    dims = [int(x) for x in dims]
    total = int(np.prod(dims))
    if rho.shape[0] != total:
        raise DimensionMismatchError(f"subsystem dims {dims} do not multiply to {rho.shape[0]}")
    keep = [keep] if np.isscalar(keep) else sorted(int(k) for k in keep)
    n = len(dims)
    if any(not 0 <= k < n for k in keep):
        raise DimensionMismatchError(f"keep={keep} out of range for {n} subsystems")
    traced = [i for i in range(n) if i not in keep]
    dk = int(np.prod([dims[k] for k in keep])) if keep else 1

    if rho.ndim == 1:
        psi = rho.reshape(dims).transpose(keep + traced).reshape(dk, -1)
        return psi @ psi.conj().T

    t = rho.reshape(dims + dims)
    perm = keep + traced + [n + k for k in keep] + [n + t_ for t_ in traced]
    dt = total // dk
    t = t.transpose(perm).reshape(dk, dt, dk, dt)
    return np.einsum("ajbj->ab", t)


def von_neumann_entropy(rho) -> float:
    """Entropy in bits, ``-sum lambda log2 lambda`` with ``0 log 0 = 0``."""
    lam = np.linalg.eigvalsh(np.asarray(rho, dtype=complex))
    lam = lam[lam > 1e-15]
    return float(max(0.0, -np.sum(lam * np.log2(lam))))


def purity(rho) -> float:
    rho = np.asarray(rho, dtype=complex)
    return float(np.real(np.vdot(rho, rho)))


def phi_plus(d: int) -> np.ndarray:
    """Maximally entangled ket ``(1/sqrt d) sum_i |ii>``."""
    return ghz(2, d)


def ghz(n: int, d: int) -> np.ndarray:
    """``(1/sqrt d) sum_i |i...i>`` on ``n`` parties of local dimension ``d``."""
    if d < 2 or n < 2:
        raise InvalidDimensionError(f"need n >= 2 and d >= 2, got n={n}, d={d}")
    psi = np.zeros(d**n, dtype=complex)
    step = sum(d**j for j in range(n))
    psi[np.arange(d) * step] = 1.0 / np.sqrt(d)
    return _frozen(psi)


def joint_probability(rho, a, b) -> float:
    """``<ab|rho|ab>`` clamped to ``[0, 1]``."""
    rho = np.asarray(rho, dtype=complex)
    ab = np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))
    if rho.shape != (ab.size, ab.size):
        raise DimensionMismatchError(
            f"state of shape {rho.shape} incompatible with product ket of size {ab.size}"
        )
    value = np.real(np.vdot(ab, rho @ ab))
    return float(min(1.0, max(0.0, value)))


def joint_populations(rho, basis_a, basis_b) -> np.ndarray:
    """Matrix ``P[m, n] = <a_m b_n| rho |a_m b_n>`` for bases given as column arrays."""
    rho = np.asarray(rho, dtype=complex)
    basis_a = np.asarray(basis_a, dtype=complex)
    basis_b = np.asarray(basis_b, dtype=complex)
    da, db = basis_a.shape[1], basis_b.shape[1]
    if rho.shape != (basis_a.shape[0] * basis_b.shape[0],) * 2:
        raise DimensionMismatchError(
            f"state of shape {rho.shape} incompatible with bases of sizes "
            f"{basis_a.shape[0]} and {basis_b.shape[0]}"
        )
    w = np.kron(basis_a, basis_b)
    p = np.real(np.einsum("ij,ik,kj->j", w.conj(), rho, w)).reshape(da, db)
    return np.clip(p, 0.0, 1.0)
