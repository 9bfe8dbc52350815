"""Simulation of a photon-pair camera experiment in position and momentum.

Model
-----
``num_regions`` pixel regions of width ``region_size`` are laid out along
the correlation axis, separated by ``gap`` unobserved pixels and centred on
the beam. Three imperfections shape the two-photon state:

* unequal weighting: the marginal beam profile is Gaussian with width
  ``sigma_marginal`` so outer regions receive fewer pairs;
* cross-talk: given photon A in region ``x``, photon B is spread with the
  conditional width ``sigma_marginal / fedorov_ratio`` and may land in a
  neighbouring region (first neighbours only);
* white noise: accidental two-click frames from dark counts and multi-pair
  emission, mixed in as ``(1 - p)/d^2 * identity``.

Region integrals are probabilities; amplitudes are their square roots.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, fields

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import erf

from .errors import DivergentSeriesError, MubQuantError
from .qcore import as_density, fourier_matrix, joint_populations
from .witness import CoincidenceMatrix, WitnessReport, report_from_probabilities


@dataclass(frozen=True)
class CameraConfig:
    num_regions: int = 10
    region_size: float = 7.0
    gap: float = 52.0
    sigma_marginal: float = 300.0
    fedorov_ratio: float = 25.0
    dark_rate: float = 2.5e-5
    efficiency: float = 0.2
    pair_prob: float = 7.8e-4
    frames: int = 3064
    seed: int = 0

    def __post_init__(self):
        if int(self.num_regions) != self.num_regions or self.num_regions < 1:
            raise MubQuantError(f"num_regions must be a positive integer, got {self.num_regions}")
        for name in ("region_size", "sigma_marginal"):
            if not getattr(self, name) > 0:
                raise MubQuantError(f"{name} must be positive, got {getattr(self, name)}")
        if self.gap < 0:
            raise MubQuantError(f"gap must be nonnegative, got {self.gap}")
        if not self.fedorov_ratio >= 1:
            raise MubQuantError(f"fedorov_ratio must be >= 1, got {self.fedorov_ratio}")
        if self.dark_rate < 0:
            raise MubQuantError(f"dark_rate must be nonnegative, got {self.dark_rate}")
        if not 0.0 <= self.efficiency <= 1.0:
            raise MubQuantError(f"efficiency must lie in [0, 1], got {self.efficiency}")
        if not 0.0 <= self.pair_prob < 1.0:
            raise MubQuantError(f"pair_prob must lie in [0, 1), got {self.pair_prob}")
        if int(self.frames) != self.frames or self.frames < 1:
            raise MubQuantError(f"frames must be a positive integer, got {self.frames}")

    @property
    def conditional_sigma(self) -> float:
        return self.sigma_marginal / self.fedorov_ratio

    @property
    def party_dark_prob(self) -> float:
        """Probability of at least one dark count over one party's regions in a frame."""
        return -math.expm1(-self.num_regions * self.dark_rate)

    def region_edges(self) -> np.ndarray:
        """``(d, 2)`` array of region intervals in pixels, centred on the beam axis."""
        d = self.num_regions
        pitch = self.region_size + self.gap
        centres = (np.arange(d) - (d - 1) / 2.0) * pitch
        half = self.region_size / 2.0
        return np.stack([centres - half, centres + half], axis=1)

    def replace(self, **changes) -> "CameraConfig":
        data = asdict(self)
        data.update(changes)
        return CameraConfig(**data)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "CameraConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise MubQuantError(f"unknown CameraConfig field(s): {', '.join(sorted(unknown))}")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "CameraConfig":
        return cls.from_dict(json.loads(text))


def _gauss_mass(a, b, sigma):
    """Mass of a centred normal with width ``sigma`` on ``[a, b]``."""
    s = sigma * math.sqrt(2.0)
    return 0.5 * (erf(np.asarray(b) / s) - erf(np.asarray(a) / s))


def gaussian_weights(config: CameraConfig) -> np.ndarray:
    """Normalized probability that a pair falls into each region."""
    edges = config.region_edges()
    w = _gauss_mass(edges[:, 0], edges[:, 1], config.sigma_marginal)
    return w / w.sum()


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(48)


def _transfer(src: tuple[float, float], dst: tuple[float, float], sigma: float) -> float:
    """Probability that B lands in ``dst`` given A uniform over ``src``."""
    half = 0.5 * (src[1] - src[0])
    mid = 0.5 * (src[1] + src[0])
    u = mid + half * _GL_NODES
    mass = _gauss_mass(dst[0] - u, dst[1] - u, sigma)
    return float(0.5 * np.dot(_GL_WEIGHTS, mass))


def cross_coeffs(config: CameraConfig) -> tuple[np.ndarray, np.ndarray]:
    """Own-region and nearest-neighbour conditional probabilities.

    Returns ``(c_own, c_cross)`` where ``c_own[x]`` is the probability that B
    hits region ``x`` given A in ``x`` and ``c_cross[x, y]`` the same for a
    neighbour ``y = x +- 1`` (zero elsewhere).
    """
    d = config.num_regions
    edges = config.region_edges()
    sigma = config.conditional_sigma
    c_own = np.array([_transfer(tuple(edges[x]), tuple(edges[x]), sigma) for x in range(d)])
    c_cross = np.zeros((d, d))
    for x in range(d):
        for y in (x - 1, x + 1):
            if 0 <= y < d:
                c_cross[x, y] = _transfer(tuple(edges[x]), tuple(edges[y]), sigma)
    return c_own, c_cross


def _series_parts(d1, d2, e1, e2, p):
    eb1, eb2 = 1.0 - e1, 1.0 - e2
    x = p * eb1 * eb2
    if x >= 1.0:
        raise DivergentSeriesError(f"multi-pair series diverges: P*(1-e1)*(1-e2) = {x} >= 1")
    good = p * e1 * e2 * (1.0 - d1) * (1.0 - d2)
    # sum_n P^n a^n b^(n-1) n = P a / (1-x)^2 and sum_n n^2 P^n (ab)^(n-1) = P (1+x)/(1-x)^3
    all_ = (
        d1 * d2 / (1.0 - x)
        + d1 * e2 * (1.0 - d2) * p * eb1 / (1.0 - x) ** 2
        + e1 * d2 * (1.0 - d1) * p * eb2 / (1.0 - x) ** 2
        + e1 * e2 * (1.0 - d1) * (1.0 - d2) * p * (1.0 + x) / (1.0 - x) ** 3
    )
    return good, all_


def whitenoise_probability(d1: float, d2: float, eps1: float, eps2: float, p: float) -> float:
    """Fraction of accepted two-click frames that are not a genuine single pair."""
    for name, v in (("D1", d1), ("D2", d2), ("eps1", eps1), ("eps2", eps2), ("P", p)):
        if not 0.0 <= v <= 1.0:
            raise MubQuantError(f"{name} must lie in [0, 1], got {v}")
    good, all_ = _series_parts(d1, d2, eps1, eps2, p)
    if all_ <= 0.0:
        # No two-click frames at all; nothing genuine can be recorded.
        return 1.0 if good == 0.0 else 0.0
    return float(1.0 - good / all_)


def whitenoise_series(d1, d2, e1, e2, p, terms: int = 200) -> tuple[float, float]:
    """Direct partial sum of the counting series, for cross-checks."""
    eb1, eb2 = 1.0 - e1, 1.0 - e2
    total = 0.0
    for n in range(terms + 1):
        t = d1 * d2 * eb1**n * eb2**n
        if n:
            t += n * d1 * e2 * (1 - d2) * eb1**n * eb2 ** (n - 1)
            t += n * e1 * d2 * (1 - d1) * eb2**n * eb1 ** (n - 1)
            t += n * n * e1 * e2 * (1 - d1) * (1 - d2) * eb1 ** (n - 1) * eb2 ** (n - 1)
        total += p**n * t
    return p * e1 * e2 * (1 - d1) * (1 - d2), total


def optimal_pair_prob(config: CameraConfig) -> float:
    """Pair probability per frame that minimizes the white-noise fraction."""
    dark = config.party_dark_prob
    eps = config.efficiency
    if dark == 0.0:
        # Without dark counts fewer pairs are always cleaner; no interior optimum.
        raise MubQuantError("no optimal pair probability without dark counts")
    res = minimize_scalar(
        lambda lp: whitenoise_probability(dark, dark, eps, eps, 10.0**lp),
        bounds=(-10.0, -0.05),
        method="bounded",
        options={"xatol": 1e-10},
    )
    return float(10.0**res.x)


# Dark counts per pixel per frame behind the default 7x7 configuration.
DARK_RATE_PER_PIXEL = 2.5e-5 / 49.0


def camera_preset(region_size: int = 7, num_regions: int = 10, **overrides) -> CameraConfig:
    """Default layout with dark rate scaled to the region area and pair probability optimized."""
    cfg = CameraConfig(
        num_regions=num_regions,
        region_size=float(region_size),
        dark_rate=DARK_RATE_PER_PIXEL * region_size**2,
    ).replace(**overrides)
    if "pair_prob" not in overrides:
        cfg = cfg.replace(pair_prob=optimal_pair_prob(cfg))
    return cfg


@dataclass
class EffectiveState:
    weights: np.ndarray
    c_own: np.ndarray
    c_cross: np.ndarray
    white_noise_p: float
    psi: np.ndarray
    rho: np.ndarray

    @property
    def dim(self) -> int:
        return self.weights.size

    def diagnostics(self) -> dict:
        d = self.dim
        return {
            "dimension": d,
            "weights": self.weights.tolist(),
            "c_own": self.c_own.tolist(),
            "c_neighbour": [float(self.c_cross[x, x + 1]) for x in range(d - 1)],
            "white_noise_p": self.white_noise_p,
        }


def pure_component(weights, c_own, c_cross) -> np.ndarray:
    """Normalized two-photon amplitude vector with cross-talk to neighbours."""
    d = len(weights)
    amp = np.zeros((d, d))
    for x in range(d):
        block = np.zeros((d, d))
        block[x, x] = math.sqrt(c_own[x])
        for y in np.flatnonzero(c_cross[x]):
            a = math.sqrt(c_cross[x, y])
            block[x, y] += a
            block[y, x] += a
        block /= np.linalg.norm(block)
        amp += math.sqrt(weights[x]) * block
    psi = amp.reshape(-1).astype(complex)
    return psi / np.linalg.norm(psi)


def build_state(config: CameraConfig) -> EffectiveState:
    w = gaussian_weights(config)
    c_own, c_cross = cross_coeffs(config)
    dark = config.party_dark_prob
    eps = config.efficiency
    q = whitenoise_probability(dark, dark, eps, eps, config.pair_prob)
    psi = pure_component(w, c_own, c_cross)
    d = config.num_regions
    rho = (1.0 - q) * np.outer(psi, psi.conj()) + q / (d * d) * np.eye(d * d)
    return EffectiveState(w, c_own, c_cross, q, psi, as_density(rho))


class Basis(str, enum.Enum):
    POSITION = "position"
    MOMENTUM = "momentum"


def measurement_basis(d: int, basis) -> np.ndarray:
    if Basis(basis) is Basis.POSITION:
        return np.eye(d, dtype=complex)
    return fourier_matrix(d)


def expected_distribution(state: EffectiveState, basis) -> np.ndarray:
    """Exact joint outcome distribution; B's vectors are conjugated (anti-correlated momenta)."""
    b = measurement_basis(state.dim, basis)
    p = joint_populations(state.rho, b, b.conj())
    return p / p.sum()


def simulate_counts(state: EffectiveState, basis, frames: int, seed: int) -> CoincidenceMatrix:
    """Multinomial sample of ``frames`` accepted two-photon events."""
    basis = Basis(basis)
    p = expected_distribution(state, basis)
    # One independent stream per basis so both files are reproducible on their own.
    stream = 0 if basis is Basis.POSITION else 1
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), stream]))
    counts = rng.multinomial(int(frames), p.reshape(-1)).reshape(p.shape)
    return CoincidenceMatrix(counts.astype(np.int64), basis.value)


@dataclass
class EbitEstimate:
    report: WitnessReport
    state: EffectiveState

    def to_dict(self) -> dict:
        return {"witness": self.report.to_dict(), "state": self.state.diagnostics()}


def ebit_estimate(config: CameraConfig) -> EbitEstimate:
    """Certified e-bits from the exact expected position/momentum data."""
    state = build_state(config)
    p1 = expected_distribution(state, Basis.POSITION)
    p2 = expected_distribution(state, Basis.MOMENTUM)
    return EbitEstimate(report_from_probabilities(p1, p2), state)
