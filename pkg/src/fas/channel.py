"""Port geometry, spatial correlation profiles, and correlated Rayleigh draws.

The model ties every port to port 1 through a shared in-phase/quadrature
pair, with per-port correlation mu_k = J0(2*pi*d_k/lambda).  Sigma is fixed
at 1: every analytic quantity downstream depends only on the SNR ratio.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import special as sp

SPEED_OF_LIGHT = 299_792_458.0

# Ports more correlated than this are statistically indistinguishable from
# port 1 and are dropped by the analytic evaluators.
DEGENERATE_MU = 1.0 - 1e-9


@dataclass(frozen=True)
class FasConfig:
    """Independent variables of one experiment.

    n_ports: number of candidate antenna positions N.
    size_wavelengths: linear aperture W in wavelengths.
    snr_ratio: threshold-to-average SNR ratio (linear, not dB).
    """

    n_ports: int
    size_wavelengths: float
    snr_ratio: float

    def __post_init__(self):
        if int(self.n_ports) != self.n_ports or self.n_ports < 1:
            raise ValueError(f"n_ports must be an integer >= 1, got {self.n_ports}")
        if not (self.size_wavelengths > 0):
            raise ValueError(f"size_wavelengths must be > 0, got {self.size_wavelengths}")
        if not (self.snr_ratio > 0):
            raise ValueError(f"snr_ratio must be > 0, got {self.snr_ratio}")


@dataclass(frozen=True)
class AvgSnr:
    """Mean received SNR decomposition: gamma = sigma_sq * theta.

    theta: transmit-power-to-noise ratio.
    sigma_sq: mean-square channel gain per port.
    """

    theta: float
    sigma_sq: float = 1.0

    def __post_init__(self):
        if not (self.theta > 0):
            raise ValueError(f"theta must be > 0, got {self.theta}")
        if not (self.sigma_sq > 0):
            raise ValueError(f"sigma_sq must be > 0, got {self.sigma_sq}")

    @property
    def gamma(self) -> float:
        return self.sigma_sq * self.theta

    def snr_ratio(self, threshold: float) -> float:
        """The ratio gamma_th / gamma that every outage formula consumes."""
        if not (threshold > 0):
            raise ValueError(f"threshold must be > 0, got {threshold}")
        return threshold / self.gamma


@dataclass(frozen=True)
class CorrelationProfile:
    """Per-port correlation coefficients and displacements (wavelengths)."""

    mu: np.ndarray
    displacements: np.ndarray

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=float)
        d = np.asarray(self.displacements, dtype=float)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "displacements", d)
        if mu.shape != d.shape:
            raise ValueError("mu and displacements must have equal length")
        if mu.size < 1:
            raise ValueError("profile must contain at least one port")
        if mu[0] != 0.0:
            raise ValueError("mu[0] is the reference port and must be 0")
        if np.any(np.abs(mu) > 1.0):
            raise ValueError("|mu_k| must not exceed 1")
        if d[0] != 0.0 or np.any(np.diff(d) < 0):
            raise ValueError("displacements must start at 0 and be nondecreasing")

    @property
    def n_ports(self) -> int:
        return int(self.mu.size)


@dataclass(frozen=True)
class ChannelDraw:
    """One realization of the N port gains (sigma normalized to 1)."""

    gains: np.ndarray
    common_part: complex


def port_displacements(config: FasConfig) -> np.ndarray:
    """Evenly spaced port positions d_k = (k-1)/(N-1) * W, in wavelengths."""
    n = config.n_ports
    if n == 1:
        return np.zeros(1)
    return np.arange(n) / (n - 1) * config.size_wavelengths


def correlation_profile(config: FasConfig) -> CorrelationProfile:
    """Jakes-model spatial profile: mu_k = J0(2*pi*d_k) with mu_1 = 0."""
    d = port_displacements(config)
    mu = sp.j0(2.0 * np.pi * d)
    mu[0] = 0.0
    return CorrelationProfile(mu=mu, displacements=d)


def correlation_discrepancy(profile: CorrelationProfile) -> np.ndarray:
    """Model-vs-Jakes correlation gap between port pairs (k, l), k,l >= 2.

    The single-common-factor construction gives inter-port correlation
    mu_k * mu_l for k, l >= 2, while the Jakes model prescribes J0 of their
    separation.  Returns the matrix of differences as a diagnostic; the
    discrepancy is intrinsic to the analyzed model.
    """
    mu = profile.mu
    d = profile.displacements
    model = np.outer(mu, mu)
    model[0, :] = mu
    model[:, 0] = mu
    np.fill_diagonal(model, 1.0)
    jakes = sp.j0(2.0 * np.pi * np.abs(d[:, None] - d[None, :]))
    return model - jakes


def _draw_components(profile: CorrelationProfile, rng: np.random.Generator,
                     n: int) -> tuple[np.ndarray, np.ndarray]:
    """(gains, common) for n draws; gains has shape (n, N).

    Consumption order is fixed (x0, y0, then the per-port x block, then the
    per-port y block) so a given stream state always produces the same draw.
    """
    mu = profile.mu
    n_ports = mu.size
    scale = np.sqrt(0.5)
    x0 = rng.standard_normal(n) * scale
    y0 = rng.standard_normal(n) * scale
    common = x0 + 1j * y0
    if n_ports == 1:
        return common[:, None], common
    xk = rng.standard_normal((n, n_ports - 1)) * scale
    yk = rng.standard_normal((n, n_ports - 1)) * scale
    root = np.sqrt(1.0 - mu[1:] ** 2)
    g = (root * xk + mu[1:] * x0[:, None]) + 1j * (root * yk + mu[1:] * y0[:, None])
    return np.concatenate([common[:, None], g], axis=1), common


def draw_channels(profile: CorrelationProfile, rng: np.random.Generator) -> ChannelDraw:
    """One correlated Rayleigh realization of all ports."""
    gains, common = _draw_components(profile, rng, 1)
    return ChannelDraw(gains=gains[0], common_part=complex(common[0]))


def draw_channels_batch(profile: CorrelationProfile, rng: np.random.Generator,
                        n: int) -> np.ndarray:
    """n stacked realizations, shape (n, N)."""
    return _draw_components(profile, rng, n)[0]


@dataclass(frozen=True)
class DopplerTraceConfig:
    """Time-selective trace parameters (classic 2-D isotropic scattering)."""

    speed_mps: float
    carrier_hz: float
    duration_s: float
    sample_rate_hz: float
    n_scatterers: int = 64

    def __post_init__(self):
        if self.speed_mps < 0:
            raise ValueError("speed_mps must be nonnegative")
        if self.carrier_hz <= 0 or self.duration_s <= 0 or self.sample_rate_hz <= 0:
            raise ValueError("carrier_hz, duration_s and sample_rate_hz must be > 0")
        if self.n_scatterers < 8:
            raise ValueError("n_scatterers must be >= 8")
        if self.sample_rate_hz <= 2.0 * self.max_doppler_hz:
            raise ValueError(
                f"sample_rate_hz={self.sample_rate_hz} violates Nyquist for "
                f"max Doppler {self.max_doppler_hz:.3f} Hz")

    @property
    def wavelength_m(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_hz

    @property
    def max_doppler_hz(self) -> float:
        return self.speed_mps / self.wavelength_m


@dataclass(frozen=True)
class EnvelopeTrace:
    """Time-indexed port envelopes plus selection/MRC references (dB)."""

    t_norm: np.ndarray          # v * t / lambda
    port_db: np.ndarray         # (T, N)
    fas_db: np.ndarray          # max-over-ports envelope
    mrc_db: np.ndarray          # sqrt(sum |h|^2) over independent branches
    gains: np.ndarray = field(repr=False, default=None)  # (T, N) complex


_ENV_FLOOR = 1e-150  # keeps log10 finite on astronomically deep fades


def _sos_process(rng: np.random.Generator, f_m: float, t: np.ndarray,
                 n_scatterers: int) -> np.ndarray:
    """Sum-of-sinusoids Gaussian process, variance 1/2, Jakes spectrum."""
    theta = rng.uniform(0.0, 2.0 * np.pi, n_scatterers)
    phase = rng.uniform(0.0, 2.0 * np.pi, n_scatterers)
    freqs = 2.0 * np.pi * f_m * np.cos(theta)
    out = np.zeros_like(t)
    for w, p in zip(freqs, phase):
        out += np.cos(w * t + p)
    return out / np.sqrt(n_scatterers)


def envelope_trace(config: FasConfig, doppler: DopplerTraceConfig,
                   rng: np.random.Generator, mrc_branches: int = 2) -> EnvelopeTrace:
    """Correlated port envelopes over time, with an L-branch MRC reference.

    Each underlying Gaussian component evolves as an independent
    sum-of-sinusoids process whose autocorrelation approaches
    0.5 * J0(2*pi*f_m*tau); the spatial mixing is applied per time sample.
    """
    profile = correlation_profile(config)
    f_m = doppler.max_doppler_hz
    n_samples = int(round(doppler.duration_s * doppler.sample_rate_hz))
    t = np.arange(n_samples) / doppler.sample_rate_hz
    m = doppler.n_scatterers

    x0 = _sos_process(rng, f_m, t, m)
    y0 = _sos_process(rng, f_m, t, m)
    mu = profile.mu
    gains = np.empty((n_samples, mu.size), dtype=complex)
    gains[:, 0] = x0 + 1j * y0
    for k in range(1, mu.size):
        root = np.sqrt(1.0 - mu[k] ** 2)
        xk = _sos_process(rng, f_m, t, m)
        yk = _sos_process(rng, f_m, t, m)
        gains[:, k] = (root * xk + mu[k] * x0) + 1j * (root * yk + mu[k] * y0)

    env = np.maximum(np.abs(gains), _ENV_FLOOR)
    port_db = 20.0 * np.log10(env)
    fas_db = port_db.max(axis=1)

    mrc_sq = np.zeros(n_samples)
    for _ in range(mrc_branches):
        hx = _sos_process(rng, f_m, t, m)
        hy = _sos_process(rng, f_m, t, m)
        mrc_sq += hx ** 2 + hy ** 2
    mrc_db = 10.0 * np.log10(np.maximum(mrc_sq, _ENV_FLOOR ** 2))

    t_norm = doppler.speed_mps * t / doppler.wavelength_m
    return EnvelopeTrace(t_norm=t_norm, port_db=port_db, fas_db=fas_db,
                         mrc_db=mrc_db, gains=gains)
