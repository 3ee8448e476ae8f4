"""Multiplicative upper bound on the selection outage probability.

Each correlated port contributes a factor 1 - (rho/sqrt(|mu_k|)) *
exp(-kappa*x/(1-mu_k^2)); when that expression could reach zero or below
(small |mu_k|), the safe fallback factor 1 - rho*exp(-kappa*x/(1-mu_k^2))
is used instead, which keeps every factor inside (0, 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channel import DEGENERATE_MU, FasConfig, correlation_profile

DEFAULT_KAPPA = 2.0


@dataclass(frozen=True)
class BoundConstants:
    kappa: float
    rho: float


class ConstantsError(ValueError):
    """Computed bound constant fell outside its admissible range."""


def bound_constants(kappa: float = DEFAULT_KAPPA) -> BoundConstants:
    """Constants (kappa, rho) of the per-port lower bound on Marcum Q.

    Valid for any kappa > 1; rho is the closed-form companion constant and
    always lands in (0, 0.5).
    """
    kappa = float(kappa)
    if not (kappa > 1.0) or not math.isfinite(kappa):
        raise ValueError(f"kappa must be a finite real > 1, got {kappa}")
    km1 = kappa - 1.0
    rho = (math.exp(1.0 / (math.pi * km1 + 2.0)) / (2.0 * kappa)
           * math.sqrt(km1 * (math.pi * km1 + 2.0) / math.pi))
    if not (0.0 < rho < 0.5):
        raise ConstantsError(f"rho={rho} outside (0, 0.5) for kappa={kappa}")
    return BoundConstants(kappa=kappa, rho=rho)


def per_port_bound_factor(mu_k: float, snr_ratio: float,
                          constants: BoundConstants) -> float:
    """Outage-bound scaling contributed by one correlated port; in (0, 1]."""
    if not abs(mu_k) < 1:
        raise ValueError(f"|mu_k| must be < 1, got {mu_k}")
    if snr_ratio <= 0:
        raise ValueError("snr_ratio must be positive")
    decay = math.exp(-constants.kappa * snr_ratio / (1.0 - mu_k ** 2))
    am = abs(mu_k)
    if am > 0.0 and constants.rho / math.sqrt(am) < 1.0:
        return 1.0 - constants.rho / math.sqrt(am) * decay
    # small-|mu| fallback: rho < 0.5 keeps the factor strictly positive
    return 1.0 - constants.rho * decay


def outage_upper_bound_profile(mu: Sequence[float], snr_ratio: float,
                               constants: BoundConstants) -> float:
    """Bound for an explicit profile; degenerate ports are skipped."""
    mu = np.asarray(mu, dtype=float)
    mu = mu[np.abs(mu) <= DEGENERATE_MU]
    p = 1.0 - math.exp(-snr_ratio)
    for m in mu[1:]:
        p *= per_port_bound_factor(float(m), snr_ratio, constants)
    return p


def outage_upper_bound(config: FasConfig, constants: BoundConstants) -> float:
    """Upper bound on the exact outage probability for one configuration."""
    return outage_upper_bound_profile(correlation_profile(config).mu,
                                      config.snr_ratio, constants)


def optimize_kappa(config: FasConfig, lo: float = 1.0 + 1e-6,
                   hi: float = 10.0, tol: float = 1e-6) -> BoundConstants:
    """Golden-section search for the kappa minimizing the bound.

    Any kappa > 1 yields a valid bound, so the tightest one is free to use.
    """
    if not (1.0 < lo < hi):
        raise ValueError("need 1 < lo < hi")
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0

    def objective(k: float) -> float:
        return outage_upper_bound(config, bound_constants(k))

    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = objective(c), objective(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = objective(d)
    return bound_constants((a + b) / 2.0)
