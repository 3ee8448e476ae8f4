"""Special functions underpinning the outage analysis.

Provides J0/I0 kernels, the first-order Marcum Q-function, its antisymmetric
difference, the Gaussian tail Q, and the envelope inverse of J0 (smallest
argument beyond which |J0| stays at or below a target level).

All functions are pure and stateless.  The Marcum Q evaluation uses the
scaled-Bessel series so no intermediate quantity can overflow, with a
Gaussian-tail fallback for extreme arguments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp
from scipy.optimize import brentq

# Default tolerances; overridable by callers that need looser/tighter targets.
J0_REL_TOL = 1e-12
MARCUM_ABS_TOL = 1e-10
ENVELOPE_XTOL = 1e-9

# Beyond this the exp(-(b-a)^2/2) prefactor underflows and Q1 (or 1-Q1) is 0
# to far better than double precision.
_GAP_CUTOFF = 39.0
# Largest Bessel argument handled by the series; beyond it the evaluation
# falls back to the sqrt(b/a)*Q(b-a) tail form (only reachable far outside
# the a,b <= 50 accuracy contract).  Also the switch point to the asymptotic
# expansion for the scaled I0, whose library form degrades above ~1e9.
_SERIES_Z_MAX = 1e8


def _i0e(z: float) -> float:
    """Scaled I0 that stays finite for arbitrarily large arguments."""
    if z <= _SERIES_Z_MAX:
        return float(sp.ive(0, z))
    # asymptotic expansion; relative error < 1e-22 at the switch point
    inv = 1.0 / (8.0 * z)
    return (1.0 + inv + 4.5 * inv * inv) / math.sqrt(2.0 * math.pi * z)


def _check_finite(x, name: str) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"{name} must be finite, got {x!r}")
    return x


def bessel_j0(x: float) -> float:
    """Zero-order Bessel function of the first kind."""
    return float(sp.j0(_check_finite(x, "x")))


def bessel_i0_scaled(x: float) -> float:
    """exp(-x) * I0(x); strictly decreasing on [0, inf), values in (0, 1]."""
    x = _check_finite(x, "x")
    if x < 0:
        raise ValueError(f"x must be nonnegative, got {x}")
    return _i0e(x)


def gaussian_q(x: float) -> float:
    """Complementary Gaussian cdf Q(x) = P[N(0,1) > x]."""
    return float(0.5 * sp.erfc(_check_finite(x, "x") / math.sqrt(2.0)))


def _q1_upper(a: float, b: float) -> float:
    # Series for 0 < a <= b: Q1 = exp(-(b-a)^2/2) * sum_k (a/b)^k ive(k, ab).
    # Every term is positive, so there is no cancellation.
    gap = b - a
    if gap > _GAP_CUTOFF:
        return 0.0
    z = a * b
    if z > _SERIES_Z_MAX:
        # huge a*b with a close to b: Gaussian-tail asymptotic
        return min(1.0, math.sqrt(b / a) * gaussian_q(gap))
    n_terms = int(9.3 * math.sqrt(z)) + 61
    k = np.arange(n_terms)
    s = float(np.sum((a / b) ** k * sp.ive(k, z)))
    return math.exp(-0.5 * gap * gap) * s


def marcum_q1(a: float, b: float) -> float:
    """First-order Marcum Q-function Q1(a, b).

    Absolute error <= 1e-10 for a, b <= 50.  Exact identities Q1(a, 0) = 1
    and Q1(0, b) = exp(-b^2/2) are honoured to working precision.
    """
    a = _check_finite(a, "a")
    b = _check_finite(b, "b")
    if a < 0 or b < 0:
        raise ValueError(f"Marcum arguments must be nonnegative, got ({a}, {b})")
    if b == 0.0:
        return 1.0
    if a == 0.0:
        return math.exp(-0.5 * b * b)
    if a <= b:
        return _q1_upper(a, b)
    # reflection: Q1(a,b) + Q1(b,a) = 1 + exp(-(a^2+b^2)/2) I0(ab)
    gap = a - b
    cross = _i0e(a * b) * math.exp(-0.5 * gap * gap) if gap < _GAP_CUTOFF else 0.0
    return min(1.0, 1.0 - _q1_upper(b, a) + float(cross))


def delta_q1(alpha: float, beta: float) -> float:
    """Q1(alpha, beta) - Q1(beta, alpha); antisymmetric, zero on the diagonal."""
    alpha = _check_finite(alpha, "alpha")
    beta = _check_finite(beta, "beta")
    if alpha == beta:
        return 0.0
    return marcum_q1(alpha, beta) - marcum_q1(beta, alpha)


@dataclass(frozen=True)
class EnvelopeInverseResult:
    """Smallest epsilon* with |J0(eps)| <= target for every eps >= epsilon*."""

    epsilon_star: float
    achieved: bool


def inv_besselj0_envelope(target: float) -> EnvelopeInverseResult:
    """Envelope inverse of J0.

    J0 oscillates, so a naive root of J0(eps) = target does not guarantee the
    envelope property.  The local extrema of J0 sit at the zeros of J1 and
    their magnitudes decrease monotonically; the answer is the crossing of
    |J0| with the target on the arc following the last extremum that still
    exceeds it.
    """
    target = _check_finite(target, "target")
    if target <= 0:
        raise ValueError("target must be positive: the |J0| envelope decays "
                         "like eps**-0.5 and never reaches 0")
    if target >= 1.0:
        return EnvelopeInverseResult(0.0, True)

    n = 32
    while True:
        extrema = sp.jn_zeros(1, n)
        mags = np.abs(sp.j0(extrema))
        below = np.nonzero(mags <= target)[0]
        if below.size:
            break
        n *= 2
        if n > 1 << 24:  # pragma: no cover - unreachable for target > 0
            raise RuntimeError("failed to bracket the J0 envelope crossing")
    first_ok = int(below[0])

    if first_ok == 0:
        # only the main lobe exceeds the target: |J0| falls 1 -> 0 on
        # [0, first J0 zero]
        lo, hi = 0.0, float(sp.jn_zeros(0, 1)[0])
    else:
        # |J0| decreases monotonically from the offending extremum to the
        # next zero of J0 (zeros of J0 and J1 interlace)
        lo = float(extrema[first_ok - 1])
        hi = float(sp.jn_zeros(0, first_ok + 1)[first_ok])
    eps = brentq(lambda e: abs(sp.j0(e)) - target, lo, hi, xtol=ENVELOPE_XTOL)

    # certify: every later extremum must also sit at or below the target
    check = sp.jn_zeros(1, first_ok + 50)[first_ok:]
    achieved = bool(np.all(np.abs(sp.j0(check)) <= target + 1e-12))
    return EnvelopeInverseResult(float(eps), achieved)
