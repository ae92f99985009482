"""Product Gaussian measures on max-norm truncations.

Independent-coordinate Gaussian laws, a summability check for when such
a product concentrates on bounded sequences, and Monte-Carlo estimation
of how much mass sits near the non-differentiability set of the max norm
(points whose two largest absolute coordinates are within delta of each
other).  The exact set of ties has measure zero; what is estimable at
desk scale is the delta-thickened family and its shrink-to-zero trend,
cross-checked for n=2 against deterministic quadrature.

Sampling is counter-based (Philox) in fixed blocks of rows, so results
are bit-identical across platforms and independent of how many blocks
run in parallel; the block stream depends only on (seed, block, n).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import ndtr, ndtri

from ._rng import philox_gen
from .errors import (
    NonpositiveVarianceError,
    PreconditionFailedError,
    QuadratureNonconvergedError,
)
from .spaces import Space, SpacePoint, seq_point

__all__ = [
    "GaussianSpec",
    "MeasureEstimate",
    "default_spec",
    "standard_normal_spec",
    "vakhania_check",
    "gaussian_sample",
    "estimate_nondiff_measure",
    "b2_tie_probability_oracle",
]

_BLOCK_ROWS = 65536
_LOG = logging.getLogger(__name__)


@dataclass(frozen=True)
class GaussianSpec:
    """Independent-coordinate Gaussian product law.

    Coordinate k (1-based) is Normal(mean_at(k), variance_at(k)).  Means
    default to 0 beyond the listed prefix.  Variances come either from
    an explicit list or from the named law "inv_log", s_kk = 1/ln(k+2),
    whose summability terms e^(-r/s_kk) = (k+2)^(-r) converge for r > 1.
    ``r`` is the radius used by vakhania_check.
    """

    r: float = 2.0
    means: tuple[float, ...] = ()
    variances: tuple[float, ...] = ()
    law: str | None = "inv_log"

    def __post_init__(self):
        if not self.r > 0.0:
            raise PreconditionFailedError("r must be positive")
        object.__setattr__(self, "means", tuple(float(a) for a in self.means))
        object.__setattr__(self, "variances", tuple(float(s) for s in self.variances))
        if any(not math.isfinite(a) for a in self.means):
            raise PreconditionFailedError("means must be finite")
        for s in self.variances:
            if not s > 0.0:
                raise NonpositiveVarianceError("explicit variances must be positive", value=s)
        if self.law not in (None, "inv_log"):
            raise PreconditionFailedError(f"unknown variance law {self.law!r}")
        if self.law is None and not self.variances:
            raise PreconditionFailedError("need an explicit variance list or a law")

    def mean_at(self, k: int) -> float:
        return self.means[k - 1] if k <= len(self.means) else 0.0

    def variance_at(self, k: int) -> float:
        if k < 1:
            raise PreconditionFailedError("coordinate index is 1-based")
        if k <= len(self.variances):
            return self.variances[k - 1]
        if self.law == "inv_log":
            return 1.0 / math.log(k + 2.0)
        raise PreconditionFailedError(
            f"spec lists {len(self.variances)} variances and no law; coordinate {k} undefined"
        )

    def mean_array(self, n: int) -> np.ndarray:
        return np.array([self.mean_at(k) for k in range(1, n + 1)])

    def sd_array(self, n: int) -> np.ndarray:
        return np.sqrt([self.variance_at(k) for k in range(1, n + 1)])

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "means": list(self.means),
            "variances": list(self.variances),
            "law": self.law,
        }


def default_spec() -> GaussianSpec:
    return GaussianSpec()


def standard_normal_spec(n: int) -> GaussianSpec:
    return GaussianSpec(r=2.0, variances=(1.0,) * n, law=None)


@dataclass(frozen=True)
class MeasureEstimate:
    """Monte-Carlo estimate of the delta-thickened tie-set mass."""

    fraction: float
    sample_count: int
    delta: float
    n: int
    seed: int
    tie_hits: int = 0

    @property
    def std_error(self) -> float:
        return math.sqrt(self.fraction * (1.0 - self.fraction) / self.sample_count)

    def to_dict(self) -> dict:
        return {
            "fraction": self.fraction,
            "std_error": self.std_error,
            "n": self.n,
            "delta": self.delta,
            "count": self.sample_count,
            "seed": self.seed,
        }


def vakhania_check(spec: GaussianSpec, N: int) -> tuple[bool, float]:
    """Partial sum of e^(-r/s_kk) to N, with a tail-convergence flag.

    The flag is a ratio test in disguise: the decay exponent of the term
    sequence is estimated between k = N/2 and k = N, and the tail counts
    as summable when that exponent beats 1 (a convergent p-series bound).
    Terms that underflow to zero count as summable outright.
    """
    if N < 1:
        raise PreconditionFailedError("N must be >= 1")
    terms = np.exp([-spec.r / spec.variance_at(k) for k in range(1, N + 1)])
    partial = math.fsum(terms)
    m = max(1, N // 2)
    a_mid, a_end = float(terms[m - 1]), float(terms[N - 1])
    if a_end == 0.0:
        flag = True
    elif m == N or a_mid == 0.0:
        flag = False
    else:
        p_hat = (math.log(a_mid) - math.log(a_end)) / math.log(N / m)
        flag = p_hat > 1.0
    return flag, partial


def _sample_block(spec: GaussianSpec, n: int, seed: int, block: int) -> np.ndarray:
    """One full block of Gaussian rows; depends only on (seed, block, n)."""
    rng = philox_gen(seed, block)
    u = (rng.integers(0, 1 << 53, size=(_BLOCK_ROWS, n), dtype=np.uint64) + 0.5) * 2.0**-53
    return spec.mean_array(n) + spec.sd_array(n) * ndtri(u)


def gaussian_sample(spec: GaussianSpec, n: int, count: int, seed: int) -> list[SpacePoint]:
    """count independent draws of (X_1..X_n) as max-norm sequence points."""
    if n < 1 or count < 1:
        raise PreconditionFailedError("need n >= 1 and count >= 1")
    out: list[SpacePoint] = []
    for block in range(-(-count // _BLOCK_ROWS)):
        rows = _sample_block(spec, n, seed, block)
        take = min(_BLOCK_ROWS, count - block * _BLOCK_ROWS)
        out.extend(seq_point(Space.LINF_SEQ, row) for row in rows[:take])
    return out


def estimate_nondiff_measure(
    spec: GaussianSpec, n: int, delta: float, count: int, seed: int
) -> MeasureEstimate:
    """Fraction of samples whose top two |coordinates| are within delta.

    A sample fails delta-dominance exactly when its largest absolute
    coordinate beats the runner-up by less than delta; at delta = 0 the
    test degenerates to exact ties, which have probability zero and are
    logged if they ever occur.  A single coordinate dominates vacuously.
    """
    if n < 1 or count < 1:
        raise PreconditionFailedError("need n >= 1 and count >= 1")
    if delta < 0.0:
        raise PreconditionFailedError("delta must be nonnegative")
    hits = 0
    ties = 0
    if n > 1:
        for block in range(-(-count // _BLOCK_ROWS)):
            rows = _sample_block(spec, n, seed, block)
            take = min(_BLOCK_ROWS, count - block * _BLOCK_ROWS)
            a = np.abs(rows[:take])
            pair = np.partition(a, n - 2, axis=1)[:, n - 2:]
            margin = pair.max(axis=1) - pair.min(axis=1)
            if delta == 0.0:
                t = int(np.count_nonzero(margin == 0.0))
                ties += t
                hits += t
            else:
                hits += int(np.count_nonzero(margin < delta))
    if ties:
        _LOG.warning("exact floating-point ties observed: %d of %d samples", ties, count)
    return MeasureEstimate(
        fraction=hits / count,
        sample_count=count,
        delta=delta,
        n=n,
        seed=seed,
        tie_hits=ties,
    )


def b2_tie_probability_oracle(spec: GaussianSpec, delta: float) -> float:
    """P(||X_1| - |X_2|| <= delta) by deterministic quadrature.

    Reduces the two-dimensional event to one dimension by conditioning
    on |X_1|: the answer is the integral over u >= 0 of the folded-normal
    density of |X_1| times the probability that |X_2| lands within delta
    of u.  Entirely independent of the Monte-Carlo sampler.
    """
    if delta < 0.0:
        raise PreconditionFailedError("delta must be nonnegative")
    if delta == 0.0:
        return 0.0
    a1, s1 = spec.mean_at(1), math.sqrt(spec.variance_at(1))
    a2, s2 = spec.mean_at(2), math.sqrt(spec.variance_at(2))
    inv_root = 1.0 / math.sqrt(2.0 * math.pi)

    def folded_pdf(u: float) -> float:
        z1 = (u - a1) / s1
        z2 = (u + a1) / s1
        return inv_root / s1 * (math.exp(-0.5 * z1 * z1) + math.exp(-0.5 * z2 * z2))

    def folded_cdf(v: float) -> float:
        if v <= 0.0:
            return 0.0
        return float(ndtr((v - a2) / s2) - ndtr((-v - a2) / s2))

    def integrand(u: float) -> float:
        return folded_pdf(u) * (folded_cdf(u + delta) - folded_cdf(u - delta))

    value, abserr = quad(integrand, 0.0, np.inf, limit=200)
    if abserr > 1e-6:
        raise QuadratureNonconvergedError(
            "quadrature error estimate stayed above 1e-6", abserr=abserr
        )
    return float(value)
