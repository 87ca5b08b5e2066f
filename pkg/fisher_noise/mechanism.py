"""
------------------------------------------------------------------------------
Author:         Justin Vinh
Parent Package: fisher_noise
Creation Date:  2026.10.09
Last Modified:  2026.10.15

Purpose:
The noisy-response mechanism y = f(x) + w for scalar queries, seeded
inverse-CDF sampling of designed noise, and a maximum-likelihood adversary
whose Monte-Carlo error is compared with the Cramer-Rao floor 1/J.
------------------------------------------------------------------------------
"""

import math
from typing import Annotated, Literal, Union

from loguru import logger
import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import stats

from fisher_noise.density import NoiseDensity, cdf_at, fisher_information, quantile
from fisher_noise.errors import DegenerateDensity, InvalidQuery, OutOfRange

MIN_ATTACK_TRIALS = 1000


# QUERIES AND REPORTS
# -----------------------------------------------------------------------------
class IdentityScalar(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")
    kind: Literal["identity"] = "identity"


class AffineScalar(BaseModel):
    """f(x) = slope * x + intercept"""
    model_config = ConfigDict(frozen=True, extra="forbid")
    kind: Literal["affine"] = "affine"
    slope: float
    intercept: float = 0.0


QuerySpec = Annotated[Union[IdentityScalar, AffineScalar], Field(discriminator="kind")]


class AttackReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    trials: int
    empirical_mse: float
    cramer_rao_floor: float
    empirical_bias: float
    seed: int


def _affine_terms(query) -> tuple[float, float]:
    if isinstance(query, IdentityScalar):
        return 1.0, 0.0
    if not (math.isfinite(query.slope) and query.slope != 0):
        raise InvalidQuery("Affine queries need a finite nonzero slope", slope=query.slope)
    return query.slope, query.intercept


def apply_query(query, x):
    slope, intercept = _affine_terms(query)
    return slope * x + intercept


# SAMPLING AND RESPONSES
# -----------------------------------------------------------------------------
def sample(d: NoiseDensity, seed: int, count: int) -> np.ndarray:
    """
    count draws from d by inverse-CDF sampling.
    Uniforms come from numpy's PCG64 generator, so a seed gives the same
    stream on every platform.
    """
    if count < 1:
        raise OutOfRange("Sample count must be at least 1", count=count)
    rng = np.random.default_rng(seed)
    return quantile(d, rng.random(count))


def respond(query, x: float, d: NoiseDensity, seed: int) -> float:
    return float(apply_query(query, x) + sample(d, seed, 1)[0])


def ks_statistic(d: NoiseDensity, samples) -> float:
    """Kolmogorov-Smirnov distance between samples and the cached CDF"""
    return float(stats.kstest(np.asarray(samples, dtype=float), lambda w: cdf_at(d, w)).statistic)


# ADVERSARY
# -----------------------------------------------------------------------------
def noise_mode(d: NoiseDensity) -> float:
    """
    Peak of the noise density: the largest-w node among ties (so that
    x = y - w resolves toward the smallest x), refined by one parabola
    through log p at the peak and its neighbours.
    """
    p = np.asarray(d.p)
    i = len(p) - 1 - int(np.argmax(p[::-1]))
    w = float(d.nodes[i])
    if 0 < i < len(p) - 1 and np.all(p[i - 1:i + 2] > 0):
        a, b, c = np.log(p[i - 1:i + 2])
        curvature = a - 2.0 * b + c
        if curvature < 0:
            w += 0.5 * d.grid.h * (a - c) / curvature
    return w


def mle_estimate(d: NoiseDensity, y, query=None):
    """argmax_x log p(y - f(x)); location model y = x + w by default"""
    slope, intercept = _affine_terms(query or IdentityScalar())
    x = (np.asarray(y, dtype=float) - noise_mode(d) - intercept) / slope
    return float(x) if x.ndim == 0 else x


def monte_carlo_attack(d: NoiseDensity, x_true: float, trials: int, seed: int,
                       query=None) -> AttackReport:
    """Repeated respond + mle_estimate, against the floor 1/(slope^2 J)"""
    if trials < MIN_ATTACK_TRIALS:
        raise OutOfRange(f"Attacks need at least {MIN_ATTACK_TRIALS} trials", trials=trials)
    query = query or IdentityScalar()
    slope, _ = _affine_terms(query)

    fisher = fisher_information(d)
    if not (math.isfinite(fisher) and fisher > 0):
        raise DegenerateDensity("Cramer-Rao floor needs finite positive Fisher information",
                                fisher=fisher)

    y = apply_query(query, x_true) + sample(d, seed, trials)
    errors = mle_estimate(d, y, query) - x_true
    report = AttackReport(
        trials=trials,
        empirical_mse=float(np.mean(errors**2)),
        cramer_rao_floor=1.0 / (slope**2 * fisher),
        empirical_bias=float(np.mean(errors)),
        seed=seed,
    )
    logger.info(f"Attack: mse={report.empirical_mse:.6g} floor={report.cramer_rao_floor:.6g} "
                f"bias={report.empirical_bias:.3g}")
    return report
