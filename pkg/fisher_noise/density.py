"""
------------------------------------------------------------------------------
Author:         Justin Vinh
Parent Package: fisher_noise
Creation Date:  2026.10.03
Last Modified:  2026.10.17

Purpose:
Grid representations of noise densities and wave functions (psi = sqrt(p)),
the two functionals of the design problem (Fisher information and expected
quality), inverse-CDF quantiles, and closed-form reference densities.

All integrals use the trapezoid rule on a uniform grid whose two walls carry
psi = p = 0 and are not stored.
------------------------------------------------------------------------------
"""

from dataclasses import dataclass
from functools import cached_property
import math
from typing import Any

import numpy as np
import pandas as pd

from fisher_noise.errors import (
    DegenerateDensity,
    DomainTooSmall,
    InvalidSupport,
    MalformedInput,
    OutOfRange,
)
from fisher_noise.problem import GridConfig, eval_quality_fn

GAUSSIAN_HALF_WIDTH_SIGMAS = 10.0


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


# GRID, WAVE FUNCTION AND DENSITY TYPES
# -----------------------------------------------------------------------------
@dataclass(frozen=True)
class Grid:
    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi):
            raise InvalidSupport("Grid needs finite lo < hi", lo=self.lo, hi=self.hi)
        if self.n < 2:
            raise InvalidSupport("Grid needs at least two interior nodes", n=self.n)

    @classmethod
    def from_domain(cls, lo: float, hi: float, config: GridConfig) -> "Grid":
        return cls(float(lo), float(hi), config.n_points)

    @property
    def h(self) -> float:
        return (self.hi - self.lo) / (self.n + 1)

    @cached_property
    def nodes(self) -> np.ndarray:
        """Interior nodes w_1 .. w_n"""
        return _frozen_array(np.linspace(self.lo, self.hi, self.n + 2)[1:-1])

    @cached_property
    def nodes_with_walls(self) -> np.ndarray:
        return _frozen_array(np.linspace(self.lo, self.hi, self.n + 2))

    def matches(self, other: "Grid") -> bool:
        return (self.lo, self.hi, self.n) == (other.lo, other.hi, other.n)

    def to_document(self) -> dict[str, Any]:
        return {"lo": self.lo, "hi": self.hi, "n": self.n}


@dataclass(frozen=True, eq=False)
class WaveFunction:
    """
    Amplitudes psi_i at the interior nodes, normalized so the trapezoid
    integral of psi^2 is 1. Ground states are nonnegative; excited states
    keep their signs so their nodes can be counted.
    """
    grid: Grid
    values: np.ndarray

    @classmethod
    def normalized(cls, grid: Grid, values) -> "WaveFunction":
        values = np.asarray(values, dtype=float)
        norm = math.sqrt(grid.h * float(np.dot(values, values)))
        if not norm > 0:
            raise DegenerateDensity("Wave function is identically zero")
        return cls(grid, _frozen_array(values / norm))


@dataclass(frozen=True, eq=False)
class NoiseDensity:
    grid: Grid
    p: np.ndarray
    cdf: np.ndarray

    @classmethod
    def from_values(cls, grid: Grid, values) -> "NoiseDensity":
        """Normalize nonnegative node values into a density with its CDF cached"""
        p = np.asarray(values, dtype=float)
        if p.shape != (grid.n,):
            raise DegenerateDensity("Density values do not match the grid",
                                    expected=grid.n, got=p.shape)
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise DegenerateDensity("Density values must be finite and nonnegative")
        total = grid.h * float(p.sum())
        if not total > 0:
            raise DegenerateDensity("Density has no mass on the grid")
        p = p / total
        return cls(grid, _frozen_array(p), _frozen_array(_cumulative(grid, p)))

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes

    @cached_property
    def cdf_with_walls(self) -> np.ndarray:
        """CDF at lo, w_1 .. w_n, hi; starts at exactly 0 and ends at exactly 1"""
        return _frozen_array(np.concatenate(([0.0], self.cdf, [1.0])))


def _cumulative(grid: Grid, p: np.ndarray) -> np.ndarray:
    # Trapezoid accumulation cell by cell (p = 0 at both walls), rescaled so
    # the last cell closes at exactly 1
    padded = np.concatenate(([0.0], p, [0.0]))
    cells = 0.5 * grid.h * (padded[:-1] + padded[1:])
    running = np.cumsum(cells)
    return np.minimum(running[:-1] / running[-1], 1.0)


def density_from_wavefunction(psi: WaveFunction) -> NoiseDensity:
    return NoiseDensity.from_values(psi.grid, np.square(psi.values))


def wavefunction_from_density(d: NoiseDensity) -> WaveFunction:
    return WaveFunction.normalized(d.grid, np.sqrt(d.p))


# FUNCTIONALS
# -----------------------------------------------------------------------------
def fisher_information(d: NoiseDensity) -> float:
    """
    Fisher information E{(d/dw log p)^2} = 4 * int (psi')^2 dw.

    Interior nodes use (p_{i+1} - p_{i-1})^2 / (4 h^2 p_i), i.e. 4 (psi')^2
    with psi' from the central difference of psi^2; its leading truncation
    error vanishes for Gaussian densities. At the walls p = 0 and the
    integrand takes its limit 4 psi'(wall)^2, with psi' from a second-order
    one-sided difference of psi = sqrt(p).
    """
    p = np.asarray(d.p, dtype=float)
    if np.any(p < 0):
        raise DegenerateDensity("Fisher information needs a nonnegative density")
    h = d.grid.h

    padded = np.concatenate(([0.0], p, [0.0]))
    slope = (padded[2:] - padded[:-2]) / (2.0 * h)
    with np.errstate(divide="ignore", invalid="ignore"):
        # An exact zero is a true node only if its neighbours rise above round-off
        flat = np.abs(slope) * 2.0 * h <= 1e-20 * p.max()
        score_sq = np.where(p > 0, slope**2 / p, np.where(flat, 0.0, np.inf))

    psi = np.sqrt(padded)
    wall_lo = (4.0 * psi[1] - psi[2]) / (2.0 * h)
    wall_hi = (4.0 * psi[-2] - psi[-3]) / (2.0 * h)
    walls = 4.0 * (wall_lo**2 + wall_hi**2)

    return float(h * (score_sq.sum() + 0.5 * walls))


def quality(d: NoiseDensity, g) -> float:
    """Expected quality E{g(w)} by the trapezoid rule"""
    if g.is_zero():
        return 0.0
    return float(d.grid.h * np.dot(eval_quality_fn(g, d.nodes), d.p))


def quantile(d: NoiseDensity, u):
    """
    Inverse of the piecewise-linear CDF through the cached node values.
    quantile(0) = lo and quantile(1) = hi exactly.
    """
    u_arr = np.asarray(u, dtype=float)
    if np.any(~((u_arr >= 0) & (u_arr <= 1))):
        raise OutOfRange("Quantile levels must lie in [0, 1]")

    w = np.interp(u_arr, d.cdf_with_walls, d.grid.nodes_with_walls)
    w = np.where(u_arr == 0.0, d.grid.lo, w)
    w = np.where(u_arr == 1.0, d.grid.hi, w)
    return float(w) if w.ndim == 0 else w


def cdf_at(d: NoiseDensity, w):
    """Piecewise-linear CDF evaluated anywhere (0 left of lo, 1 right of hi)"""
    return np.interp(w, d.grid.nodes_with_walls, d.cdf_with_walls)


def boundary_mass(d: NoiseDensity, fraction: float = 0.1) -> float:
    """Probability mass within the outer `fraction` of the interval, both sides"""
    width = fraction * (d.grid.hi - d.grid.lo)
    left = float(cdf_at(d, d.grid.lo + width))
    right = 1.0 - float(cdf_at(d, d.grid.hi - width))
    return left + right


def rescale(d: NoiseDensity, s: float) -> NoiseDensity:
    """Density of s * w for w ~ d, on the correspondingly stretched grid"""
    if not s > 0:
        raise OutOfRange("Scale factor must be positive", s=s)
    grid = Grid(s * d.grid.lo, s * d.grid.hi, d.grid.n)
    return NoiseDensity.from_values(grid, d.p / s)


# CLOSED-FORM REFERENCE DENSITIES
# -----------------------------------------------------------------------------
def analytic_square_well(a: float, n: int, grid: GridConfig) -> NoiseDensity:
    """
    n-th state of the infinite square well on [-a, a]:
    p(w) = sin^2(n pi (w - a) / (2a)) / a, renormalized on the grid
    """
    if not a > 0:
        raise InvalidSupport("Square well half-width must be positive", a=a)
    if n < 1:
        raise OutOfRange("Square well state index starts at 1", n=n)
    g = Grid(-a, a, grid.n_points)
    w = g.nodes
    return NoiseDensity.from_values(g, np.sin(n * np.pi * (w - a) / (2 * a)) ** 2 / a)


def analytic_gaussian(rho: float, grid: GridConfig,
                      half_width: float | None = None) -> NoiseDensity:
    """Zero-mean Gaussian with variance rho, truncated to [-L, L] and renormalized"""
    if not rho > 0:
        raise OutOfRange("Gaussian variance must be positive", rho=rho)
    required = GAUSSIAN_HALF_WIDTH_SIGMAS * math.sqrt(rho)
    if half_width is None:
        half_width = required
    if half_width < required * (1 - 1e-12):
        raise DomainTooSmall("Gaussian oracle needs a half-width of at least 10 sqrt(rho)",
                             half_width=half_width, required=required)
    g = Grid(-half_width, half_width, grid.n_points)
    w = g.nodes
    return NoiseDensity.from_values(g, np.exp(-w**2 / (2 * rho)) / math.sqrt(2 * math.pi * rho))


def laplace_on(grid: Grid, scale: float) -> NoiseDensity:
    """exp(-|w|/b) on the nodes of an existing grid, renormalized"""
    if not scale > 0:
        raise OutOfRange("Laplace scale must be positive", scale=scale)
    return NoiseDensity.from_values(grid, np.exp(-np.abs(grid.nodes) / scale) / (2 * scale))


def uniform_on(grid: Grid, support_half_width: float) -> NoiseDensity:
    """Indicator of |w| <= c on the nodes of an existing grid, renormalized"""
    return NoiseDensity.from_values(grid, (np.abs(grid.nodes) <= support_half_width).astype(float))


def analytic_laplace(scale: float, half_width: float, grid: GridConfig) -> NoiseDensity:
    """Laplace mechanism noise exp(-|w|/b)/(2b), truncated to [-L, L]"""
    return laplace_on(Grid(-half_width, half_width, grid.n_points), scale)


def analytic_uniform(support_half_width: float, half_width: float,
                     grid: GridConfig) -> NoiseDensity:
    """Uniform noise on [-c, c] placed on the grid of [-L, L] (c <= L)"""
    if not 0 < support_half_width <= half_width:
        raise DomainTooSmall("Uniform support must fit inside the grid",
                             support_half_width=support_half_width, half_width=half_width)
    return uniform_on(Grid(-half_width, half_width, grid.n_points), support_half_width)


# SERIALIZATION
# -----------------------------------------------------------------------------
def density_to_document(d: NoiseDensity) -> dict[str, Any]:
    return {"grid": d.grid.to_document(), "p": d.p}


def density_from_document(doc: Any) -> NoiseDensity:
    try:
        grid_doc = doc["grid"]
        grid = Grid(float(grid_doc["lo"]), float(grid_doc["hi"]), int(grid_doc["n"]))
        return NoiseDensity.from_values(grid, np.asarray(doc["p"], dtype=float))
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, (InvalidSupport, DegenerateDensity)):
            raise
        raise MalformedInput(f"Malformed density document: {e}") from e


def density_to_frame(d: NoiseDensity) -> pd.DataFrame:
    """One row per interior node, columns w, p, cdf"""
    return pd.DataFrame({"w": d.nodes, "p": d.p, "cdf": d.cdf})
