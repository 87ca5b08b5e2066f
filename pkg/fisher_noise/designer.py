"""
------------------------------------------------------------------------------
Author:         Justin Vinh
Parent Package: fisher_noise
Creation Date:  2026.10.07
Last Modified:  2026.10.17

Purpose:
Solves the constrained design problem
    minimize J[p]  subject to  E{g(w)} <= rho,
through its necessary condition, a Schrodinger equation in psi = sqrt(p)
with potential v = beta * g / 4. The multiplier beta is found by bisection
on the strictly decreasing map beta -> Q(beta); the ground state at beta*
is the optimal noise density. Also sweeps privacy-utility frontiers and
compares the optimum with conventional mechanisms.
------------------------------------------------------------------------------
"""

from dataclasses import dataclass
import math
from typing import Any, Sequence

from loguru import logger
import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict
from scipy.integrate import quad
from scipy.optimize import brentq
from tqdm.contrib.concurrent import thread_map

from fisher_noise.density import (
    Grid,
    NoiseDensity,
    boundary_mass,
    density_from_wavefunction,
    density_to_document,
    fisher_information,
    laplace_on,
    quality,
    uniform_on,
)
from fisher_noise.errors import (
    BudgetUnreachable,
    ComputationError,
    DomainTooSmall,
    FisherNoiseError,
    NoConvergence,
    NonConvergentTruncation,
    NotApplicable,
    OutOfRange,
)
from fisher_noise.problem import (
    AUTO_MAX_DOUBLINGS,
    DesignProblem,
    Fixed,
    Quadratic,
    RealLine,
    ValidatedProblem,
    eval_quality_fn,
    quality_fn_to_document,
    validate,
)
from fisher_noise.schrodinger import (
    EigenPair,
    assemble,
    ground_state,
    nth_state,
    potential_from_quality,
)

BUDGET_REL_TOL = 1e-7
MAX_BISECTION_ITERATIONS = 200
MAX_BETA_DOUBLINGS = 60
PRINCIPLE_SLACK = 1e-9


# RESULT TYPES
# -----------------------------------------------------------------------------
class DesignDiagnostics(BaseModel):
    model_config = ConfigDict(frozen=True)

    bisection_iters: int
    eig_residual: float
    boundary_mass: float
    eig_refinement_iters: int = 0
    # (beta, quality) at every ground state evaluated, in evaluation order
    trace: list[tuple[float, float]] = []


@dataclass(frozen=True, eq=False)
class DesignResult:
    density: NoiseDensity
    fisher: float
    quality: float
    beta: float
    mu: float
    constraint_active: bool
    diagnostics: DesignDiagnostics
    g: Any
    rho: float

    @property
    def product(self) -> float:
        return self.fisher * self.quality

    def to_document(self) -> dict[str, Any]:
        return {
            "fisher": self.fisher,
            "quality": self.quality,
            "beta": self.beta,
            "mu": self.mu,
            "constraint_active": self.constraint_active,
            "diagnostics": self.diagnostics.model_dump(),
            "density": density_to_document(self.density),
            "g": quality_fn_to_document(self.g),
            "rho": self.rho,
        }


class FrontierPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    rho: float
    fisher: float
    quality: float
    product: float


class PrincipleCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    product: float
    satisfied: bool


class BaselinePoint(BaseModel):
    """A competing noise density evaluated on the design's grid"""
    model_config = ConfigDict(frozen=True)

    name: str
    fisher: float
    quality: float
    feasible: bool


@dataclass(frozen=True, eq=False)
class SeparableDesign:
    """Independent per-coordinate designs; trace Fisher and quality add up"""
    components: tuple[DesignResult, ...]

    @property
    def fisher(self) -> float:
        return math.fsum(c.fisher for c in self.components)

    @property
    def quality(self) -> float:
        return math.fsum(c.quality for c in self.components)


# DESIGN
# -----------------------------------------------------------------------------
def _solve_at(grid: Grid, g, beta: float) -> tuple[EigenPair, NoiseDensity, float]:
    op = assemble(grid, potential_from_quality(grid, g, beta))
    pair = ground_state(op)
    d = density_from_wavefunction(pair.eigenvector)
    return pair, d, quality(d, g)


def _result(vp: ValidatedProblem, pair: EigenPair, d: NoiseDensity, beta: float,
            active: bool, iterations: int, trace: list) -> DesignResult:
    diagnostics = DesignDiagnostics(
        bisection_iters=iterations,
        eig_residual=pair.residual_norm,
        boundary_mass=boundary_mass(d),
        eig_refinement_iters=pair.iterations,
        trace=trace,
    )
    return DesignResult(
        density=d,
        fisher=fisher_information(d),
        quality=quality(d, vp.g),
        beta=beta,
        mu=-4.0 * pair.eigenvalue,
        constraint_active=active,
        diagnostics=diagnostics,
        g=vp.g,
        rho=vp.rho,
    )


def design(problem: DesignProblem | ValidatedProblem) -> DesignResult:
    """
    Optimal noise density for a validated problem.

    With g = Zero, or when the free ground state already meets the budget on
    a bounded support, the result is that ground state with beta = 0 and the
    constraint inactive. Otherwise beta_hi doubles from 1 until Q(beta_hi) < rho
    and bisection on [beta_lo, beta_hi] finds Q(beta*) = rho.
    """
    vp = validate(problem)
    g, rho = vp.g, vp.rho
    grid = Grid.from_domain(vp.lo, vp.hi, vp.grid)
    logger.info(f"Designing noise on [{vp.lo:.6g}, {vp.hi:.6g}] "
                f"with {grid.n} nodes (g={g.kind}, rho={rho:g})")

    pair, d, q = _solve_at(grid, g, 0.0)
    trace = [(0.0, q)]
    if g.is_zero():
        return _result(vp, pair, d, 0.0, False, 0, trace)
    if q <= rho:
        if vp.bounded:
            logger.info(f"Budget inactive: free ground state has quality {q:.6g} <= {rho:g}")
            return _result(vp, pair, d, 0.0, False, 0, trace)
        raise DomainTooSmall("Truncation box too narrow: the free ground state already "
                             "meets the budget", lo=vp.lo, hi=vp.hi, quality=q, rho=rho)

    tol = BUDGET_REL_TOL * rho
    beta_lo, beta_hi = 0.0, 1.0
    for _ in range(MAX_BETA_DOUBLINGS):
        pair, d, q = _solve_at(grid, g, beta_hi)
        trace.append((beta_hi, q))
        if abs(q - rho) <= tol:
            return _result(vp, pair, d, beta_hi, True, 0, trace)
        if q < rho:
            break
        beta_lo, beta_hi = beta_hi, 2.0 * beta_hi
    else:
        raise BudgetUnreachable("Budget lies below the smallest quality the grid can reach",
                                rho=rho, beta=beta_hi, quality=q)

    for iteration in range(1, MAX_BISECTION_ITERATIONS + 1):
        beta = 0.5 * (beta_lo + beta_hi)
        if beta in (beta_lo, beta_hi):
            break
        pair, d, q = _solve_at(grid, g, beta)
        trace.append((beta, q))
        logger.debug(f"bisection {iteration}: beta={beta:.12g} quality={q:.12g}")
        if abs(q - rho) <= tol:
            logger.info(f"Multiplier beta={beta:.9g} after {iteration} bisection steps")
            return _result(vp, pair, d, beta, True, iteration, trace)
        if q > rho:
            beta_lo = beta
        else:
            beta_hi = beta

    raise NoConvergence("Multiplier bisection did not meet the budget tolerance",
                        rho=rho, beta_lo=beta_lo, beta_hi=beta_hi, quality=q)


def resolve_truncation(problem: DesignProblem, boundary_mass_tol: float) -> float:
    """
    Half-width L for Auto truncation: double L from sqrt(rho) until the
    design on [-L, L] keeps less than boundary_mass_tol near the walls.
    """
    half_width = math.sqrt(problem.rho) if problem.rho > 0 else 1.0
    for _ in range(AUTO_MAX_DOUBLINGS + 1):
        candidate = problem.model_copy(
            update={"support": RealLine(truncation=Fixed(half_width=half_width))}
        )
        try:
            mass = design(validate(candidate)).diagnostics.boundary_mass
        except (DomainTooSmall, ComputationError) as e:
            logger.debug(f"Truncation L={half_width:g} too small: {e}")
        else:
            if mass < boundary_mass_tol:
                logger.info(f"Auto truncation resolved to L={half_width:g} "
                            f"(boundary mass {mass:.3g})")
                return half_width
            logger.debug(f"Truncation L={half_width:g} leaves boundary mass {mass:.3g}")
        half_width *= 2.0

    raise NonConvergentTruncation("Boundary mass stayed above tolerance",
                                  boundary_mass_tol=boundary_mass_tol,
                                  doublings=AUTO_MAX_DOUBLINGS)


# FRONTIER
# -----------------------------------------------------------------------------
def frontier(problem_template: DesignProblem | ValidatedProblem, rhos: Sequence[float],
             max_workers: int = 1) -> list[FrontierPoint]:
    """One design per rho; results ordered like rhos"""
    template = (problem_template.problem if isinstance(problem_template, ValidatedProblem)
                else problem_template)
    rhos = [float(r) for r in rhos]
    if not rhos:
        raise OutOfRange("Frontier needs at least one budget")
    if any(not (math.isfinite(r) and r > 0) for r in rhos):
        raise OutOfRange("Frontier budgets must be positive", rhos=rhos)
    if any(b <= a for a, b in zip(rhos, rhos[1:])):
        raise OutOfRange("Frontier budgets must be strictly increasing", rhos=rhos)
    if template.g.is_zero():
        raise NotApplicable("A frontier needs a nonzero quality function")

    def point(rho: float) -> FrontierPoint:
        try:
            result = design(template.model_copy(update={"rho": rho}))
        except FisherNoiseError as e:
            raise e.with_context(rho=rho)
        return FrontierPoint(rho=rho, fisher=result.fisher, quality=result.quality,
                             product=result.product)

    return thread_map(point, rhos, max_workers=max_workers, desc="frontier",
                      disable=len(rhos) == 1)


def frontier_to_frame(points: Sequence[FrontierPoint]) -> pd.DataFrame:
    return pd.DataFrame([p.model_dump() for p in points],
                        columns=["rho", "fisher", "quality", "product"])


# PRIVACY PRINCIPLE AND BASELINES
# -----------------------------------------------------------------------------
def check_density_principle(d: NoiseDensity) -> PrincipleCheck:
    """J * E{w^2} for any density; >= 1 up to discretization"""
    product = fisher_information(d) * quality(d, Quadratic())
    return PrincipleCheck(product=product, satisfied=product >= 1.0 - PRINCIPLE_SLACK)


def check_principle(result: DesignResult) -> PrincipleCheck:
    if not isinstance(result.g, Quadratic):
        raise NotApplicable("The privacy principle J * Q >= 1 holds for quadratic g only",
                            g=result.g.kind)
    product = result.product
    return PrincipleCheck(product=product, satisfied=product >= 1.0 - PRINCIPLE_SLACK)


def _matched(make, lo: float, hi: float, target: float, g) -> NoiseDensity | None:
    # Parameter of a one-parameter family whose quality equals target
    def gap(x: float) -> float:
        return quality(make(x), g) - target

    if gap(lo) > 0 or gap(hi) < 0:
        return None
    return make(brentq(gap, lo, hi, xtol=1e-12, rtol=1e-12))


def _baseline(name: str, d: NoiseDensity, g, rho: float) -> BaselinePoint:
    q = quality(d, g)
    return BaselinePoint(name=name, fisher=fisher_information(d), quality=q,
                         feasible=q <= rho * (1 + BUDGET_REL_TOL) or g.is_zero())


def baselines(result: DesignResult, excited_states: int = 3) -> list[BaselinePoint]:
    """
    Competing densities on the same grid: excited states 2..excited_states+1
    of the design's operator, Laplace noise matched to the budget and uniform
    noise with the same mean quality (the full box when g = Zero).
    """
    grid = result.density.grid
    g, rho = result.g, result.rho
    op = assemble(grid, potential_from_quality(grid, g, result.beta))

    points = []
    for n in range(2, excited_states + 2):
        d = density_from_wavefunction(nth_state(op, n).eigenvector)
        points.append(_baseline(f"excited_{n}", d, g, rho))

    half_width = max(abs(grid.lo), abs(grid.hi))
    if g.is_zero():
        points.append(_baseline("uniform", uniform_on(grid, half_width), g, rho))
        return points

    laplace = _matched(lambda b: laplace_on(grid, b), grid.h, 10.0 * half_width, rho, g)
    if laplace is None:
        logger.debug("No truncated Laplace density on this grid matches the budget")
    else:
        points.append(_baseline("laplace", laplace, g, rho))

    def mean_quality(c: float) -> float:
        return quad(lambda w: eval_quality_fn(g, w), 0.0, c)[0] / c - rho

    if mean_quality(grid.h) < 0 <= mean_quality(half_width):
        c = brentq(mean_quality, grid.h, half_width, xtol=1e-12)
        points.append(_baseline("uniform", uniform_on(grid, c), g, rho))
    return points


def design_separable(problems: Sequence[DesignProblem | ValidatedProblem]) -> SeparableDesign:
    """Noise for an m-dimensional response with g(w) = sum_k g_k(w_k)"""
    if not problems:
        raise OutOfRange("Separable design needs at least one coordinate")
    components = []
    for k, problem in enumerate(problems):
        try:
            components.append(design(problem))
        except FisherNoiseError as e:
            raise e.with_context(coordinate=k)
    return SeparableDesign(tuple(components))


def trace_is_monotone(result: DesignResult) -> bool:
    """Q(beta) strictly decreasing along the recorded bisection trace"""
    trace = sorted(result.diagnostics.trace)
    qualities = np.array([q for _, q in trace])
    return bool(np.all(np.diff(qualities) < 0))
