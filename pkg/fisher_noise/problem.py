"""
------------------------------------------------------------------------------
Author:         Justin Vinh
Parent Package: fisher_noise
Creation Date:  2026.10.03
Last Modified:  2026.10.14

Purpose:
Inputs of the noise design problem: support sets, quality functions g,
the quality budget rho and the discretization policy, plus validation and
the JSON document format they are stored in.
------------------------------------------------------------------------------
"""

import math
from typing import Annotated, Any, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from fisher_noise.config import DEFAULT_GRID_POINTS, MIN_GRID_POINTS
from fisher_noise.errors import (
    GridTooCoarse,
    InvalidBudget,
    InvalidQualityFn,
    InvalidSupport,
    MalformedInput,
)

# Half-width multiplier (in units of sqrt(rho)) for Auto truncation with a
# quadratic g; the optimal Gaussian has < 1e-20 mass beyond it.
AUTO_QUADRATIC_MULTIPLIER = 10.0
AUTO_MAX_DOUBLINGS = 20


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


# SUPPORT SETS
# -----------------------------------------------------------------------------
class Fixed(_Frozen):
    kind: Literal["fixed"] = "fixed"
    half_width: float = Field(description="Truncate the real line to [-L, L].")


class Auto(_Frozen):
    kind: Literal["auto"] = "auto"
    boundary_mass_tol: float = Field(
        1e-6,
        description="Grow the box until the mass near the walls drops below this.",
    )


TruncationPolicy = Annotated[Union[Fixed, Auto], Field(discriminator="kind")]


class Bounded(_Frozen):
    kind: Literal["bounded"] = "bounded"
    lo: float
    hi: float


class RealLine(_Frozen):
    kind: Literal["real_line"] = "real_line"
    truncation: TruncationPolicy = Field(default_factory=Auto)


SupportSpec = Annotated[Union[Bounded, RealLine], Field(discriminator="kind")]


# QUALITY FUNCTIONS
# -----------------------------------------------------------------------------
class Zero(_Frozen):
    kind: Literal["zero"] = "zero"

    def __call__(self, w):
        return np.zeros_like(np.asarray(w, dtype=float))

    def is_zero(self) -> bool:
        return True


class Quadratic(_Frozen):
    kind: Literal["quadratic"] = "quadratic"

    def __call__(self, w):
        w = np.asarray(w, dtype=float)
        return w * w

    def is_zero(self) -> bool:
        return False


class EvenPower(_Frozen):
    kind: Literal["even_power"] = "even_power"
    k: int

    def __call__(self, w):
        return np.asarray(w, dtype=float) ** self.k

    def is_zero(self) -> bool:
        return False


class EvenPolynomial(_Frozen):
    """Sum of coeffs[j] * w^(2j + 2), i.e. coefficients of w^2, w^4, ..."""
    kind: Literal["even_polynomial"] = "even_polynomial"
    coeffs: tuple[float, ...]

    def __call__(self, w):
        w2 = np.asarray(w, dtype=float) ** 2
        return np.polynomial.polynomial.polyval(w2, (0.0, *self.coeffs))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)


QualityFn = Annotated[
    Union[Zero, Quadratic, EvenPower, EvenPolynomial], Field(discriminator="kind")
]


def eval_quality_fn(g: Zero | Quadratic | EvenPower | EvenPolynomial, w):
    """g(w); floats in, float out, arrays in, array out"""
    value = g(w)
    return float(value) if np.ndim(value) == 0 else value


# PROBLEM
# -----------------------------------------------------------------------------
class GridConfig(_Frozen):
    n_points: int = Field(DEFAULT_GRID_POINTS, description="Number of interior grid nodes.")


class DesignProblem(_Frozen):
    support: SupportSpec
    g: QualityFn
    rho: float = 0.0
    grid: GridConfig = Field(default_factory=GridConfig)


class ValidatedProblem(_Frozen):
    """A DesignProblem whose invariants hold, with its effective domain resolved"""
    problem: DesignProblem
    lo: float
    hi: float

    @property
    def support(self):
        return self.problem.support

    @property
    def g(self):
        return self.problem.g

    @property
    def rho(self) -> float:
        return self.problem.rho

    @property
    def grid(self) -> GridConfig:
        return self.problem.grid

    @property
    def bounded(self) -> bool:
        return isinstance(self.problem.support, Bounded)


def _check_support(support) -> None:
    if isinstance(support, Bounded):
        if not (math.isfinite(support.lo) and math.isfinite(support.hi)):
            raise InvalidSupport("Bounded support needs finite endpoints",
                                 lo=support.lo, hi=support.hi)
        if support.lo >= support.hi:
            raise InvalidSupport("Bounded support needs lo < hi",
                                 lo=support.lo, hi=support.hi)
        return

    truncation = support.truncation
    if isinstance(truncation, Fixed):
        if not (math.isfinite(truncation.half_width) and truncation.half_width > 0):
            raise InvalidSupport("Fixed truncation needs a positive finite half-width",
                                 half_width=truncation.half_width)
    elif not (0 < truncation.boundary_mass_tol < 1e-3):
        raise InvalidSupport("Auto truncation needs 0 < boundary_mass_tol < 1e-3",
                             boundary_mass_tol=truncation.boundary_mass_tol)


def _check_quality_fn(g) -> None:
    if isinstance(g, EvenPower) and (g.k <= 0 or g.k % 2):
        raise InvalidQualityFn("EvenPower needs a positive even exponent", k=g.k)
    if isinstance(g, EvenPolynomial):
        if not g.coeffs:
            raise InvalidQualityFn("EvenPolynomial needs at least one coefficient")
        if any(not math.isfinite(c) or c < 0 for c in g.coeffs):
            raise InvalidQualityFn("EvenPolynomial coefficients must be nonnegative",
                                   coeffs=list(g.coeffs))


def effective_domain(problem: DesignProblem | ValidatedProblem) -> tuple[float, float]:
    """
    The finite interval the solver works on.
    Bounded supports pass through, Fixed truncation gives [-L, L], Auto
    truncation with quadratic g uses L = 10 sqrt(rho) and any other g
    doubles L from sqrt(rho) until a re-solved design keeps its mass off
    the walls.
    """
    if isinstance(problem, ValidatedProblem):
        return problem.lo, problem.hi

    support = problem.support
    if isinstance(support, Bounded):
        return support.lo, support.hi

    truncation = support.truncation
    if isinstance(truncation, Fixed):
        return -truncation.half_width, truncation.half_width

    if isinstance(problem.g, Quadratic):
        half_width = AUTO_QUADRATIC_MULTIPLIER * math.sqrt(problem.rho)
        return -half_width, half_width

    # The doubling search needs the designer; imported here to avoid a cycle
    from fisher_noise.designer import resolve_truncation

    half_width = resolve_truncation(problem, truncation.boundary_mass_tol)
    return -half_width, half_width


def validate(problem: DesignProblem | ValidatedProblem) -> ValidatedProblem:
    """Check every invariant of the problem and resolve its effective domain"""
    if isinstance(problem, ValidatedProblem):
        return problem

    _check_support(problem.support)
    _check_quality_fn(problem.g)
    support = problem.support
    auto = isinstance(support, RealLine) and isinstance(support.truncation, Auto)
    if auto and problem.g.is_zero():
        raise InvalidSupport("Auto truncation needs a nonzero quality function; "
                             "use a Fixed half-width with g = zero")

    if not problem.g.is_zero() and not (math.isfinite(problem.rho) and problem.rho > 0):
        raise InvalidBudget("The quality budget rho must be positive", rho=problem.rho)
    if problem.grid.n_points < MIN_GRID_POINTS:
        raise GridTooCoarse(f"Grids need at least {MIN_GRID_POINTS} interior nodes",
                            n_points=problem.grid.n_points)

    lo, hi = effective_domain(problem)
    return ValidatedProblem(problem=problem, lo=lo, hi=hi)


# JSON DOCUMENT FORMAT
# -----------------------------------------------------------------------------
def _support_from_document(doc: Any):
    if not isinstance(doc, dict) or len(doc) != 1:
        raise MalformedInput(f"Unrecognized support entry: {doc!r}")
    if "bounded" in doc:
        lo, hi = doc["bounded"]
        return {"kind": "bounded", "lo": lo, "hi": hi}
    if "real_line" in doc:
        truncation = doc["real_line"]
        if isinstance(truncation, dict) and set(truncation) == {"fixed"}:
            return {"kind": "real_line",
                    "truncation": {"kind": "fixed", "half_width": truncation["fixed"]}}
        if isinstance(truncation, dict) and set(truncation) == {"auto"}:
            return {"kind": "real_line",
                    "truncation": {"kind": "auto", "boundary_mass_tol": truncation["auto"]}}
    raise MalformedInput(f"Unrecognized support entry: {doc!r}")


def _quality_fn_from_document(doc: Any):
    if doc in ("zero", "quadratic"):
        return {"kind": doc}
    if isinstance(doc, dict) and set(doc) == {"even_power"}:
        return {"kind": "even_power", "k": doc["even_power"]}
    if isinstance(doc, dict) and set(doc) == {"even_polynomial"}:
        return {"kind": "even_polynomial", "coeffs": doc["even_polynomial"]}
    raise MalformedInput(f"Unrecognized quality function entry: {doc!r}")


def problem_from_document(doc: Any) -> DesignProblem:
    """
    Build a DesignProblem from its JSON document:
    {"support": {"bounded": [lo, hi]} | {"real_line": {"fixed": L} | {"auto": tol}},
     "g": "zero" | "quadratic" | {"even_power": k} | {"even_polynomial": [c2, c4, ...]},
     "rho": number, "grid": {"n_points": int}}
    """
    if not isinstance(doc, dict):
        raise MalformedInput("A problem document must be a JSON object")
    unknown = set(doc) - {"support", "g", "rho", "grid"}
    if unknown:
        raise MalformedInput(f"Unknown problem fields: {sorted(unknown)}")
    try:
        fields = {
            "support": _support_from_document(doc["support"]),
            "g": _quality_fn_from_document(doc["g"]),
        }
        if "rho" in doc:
            fields["rho"] = doc["rho"]
        if "grid" in doc:
            fields["grid"] = doc["grid"]
        return DesignProblem.model_validate(fields)
    except KeyError as e:
        raise MalformedInput(f"Problem document is missing {e}") from e
    except (TypeError, ValueError) as e:
        if isinstance(e, MalformedInput):
            raise
        detail = e.errors()[0]["msg"] if isinstance(e, ValidationError) else str(e)
        raise MalformedInput(f"Malformed problem document: {detail}") from e


def quality_fn_to_document(g) -> Any:
    if isinstance(g, EvenPower):
        return {"even_power": g.k}
    if isinstance(g, EvenPolynomial):
        return {"even_polynomial": list(g.coeffs)}
    return g.kind


def problem_to_document(problem: DesignProblem | ValidatedProblem) -> dict[str, Any]:
    if isinstance(problem, ValidatedProblem):
        problem = problem.problem

    support = problem.support
    if isinstance(support, Bounded):
        support_doc = {"bounded": [support.lo, support.hi]}
    elif isinstance(support.truncation, Fixed):
        support_doc = {"real_line": {"fixed": support.truncation.half_width}}
    else:
        support_doc = {"real_line": {"auto": support.truncation.boundary_mass_tol}}

    return {
        "support": support_doc,
        "g": quality_fn_to_document(problem.g),
        "rho": problem.rho,
        "grid": {"n_points": problem.grid.n_points},
    }
