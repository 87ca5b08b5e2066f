"""
------------------------------------------------------------------------------
Author:         Justin Vinh
Parent Package: fisher_noise
Creation Date:  2026.10.02
Last Modified:  2026.10.09

Purpose:
Exception hierarchy. Every error carries a stable machine-readable `code`
(surfaced by the CLI as {"error": code, "detail": text}) and an optional
context dictionary (e.g. the budget rho a frontier point failed at).
------------------------------------------------------------------------------
"""

from typing import Any


class FisherNoiseError(Exception):
    code = "fisher_noise_error"

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context: dict[str, Any] = dict(context)

    def with_context(self, **context: Any) -> "FisherNoiseError":
        """Attach extra context (returns self so it can be re-raised inline)"""
        self.context.update(context)
        return self

    def __str__(self) -> str:
        if not self.context:
            return self.message
        details = ", ".join(f"{k}={v}" for k, v in sorted(self.context.items()))
        return f"{self.message} ({details})"

    def to_document(self) -> dict[str, str]:
        return {"error": self.code, "detail": str(self)}


# Input / usage errors (CLI exit code 2)
# -----------------------------------------------------------------------------
class ProblemError(FisherNoiseError, ValueError):
    code = "invalid_problem"


class MalformedInput(ProblemError):
    code = "malformed_input"


class InvalidSupport(ProblemError):
    code = "invalid_support"


class InvalidQualityFn(ProblemError):
    code = "invalid_quality_fn"


class InvalidBudget(ProblemError):
    code = "invalid_budget"


class GridTooCoarse(ProblemError):
    code = "grid_too_coarse"


class DomainTooSmall(ProblemError):
    code = "domain_too_small"


class GridMismatch(ProblemError):
    code = "grid_mismatch"


class OutOfRange(ProblemError):
    code = "out_of_range"


class IndexOutOfRange(ProblemError):
    code = "index_out_of_range"


class InvalidQuery(ProblemError):
    code = "invalid_query"


class NotApplicable(ProblemError):
    code = "not_applicable"


# Computational failures (CLI exit code 1)
# -----------------------------------------------------------------------------
class ComputationError(FisherNoiseError):
    code = "computation_failed"


class DegenerateDensity(ComputationError):
    code = "degenerate_density"


class NoConvergence(ComputationError):
    code = "no_convergence"


class NonConvergentTruncation(ComputationError):
    code = "non_convergent_truncation"


class BudgetUnreachable(ComputationError):
    code = "budget_unreachable"
