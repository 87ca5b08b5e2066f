"""
------------------------------------------------------------------------------
Author:         Justin Vinh
Parent Package: fisher_noise
Creation Date:  2026.10.12
Last Modified:  2026.10.16

Purpose:
Runs the oracle catalog (oracle_gallery/config_oracles.yaml): designs each
case, compares the observed quantities with their closed forms and reports
one PASS/FAIL line per check.
------------------------------------------------------------------------------
"""

from pathlib import Path
from typing import Literal

from loguru import logger
from pydantic import BaseModel, ConfigDict, ValidationError
import yaml

from fisher_noise.config import ORACLE_GALLERY_DIR
from fisher_noise.designer import DesignResult, check_density_principle, design
from fisher_noise.errors import FisherNoiseError, MalformedInput
from fisher_noise.problem import GridConfig, problem_from_document

ORACLE_CATALOG = ORACLE_GALLERY_DIR / "config_oracles.yaml"

Quantity = Literal["fisher", "quality", "energy", "product", "beta", "mu"]


class OracleCheck(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    quantity: Quantity
    expected: float
    expected_label: str | None = None
    tol: str
    relative: bool = False
    note: str | None = None


class OracleCase(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    label: str
    problem: dict
    checks: list[OracleCheck]


class CheckOutcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: str
    check: OracleCheck
    observed: float | None
    passed: bool
    error: str | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        if self.error is not None:
            return f"{status} {self.label} {self.check.quantity} error {self.error}"
        expected = self.check.expected_label or repr(self.check.expected)
        tol = f"{self.check.tol} rel" if self.check.relative else self.check.tol
        return (f"{status} {self.label} {self.check.quantity} {self.observed:.9f} "
                f"expected {expected} tol {tol}")


def load_catalog(path: Path = ORACLE_CATALOG) -> dict[str, OracleCase]:
    with open(path, "r", encoding="utf-8") as f:
        raw = yaml.safe_load(f)
    try:
        return {name: OracleCase.model_validate(case) for name, case in raw.items()}
    except (AttributeError, ValidationError) as e:
        raise MalformedInput(f"Malformed oracle catalog {path}: {e}") from e


def observe(result: DesignResult, quantity: str) -> float:
    if quantity == "energy":
        return -0.25 * result.mu
    if quantity == "product":
        return check_density_principle(result.density).product
    return float(getattr(result, quantity))


def within(observed: float, check: OracleCheck) -> bool:
    tol = float(check.tol)
    scale = abs(check.expected) if check.relative else 1.0
    return abs(observed - check.expected) <= tol * scale


def run_checks(n_points: int | None = None,
               catalog: dict[str, OracleCase] | None = None) -> list[CheckOutcome]:
    """Design every case (optionally on a forced grid size) and grade its checks"""
    catalog = catalog if catalog is not None else load_catalog()
    outcomes = []
    for name, case in catalog.items():
        problem = problem_from_document(case.problem)
        if n_points is not None:
            problem = problem.model_copy(update={"grid": GridConfig(n_points=n_points)})

        try:
            result = design(problem)
        except FisherNoiseError as e:
            logger.warning(f"Oracle case {name} failed: {e}")
            outcomes.extend(
                CheckOutcome(label=case.label, check=c, observed=None, passed=False,
                             error=e.code)
                for c in case.checks
            )
            continue

        for check in case.checks:
            observed = observe(result, check.quantity)
            outcomes.append(CheckOutcome(label=case.label, check=check, observed=observed,
                                         passed=within(observed, check)))
    return outcomes


def report_lines(outcomes: list[CheckOutcome]) -> list[str]:
    lines = []
    for outcome in outcomes:
        lines.append(outcome.line())
        if outcome.check.note and outcome.observed is not None:
            lines.append(f"NOTE {outcome.label} {outcome.check.quantity}: {outcome.check.note}")
    return lines
