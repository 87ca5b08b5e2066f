import pytest

from fisher_noise.designer import design
from fisher_noise.problem import (
    Bounded,
    DesignProblem,
    Fixed,
    Quadratic,
    RealLine,
    Zero,
    validate,
)


def well_problem(a: float = 1.0, n_points: int = 4000) -> DesignProblem:
    return DesignProblem(support=Bounded(lo=-a, hi=a), g=Zero(),
                         grid={"n_points": n_points})


def gaussian_problem(rho: float = 1.0, half_width: float = 10.0,
                     n_points: int = 4000) -> DesignProblem:
    return DesignProblem(support=RealLine(truncation=Fixed(half_width=half_width)),
                         g=Quadratic(), rho=rho, grid={"n_points": n_points})


@pytest.fixture(scope="session")
def well_result():
    return design(validate(well_problem()))


@pytest.fixture(scope="session")
def gaussian_result():
    return design(validate(gaussian_problem()))


@pytest.fixture(autouse=True)
def _no_grid_override(monkeypatch):
    monkeypatch.delenv("FISHER_NOISE_GRID_N", raising=False)
