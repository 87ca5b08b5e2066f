from contextlib import contextmanager
from pathlib import Path
import sys
from typing import Optional

from loguru import logger
import pandas as pd
import typer

from fisher_noise.config import (
    DEFAULT_SAMPLE_COUNT,
    DEFAULT_TRIALS,
    REPORTS_DIR,
    default_seed,
    grid_points_override,
)
from fisher_noise.data_utils.io_utils import dump_json, load_json, write_csv, write_json
from fisher_noise.density import density_to_frame
from fisher_noise.designer import design, frontier, frontier_to_frame
from fisher_noise.errors import ComputationError, MalformedInput, ProblemError
from fisher_noise.mechanism import AffineScalar, IdentityScalar, monte_carlo_attack, sample
from fisher_noise.problem import DesignProblem, GridConfig, problem_from_document
from fisher_noise.verify import report_lines, run_checks

app = typer.Typer(help="Design minimum-Fisher-information privacy noise.",
                  no_args_is_help=True)

EXIT_COMPUTATION = 1
EXIT_USAGE = 2


def _fail(doc: dict, code: int):
    sys.stderr.write(dump_json(doc).decode())
    raise typer.Exit(code)


@contextmanager
def _exit_codes():
    """Usage/input errors exit 2, computational failures exit 1"""
    try:
        yield
    except ProblemError as e:
        _fail(e.to_document(), EXIT_USAGE)
    except FileNotFoundError as e:
        _fail({"error": "file_not_found", "detail": str(e)}, EXIT_USAGE)
    except ValueError as e:
        _fail({"error": MalformedInput.code, "detail": str(e)}, EXIT_USAGE)
    except ComputationError as e:
        _fail(e.to_document(), EXIT_COMPUTATION)


def load_problem(path: Path) -> DesignProblem:
    """Problem document at path, grid size forced by FISHER_NOISE_GRID_N if set"""
    problem = problem_from_document(load_json(path))
    n_points = grid_points_override()
    if n_points is not None:
        logger.info(f"Grid size overridden to {n_points} by FISHER_NOISE_GRID_N")
        problem = problem.model_copy(update={"grid": GridConfig(n_points=n_points)})
    return problem


def density_csv_path(out: Path) -> Path:
    """Sibling of the design document holding the w,p,cdf table"""
    return out.with_name(f"{out.stem}.density.csv")


def parse_rhos(text: str) -> list[float]:
    try:
        return [float(item) for item in text.split(",")]
    except ValueError as e:
        raise MalformedInput(f"--rhos must be comma-separated numbers, got {text!r}") from e


@app.command("design")
def run_design(
    problem: Path = typer.Option(..., help="DesignProblem JSON document."),
    out: Path = REPORTS_DIR / "design.json",
):
    """Write the optimal density (JSON, plus a w,p,cdf <stem>.density.csv next to it)."""
    with _exit_codes():
        result = design(load_problem(problem))
        frame_path = density_csv_path(out)
        write_csv(frame_path, density_to_frame(result.density))
        try:
            write_json(out, result.to_document())
        except BaseException:
            frame_path.unlink(missing_ok=True)
            raise

    typer.echo(f"fisher={result.fisher:.12g} quality={result.quality:.12g} "
               f"product={result.product:.12g}")
    logger.success(f"Design written to {out}")


@app.command("frontier")
def run_frontier(
    problem: Path = typer.Option(..., help="DesignProblem JSON document (rho is ignored)."),
    rhos: str = typer.Option(..., help="Strictly increasing budgets, e.g. 0.5,1,2."),
    out: Path = REPORTS_DIR / "frontier.csv",
    workers: int = typer.Option(1, min=1, help="Budgets designed concurrently."),
):
    """Sweep the privacy-utility frontier into a rho,fisher,quality,product CSV."""
    with _exit_codes():
        points = frontier(load_problem(problem), parse_rhos(rhos), max_workers=workers)
        write_csv(out, frontier_to_frame(points))
    logger.success(f"Frontier of {len(points)} point(s) written to {out}")


@app.command("sample")
def run_sample(
    problem: Path = typer.Option(..., help="DesignProblem JSON document."),
    count: int = DEFAULT_SAMPLE_COUNT,
    seed: Optional[int] = typer.Option(None, help="Defaults to FISHER_NOISE_SEED or 42."),
    out: Path = REPORTS_DIR / "samples.csv",
):
    """Draw noise samples from the designed density (CSV with one column w)."""
    with _exit_codes():
        seed = default_seed() if seed is None else seed
        result = design(load_problem(problem))
        w = sample(result.density, seed, count)
        write_csv(out, pd.DataFrame({"w": w}))
    logger.success(f"{count} sample(s) written to {out}")


@app.command("attack")
def run_attack(
    problem: Path = typer.Option(..., help="DesignProblem JSON document."),
    x: float = typer.Option(0.0, help="True private value."),
    trials: int = DEFAULT_TRIALS,
    seed: Optional[int] = typer.Option(None, help="Defaults to FISHER_NOISE_SEED or 42."),
    slope: float = typer.Option(1.0, help="Query f(x) = slope * x + intercept."),
    intercept: float = 0.0,
    out: Path = REPORTS_DIR / "attack.json",
):
    """Monte-Carlo MLE attack against the Cramer-Rao floor (JSON report)."""
    with _exit_codes():
        query = (IdentityScalar() if (slope, intercept) == (1.0, 0.0)
                 else AffineScalar(slope=slope, intercept=intercept))
        seed = default_seed() if seed is None else seed
        result = design(load_problem(problem))
        report = monte_carlo_attack(result.density, x, trials, seed, query=query)
        write_json(out, report.model_dump())

    typer.echo(f"mse={report.empirical_mse:.12g} floor={report.cramer_rao_floor:.12g} "
               f"bias={report.empirical_bias:.12g}")
    logger.success(f"Attack report written to {out}")


@app.command("verify")
def run_verify(
    n_points: Optional[int] = typer.Option(None, help="Grid size for every oracle case."),
):
    """Check the designer against closed-form oracles; exit 1 on any FAIL."""
    with _exit_codes():
        n_points = n_points if n_points is not None else grid_points_override()
        outcomes = run_checks(n_points=n_points)

    for line in report_lines(outcomes):
        typer.echo(line)
    failed = sum(not o.passed for o in outcomes)
    if failed:
        logger.error(f"{failed} of {len(outcomes)} oracle check(s) failed")
        raise typer.Exit(EXIT_COMPUTATION)
    logger.success(f"All {len(outcomes)} oracle checks passed")


if __name__ == "__main__":
    app()
