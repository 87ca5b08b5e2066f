import sys
from pathlib import Path

from dotenv import load_dotenv
from environs import Env
from loguru import logger

# Load environment variables from .env file if it exists
load_dotenv()
env = Env()

# Paths
PROJ_ROOT = Path(__file__).resolve().parents[1]

PACKAGE_DIR = Path(__file__).resolve().parent
PROBLEM_GALLERY_DIR = PACKAGE_DIR / "problem_gallery"
ORACLE_GALLERY_DIR = PACKAGE_DIR / "oracle_gallery"

REPORTS_DIR = PROJ_ROOT / "reports"

# Numerical defaults
DEFAULT_GRID_POINTS = 4000
MIN_GRID_POINTS = 64
DEFAULT_TRIALS = 100_000
DEFAULT_SAMPLE_COUNT = 10_000


def default_seed() -> int:
    """Seed used by the CLI when --seed is not given (FISHER_NOISE_SEED, else 42)."""
    return env.int("FISHER_NOISE_SEED", 42)


def grid_points_override() -> int | None:
    """
    Grid size forced through FISHER_NOISE_GRID_N, or None when unset.
    Read on every call so tests and long-lived shells can change it.
    """
    return env.int("FISHER_NOISE_GRID_N", None)


# If tqdm is installed, configure loguru with tqdm.write
# https://github.com/Delgan/loguru/issues/135
# Standard output is reserved for command results, so the sink is stderr.
try:
    from tqdm import tqdm

    logger.remove()
    logger.add(
        lambda msg: tqdm.write(msg, end="", file=sys.stderr),
        colorize=True,
        level=env.str("FISHER_NOISE_LOG_LEVEL", "INFO"),
    )
except ModuleNotFoundError:
    pass

logger.debug(f"PROJ_ROOT path is: {PROJ_ROOT}")
