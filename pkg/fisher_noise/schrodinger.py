"""
------------------------------------------------------------------------------
Author:         Justin Vinh
Parent Package: fisher_noise
Creation Date:  2026.10.06
Last Modified:  2026.10.16

Purpose:
Discretized time-independent Schrodinger operator [-d^2/dw^2 + V(w)] on the
interior grid nodes. The infinite potential outside the support is realized
as Dirichlet walls (psi = 0 at lo and hi), so the operator is a symmetric
tridiagonal matrix: 2/h^2 + v_i on the diagonal and -1/h^2 off it.
------------------------------------------------------------------------------
"""

from dataclasses import dataclass
import math

from loguru import logger
import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal, solve_banded

from fisher_noise.density import Grid, WaveFunction, _frozen_array
from fisher_noise.errors import GridMismatch, IndexOutOfRange, NoConvergence
from fisher_noise.problem import eval_quality_fn

RESIDUAL_TOL = 1e-10
MAX_REFINEMENT_ITERATIONS = 500


@dataclass(frozen=True, eq=False)
class PotentialGrid:
    grid: Grid
    v: np.ndarray

    def __post_init__(self):
        if np.shape(self.v) != (self.grid.n,) or not np.all(np.isfinite(self.v)):
            raise GridMismatch("Potential needs one finite value per interior node",
                               n=self.grid.n)


@dataclass(frozen=True, eq=False)
class TridiagonalOperator:
    grid: Grid
    diag: np.ndarray
    offdiag: np.ndarray

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = self.diag * x
        y[:-1] += self.offdiag * x[1:]
        y[1:] += self.offdiag * x[:-1]
        return y

    @property
    def norm_inf(self) -> float:
        """Row-sum norm, a Gershgorin bound on the spectrum"""
        rows = np.abs(self.diag).copy()
        rows[:-1] += np.abs(self.offdiag)
        rows[1:] += np.abs(self.offdiag)
        return float(rows.max())


@dataclass(frozen=True, eq=False)
class EigenPair:
    eigenvalue: float
    eigenvector: WaveFunction
    residual_norm: float
    index: int = 1
    iterations: int = 0


def potential_from_quality(grid: Grid, g, beta: float) -> PotentialGrid:
    """v_i = beta * g(w_i) / 4"""
    if g.is_zero() or beta == 0:
        return PotentialGrid(grid, _frozen_array(np.zeros(grid.n)))
    return PotentialGrid(grid, _frozen_array(beta * eval_quality_fn(g, grid.nodes) / 4.0))


def assemble(grid: Grid, potential: PotentialGrid) -> TridiagonalOperator:
    if not grid.matches(potential.grid):
        raise GridMismatch("Potential lives on a different grid",
                           grid=grid.to_document(), potential=potential.grid.to_document())
    inv_h2 = 1.0 / grid.h**2
    diag = 2.0 * inv_h2 + np.asarray(potential.v, dtype=float)
    offdiag = np.full(grid.n - 1, -inv_h2)
    return TridiagonalOperator(grid, _frozen_array(diag), _frozen_array(offdiag))


def _backward_error(op: TridiagonalOperator, energy: float, x: np.ndarray) -> float:
    scale = op.norm_inf * float(np.max(np.abs(x)))
    return float(np.max(np.abs(op.matvec(x) - energy * x))) / scale


def _refine(op: TridiagonalOperator, energy: float, x: np.ndarray, index: int):
    """Shifted inverse iteration until the backward error meets RESIDUAL_TOL"""
    residual = _backward_error(op, energy, x)
    iterations = 0
    while residual > RESIDUAL_TOL:
        if iterations >= MAX_REFINEMENT_ITERATIONS:
            raise NoConvergence("Eigenvector refinement hit the iteration cap",
                                index=index, iterations=iterations,
                                residual=residual, eigenvalue=energy)
        shift = energy - 1e-9 * max(1.0, abs(energy))
        banded = np.zeros((3, op.grid.n))
        banded[0, 1:] = op.offdiag
        banded[1, :] = op.diag - shift
        banded[2, :-1] = op.offdiag
        try:
            x = solve_banded((1, 1), banded, x)
        except (LinAlgError, ValueError) as e:
            raise NoConvergence("Shifted solve failed during refinement",
                                index=index, iterations=iterations) from e
        x = x / np.linalg.norm(x)
        energy = float(np.dot(x, op.matvec(x)))
        residual = _backward_error(op, energy, x)
        iterations += 1

    if iterations:
        logger.warning(f"Eigenpair {index} needed {iterations} refinement step(s)")
    return energy, x, residual, iterations


def _orient(grid: Grid, x: np.ndarray) -> np.ndarray:
    # Value at the node nearest the domain center made >= 0 (left node on a
    # tie); if psi vanishes there, the leftmost significant lobe decides
    distance = np.abs(grid.nodes - 0.5 * (grid.lo + grid.hi))
    nearest = np.flatnonzero(distance <= distance.min() + 1e-9 * grid.h)
    pivot = x[int(nearest[0])]
    floor = 1e-8 * np.max(np.abs(x))
    if abs(pivot) <= floor:
        pivot = x[int(np.argmax(np.abs(x) > floor))]
    return -x if pivot < 0 else x


def nth_state(op: TridiagonalOperator, n: int) -> EigenPair:
    """n-th smallest eigenpair (n = 1 is the ground state)"""
    if not 1 <= n <= op.grid.n:
        raise IndexOutOfRange("State index outside the spectrum", n=n, size=op.grid.n)

    try:
        values, vectors = eigh_tridiagonal(
            op.diag, op.offdiag, select="i", select_range=(n - 1, n - 1)
        )
    except (LinAlgError, ValueError) as e:
        raise NoConvergence("Tridiagonal eigensolver failed", index=n) from e

    energy, x, _, iterations = _refine(op, float(values[0]), vectors[:, 0], n)
    x = _orient(op.grid, x)
    if n == 1:
        # Ground states are nodeless; sign flips in the far tails are round-off
        x = np.abs(x)

    psi = WaveFunction.normalized(op.grid, x)
    return EigenPair(
        eigenvalue=energy,
        eigenvector=psi,
        residual_norm=_backward_error(op, energy, np.asarray(psi.values)),
        index=n,
        iterations=iterations,
    )


def ground_state(op: TridiagonalOperator) -> EigenPair:
    return nth_state(op, 1)


def sign_changes(psi: WaveFunction, rel_tol: float = 1e-8) -> int:
    """Number of sign changes among the non-negligible amplitudes"""
    values = np.asarray(psi.values)
    significant = values[np.abs(values) > rel_tol * np.max(np.abs(values))]
    return int(np.count_nonzero(np.diff(np.sign(significant))))


def analytic_well_energy(half_width: float, n: int = 1) -> float:
    """E_n = n^2 pi^2 / (2a)^2 for -psi'' = E psi on [-a, a]"""
    return (n * math.pi / (2.0 * half_width)) ** 2
