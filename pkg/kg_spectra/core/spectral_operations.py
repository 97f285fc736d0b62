"""Finite-difference discretization and windowed tridiagonal eigensolves.

The operator -d^2/dx^2 + V is discretized with the 3-point stencil on the
interior nodes of a :class:`Grid1D`; the two end nodes carry psi = 0.
Eigenvalues in a window are isolated by Sturm bisection and eigenvectors
found by inverse iteration (LAPACK stebz/stein through SciPy). Large windows
are split into chunks by eigenvalue count and solved independently.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal, solve_banded

from kg_spectra.config import SETTINGS
from kg_spectra.core.potential_operations import evaluate
from kg_spectra.data_models import (
    LocalizationRecord,
    LocalizationTag,
    OperatorMatrix,
    ScanEntry,
    SpectralResult,
)
from kg_spectra.errors import ConvergenceError, DomainError, MismatchedGridError
from kg_spectra.models.grid_models import Grid1D
from kg_spectra.models.potential_models import PotentialSpec

logger = logging.getLogger(__name__)

RESIDUAL_FACTOR = 1e-8
DEGENERACY_GAP = 1e-10
OVERLAP_TOLERANCE = 1e-6
INVERSE_ITERATIONS = 4


@dataclass(frozen=True, eq=False)
class _ChunkResult:
    values: np.ndarray
    vectors: Optional[np.ndarray]
    records: tuple[LocalizationRecord, ...]
    residuals: np.ndarray


# ==============================================================================
# DISCRETIZATION
# ==============================================================================


def discretize(spec: PotentialSpec, grid: Grid1D, energy: Optional[float] = None) -> OperatorMatrix:
    """Build the symmetric tridiagonal matrix of -d^2/dx^2 + V on the interior nodes.

    Raises:
        DomainError: If a radial spec meets a line grid or vice versa.
        MissingContextError: Energy-dependent potential without ``energy``.
    """
    if spec.is_radial != grid.radial:
        raise DomainError(
            f"Potential domain ({'radial' if spec.is_radial else 'line'}) does not match the "
            f"grid ({'radial' if grid.radial else 'line'})"
        )
    h = grid.spacing
    nodes = grid.interior
    potential = np.asarray(evaluate(spec, nodes, energy), dtype=float)
    diagonal = 2.0 / h**2 + potential
    off_diagonal = np.full(nodes.size - 1, -1.0 / h**2)
    logger.debug(
        "Discretized %s on %d interior nodes (h=%g)", spec.kind.value, nodes.size, h
    )
    return OperatorMatrix(diagonal=diagonal, off_diagonal=off_diagonal, grid=grid, energy=energy)


def sturm_count(matrix: OperatorMatrix, mu: float) -> int:
    """Number of eigenvalues strictly below ``mu`` from the LDL^T pivot signs."""
    diagonal = matrix.diagonal.tolist()
    squares = (matrix.off_diagonal**2).tolist()
    pivmin = np.finfo(float).tiny * max(1.0, max(squares, default=1.0))
    count = 0
    pivot = diagonal[0] - mu
    for i in range(len(diagonal)):
        if i:
            pivot = (diagonal[i] - mu) - squares[i - 1] / pivot
        if abs(pivot) < pivmin:
            pivot = -pivmin
        if pivot < 0:
            count += 1
    return count


# ==============================================================================
# LOCALIZATION DIAGNOSTICS
# ==============================================================================


def _localization(
    psi: np.ndarray,
    nodes: np.ndarray,
    h: float,
    inner: tuple[float, float],
    footprint: Optional[tuple[float, float]],
) -> LocalizationRecord:
    density = psi * psi * h
    total = float(density.sum())
    inside = (nodes >= inner[0]) & (nodes <= inner[1])
    fraction = min(max(float(density[inside].sum()) / total, 0.0), 1.0)
    participation = total * total / float((density * density).sum() / h)
    footprint_fraction = None
    if footprint is not None:
        covered = (nodes >= footprint[0]) & (nodes <= footprint[1])
        footprint_fraction = min(max(float(density[covered].sum()) / total, 0.0), 1.0)
    return LocalizationRecord(
        mass_fraction_inner=fraction,
        participation_length=participation,
        footprint_fraction=footprint_fraction,
    )


# ==============================================================================
# EIGENSOLVER
# ==============================================================================


def _inverse_iteration(
    matrix: OperatorMatrix, shift: float, previous: list[np.ndarray], rng: np.random.Generator
) -> np.ndarray:
    n = matrix.size
    bands = np.zeros((3, n))
    bands[0, 1:] = matrix.off_diagonal
    bands[1] = matrix.diagonal - shift
    bands[2, :-1] = matrix.off_diagonal
    nudge = np.finfo(float).eps * matrix.inf_norm
    vector = rng.standard_normal(n)
    for _ in range(INVERSE_ITERATIONS):
        for basis in previous:
            vector -= (basis @ vector) * basis
        try:
            vector = solve_banded((1, 1), bands, vector)
        except LinAlgError:
            bands[1] -= nudge
            vector = solve_banded((1, 1), bands, vector)
        vector /= np.linalg.norm(vector)
    for basis in previous:
        vector -= (basis @ vector) * basis
    return vector / np.linalg.norm(vector)


def _refine_degenerate(
    matrix: OperatorMatrix, values: np.ndarray, vectors: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """Re-orthogonalize clusters of nearly equal eigenvalues by random-restart inverse iteration."""
    gap = DEGENERACY_GAP * matrix.inf_norm
    start = 0
    while start < values.size:
        stop = start
        while stop + 1 < values.size and values[stop + 1] - values[stop] < gap:
            stop += 1
        if stop > start:
            block = vectors[:, start : stop + 1]
            overlap = np.abs(block.T @ block - np.eye(block.shape[1])).max()
            if overlap > OVERLAP_TOLERANCE:
                logger.debug(
                    "Refining %d near-degenerate eigenpairs at %.12g", stop - start + 1, values[start]
                )
                found: list[np.ndarray] = []
                for index in range(start, stop + 1):
                    found.append(_inverse_iteration(matrix, values[index], found, rng))
                vectors[:, start : stop + 1] = np.column_stack(found)
        start = stop + 1
    return vectors


def _solve_chunk(
    matrix: OperatorMatrix,
    low: float,
    high: float,
    keep_vectors: bool,
    footprint: Optional[tuple[float, float]],
    seed: int,
) -> _ChunkResult:
    try:
        values, vectors = eigh_tridiagonal(
            matrix.diagonal,
            matrix.off_diagonal,
            select="v",
            select_range=(low, high),
            lapack_driver="stebz",
        )
    except LinAlgError as exc:
        raise ConvergenceError(
            f"Inverse iteration failed for eigenvalues in ({low:.12g}, {high:.12g}]: {exc}"
        ) from exc

    if values.size > 1:
        vectors = _refine_degenerate(matrix, values, vectors, np.random.default_rng(seed))

    residuals = np.linalg.norm(matrix.matvec(vectors) - vectors * values[None, :], axis=0)
    bound = RESIDUAL_FACTOR * matrix.inf_norm
    failed = np.flatnonzero(residuals > bound)
    if failed.size:
        raise ConvergenceError(
            "Eigenpair residual above %.3g for eigenvalues %s"
            % (bound, ", ".join(f"{values[i]:.12g}" for i in failed))
        )

    grid = matrix.grid
    h = grid.spacing
    psi = vectors / math.sqrt(h)
    nodes = grid.interior
    inner = grid.inner_bounds()
    records = tuple(
        _localization(psi[:, i], nodes, h, inner, footprint) for i in range(values.size)
    )
    return _ChunkResult(
        values=values,
        vectors=psi if keep_vectors else None,
        records=records,
        residuals=residuals,
    )


def _chunk_bounds(
    values: np.ndarray, chunk_size: int, window: tuple[float, float]
) -> list[tuple[float, float]]:
    """Half-open windows (lo, hi] holding at most ``chunk_size`` eigenvalues each."""
    bounds = []
    low = window[0]
    for start in range(0, values.size, chunk_size):
        stop = min(start + chunk_size, values.size)
        high = window[1] if stop == values.size else 0.5 * (values[stop - 1] + values[stop])
        bounds.append((low, high))
        low = high
    return bounds


def solve_eigenvalues(
    matrix: OperatorMatrix, window: Optional[tuple[float, float]] = None
) -> np.ndarray:
    """Ascending eigenvalues in the half-open ``window`` (lo, hi], no eigenvectors.

    Raises:
        ConvergenceError: If the Sturm bisection fails.
    """
    try:
        if window is None:
            values = eigh_tridiagonal(matrix.diagonal, matrix.off_diagonal, eigvals_only=True)
        else:
            values = eigh_tridiagonal(
                matrix.diagonal,
                matrix.off_diagonal,
                eigvals_only=True,
                select="v",
                select_range=window,
            )
    except LinAlgError as exc:
        raise ConvergenceError(f"Eigenvalue isolation failed: {exc}") from exc
    return np.sort(values)


def solve_eigen(
    matrix: OperatorMatrix,
    window: Optional[tuple[float, float]] = None,
    keep_vectors: bool = True,
    footprint: Optional[tuple[float, float]] = None,
    workers: Optional[int] = None,
    chunk_size: Optional[int] = None,
    seed: Optional[int] = None,
) -> SpectralResult:
    """Eigenpairs of ``matrix`` with eigenvalues in the half-open ``window`` (lo, hi].

    Args:
        matrix: Discretized operator.
        window: Eigenvalue window; all eigenvalues when omitted.
        keep_vectors: Keep the normalized eigenvectors in the result. Without
            them only the localization diagnostics survive.
        footprint: Interval whose mass fraction is recorded per eigenpair.
        workers: Threads solving chunks concurrently.
        chunk_size: Maximum eigenpairs per chunk.
        seed: Seed of the random restarts for near-degenerate clusters.

    Returns:
        Ascending eigenvalues, eigenvectors normalized to sum(psi^2) h = 1,
        localization records and residual norms.

    Raises:
        ConvergenceError: If LAPACK fails or a residual exceeds 1e-8 * ||A||_inf.
    """
    solver = SETTINGS.solver
    workers = workers or solver.workers
    chunk_size = chunk_size or solver.chunk_size
    seed = solver.seed if seed is None else seed

    values = solve_eigenvalues(matrix, window)
    if values.size == 0:
        logger.info("No eigenvalues in window %s", window)
        return SpectralResult(
            eigenvalues=values,
            eigenvectors=np.zeros((matrix.size, 0)) if keep_vectors else None,
            localization=(),
            grid=matrix.grid,
            residuals=np.zeros(0),
        )

    span = window if window is not None else (values[0] - 1.0, values[-1] + 1.0)
    bounds = _chunk_bounds(values, chunk_size, span)
    logger.debug("Solving %d eigenpairs in %d chunk(s)", values.size, len(bounds))

    def run(indexed: tuple[int, tuple[float, float]]) -> _ChunkResult:
        index, (low, high) = indexed
        return _solve_chunk(matrix, low, high, keep_vectors, footprint, seed + index)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        chunks = list(pool.map(run, enumerate(bounds)))

    merged_values = np.concatenate([chunk.values for chunk in chunks])
    order = np.argsort(merged_values, kind="stable")
    records = [record for chunk in chunks for record in chunk.records]
    residuals = np.concatenate([chunk.residuals for chunk in chunks])
    vectors = None
    if keep_vectors:
        vectors = np.concatenate([chunk.vectors for chunk in chunks], axis=1)[:, order]

    logger.info(
        "Solved %d eigenpairs in %s on %d nodes", merged_values.size, window, matrix.size
    )
    return SpectralResult(
        eigenvalues=merged_values[order],
        eigenvectors=vectors,
        localization=tuple(records[i] for i in order),
        grid=matrix.grid,
        residuals=residuals[order],
    )


# ==============================================================================
# LOCALIZATION CLASSIFIER
# ==============================================================================


def _match_tags(
    result: SpectralResult,
    comparison: SpectralResult,
    mass_fraction: Optional[float],
    eigenvalue_match: Optional[float],
) -> list[tuple[LocalizationTag, Optional[float]]]:
    thresholds = SETTINGS.localization
    mass_fraction = thresholds.mass_fraction if mass_fraction is None else mass_fraction
    eigenvalue_match = thresholds.eigenvalue_match if eigenvalue_match is None else eigenvalue_match

    if not math.isclose(result.grid.spacing, comparison.grid.spacing, rel_tol=1e-9):
        raise MismatchedGridError(
            f"Comparison grid spacing {comparison.grid.spacing} differs from {result.grid.spacing}"
        )
    if not math.isclose(comparison.grid.length, 2.0 * result.grid.length, rel_tol=1e-9):
        raise MismatchedGridError(
            f"Comparison domain length {comparison.grid.length} is not twice {result.grid.length}"
        )
    if any(record.footprint_fraction is None for record in comparison.localization):
        raise ValueError("Comparison result lacks footprint fractions; solve it with footprint=...")

    footprints = np.array([record.footprint_fraction for record in comparison.localization])
    tags = []
    for value, record in zip(result.eigenvalues, result.localization):
        if record.mass_fraction_inner < mass_fraction:
            tags.append((LocalizationTag.SCATTERING, None))
            continue
        distance = np.abs(comparison.eigenvalues - value)
        close = np.flatnonzero(
            (distance <= eigenvalue_match * (1.0 + abs(value))) & (footprints >= mass_fraction)
        )
        if close.size:
            best = close[np.argmin(distance[close])]
            tags.append((LocalizationTag.LOCALIZED, float(comparison.eigenvalues[best])))
        else:
            tags.append((LocalizationTag.SCATTERING, None))
    return tags


def classify_localization(
    result: SpectralResult,
    comparison: SpectralResult,
    mass_fraction: Optional[float] = None,
    eigenvalue_match: Optional[float] = None,
) -> list[LocalizationTag]:
    """Tag each eigenpair Localized or Scattering.

    Localized requires an inner-half mass fraction of at least ``mass_fraction``
    and a comparison eigenvalue within ``eigenvalue_match * (1 + |E~|)`` whose
    mass inside the original domain is also at least ``mass_fraction``.

    Raises:
        MismatchedGridError: If the comparison grid does not double the domain at equal h.
    """
    return [tag for tag, _ in _match_tags(result, comparison, mass_fraction, eigenvalue_match)]


def embedded_eigenvalue_scan(
    spec: PotentialSpec,
    grid: Grid1D,
    window: tuple[float, float],
    energy: Optional[float] = None,
    keep_vectors: bool = False,
    workers: Optional[int] = None,
    seed: Optional[int] = None,
    mass_fraction: Optional[float] = None,
    eigenvalue_match: Optional[float] = None,
) -> list[ScanEntry]:
    """Solve on ``grid`` and on the doubled domain, then classify every eigenpair.

    ``energy`` freezes the spectral parameter of energy-dependent potentials.
    With ``keep_vectors`` the Localized entries carry their eigenvectors.
    """
    match = SETTINGS.localization.eigenvalue_match if eigenvalue_match is None else eigenvalue_match
    matrix = discretize(spec, grid, energy)
    result = solve_eigen(matrix, window, keep_vectors=keep_vectors, workers=workers, seed=seed)

    widen = match * (1.0 + max(abs(window[0]), abs(window[1])))
    doubled = grid.doubled()
    comparison = solve_eigen(
        discretize(spec, doubled, energy),
        (window[0] - widen, window[1] + widen),
        keep_vectors=False,
        footprint=(grid.x_min, grid.x_max),
        workers=workers,
        seed=seed,
    )
    tags = _match_tags(result, comparison, mass_fraction, match)

    entries = []
    for index, ((tag, matched), value, record) in enumerate(
        zip(tags, result.eigenvalues, result.localization)
    ):
        vector = None
        if keep_vectors and tag is LocalizationTag.LOCALIZED:
            vector = result.eigenvectors[:, index].copy()
        entries.append(
            ScanEntry(
                eigenvalue=float(value),
                tag=tag,
                localization=record,
                matched_eigenvalue=matched,
                energy=energy,
                eigenvector=vector,
            )
        )
    localized = sum(1 for entry in entries if entry.is_localized)
    logger.info(
        "Scan of %s over %s: %d eigenpairs, %d localized", spec.kind.value, window, len(entries), localized
    )
    return entries
