"""Klein-Gordon layer: energy maps, the electric fixed point, absence regions and audits."""

from __future__ import annotations

import logging
import math
from typing import Callable, Optional, TypeVar

import numpy as np

from kg_spectra.config import SETTINGS
from kg_spectra.constants import THRESHOLD_EXCLUSION, VNW_LIMSUP_XDV
from kg_spectra.core.condition_operations import (
    check_condition_I,
    check_coulomb_parameters,
    check_seminorm_conditions,
    check_simon_conditions,
    coulomb_simon_terms,
)
from kg_spectra.core.potential_operations import asymptotics
from kg_spectra.core.report_operations import build_provenance
from kg_spectra.core.spectral_operations import (
    discretize,
    embedded_eigenvalue_scan,
    solve_eigenvalues,
)
from kg_spectra.data_models import (
    AbsenceRegion,
    AuditReport,
    ConditionReport,
    KGEigenResult,
    ScanEntry,
    Verdict,
)
from kg_spectra.errors import (
    AuditStageError,
    ConvergenceError,
    DomainError,
    NoEigenvalueError,
    UnsupportedInteractionError,
)
from kg_spectra.models.grid_models import Grid1D
from kg_spectra.models.kg_models import Branch, KGParams
from kg_spectra.models.potential_models import PotentialKind, PotentialSpec

logger = logging.getLogger(__name__)

T = TypeVar("T")

NEGATIVE_BRANCH_CAVEAT = (
    "Negative branch: condition I is asserted not to hold here; the energy is reported "
    "without adjudicating whether it is a genuine eigenvalue."
)
SIMON_DECISIVE = ("SimonC", "SimonD", "SimonE")


# ==============================================================================
# ENERGY MAP
# ==============================================================================


def kg_energy_from_schrodinger(value: float, mass: float, branch: Branch) -> float:
    """E = +-sqrt(E~ + m^2).

    Raises:
        DomainError: If E~ < -m^2.
    """
    radicand = value + mass * mass
    if radicand < 0:
        raise DomainError(f"E~ = {value} is below -m^2 = {-mass * mass}; no real KG energy")
    return branch.sign * math.sqrt(radicand)


def map_scan_to_kg(entries: list[ScanEntry], mass: float) -> list[KGEigenResult]:
    """Map every Localized entry to KG energies on both branches."""
    results = []
    for entry in entries:
        if not entry.is_localized:
            continue
        if entry.eigenvalue + mass * mass < 0:
            logger.warning(
                "Localized E~ = %.12g lies below -m^2; no real KG energy", entry.eigenvalue
            )
            continue
        for branch in (Branch.POSITIVE, Branch.NEGATIVE):
            results.append(
                KGEigenResult(
                    energy=kg_energy_from_schrodinger(entry.eigenvalue, mass, branch),
                    branch=branch,
                    schrodinger_value=entry.eigenvalue,
                    mass=mass,
                    caveat=NEGATIVE_BRANCH_CAVEAT if branch is Branch.NEGATIVE else None,
                    localization=entry.localization,
                )
            )
    return results


def scalar_kg_spectrum(
    params: KGParams,
    grid: Grid1D,
    window: tuple[float, float],
    workers: Optional[int] = None,
    seed: Optional[int] = None,
) -> list[KGEigenResult]:
    """KG energies of the localized states of -d^2/dx^2 + q_s in a window of E~.

    Raises:
        UnsupportedInteractionError: If the interaction is not scalar.
    """
    if not params.is_scalar:
        raise UnsupportedInteractionError("scalar_kg_spectrum needs a PureScalar interaction")
    entries = embedded_eigenvalue_scan(params.potential, grid, window, workers=workers, seed=seed)
    return map_scan_to_kg(entries, params.mass)


# ==============================================================================
# ELECTRIC INTERACTION
# ==============================================================================


def _bound_levels(spec: PotentialSpec, grid: Grid1D, energy: float) -> np.ndarray:
    matrix = discretize(spec, grid, energy)
    floor = float(matrix.potential_values.min()) - 1.0
    values = solve_eigenvalues(matrix, (floor, 0.0))
    return values[values < 0.0]


def _require_electric(params: KGParams) -> PotentialSpec:
    if params.is_scalar or params.potential.kind is not PotentialKind.COULOMB_3D:
        raise UnsupportedInteractionError("Expected a PureElectric Coulomb interaction")
    return params.potential


def electric_kg_fixed_point(
    params: KGParams,
    grid: Grid1D,
    branch: Branch = Branch.POSITIVE,
    energy_init: Optional[float] = None,
    ell: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> KGEigenResult:
    """Self-consistent bound state of the energy-dependent radial Coulomb operator.

    Iterates E <- (1 - theta) E + theta * branch * sqrt(E~(E) + m^2), where
    E~(E) is the lowest discrete eigenvalue on the first pass and the one
    nearest the previous E~ afterwards.

    Raises:
        DomainError: If |E_init| >= 10 m.
        NoEigenvalueError: If some iterate has no eigenvalue below 0.
        ConvergenceError: If an iterate drops below -m^2.
    """
    spec = _require_electric(params)
    if ell is not None:
        spec = spec.radial(ell)
    mass = params.mass
    fixed = SETTINGS.fixed_point
    tolerance = fixed.tolerance if tolerance is None else tolerance
    energy = branch.sign * mass if energy_init is None else energy_init
    if abs(energy) >= 10.0 * mass:
        raise DomainError(f"|E_init| = {abs(energy)} must be < 10 m = {10.0 * mass}")

    trace: list[tuple[float, float]] = []
    previous: Optional[float] = None
    converged = False
    for iteration in range(fixed.max_iterations):
        levels = _bound_levels(spec, grid, energy)
        if levels.size == 0:
            raise NoEigenvalueError(
                f"No discrete eigenvalue below 0 at iterate {iteration} (E = {energy:.12g}, "
                f"e = {spec.charge}, l = {spec.ell})"
            )
        value = float(levels[0] if previous is None else levels[np.argmin(np.abs(levels - previous))])
        if value + mass * mass < 0:
            raise ConvergenceError(f"E~ = {value:.12g} fell below -m^2 at iterate {iteration}")
        trace.append((energy, value))
        target = branch.sign * math.sqrt(value + mass * mass)
        following = (1.0 - fixed.damping) * energy + fixed.damping * target
        logger.debug("Fixed point %d: E=%.15g E~=%.15g", iteration, energy, value)
        step = abs(following - energy)
        energy, previous = following, value
        if step < tolerance:
            converged = True
            break

    levels = _bound_levels(spec, grid, energy)
    if levels.size == 0:
        raise NoEigenvalueError(f"No discrete eigenvalue below 0 at the final E = {energy:.12g}")
    final = float(levels[np.argmin(np.abs(levels - previous))])
    residual = abs(energy - branch.sign * math.sqrt(max(final + mass * mass, 0.0)))

    half_grid = Grid1D.from_spacing(0.5 * grid.x_min, grid.x_max, grid.spacing, radial=True)
    half_levels = _bound_levels(spec, half_grid, energy)
    shift = float(np.min(np.abs(half_levels - final))) if half_levels.size else math.inf
    if shift > SETTINGS.localization.eigenvalue_match:
        logger.warning("E~ moved by %.3g when r_min was halved to %g", shift, half_grid.x_min)

    if converged:
        logger.info(
            "Electric fixed point converged after %d iterations: E = %.12g (E~ = %.12g)",
            len(trace),
            energy,
            final,
        )
    else:
        logger.warning(
            "Electric fixed point did not converge in %d iterations (last E = %.12g)",
            fixed.max_iterations,
            energy,
        )
    return KGEigenResult(
        energy=energy,
        branch=branch,
        schrodinger_value=final,
        mass=mass,
        iteration_trace=tuple(trace),
        converged=converged,
        residual=residual,
        diagnostics={
            "ell": spec.ell,
            "r_min": grid.x_min,
            "r_min_half": half_grid.x_min,
            "r_min_shift": shift,
        },
    )


def electric_continuum_scan(
    params: KGParams,
    grid: Grid1D,
    window: tuple[float, float],
    branch: Branch = Branch.POSITIVE,
    slices: Optional[int] = None,
    workers: Optional[int] = None,
    seed: Optional[int] = None,
) -> list[ScanEntry]:
    """Localized scan of the continuum window with the spectral parameter frozen per slice.

    Each slice (lo_i, hi_i] of E~ uses E = branch * sqrt(E~_center + m^2).
    """
    spec = _require_electric(params)
    slices = slices or SETTINGS.radial.energy_slices
    edges = np.linspace(window[0], window[1], slices + 1)
    mass = params.mass
    entries: list[ScanEntry] = []
    for low, high in zip(edges[:-1], edges[1:]):
        center = 0.5 * (low + high)
        energy = branch.sign * math.sqrt(max(center + mass * mass, 0.0))
        entries.extend(
            embedded_eigenvalue_scan(
                spec, grid, (float(low), float(high)), energy=energy, workers=workers, seed=seed
            )
        )
    return entries


def continuum_kg_energies(
    entries: list[ScanEntry], mass: float, branch: Branch
) -> list[KGEigenResult]:
    """KG energies on one branch of the Localized entries of a continuum scan."""
    return [
        KGEigenResult(
            energy=kg_energy_from_schrodinger(entry.eigenvalue, mass, branch),
            branch=branch,
            schrodinger_value=entry.eigenvalue,
            mass=mass,
            localization=entry.localization,
            diagnostics={"frozen_energy": entry.energy},
        )
        for entry in entries
        if entry.is_localized and entry.eigenvalue + mass * mass >= 0
    ]


# ==============================================================================
# ABSENCE REGION
# ==============================================================================


def absence_region(
    params: KGParams,
    grid: Optional[Grid1D] = None,
    r0: Optional[float] = None,
    far_field_tolerance: Optional[float] = None,
) -> AbsenceRegion:
    """Essential spectrum and the rays known to carry no eigenvalue.

    Scalar vNW: nothing above sqrt(16 + m^2) in |E|, cross-checked against the
    numeric limsup of x V'(x). Compactly supported scalars have limsup 0.
    Coulomb: [m, inf) for e < 0, (-inf, -m] for e > 0 and both for e = 0;
    with a radial ``grid`` the Simon conditions are checked at E = +-2m.

    Raises:
        UnsupportedInteractionError: For potentials without a known region.
    """
    mass = params.mass
    spec = params.potential

    if params.is_scalar:
        if spec.is_vnw:
            info = asymptotics(spec)
            bound = math.sqrt(VNW_LIMSUP_XDV + mass * mass)
            return AbsenceRegion(
                mass=mass,
                theorem_basis="Theorem2Bound",
                forbidden_rays=((-math.inf, -bound), (bound, math.inf)),
                forbidden_above=bound,
                verdict=Verdict.HOLDS if info.consistent else Verdict.INCONCLUSIVE,
                numeric_limsup_xdV=info.numeric_limsup_xdV,
            )
        if spec.kind in (PotentialKind.ZERO, PotentialKind.SQUARE_WELL):
            return AbsenceRegion(
                mass=mass,
                theorem_basis="Theorem2Bound",
                forbidden_rays=((-math.inf, -mass), (mass, math.inf)),
                forbidden_above=mass,
                numeric_limsup_xdV=0.0,
            )
        raise UnsupportedInteractionError(
            f"No absence region is known for scalar potential '{spec.kind.value}'"
        )

    spec = _require_electric(params)
    charge = spec.charge
    if charge == 0:
        return AbsenceRegion(
            mass=mass,
            theorem_basis="Theorem3",
            forbidden_rays=((-math.inf, -mass), (mass, math.inf)),
        )

    rays = ((mass, math.inf),) if charge < 0 else ((-math.inf, -mass),)
    supporting: tuple[ConditionReport, ...] = ()
    verdict = Verdict.HOLDS
    if grid is not None:
        simon_energy = 2.0 * mass if charge < 0 else -2.0 * mass
        v1, v2, dv2 = coulomb_simon_terms(charge, simon_energy)
        supporting = tuple(
            check_simon_conditions(
                v1,
                v2,
                r0 or SETTINGS.radial.r0,
                grid,
                simon_energy,
                dv2,
                far_field_tolerance=far_field_tolerance,
                parameters={"e": charge, "ell": spec.ell},
            )
        )
        decisive = [report for report in supporting if report.condition_id in SIMON_DECISIVE]
        if any(report.verdict is not Verdict.HOLDS for report in decisive):
            verdict = Verdict.INCONCLUSIVE
    return AbsenceRegion(
        mass=mass,
        theorem_basis="Theorem4",
        forbidden_rays=rays,
        verdict=verdict,
        supporting=supporting,
    )


# ==============================================================================
# THEOREM AUDIT
# ==============================================================================


def _stage(name: str, func: Callable[..., T], *args, **kwargs) -> T:
    try:
        return func(*args, **kwargs)
    except AuditStageError:
        raise
    except Exception as exc:
        raise AuditStageError(name, str(exc)) from exc


def _violations(results: list[KGEigenResult], region: AbsenceRegion) -> list[dict]:
    found = []
    for result in results:
        if region.forbids(result.energy):
            found.append(
                {
                    "energy": result.energy,
                    "schrodinger_value": result.schrodinger_value,
                    "reason": f"inside a forbidden ray ({region.theorem_basis})",
                }
            )
        if abs(abs(result.energy) - region.mass) < THRESHOLD_EXCLUSION:
            found.append(
                {
                    "energy": result.energy,
                    "schrodinger_value": result.schrodinger_value,
                    "reason": "at the threshold +-m",
                }
            )
    return found


def theorem_audit(
    params: KGParams,
    grid: Grid1D,
    window: tuple[float, float],
    workers: Optional[int] = None,
    seed: Optional[int] = None,
    r0: Optional[float] = None,
) -> AuditReport:
    """Run conditions, spectrum and absence stages and cross-check them.

    Every localized KG energy is compared with the absence region and the
    thresholds +-m; hits are reported as violations.

    Raises:
        AuditStageError: Wrapping any failure, tagged with its stage.
    """
    mass = params.mass
    spec = params.potential
    r0 = r0 or SETTINGS.radial.r0
    bound_states: list[KGEigenResult] = []
    scan: list[ScanEntry] = []

    if params.is_scalar:
        conditions = [_stage("condition_I", check_condition_I, spec, mass, workers=workers or 1)]
        conditions += _stage("seminorms", check_seminorm_conditions, spec)
        scan = _stage(
            "spectrum", embedded_eigenvalue_scan, spec, grid, window, workers=workers, seed=seed
        )
        spectrum = map_scan_to_kg(scan, mass)
        region = _stage("absence", absence_region, params)
    else:
        charge = _stage("parameters", _require_electric, params).charge
        conditions = _stage("parameters", check_coulomb_parameters, charge, params.dimension)
        region = _stage("absence", absence_region, params, grid, r0)
        conditions += list(region.supporting)
        if charge != 0:
            attractive = Branch.POSITIVE if charge < 0 else Branch.NEGATIVE
            try:
                bound_states.append(
                    _stage("bound_state", electric_kg_fixed_point, params, grid, attractive)
                )
            except AuditStageError as exc:
                if not isinstance(exc.__cause__, NoEigenvalueError):
                    raise
                logger.info("No bound state on the %s branch: %s", attractive.value, exc)
        forbidden = Branch.NEGATIVE if charge > 0 else Branch.POSITIVE
        scan = _stage(
            "spectrum",
            electric_continuum_scan,
            params,
            grid,
            window,
            forbidden,
            workers=workers,
            seed=seed,
        )
        spectrum = continuum_kg_energies(scan, mass, forbidden)

    violations = _violations(spectrum + bound_states, region)
    if violations:
        logger.error("Audit found %d inconsistency(ies): %s", len(violations), violations)
    provenance = build_provenance(
        grid,
        spec.kind.value,
        formula="printed" if spec.kind is PotentialKind.VNW_PRINTED else "derived",
        seed=seed,
        window=list(window),
        r0=r0 if not params.is_scalar else None,
    )
    return AuditReport(
        params={**params.as_payload(), "window": list(window)},
        conditions=tuple(conditions),
        spectrum=tuple(spectrum),
        absence=region,
        violations=tuple(violations),
        provenance=provenance,
        bound_states=tuple(bound_states),
        scan=tuple(scan),
    )
