"""Numeric checks of the operator hypotheses.

Suprema over the line are taken on a fixed scan grid (configurable window and
spacing, with the potential's breakpoints merged in). Every supremum carries a
tail bound for the part of the line outside the window, computed from
:func:`tail_envelope`.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional, Sequence

import numpy as np

from kg_spectra.config import SETTINGS
from kg_spectra.core.potential_operations import (
    apply_transform,
    evaluate,
    tail_envelope,
    transform_bound,
)
from kg_spectra.core.quadrature import integrate, integrate_intervals
from kg_spectra.data_models import ConditionReport, SeminormValue, SLambdaValue, Verdict
from kg_spectra.errors import DomainError, InsufficientDomainError, UnsupportedDimensionError
from kg_spectra.models.grid_models import Grid1D
from kg_spectra.models.kg_models import SeminormQuery
from kg_spectra.models.potential_models import PotentialKind, PotentialSpec

logger = logging.getLogger(__name__)

RadialFunction = Callable[[np.ndarray], np.ndarray]

# Relative slack for pointwise inequality checks
POINTWISE_SLACK = 1e-12
# Relative growth of the inner L2 mass under r_min -> r_min / 2 still read as converged
INNER_GROWTH_TOLERANCE = 1e-3


# ==============================================================================
# HELPER FUNCTIONS
# ==============================================================================


def _scan_grid(
    window: tuple[float, float], spacing: float, extra: Sequence[float] = ()
) -> np.ndarray:
    lo, hi = window
    count = max(int(round((hi - lo) / spacing)), 1)
    nodes = np.linspace(lo, hi, count + 1)
    inside = [p for p in extra if lo < p < hi]
    return np.unique(np.concatenate([nodes, inside])) if inside else nodes


def _outer_radius(window: tuple[float, float]) -> float:
    return min(abs(window[0]), abs(window[1]))


def _require_line(spec: PotentialSpec, dimension: int) -> None:
    if dimension != 1:
        raise UnsupportedDimensionError(
            f"Seminorm quadrature is computed for n = 1 only, got n = {dimension}"
        )
    if spec.is_radial or spec.kind is PotentialKind.COULOMB_3D:
        raise UnsupportedDimensionError(
            f"'{spec.kind.value}' lives on the radial half-line and cannot be restricted to n = 1"
        )


def _omega_mass(alpha: float, delta: float, n: int = 1) -> float:
    """Integral of |omega_alpha| over |u| < delta on the line."""
    if alpha > n:
        return 2.0 * delta
    if alpha < n:
        return 2.0 * delta**alpha / alpha
    if delta <= math.e:
        return 2.0 * delta * (2.0 - math.log(delta))
    return 2.0 * (2.0 * math.e + delta * math.log(delta) - 2.0 * delta)


# ==============================================================================
# KERNELS AND WEIGHTS
# ==============================================================================


def omega_weight(distance, alpha: float, n: int = 1):
    """Weight omega_alpha(|x|): |x|^(alpha-n), 1 - log|x| or 1.

    Raises:
        DomainError: At |x| = 0 when alpha <= n.
    """
    arr = np.abs(np.asarray(distance, dtype=float))
    if alpha > n:
        values = np.ones_like(arr)
    else:
        if np.any(arr == 0):
            raise DomainError(f"omega_alpha is singular at |x| = 0 for alpha={alpha} <= n={n}")
        values = arr ** (alpha - n) if alpha < n else 1.0 - np.log(arr)
    return float(values) if np.ndim(distance) == 0 else values


def green_kernel_1d(x, lam: float):
    """Resolvent kernel of -d^2/dx^2 + lambda on the line: exp(-sqrt(lam)|x|)/(2 sqrt(lam)).

    Raises:
        DomainError: If lam <= 0.
    """
    if lam <= 0:
        raise DomainError(f"Green kernel needs lambda > 0, got {lam}")
    k = math.sqrt(lam)
    values = np.exp(-k * np.abs(np.asarray(x, dtype=float))) / (2.0 * k)
    return float(values) if np.ndim(x) == 0 else values


# ==============================================================================
# SEMINORMS
# ==============================================================================


def seminorm_scan(
    query: SeminormQuery,
    scan_window: Optional[tuple[float, float]] = None,
    quadrature_tol: Optional[float] = None,
    spacing: Optional[float] = None,
) -> SeminormValue:
    """Evaluate N_{alpha,delta}(g) on the scan grid.

    The weight singularity at u = 0 is removed by substitution: u = t^(1/alpha)
    for alpha < 1 and u = delta t^2 for alpha = 1.

    Raises:
        UnsupportedDimensionError: For n != 1 or radial targets.
        QuadratureError: If the quadrature budget is exhausted.
    """
    spec = query.target
    _require_line(spec, query.dimension)
    window = scan_window or SETTINGS.quadrature.scan_window
    spacing = spacing or SETTINGS.quadrature.scan_spacing
    tol = quadrature_tol or SETTINGS.quadrature.tolerance
    alpha, delta = query.alpha, query.delta
    breakpoints = spec.breakpoints()
    centers = _scan_grid(window, spacing, breakpoints)
    count = centers.size

    if alpha > 1:
        upper = delta
        to_u = lambda t: t  # noqa: E731
        to_t = lambda u: u  # noqa: E731
        weight = lambda t: np.ones_like(t)  # noqa: E731
    elif alpha < 1:
        upper = delta**alpha
        to_u = lambda t: t ** (1.0 / alpha)  # noqa: E731
        to_t = lambda u: u**alpha  # noqa: E731
        weight = lambda t: np.full_like(t, 1.0 / alpha)  # noqa: E731
    else:
        upper = 1.0
        log_delta = math.log(delta)
        to_u = lambda t: delta * t * t  # noqa: E731
        to_t = lambda u: np.sqrt(u / delta)  # noqa: E731
        weight = lambda t: 2.0 * delta * t * (1.0 - log_delta - 2.0 * np.log(t))  # noqa: E731

    starts, ends, owners = [], [], []
    for side_index, side in enumerate((1.0, -1.0)):
        cuts = np.full((count, len(breakpoints) + 2), np.nan)
        cuts[:, 0] = 0.0
        cuts[:, 1] = upper
        for column, point in enumerate(breakpoints, start=2):
            u = side * (point - centers)
            inside = (u > 0) & (u < delta)
            cuts[inside, column] = to_t(u[inside])
        cuts.sort(axis=1)
        left, right = cuts[:, :-1], cuts[:, 1:]
        valid = ~np.isnan(right) & (right > left)
        rows = np.broadcast_to(np.arange(count)[:, None], left.shape)
        starts.append(left[valid])
        ends.append(right[valid])
        owners.append(rows[valid] + side_index * count)

    def integrand(t: np.ndarray, owner: np.ndarray) -> np.ndarray:
        center = centers[owner % count]
        side = np.where(owner < count, 1.0, -1.0)
        y = center[:, None] + side[:, None] * to_u(t)
        g = apply_transform(np.asarray(evaluate(spec, y)), query.transform)
        return g * g * weight(t)

    # Owners are (center, side) pairs; a_i/b_i are regrouped by owner below
    a = np.concatenate(starts)
    b = np.concatenate(ends)
    owner_of_piece = np.concatenate(owners)
    result = integrate_intervals(
        lambda t, idx: integrand(t, owner_of_piece[idx]), a, b, tol=tol / 2.0
    )
    per_side = np.zeros(2 * count)
    per_side_err = np.zeros(2 * count)
    np.add.at(per_side, owner_of_piece, result.values)
    np.add.at(per_side_err, owner_of_piece, result.errors)
    profile = per_side[:count] + per_side[count:]
    errors = per_side_err[:count] + per_side_err[count:]

    i = int(np.argmax(profile))
    radius = _outer_radius(window) - delta
    g_bound = (
        transform_bound(tail_envelope(spec, radius), query.transform) if radius > 0 else math.inf
    )
    return SeminormValue(
        alpha=alpha,
        delta=delta,
        value=float(profile[i]),
        location=float(centers[i]),
        tail_bound=g_bound * g_bound * _omega_mass(alpha, delta),
        quadrature_error=float(errors.max()),
    )


def seminorm_N(
    query: SeminormQuery,
    scan_window: Optional[tuple[float, float]] = None,
    quadrature_tol: Optional[float] = None,
) -> float:
    """N_{alpha,delta}(g): supremum over the scan window of the windowed weighted L2 mass."""
    return seminorm_scan(query, scan_window, quadrature_tol).value


# ==============================================================================
# CONDITION I (S_lambda)
# ==============================================================================


def s_lambda(
    spec: PotentialSpec,
    lam: float,
    scan_window: Optional[tuple[float, float]] = None,
    quadrature_tol: Optional[float] = None,
    transform: str = "negative_part",
    spacing: Optional[float] = None,
    warn: bool = True,
) -> SLambdaValue:
    """S_lambda(q^-) = sup_x integral of q^-(y) exp(-sqrt(lam)|x-y|)/(2 sqrt(lam)) dy.

    The convolution is evaluated on the scan grid by two exponential
    recursions, one from each side, so every quadrature cell has a smooth
    integrand.

    Raises:
        DomainError: If lam <= 0.
        QuadratureError: If the quadrature budget is exhausted.
    """
    if lam <= 0:
        raise DomainError(f"S_lambda needs lambda > 0, got {lam}")
    _require_line(spec, 1)
    window = scan_window or SETTINGS.quadrature.scan_window
    spacing = spacing or SETTINGS.quadrature.scan_spacing
    tol = quadrature_tol or SETTINGS.quadrature.tolerance
    k = math.sqrt(lam)

    nodes = _scan_grid(window, spacing, spec.breakpoints())
    cells = nodes.size - 1
    anchors = np.concatenate([nodes[1:], nodes[:-1]])

    def integrand(y: np.ndarray, owner: np.ndarray) -> np.ndarray:
        q = apply_transform(np.asarray(evaluate(spec, y)), transform)
        return q * np.exp(-k * np.abs(y - anchors[owner][:, None]))

    result = integrate_intervals(
        integrand,
        np.concatenate([nodes[:-1], nodes[:-1]]),
        np.concatenate([nodes[1:], nodes[1:]]),
        tol=tol,
    )
    from_left, from_right = result.values[:cells], result.values[cells:]
    decay = np.exp(-k * np.diff(nodes))

    left = np.zeros(nodes.size)
    right = np.zeros(nodes.size)
    for j in range(1, nodes.size):
        left[j] = decay[j - 1] * left[j - 1] + from_left[j - 1]
    for j in range(cells - 1, -1, -1):
        right[j] = decay[j] * right[j + 1] + from_right[j]
    convolution = (left + right) / (2.0 * k)

    i = int(np.argmax(convolution))
    value = float(convolution[i])
    quadrature_error = result.total_error / (2.0 * k)
    tail = transform_bound(tail_envelope(spec, _outer_radius(window)), transform) / lam
    factor = 0.5 * float(np.diff(nodes).max()) * k
    base = value + quadrature_error + tail
    gap = base * factor / (1.0 - factor) if factor < 1.0 else math.inf

    if warn and tail > tol:
        logger.warning(
            "S_lambda tail bound %.3g exceeds the quadrature tolerance %.3g at lambda = %.4g",
            tail,
            tol,
            lam,
        )
    return SLambdaValue(
        lam=lam,
        value=value,
        location=float(nodes[i]),
        tail_bound=tail,
        quadrature_error=quadrature_error,
        gap_bound=gap,
    )


def default_lambda_grid(
    mass: float,
    points: Optional[int] = None,
    lambda_min: Optional[float] = None,
    refinements: Optional[int] = None,
) -> np.ndarray:
    """Lambda values in [lambda_min, m^2), m^2 excluded.

    ``points`` log-spaced values, plus m^2 (1 - 2^-k) for k = 1..refinements
    so the scan reaches the end of the range where S_lambda is smallest.
    """
    conditions = SETTINGS.conditions
    points = points or conditions.lambda_points
    lambda_min = lambda_min or conditions.lambda_min
    refinements = conditions.lambda_refinements if refinements is None else refinements
    m2 = mass * mass
    if lambda_min >= m2:
        raise DomainError(f"lambda_min {lambda_min} must be below m^2 = {m2}")
    spaced = np.geomspace(lambda_min, m2, points + 1)[:-1]
    approach = m2 * (1.0 - 2.0 ** -np.arange(1, refinements + 1))
    return np.unique(np.concatenate([spaced, approach[approach >= lambda_min]]))


def check_condition_I(
    q: PotentialSpec,
    mass: float,
    lambda_grid: Optional[Sequence[float]] = None,
    scan_window: Optional[tuple[float, float]] = None,
    quadrature_tol: Optional[float] = None,
    workers: int = 1,
) -> ConditionReport:
    """Condition I through S_lambda(q^-) <= 1 for some 0 < lambda < m^2.

    Holds needs a grid lambda whose upper bound (tail and gap included) is at
    most 1. Fails is only issued from S at lambda = m^2: S_lambda is
    non-increasing in lambda, so a lower bound above 1 there rules out every
    lambda < m^2.

    Raises:
        DomainError: If m <= 0 or a grid value lies outside (0, m^2).
        QuadratureError: Propagated from the S_lambda evaluations.
    """
    if mass <= 0:
        raise DomainError(f"Mass must be > 0, got {mass}")
    window = scan_window or SETTINGS.quadrature.scan_window
    grid = np.asarray(lambda_grid if lambda_grid is not None else default_lambda_grid(mass), float)
    bad = grid[(grid <= 0) | (grid >= mass * mass)]
    if bad.size:
        raise DomainError(f"lambda grid values must satisfy 0 < lambda < m^2, got {bad.tolist()}")

    def evaluate_at(lam: float) -> SLambdaValue:
        return s_lambda(q, float(lam), window, quadrature_tol, warn=False)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        scan = list(pool.map(evaluate_at, grid))
    at_threshold = evaluate_at(mass * mass)
    best = min(scan, key=lambda item: item.upper_bound)
    parameters = {
        "m": mass,
        "potential": q.kind.value,
        "lambda_points": int(grid.size),
        "lambda_range": [float(grid.min()), float(grid.max())],
    }
    table = [[item.lam, item.value, item.upper_bound] for item in scan]

    dominated = sum(1 for item in scan if item.tail_bound > (quadrature_tol or SETTINGS.quadrature.tolerance))
    if dominated:
        logger.warning("Tail bound exceeds the quadrature tolerance for %d of %d lambdas", dominated, grid.size)

    if best.upper_bound <= 1.0:
        verdict = Verdict.HOLDS
        witness = {
            "lambda_star": best.lam,
            "s_lambda": best.value,
            "upper_bound": best.upper_bound,
            "location": best.location,
            "scan": table,
        }
        tail = best.tail_bound
    elif at_threshold.lower_bound > 1.0:
        verdict = Verdict.FAILS
        witness = {
            "lambda": at_threshold.lam,
            "s_lambda_at_m2": at_threshold.value,
            "lower_bound": at_threshold.lower_bound,
            "location": at_threshold.location,
            "argument": "S_lambda is non-increasing in lambda, so S_lambda >= S_{m^2} > 1 for all lambda < m^2",
            "scan": table,
        }
        tail = at_threshold.tail_bound
    else:
        verdict = Verdict.INCONCLUSIVE
        witness = {
            "best_lambda": best.lam,
            "best_upper_bound": best.upper_bound,
            "s_lambda_at_m2": at_threshold.value,
            "scan": table,
        }
        tail = best.tail_bound

    logger.info("Condition I for %s (m=%g): %s", q.kind.value, mass, verdict.value)
    return ConditionReport(
        condition_id="I",
        verdict=verdict,
        witness=witness,
        parameters=parameters,
        tail_bound=tail,
        window=tuple(window),
    )


# ==============================================================================
# SEMINORM MEMBERSHIPS
# ==============================================================================


def _zero_membership(condition_id: str, description: str) -> ConditionReport:
    return ConditionReport(
        condition_id=condition_id,
        verdict=Verdict.HOLDS,
        witness={"value": 0.0, "function": description, "delta_clause": "holds vacuously (n = 1)"},
        parameters={"n": 1},
    )


def _membership(
    condition_id: str,
    spec: PotentialSpec,
    alpha: float,
    transform: str,
    window: tuple[float, float],
    quadrature_tol: Optional[float],
) -> ConditionReport:
    query = SeminormQuery(alpha=alpha, delta=1.0, target=spec, transform=transform)
    main = seminorm_scan(query, window, quadrature_tol)
    trend = [
        [delta, seminorm_scan(query.model_copy(update={"delta": delta}), window, quadrature_tol).value]
        for delta in SETTINGS.conditions.delta_trend
    ]
    finite = math.isfinite(main.value) and math.isfinite(main.tail_bound)
    witness = {
        "value": main.value,
        "location": main.location,
        "function": transform,
        "alpha": alpha,
        "delta_trend": trend,
        "delta_clause": "holds vacuously (n = 1)",
    }
    return ConditionReport(
        condition_id=condition_id,
        verdict=Verdict.HOLDS if finite else Verdict.FAILS,
        witness=witness,
        parameters={"n": 1, "potential": spec.kind.value},
        tail_bound=main.tail_bound,
        window=tuple(window),
    )


def check_seminorm_conditions(
    q: PotentialSpec,
    b0: Optional[PotentialSpec] = None,
    dimension: int = 1,
    scan_window: Optional[tuple[float, float]] = None,
    quadrature_tol: Optional[float] = None,
) -> list[ConditionReport]:
    """Memberships II'-VI' for a scalar potential q and optional electric b0.

    Magnetic terms are absent, so b_i, C and b^2 vanish identically.

    Raises:
        UnsupportedDimensionError: For n != 1 or radial potentials.
    """
    _require_line(q, dimension)
    if b0 is not None:
        _require_line(b0, dimension)
    window = scan_window or SETTINGS.quadrature.scan_window

    reports = [
        _zero_membership("II'", "b_i"),
        _membership("III'", q, 2.0, "abs_sqrt", window, quadrature_tol),
        _zero_membership("IV'", "C = sum d b_i / d x_i"),
        _membership("V'", q, 4.0, "identity", window, quadrature_tol),
    ]
    if b0 is None:
        reports.append(_zero_membership("VI'", "b_0"))
    else:
        reports.append(_membership("VI'", b0, 2.0, "identity", window, quadrature_tol))
    logger.info(
        "Seminorm memberships for %s: %s",
        q.kind.value,
        ", ".join(f"{r.condition_id}={r.verdict.value}" for r in reports),
    )
    return reports


# ==============================================================================
# COULOMB PARAMETERS AND SIMON CONDITIONS
# ==============================================================================


def check_coulomb_parameters(charge: float, dimension: int = 3) -> list[ConditionReport]:
    """Algebraic charge constraints II (|e| <= (n-2)/2) and IV (|e| < (n-2)/(2 sqrt 17)).

    Raises:
        UnsupportedDimensionError: For n != 3.
    """
    if dimension != 3:
        raise UnsupportedDimensionError(f"Coulomb constraints are evaluated for n = 3, got {dimension}")
    reports = []
    for condition_id, bound, strict in (
        ("II", (dimension - 2) / 2.0, False),
        ("IV", (dimension - 2) / (2.0 * math.sqrt(17.0)), True),
    ):
        ok = abs(charge) < bound if strict else abs(charge) <= bound
        reports.append(
            ConditionReport(
                condition_id=condition_id,
                verdict=Verdict.HOLDS if ok else Verdict.FAILS,
                witness={"abs_charge": abs(charge), "bound": bound, "margin": bound - abs(charge)},
                parameters={"e": charge, "n": dimension},
            )
        )
    return reports


def coulomb_simon_terms(
    charge: float, energy: float
) -> tuple[RadialFunction, RadialFunction, RadialFunction]:
    """V1 = -e^2/r^2, V2 = 2 E e / r and dV2/dr for the Simon checks."""

    def v1(r: np.ndarray) -> np.ndarray:
        return -(charge * charge) / np.asarray(r, dtype=float) ** 2

    def v2(r: np.ndarray) -> np.ndarray:
        return 2.0 * energy * charge / np.asarray(r, dtype=float)

    def dv2(r: np.ndarray) -> np.ndarray:
        return -2.0 * energy * charge / np.asarray(r, dtype=float) ** 2

    return v1, v2, dv2


def check_simon_conditions(
    v1: RadialFunction,
    v2: RadialFunction,
    r0: float,
    grid: Grid1D,
    energy: float,
    v2_derivative: RadialFunction,
    far_field_tolerance: Optional[float] = None,
    smooth: bool = True,
    parameters: Optional[dict] = None,
) -> list[ConditionReport]:
    """Simon conditions (a)-(e) for V = V1 + V2 on the radial grid.

    (a) inner L2 mass with the r^2 measure compared between r_min and r_min/2,
        plus boundedness beyond R0; (b) structural; (c) max |V1| on the outer
        decade; (d), (e) pointwise for r > R0 with exact derivatives.

    Raises:
        InsufficientDomainError: If the grid ends at or before R0.
    """
    if grid.x_max <= r0:
        raise InsufficientDomainError(f"Grid ends at r = {grid.x_max}, not beyond R0 = {r0}")
    if grid.x_max < 3.0 * r0:
        logger.warning("Grid ends at r = %g, less than 3 R0 = %g", grid.x_max, 3.0 * r0)
    tolerance = far_field_tolerance or SETTINGS.radial.far_field_tolerance
    params = {"E": energy, "R0": r0, **(parameters or {})}
    r = grid.points
    reports = []

    def inner_mass(r_start: float) -> float:
        value, _ = integrate(lambda x: (v1(x) + v2(x)) ** 2 * x * x, r_start, r0)
        return value

    mass_full = inner_mass(grid.x_min)
    mass_half = inner_mass(0.5 * grid.x_min)
    growth = mass_half / mass_full if mass_full > 0 else 1.0
    outer = r[r >= r0]
    outer_values = np.abs(v1(outer) + v2(outer))
    witness_a = {
        "inner_l2": math.sqrt(mass_full),
        "inner_l2_half_rmin": math.sqrt(mass_half),
        "growth": growth,
        "outer_sup": float(outer_values.max()),
    }
    converged = abs(growth - 1.0) <= INNER_GROWTH_TOLERANCE
    reports.append(
        ConditionReport(
            "SimonA",
            Verdict.HOLDS if converged else Verdict.INCONCLUSIVE,
            witness_a,
            params,
        )
    )

    reports.append(
        ConditionReport(
            "SimonB",
            Verdict.HOLDS if smooth else Verdict.INCONCLUSIVE,
            {"basis": "structural", "detail": "closed forms are C-infinity on r > 0"} if smooth else None,
            params,
        )
    )

    decade = r[r >= grid.x_max / 10.0]
    far = np.abs(v1(decade))
    i = int(np.argmax(far))
    witness_c = {"max_abs_v1": float(far[i]), "location": float(decade[i]), "tolerance": tolerance}
    reports.append(
        ConditionReport(
            "SimonC",
            Verdict.HOLDS if far[i] <= tolerance else Verdict.INCONCLUSIVE,
            witness_c,
            params,
        )
    )

    tail = r[r > r0]
    values = v2(tail)
    positive = np.flatnonzero(values >= 0)
    if positive.size:
        j = int(positive[0])
        witness_d = {"violating_r": float(tail[j]), "v2": float(values[j])}
        verdict_d = Verdict.FAILS
    else:
        j = int(np.argmax(values))
        witness_d = {"max_v2": float(values[j]), "location": float(tail[j])}
        verdict_d = Verdict.HOLDS
    reports.append(ConditionReport("SimonD", verdict_d, witness_d, params))

    lhs = -v2_derivative(tail)
    rhs = -values / tail
    slack = POINTWISE_SLACK * (np.abs(lhs) + np.abs(rhs))
    violating = np.flatnonzero(lhs > rhs + slack)
    if violating.size:
        j = int(violating[0])
        witness_e = {"violating_r": float(tail[j]), "lhs": float(lhs[j]), "rhs": float(rhs[j])}
        verdict_e = Verdict.FAILS
    else:
        margin = rhs - lhs
        j = int(np.argmin(margin))
        witness_e = {"min_margin": float(margin[j]), "location": float(tail[j])}
        verdict_e = Verdict.HOLDS
    reports.append(ConditionReport("SimonE", verdict_e, witness_e, params))

    logger.info(
        "Simon conditions at E=%g: %s",
        energy,
        ", ".join(f"{rep.condition_id}={rep.verdict.value}" for rep in reports),
    )
    return reports
