"""Potential construction and evaluation.

Every evaluator accepts a scalar or a NumPy array and returns the same shape.
The von Neumann-Wigner family is written out with closed-form derivatives:
with zeta = 2x - sin 2x and D = 1 + zeta^2 the eigenfunction is
psi = sin(x) / D, and

    V = E0 + psi''/psi = E0 - 1 - 8 zeta sin(2x)/D
        - 2 (zeta'^2 + zeta zeta'')/D + 8 zeta^2 zeta'^2 / D^2

where the common sin(x) factor has been cancelled (zeta' = 4 sin^2 x).
"""

from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Optional, Union

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from kg_spectra.constants import (
    LIMSUP_CROSSCHECK_TOLERANCE,
    VNW_DECAY_POWER,
    VNW_LEADING_AMPLITUDE,
    VNW_LEADING_FREQUENCY,
    VNW_LIMSUP_XDV,
    VNW_PRINTED_LEADING_AMPLITUDE,
    VNW_PRINTED_LEADING_FREQUENCY,
)
from kg_spectra.data_models import AsymptoticInfo, VnwComparison
from kg_spectra.errors import DomainError, MissingContextError, UnsupportedKindError
from kg_spectra.models.potential_models import PotentialKind, PotentialSpec

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


def _like(x: ArrayLike, values: np.ndarray) -> ArrayLike:
    """Return a Python float for scalar input, the array otherwise."""
    return float(values) if np.ndim(x) == 0 else values


# ==============================================================================
# VON NEUMANN-WIGNER FAMILY
# ==============================================================================


def zeta(x: ArrayLike) -> ArrayLike:
    """zeta(x) = 2x - sin(2x); odd and strictly increasing."""
    arr = np.asarray(x, dtype=float)
    return _like(x, 2.0 * arr - np.sin(2.0 * arr))


def _zeta_derivatives(arr: np.ndarray) -> tuple[np.ndarray, ...]:
    s2, c2 = np.sin(2.0 * arr), np.cos(2.0 * arr)
    z = 2.0 * arr - s2
    z1 = 2.0 - 2.0 * c2
    z2 = 4.0 * s2
    z3 = 8.0 * c2
    return z, z1, z2, z3, s2, c2


def vnw_eigenfunction(x: ArrayLike) -> ArrayLike:
    """psi(x) = sin(x) / (1 + zeta(x)^2)."""
    arr = np.asarray(x, dtype=float)
    z = 2.0 * arr - np.sin(2.0 * arr)
    return _like(x, np.sin(arr) / (1.0 + z * z))


def vnw_eigenfunction_second_derivative(x: ArrayLike) -> ArrayLike:
    """Closed-form psi''(x) for psi = sin(x) * u with u = 1/(1 + zeta^2)."""
    arr = np.asarray(x, dtype=float)
    z, z1, z2, _, _, _ = _zeta_derivatives(arr)
    s, c = np.sin(arr), np.cos(arr)
    d = 1.0 + z * z
    u = 1.0 / d
    u1 = -2.0 * z * z1 / d**2
    u2 = -2.0 * (z1 * z1 + z * z2) / d**2 + 8.0 * z * z * z1 * z1 / d**3
    return _like(x, -s * u + 2.0 * c * u1 + s * u2)


def vnw_derived(x: ArrayLike, eigenvalue: float = 1.0) -> ArrayLike:
    """Potential for which psi is an exact eigenfunction with eigenvalue E0.

    Finite and smooth everywhere, including the zeros of sin(x); tends to
    E0 - 1 as |x| grows (zero for the default E0 = 1).
    """
    arr = np.asarray(x, dtype=float)
    z, z1, z2, _, s2, _ = _zeta_derivatives(arr)
    d = 1.0 + z * z
    a = -8.0 * z * s2 / d
    b = -2.0 * (z1 * z1 + z * z2) / d
    c = 8.0 * z * z * z1 * z1 / d**2
    return _like(x, (eigenvalue - 1.0) + a + b + c)


def vnw_derived_derivative(x: ArrayLike) -> ArrayLike:
    """Closed-form dV/dx of :func:`vnw_derived` (independent of E0)."""
    arr = np.asarray(x, dtype=float)
    z, z1, z2, z3, s2, c2 = _zeta_derivatives(arr)
    d = 1.0 + z * z
    d1 = 2.0 * z * z1
    da = -8.0 * ((z1 * s2 + 2.0 * z * c2) / d - z * s2 * d1 / d**2)
    db = -2.0 * ((3.0 * z1 * z2 + z * z3) / d - (z1 * z1 + z * z2) * d1 / d**2)
    dc = 8.0 * (
        (2.0 * z * z1**3 + 2.0 * z * z * z1 * z2) / d**2 - 2.0 * z * z * z1 * z1 * d1 / d**3
    )
    return _like(x, da + db + dc)


def _printed_parts(r: np.ndarray) -> tuple[np.ndarray, ...]:
    s, c = np.sin(r), np.cos(r)
    z = 2.0 * r - np.sin(2.0 * r)
    z1 = 2.0 - 2.0 * np.cos(2.0 * r)
    n = z**3 - 3.0 * z * z * s**3 + z * r + s**3
    return s, c, z, z1, n


def vnw_printed(x: ArrayLike) -> ArrayLike:
    """The printed closed form -32 sin r [zeta^3 - 3 zeta^2 sin^3 r + zeta r + sin^3 r]/(1+zeta^2)^2 at r = |x|."""
    r = np.abs(np.asarray(x, dtype=float))
    s, _, z, _, n = _printed_parts(r)
    return _like(x, -32.0 * s * n / (1.0 + z * z) ** 2)


def vnw_printed_derivative(x: ArrayLike) -> ArrayLike:
    """Closed-form derivative of :func:`vnw_printed` (odd in x)."""
    arr = np.asarray(x, dtype=float)
    r = np.abs(arr)
    s, c, z, z1, n = _printed_parts(r)
    d = 1.0 + z * z
    d1 = 2.0 * z * z1
    n1 = (
        3.0 * z * z * z1
        - 6.0 * z * z1 * s**3
        - 9.0 * z * z * s * s * c
        + z1 * r
        + z
        + 3.0 * s * s * c
    )
    dp = -32.0 * ((c * n + s * n1) / d**2 - 2.0 * s * n * d1 / d**3)
    return _like(x, np.sign(arr) * dp)


# ==============================================================================
# COULOMB AND GENERIC EVALUATION
# ==============================================================================


def coulomb_effective(r: ArrayLike, charge: float, energy: float, ell: int = 0) -> ArrayLike:
    """Radial effective potential -e^2/r^2 + 2 E e / r + l(l+1)/r^2.

    Raises:
        DomainError: If any r <= 0.
    """
    arr = np.asarray(r, dtype=float)
    if np.any(arr <= 0):
        raise DomainError(f"Coulomb potential needs r > 0, got min r = {float(np.min(arr))}")
    values = (ell * (ell + 1) - charge * charge) / arr**2 + 2.0 * energy * charge / arr
    return _like(r, values)


def _line_values(spec: PotentialSpec, arr: np.ndarray) -> np.ndarray:
    """Full-line values; the square well is -V0/2 at |x| = a (cell average at an edge node)."""
    kind = spec.kind
    if kind is PotentialKind.ZERO:
        return np.zeros_like(arr)
    if kind is PotentialKind.SQUARE_WELL:
        distance = np.abs(arr)
        return np.where(
            distance < spec.half_width,
            -spec.depth,
            np.where(distance == spec.half_width, -0.5 * spec.depth, 0.0),
        )
    if kind is PotentialKind.VNW_DERIVED:
        return np.asarray(vnw_derived(arr, spec.eigenvalue))
    if kind is PotentialKind.VNW_PRINTED:
        return np.asarray(vnw_printed(arr))
    if kind is PotentialKind.CUSTOM_SAMPLES:
        # np.interp clamps to the end values outside the table
        return np.interp(arr, spec.samples_x, spec.samples_v)
    raise UnsupportedKindError(f"Potential kind '{kind.value}' has no line evaluator")


def evaluate(spec: PotentialSpec, x: ArrayLike, energy: Optional[float] = None) -> ArrayLike:
    """Evaluate a potential at ``x``.

    Radial specs return the effective radial potential with the centrifugal
    term l(l+1)/r^2 included.

    Raises:
        DomainError: Radial evaluation at r <= 0.
        MissingContextError: Energy-dependent kinds evaluated without ``energy``.
    """
    arr = np.asarray(x, dtype=float)
    if spec.energy_dependent and energy is None:
        raise MissingContextError(
            f"Potential kind '{spec.kind.value}' depends on the energy; pass energy=E"
        )
    if spec.kind is PotentialKind.COULOMB_3D:
        return _like(x, np.asarray(coulomb_effective(arr, spec.charge, energy, spec.ell)))
    if spec.is_radial:
        if np.any(arr <= 0):
            raise DomainError(f"Radial potentials need r > 0, got min r = {float(np.min(arr))}")
        values = _line_values(spec, arr) + spec.ell * (spec.ell + 1) / arr**2
        return _like(x, values)
    return _like(x, _line_values(spec, arr))


def load_samples_csv(path: Path) -> PotentialSpec:
    """Read a two-column (x, V) CSV into a sampled potential.

    A single header row is skipped when present.

    Raises:
        FileNotFoundError: If the file is missing.
        ValueError: If the table is not two numeric columns with increasing x.
    """
    if not Path(path).exists():
        raise FileNotFoundError(f"Potential samples file not found at {path}")
    try:
        table = np.loadtxt(path, delimiter=",", ndmin=2)
    except ValueError:
        table = np.loadtxt(path, delimiter=",", ndmin=2, skiprows=1)
    if table.shape[1] != 2:
        raise ValueError(f"{path} must have exactly two columns (x, V), found {table.shape[1]}")
    logger.debug("Loaded %d potential samples from %s", table.shape[0], path)
    return PotentialSpec.custom(table[:, 0], table[:, 1])


# ==============================================================================
# TRANSFORMS AND ENVELOPES
# ==============================================================================


def apply_transform(values: np.ndarray, transform: str) -> np.ndarray:
    """Map potential samples q to g for the seminorm and S_lambda integrands."""
    if transform == "identity":
        return values
    if transform == "abs_sqrt":
        return np.sqrt(np.abs(values))
    if transform == "negative_part":
        return np.maximum(-values, 0.0)
    if transform == "square":
        return values * values
    raise ValueError(f"Unknown transform '{transform}'")


def transform_bound(bound: float, transform: str) -> float:
    """Bound on |g| given a bound on |q|."""
    if transform == "abs_sqrt":
        return math.sqrt(bound)
    if transform == "square":
        return bound * bound
    return bound


def _printed_tail(radius: float) -> float:
    z = float(zeta(max(radius, 0.0)))
    if z < 1.0:
        # zeta <= 1 on the inner region: D >= 1 and the bracket is below 6
        return 192.0
    return 32.0 * (z**3 + 3.5 * z * z + 0.5 * z + 1.0) / z**4


def tail_envelope(spec: PotentialSpec, radius: float, energy: Optional[float] = None) -> float:
    """Upper bound on sup |V(y)| over |y| >= radius.

    Analytic for the closed forms; the sampled kind uses its table (linear
    interpolation attains its extremes at the nodes).

    Raises:
        MissingContextError: Coulomb potential without ``energy``.
    """
    radius = abs(float(radius))
    kind = spec.kind
    if kind is PotentialKind.ZERO:
        bound = 0.0
    elif kind is PotentialKind.SQUARE_WELL:
        bound = spec.depth if radius <= spec.half_width else 0.0
    elif kind is PotentialKind.CUSTOM_SAMPLES:
        xs = np.asarray(spec.samples_x)
        vs = np.abs(np.asarray(spec.samples_v))
        edges = np.abs(np.interp([-radius, radius], xs, spec.samples_v))
        outer = vs[np.abs(xs) >= radius]
        bound = float(max(vs[0], vs[-1], edges.max(), outer.max() if outer.size else 0.0))
    elif kind is PotentialKind.VNW_DERIVED:
        offset = abs(spec.eigenvalue - 1.0)
        bound = 72.0 + offset
        z = 2.0 * radius - 1.0
        if z >= 1.0:
            bound = min(bound, offset + 16.0 / z + 160.0 / z**2)
    elif kind is PotentialKind.VNW_PRINTED:
        bound = _printed_tail(radius)
    elif kind is PotentialKind.COULOMB_3D:
        if energy is None:
            raise MissingContextError("Coulomb tail envelope needs the energy")
        if radius <= 0:
            return math.inf
        e = spec.charge
        return (e * e + spec.ell * (spec.ell + 1)) / radius**2 + 2.0 * abs(energy * e) / radius
    else:
        raise UnsupportedKindError(f"No tail envelope for kind '{kind.value}'")

    if spec.is_radial and spec.ell:
        if radius <= 0:
            return math.inf
        bound += spec.ell * (spec.ell + 1) / radius**2
    return bound


# ==============================================================================
# ASYMPTOTICS
# ==============================================================================


def _vnw_constants(spec: PotentialSpec) -> tuple[float, float]:
    if spec.kind is PotentialKind.VNW_DERIVED:
        return VNW_LEADING_AMPLITUDE, VNW_LEADING_FREQUENCY
    if spec.kind is PotentialKind.VNW_PRINTED:
        return VNW_PRINTED_LEADING_AMPLITUDE, VNW_PRINTED_LEADING_FREQUENCY
    raise UnsupportedKindError(
        f"Asymptotics are known for the vNW family only, got '{spec.kind.value}'"
    )


def _derivative(spec: PotentialSpec):
    return vnw_derived_derivative if spec.kind is PotentialKind.VNW_DERIVED else vnw_printed_derivative


def numeric_limsup_xdv(
    spec: PotentialSpec, x_lo: float = 200.0, span: float = 10.0 * math.pi, samples: int = 20001
) -> tuple[float, float]:
    """Maximize x * V'(x) over [x_lo, x_lo + span]; returns (value, location)."""
    _vnw_constants(spec)
    derivative = _derivative(spec)
    xs = np.linspace(x_lo, x_lo + span, samples)
    values = xs * derivative(xs)
    i = int(np.argmax(values))
    left, right = xs[max(i - 1, 0)], xs[min(i + 1, samples - 1)]
    refined = minimize_scalar(
        lambda t: -t * float(derivative(t)), bounds=(left, right), method="bounded"
    )
    if refined.success and -refined.fun > values[i]:
        return float(-refined.fun), float(refined.x)
    return float(values[i]), float(xs[i])


def envelope_fit(
    spec: PotentialSpec, x_lo: float = 100.0, x_hi: float = 200.0, samples: int = 20001
) -> float:
    """Least-squares amplitude of V against sin(f x)/x (plus a constant) on [x_lo, x_hi]."""
    _, frequency = _vnw_constants(spec)
    xs = np.linspace(x_lo, x_hi, samples)
    basis = np.column_stack([np.sin(frequency * xs) / xs, np.ones_like(xs)])
    coefficients, *_ = np.linalg.lstsq(basis, np.asarray(evaluate(spec, xs)), rcond=None)
    return float(coefficients[0])


def asymptotics(spec: PotentialSpec) -> AsymptoticInfo:
    """Leading term of a vNW potential with a numeric cross-check.

    Raises:
        UnsupportedKindError: For kinds outside the vNW family.
    """
    amplitude, frequency = _vnw_constants(spec)
    numeric, location = numeric_limsup_xdv(spec)
    fitted = envelope_fit(spec)
    consistent = abs(numeric - VNW_LIMSUP_XDV) <= LIMSUP_CROSSCHECK_TOLERANCE
    logger.info(
        "Asymptotics of %s: numeric limsup x V' = %.6f at x = %.4f, fitted amplitude %.6f",
        spec.kind.value,
        numeric,
        location,
        fitted,
    )
    if not consistent:
        logger.warning(
            "Numeric limsup %.6f differs from %.1f by more than %.2f",
            numeric,
            VNW_LIMSUP_XDV,
            LIMSUP_CROSSCHECK_TOLERANCE,
        )
    return AsymptoticInfo(
        leading_amplitude=amplitude,
        leading_frequency=frequency,
        decay_power=VNW_DECAY_POWER,
        limsup_xdV=VNW_LIMSUP_XDV,
        numeric_limsup_xdV=numeric,
        fitted_amplitude=fitted,
        consistent=consistent,
    )


def compare_vnw_forms(
    x_lo: float = 0.1, x_hi: float = 40.0, samples: int = 40001, eigenvalue: float = 1.0
) -> VnwComparison:
    """Quantify how far the printed closed form is from the derived potential."""
    xs = np.linspace(x_lo, x_hi, samples)
    derived = np.asarray(vnw_derived(xs, eigenvalue))
    printed = np.asarray(vnw_printed(xs))
    deviation = np.abs(printed - derived)
    i = int(np.argmax(deviation))
    scale = float(np.max(np.abs(derived))) or 1.0
    comparison = VnwComparison(
        x_range=(x_lo, x_hi),
        samples=samples,
        max_abs_deviation=float(deviation[i]),
        location=float(xs[i]),
        max_relative_deviation=float(deviation[i]) / scale,
        printed_asymptotics=asymptotics(PotentialSpec.vnw_printed()),
    )
    logger.info(
        "Printed vs derived vNW: max |deviation| %.6g at x = %.4f",
        comparison.max_abs_deviation,
        comparison.location,
    )
    return comparison


# ==============================================================================
# REFERENCE ORACLES
# ==============================================================================


def square_well_levels(depth: float, half_width: float) -> list[float]:
    """Bound-state energies of the finite square well -depth * 1{|x| < a}.

    Solves k tan(ka) = kappa (even) and -k cot(ka) = kappa (odd) with
    kappa = sqrt(depth - k^2) by bracketed root finding on each branch.

    Returns:
        Energies E = k^2 - depth, ascending, all strictly negative.
    """
    if depth <= 0 or half_width <= 0:
        raise DomainError(f"Square well needs depth > 0 and half_width > 0, got {depth}, {half_width}")
    a = half_width
    k0 = math.sqrt(depth)

    def kappa(k: float) -> float:
        return math.sqrt(max(depth - k * k, 0.0))

    def even(k: float) -> float:
        return k * math.tan(k * a) - kappa(k)

    def odd(k: float) -> float:
        return -k / math.tan(k * a) - kappa(k)

    tiny = 1e-12 / a
    levels = []
    branch = 0
    while branch * math.pi / (2.0 * a) < k0:
        start = branch * math.pi / (2.0 * a) + tiny
        end = (branch + 1) * math.pi / (2.0 * a)
        stop = k0 if end >= k0 else end - tiny
        f = even if branch % 2 == 0 else odd
        if start < stop and f(start) < 0.0 < f(stop):
            k = brentq(f, start, stop, xtol=1e-15)
            energy = k * k - depth
            if energy < 0.0:
                levels.append(energy)
        branch += 1
    return sorted(levels)
