"""Vectorized adaptive Gauss-Legendre quadrature over many intervals at once.

Each input interval has an owner (the integral it contributes to). Pieces
are bisected until the fixed-order rule on the piece agrees with the sum of
the rule on its two halves within a share of the owner's tolerance
proportional to the piece width. Pieces narrower than a minimum width are
accepted as they are, which keeps jump discontinuities from exhausting the
budget.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from kg_spectra.config import SETTINGS
from kg_spectra.errors import QuadratureError

logger = logging.getLogger(__name__)

# f(points, owners) -> values; points has shape (pieces, order), owners shape (pieces,)
Integrand = Callable[[np.ndarray, np.ndarray], np.ndarray]

MIN_WIDTH_FRACTION = 1e-12


@dataclass(frozen=True, eq=False)
class QuadratureResult:
    values: np.ndarray
    errors: np.ndarray
    pieces: int

    @property
    def total_error(self) -> float:
        return float(self.errors.sum())


@lru_cache(maxsize=8)
def _rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def _apply_rule(
    f: Integrand, lo: np.ndarray, hi: np.ndarray, owners: np.ndarray, order: int
) -> np.ndarray:
    nodes, weights = _rule(order)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    points = mid[:, None] + half[:, None] * nodes[None, :]
    values = np.asarray(f(points, owners), dtype=float)
    return half * (values @ weights)


def integrate_intervals(
    f: Integrand,
    a: np.ndarray,
    b: np.ndarray,
    tol: float | None = None,
    max_intervals: int | None = None,
    order: int | None = None,
) -> QuadratureResult:
    """Integrate ``f`` over every [a_i, b_i] to an absolute tolerance ``tol`` each.

    Args:
        f: Vectorized integrand called as ``f(points, owners)``.
        a: Left ends, one per owner.
        b: Right ends, one per owner (``b >= a``).
        tol: Absolute tolerance per owner. Defaults to the configured value.
        max_intervals: Budget on the total number of pieces processed.
        order: Gauss-Legendre order of the local rule.

    Returns:
        Integral values and error estimates per owner.

    Raises:
        QuadratureError: If the piece budget is exhausted.
    """
    tol = SETTINGS.quadrature.tolerance if tol is None else tol
    max_intervals = SETTINGS.quadrature.max_intervals if max_intervals is None else max_intervals
    order = SETTINGS.quadrature.order if order is None else order

    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    if a.shape != b.shape:
        raise ValueError(f"Interval ends differ in shape: {a.shape} vs {b.shape}")

    lengths = b - a
    values = np.zeros(a.size)
    errors = np.zeros(a.size)
    min_width = MIN_WIDTH_FRACTION * np.maximum(lengths, 1.0)

    active = np.flatnonzero(lengths > 0)
    lo, hi, owners = a[active], b[active], active
    coarse = _apply_rule(f, lo, hi, owners, order)
    processed = lo.size

    while lo.size:
        mid = 0.5 * (lo + hi)
        left = _apply_rule(f, lo, mid, owners, order)
        right = _apply_rule(f, mid, hi, owners, order)
        fine = left + right
        err = np.abs(fine - coarse)
        width = hi - lo
        allowed = tol * width / lengths[owners]
        done = (err <= allowed) | (width <= min_width[owners])

        np.add.at(values, owners[done], fine[done])
        np.add.at(errors, owners[done], err[done])

        keep = ~done
        if not keep.any():
            break
        processed += 2 * int(keep.sum())
        if processed > max_intervals:
            raise QuadratureError(
                f"Adaptive quadrature exceeded {max_intervals} intervals with "
                f"{int(keep.sum())} pieces still above tolerance {tol:g}"
            )
        lo_k, mid_k, hi_k, own_k = lo[keep], mid[keep], hi[keep], owners[keep]
        lo = np.concatenate([lo_k, mid_k])
        hi = np.concatenate([mid_k, hi_k])
        owners = np.concatenate([own_k, own_k])
        coarse = np.concatenate([left[keep], right[keep]])

    logger.debug("Quadrature over %d owners used %d pieces", a.size, processed)
    return QuadratureResult(values=values, errors=errors, pieces=processed)


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float | None = None,
    breakpoints: tuple[float, ...] = (),
) -> tuple[float, float]:
    """Integrate a scalar function over [a, b], splitting at ``breakpoints``.

    Returns:
        ``(value, error_estimate)``.
    """
    cuts = np.unique(np.concatenate([[a, b], [p for p in breakpoints if a < p < b]]))
    tol = SETTINGS.quadrature.tolerance if tol is None else tol
    pieces = cuts.size - 1
    result = integrate_intervals(
        lambda points, owners: f(points), cuts[:-1], cuts[1:], tol=tol / max(pieces, 1)
    )
    return float(result.values.sum()), result.total_error
