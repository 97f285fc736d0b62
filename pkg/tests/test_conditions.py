"""Tests for condition I, the seminorm memberships and the Simon checks."""

import math

import numpy as np
import pytest

from kg_spectra.core.condition_operations import (
    check_condition_I,
    check_coulomb_parameters,
    check_seminorm_conditions,
    check_simon_conditions,
    coulomb_simon_terms,
    default_lambda_grid,
    green_kernel_1d,
    omega_weight,
    s_lambda,
    seminorm_N,
    seminorm_scan,
)
from kg_spectra.core.potential_operations import apply_transform, evaluate
from kg_spectra.core.quadrature import integrate
from kg_spectra.data_models import Verdict
from kg_spectra.errors import DomainError, InsufficientDomainError, UnsupportedDimensionError
from kg_spectra.models import Grid1D, PotentialSpec, SeminormQuery

WINDOW = (-10.0, 10.0)
SQUARE_WELL_S1 = 5.0 * (1.0 - math.exp(-1.0))


class TestKernels:
    """Green kernel and seminorm weights."""

    def test_green_kernel_value(self):
        """Test that G(0, 4) = 1/4 and G(1, 4) = exp(-2)/4."""
        assert green_kernel_1d(0.0, 1.0) == pytest.approx(0.5)
        assert green_kernel_1d(0.0, 4.0) == pytest.approx(0.25)
        assert green_kernel_1d(1.0, 4.0) == pytest.approx(math.exp(-2.0) / 4.0)

    @pytest.mark.parametrize("lam", [0.25, 1.0, 4.0])
    def test_green_kernel_integrates_to_inverse_lambda(self, lam):
        """Test that the kernel mass over the line is 1/lambda."""
        reach = 60.0 / math.sqrt(lam)
        value, _ = integrate(lambda x: green_kernel_1d(x, lam), -reach, reach, breakpoints=(0.0,))
        assert value == pytest.approx(1.0 / lam, abs=1e-8)

    @pytest.mark.parametrize("lam", [0.5, 1.0, 3.0])
    def test_green_kernel_inverts_operator_weakly(self, lam):
        """Test that the integral of G (lam phi - phi'') equals phi(0) for a Gaussian phi."""

        def integrand(x):
            phi = np.exp(-x * x)
            phi_xx = (4.0 * x * x - 2.0) * phi
            return green_kernel_1d(x, lam) * (lam * phi - phi_xx)

        value, _ = integrate(integrand, -12.0, 12.0, breakpoints=(0.0,))
        assert value == pytest.approx(1.0, abs=1e-8)

    def test_green_kernel_rejects_nonpositive_lambda(self):
        """Test that lambda <= 0 is a domain error."""
        with pytest.raises(DomainError):
            green_kernel_1d(1.0, 0.0)

    def test_weights_by_regime(self):
        """Test the three weight regimes alpha > n, alpha < n and alpha = n."""
        assert omega_weight(0.5, alpha=2.0) == 1.0
        assert omega_weight(0.25, alpha=0.5) == pytest.approx(2.0)
        assert omega_weight(math.e**-1, alpha=1.0) == pytest.approx(2.0)
        assert omega_weight(0.25, alpha=1.0, n=3) == pytest.approx(16.0)

    def test_singular_weight_at_origin(self):
        """Test that alpha <= n is singular at the origin."""
        with pytest.raises(DomainError):
            omega_weight(np.array([0.0, 1.0]), alpha=1.0)


class TestSLambda:
    """S_lambda of the negative part of q."""

    def test_square_well_matches_closed_form(self, square_well):
        """Test that S_1 of the depth-5 well is 5 (1 - 1/e), attained at x = 0."""
        result = s_lambda(square_well, 1.0, WINDOW)
        assert result.value == pytest.approx(SQUARE_WELL_S1, abs=1e-6)
        assert result.location == pytest.approx(0.0)
        assert result.tail_bound == 0.0

    def test_zero_potential(self):
        """Test that S_lambda(0) = 0 with no slack."""
        result = s_lambda(PotentialSpec.zero(), 0.5, WINDOW)
        assert result.value == 0.0
        assert result.upper_bound == 0.0

    @pytest.mark.parametrize("lam", [0.1, 0.5, 1.0, 4.0])
    @pytest.mark.parametrize(
        "spec",
        [
            PotentialSpec.square_well(depth=5.0, half_width=1.0),
            PotentialSpec.vnw_derived(),
            PotentialSpec.custom([-3.0, 0.0, 2.0, 4.0], [0.0, -3.0, 1.0, -1.0]),
        ],
        ids=lambda spec: spec.kind.value,
    )
    def test_bounded_by_sup_over_lambda(self, spec, lam):
        """Test that S_lambda(q-) <= sup |q-| / lambda."""
        x = np.linspace(WINDOW[0], WINDOW[1], 200_001)
        sup_negative = float(np.max(apply_transform(np.asarray(evaluate(spec, x)), "negative_part")))
        result = s_lambda(spec, lam, WINDOW, warn=False)
        assert result.value <= sup_negative / lam * (1 + 1e-9) + 1e-9

    def test_bounds_bracket_value(self, square_well):
        """Test that lower_bound <= value <= upper_bound."""
        result = s_lambda(square_well, 0.3, WINDOW)
        assert result.lower_bound <= result.value <= result.upper_bound

    def test_rejects_nonpositive_lambda(self, square_well):
        """Test that lambda <= 0 is a domain error."""
        with pytest.raises(DomainError):
            s_lambda(square_well, 0.0, WINDOW)

    def test_rejects_radial_potential(self):
        """Test that a radial potential cannot be convolved on the line."""
        with pytest.raises(UnsupportedDimensionError):
            s_lambda(PotentialSpec.coulomb(-0.1), 1.0, WINDOW)


class TestConditionI:
    """Verdicts from the lambda scan and the monotonicity argument."""

    def test_square_well_fails_via_threshold_value(self, square_well):
        """Test that Fails comes from S at lambda = m^2 exceeding 1."""
        report = check_condition_I(square_well, 1.0, [0.25, 0.5, 0.9], scan_window=WINDOW)
        assert report.verdict is Verdict.FAILS
        assert report.witness["s_lambda_at_m2"] == pytest.approx(SQUARE_WELL_S1, abs=1e-6)
        assert report.witness["lower_bound"] > 1.0

    def test_shallow_well_holds_with_witness(self):
        """Test that Holds carries the witness lambda and its upper bound."""
        shallow = PotentialSpec.square_well(depth=0.1, half_width=1.0)
        report = check_condition_I(shallow, 1.0, [0.5, 0.9], scan_window=WINDOW)
        assert report.verdict is Verdict.HOLDS
        assert 0 < report.witness["lambda_star"] < 1.0
        assert report.witness["upper_bound"] <= 1.0

    def test_zero_potential_holds(self):
        """Test that the zero potential holds with S = 0."""
        report = check_condition_I(PotentialSpec.zero(), 1.0, [0.5], scan_window=WINDOW)
        assert report.verdict is Verdict.HOLDS
        assert report.witness["s_lambda"] == 0.0

    def test_scan_table_in_witness(self, square_well):
        """Test that the witness lists every scanned lambda in order."""
        report = check_condition_I(square_well, 1.0, [0.25, 0.5], scan_window=WINDOW)
        assert [row[0] for row in report.witness["scan"]] == [0.25, 0.5]

    def test_lambda_outside_range_rejected(self, square_well):
        """Test that a grid value at m^2 is rejected."""
        with pytest.raises(DomainError):
            check_condition_I(square_well, 1.0, [0.5, 1.0], scan_window=WINDOW)

    def test_nonpositive_mass_rejected(self, square_well):
        """Test that m <= 0 is rejected."""
        with pytest.raises(DomainError):
            check_condition_I(square_well, 0.0, [0.5], scan_window=WINDOW)

    def test_parallel_scan_matches_serial(self, square_well):
        """Test that a threaded lambda scan gives the same witness as a serial one."""
        serial = check_condition_I(square_well, 1.0, [0.25, 0.5, 0.9], scan_window=WINDOW)
        threaded = check_condition_I(square_well, 1.0, [0.25, 0.5, 0.9], scan_window=WINDOW, workers=3)
        assert serial.witness == threaded.witness

    def test_default_lambda_grid(self):
        """Test that the default grid is log-spaced and then closes in on m^2."""
        grid = default_lambda_grid(2.0)
        assert grid.size == 64 + 12
        assert grid[0] == pytest.approx(1e-4)
        assert np.all(np.diff(grid) > 0)
        assert grid[-1] == pytest.approx(4.0 * (1.0 - 2.0**-12))
        assert grid[-1] < 4.0

    def test_default_lambda_grid_without_refinements(self):
        """Test that refinements=0 leaves only the log-spaced values."""
        grid = default_lambda_grid(2.0, points=8, refinements=0)
        assert grid.size == 8
        assert grid[-1] < 4.0 * 0.9

    def test_default_lambda_grid_rejects_small_mass(self):
        """Test that lambda_min >= m^2 is a domain error."""
        with pytest.raises(DomainError):
            default_lambda_grid(1e-3)

    @pytest.mark.parametrize("mass", [0.5, 1.0, 3.0])
    @pytest.mark.parametrize("half_width", [0.25, 1.0, 3.0])
    @pytest.mark.parametrize("depth", [0.5, 2.0, 6.0])
    def test_square_well_sweep_matches_closed_form(self, depth, half_width, mass):
        """Test that the verdict follows S_{m^2} = V0 (1 - exp(-m a)) / m^2 across a sweep."""
        closed_form = depth * (1.0 - math.exp(-mass * half_width)) / mass**2
        well = PotentialSpec.square_well(depth=depth, half_width=half_width)
        report = check_condition_I(well, mass, default_lambda_grid(mass, points=8), scan_window=WINDOW)
        expected = Verdict.HOLDS if closed_form < 1.0 else Verdict.FAILS
        assert report.verdict is expected
        if expected is Verdict.HOLDS:
            assert report.witness["lambda_star"] > 0.5 * mass**2
        else:
            assert report.witness["s_lambda_at_m2"] == pytest.approx(closed_form, rel=1e-6)

    def test_holds_found_close_to_m_squared(self):
        """Test that a well with S_{m^2} just below 1 is Holds, not Inconclusive."""
        well = PotentialSpec.square_well(depth=5.0, half_width=0.5)
        report = check_condition_I(well, 2.0, default_lambda_grid(2.0, points=8), scan_window=WINDOW)
        assert report.verdict is Verdict.HOLDS
        assert report.witness["upper_bound"] <= 1.0
        assert report.witness["lambda_star"] > 3.9

    @pytest.mark.slow
    def test_vnw_unit_mass_fails(self, vnw_spec):
        """Test that S at lambda = m^2 = 1 already exceeds 1 for the derived potential."""
        report = check_condition_I(vnw_spec, 1.0)
        assert report.verdict is Verdict.FAILS
        assert report.witness["s_lambda_at_m2"] == pytest.approx(1.7353, abs=1e-3)
        at_threshold = s_lambda(vnw_spec, 1.0, warn=False)
        assert abs(at_threshold.location) == pytest.approx(0.625, abs=0.13)

    @pytest.mark.slow
    def test_vnw_large_mass_holds(self, vnw_spec):
        """Test that the derived vNW potential satisfies condition I at m = 4."""
        report = check_condition_I(vnw_spec, 4.0)
        assert report.verdict is Verdict.HOLDS
        assert report.witness["lambda_star"] < 16.0


class TestSeminorms:
    """Windowed seminorms N_{alpha,delta} against closed forms for the square well."""

    def test_zero_potential_vanishes(self):
        """Test that every seminorm of the zero potential is 0."""
        query = SeminormQuery(alpha=2.0, delta=1.0, target=PotentialSpec.zero())
        assert seminorm_N(query, WINDOW) == 0.0

    def test_vnw_trend_shrinks_with_delta(self, vnw_spec):
        """Test that N_{2,delta} of the derived potential decreases along delta = 1, 1/2, 1/4, 1/8."""
        deltas = (1.0, 0.5, 0.25, 0.125)
        values = [seminorm_N(SeminormQuery(alpha=2.0, delta=d, target=vnw_spec), WINDOW) for d in deltas]
        assert all(a > b for a, b in zip(values, values[1:]))
        x = np.linspace(WINDOW[0], WINDOW[1], 200_001)
        sup_square = float(np.max(np.asarray(evaluate(vnw_spec, x)) ** 2))
        for delta, value in zip(deltas, values):
            assert value <= 2.0 * delta * sup_square * 1.01

    def test_alpha_above_dimension(self, square_well):
        """Test that N_{4,1} of the well is 25 * 2 = 50."""
        query = SeminormQuery(alpha=4.0, delta=1.0, target=square_well)
        assert seminorm_N(query, WINDOW) == pytest.approx(50.0, abs=1e-6)

    def test_abs_sqrt_transform(self, square_well):
        """Test that N_{2,1}(|q|^1/2) of the well is 5 * 2 = 10."""
        query = SeminormQuery(alpha=2.0, delta=1.0, target=square_well, transform="abs_sqrt")
        assert seminorm_N(query, WINDOW) == pytest.approx(10.0, abs=1e-6)

    def test_alpha_below_dimension(self, square_well):
        """Test that the |x|^(alpha-n) weight integrates to 2 delta^alpha / alpha."""
        query = SeminormQuery(alpha=0.5, delta=0.5, target=square_well)
        assert seminorm_N(query, WINDOW) == pytest.approx(100.0 * math.sqrt(0.5), abs=1e-5)

    def test_logarithmic_weight(self, square_well):
        """Test that the 1 - log|x| weight matches its closed-form mass."""
        query = SeminormQuery(alpha=1.0, delta=0.5, target=square_well)
        expected = 25.0 * 2 * 0.5 * (2.0 - math.log(0.5))
        assert seminorm_N(query, WINDOW) == pytest.approx(expected, abs=1e-5)

    def test_scan_reports_tail_and_location(self, square_well):
        """Test that the supremum location lies over the well and the tail is zero."""
        result = seminorm_scan(SeminormQuery(alpha=4.0, delta=1.0, target=square_well), WINDOW)
        assert result.tail_bound == 0.0
        assert abs(result.location) <= 1.0

    def test_memberships_hold_for_square_well(self, square_well):
        """Test that every II'-VI' membership holds for a bounded well."""
        reports = check_seminorm_conditions(square_well, scan_window=WINDOW)
        assert [report.condition_id for report in reports] == ["II'", "III'", "IV'", "V'", "VI'"]
        assert all(report.verdict is Verdict.HOLDS for report in reports)
        assert reports[1].witness["delta_clause"] == "holds vacuously (n = 1)"
        assert len(reports[3].witness["delta_trend"]) == 4

    def test_electric_term_membership(self, square_well):
        """Test that a zero b0 gives VI' with value 0."""
        reports = check_seminorm_conditions(square_well, b0=PotentialSpec.zero(), scan_window=WINDOW)
        assert reports[-1].witness["value"] == 0.0

    def test_other_dimensions_rejected(self, square_well):
        """Test that n != 1 is not computed."""
        with pytest.raises(UnsupportedDimensionError):
            check_seminorm_conditions(square_well, dimension=3)

    def test_radial_target_rejected(self):
        """Test that a Coulomb target cannot be restricted to n = 1."""
        with pytest.raises(UnsupportedDimensionError):
            check_seminorm_conditions(PotentialSpec.coulomb(-0.1))


class TestCoulombParameters:
    """Algebraic charge constraints."""

    def test_small_charge_satisfies_both(self):
        """Test that |e| = 0.1 satisfies both charge bounds."""
        reports = check_coulomb_parameters(-0.1)
        assert [(r.condition_id, r.verdict) for r in reports] == [
            ("II", Verdict.HOLDS),
            ("IV", Verdict.HOLDS),
        ]

    def test_charge_between_bounds(self):
        """Test that |e| = 0.2 passes II but fails the strict IV bound."""
        reports = check_coulomb_parameters(0.2)
        assert reports[0].verdict is Verdict.HOLDS
        assert reports[1].verdict is Verdict.FAILS
        assert reports[1].witness["bound"] == pytest.approx(1 / (2 * math.sqrt(17)))

    def test_only_three_dimensions(self):
        """Test that the charge predicates are only defined for n = 3."""
        with pytest.raises(UnsupportedDimensionError):
            check_coulomb_parameters(-0.1, dimension=2)


class TestSimonConditions:
    """Simon (a)-(e) for V1 = -e^2/r^2, V2 = 2Ee/r."""

    @pytest.fixture
    def grid(self):
        return Grid1D.from_spacing(1e-3, 200.0, 0.01, radial=True)

    def _reports(self, charge, energy, grid):
        v1, v2, dv2 = coulomb_simon_terms(charge, energy)
        return {r.condition_id: r for r in check_simon_conditions(v1, v2, 1.0, grid, energy, dv2)}

    def test_attractive_clause(self, grid):
        """Test that e < 0 with E > m satisfies (b) through (e)."""
        reports = self._reports(-0.1, 2.0, grid)
        for condition_id in ("SimonB", "SimonC", "SimonD", "SimonE"):
            assert reports[condition_id].verdict is Verdict.HOLDS
        assert reports["SimonC"].witness["max_abs_v1"] <= 1e-3

    def test_inner_mass_does_not_settle(self, grid):
        """Test that the r^-2 part makes the inner L2 mass grow as r_min shrinks."""
        reports = self._reports(-0.1, 2.0, grid)
        assert reports["SimonA"].verdict is Verdict.INCONCLUSIVE
        assert reports["SimonA"].witness["growth"] > 1.2

    def test_repulsive_sign_fails_d(self, grid):
        """Test that e > 0 makes V2 positive, so (d) fails beyond R0."""
        reports = self._reports(0.1, 2.0, grid)
        assert reports["SimonD"].verdict is Verdict.FAILS
        assert reports["SimonD"].witness["violating_r"] > 1.0

    def test_grid_must_reach_beyond_r0(self):
        """Test that a grid ending before R0 is rejected."""
        short = Grid1D.from_spacing(1e-3, 0.5, 0.01, radial=True)
        v1, v2, dv2 = coulomb_simon_terms(-0.1, 2.0)
        with pytest.raises(InsufficientDomainError):
            check_simon_conditions(v1, v2, 1.0, short, 2.0, dv2)
