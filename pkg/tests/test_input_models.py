"""Tests for Pydantic input models.

This test suite validates the input validation logic for the subcommands,
ensuring that:
- Valid inputs are accepted and normalized correctly
- Invalid inputs raise ValidationError with descriptive messages
- Inputs build the domain objects the core operations consume
"""

import pytest
from pydantic import ValidationError

from kg_spectra.models import (
    BaseRunInput,
    CheckConditionsInput,
    CoulombInput,
    PotentialKind,
    ScanInput,
    SweepPoint,
    VerifyVnwInput,
    parse_window,
)
from kg_spectra.models.kg_models import Branch


class TestParseWindow:
    """Test suite for window parsing."""

    @pytest.mark.parametrize("raw", ["0.5,1.5", " 0.5 , 1.5 ", "[0.5,1.5]", (0.5, 1.5), [0.5, 1.5]])
    def test_accepted_forms(self, raw):
        """Test that strings and pairs give the same window."""
        assert parse_window(raw) == (0.5, 1.5)

    @pytest.mark.parametrize("raw", ["1.5,0.5", "1,1", "1,2,3", "a,b", 5, [1.0]])
    def test_rejected_forms(self, raw):
        """Test that reversed, degenerate and malformed windows are rejected."""
        with pytest.raises(ValueError):
            parse_window(raw)


class TestBaseRunInput:
    """Test suite for the shared input fields."""

    def test_defaults(self):
        """Test the default mass, format and seed."""
        model = BaseRunInput()
        assert model.mass == 1.0
        assert model.output_format == "json"
        assert model.seed == 0
        assert model.out is None

    def test_mass_must_be_positive(self):
        """Test that m <= 0 is rejected."""
        with pytest.raises(ValidationError, match="greater than 0"):
            BaseRunInput(mass=0.0)

    def test_unknown_format_rejected(self):
        """Test that only json and csv are accepted."""
        with pytest.raises(ValidationError):
            BaseRunInput(output_format="xml")

    def test_out_directory_rejected(self, tmp_path):
        """Test that an existing directory cannot be an output file."""
        with pytest.raises(ValidationError, match="must name a file"):
            BaseRunInput(out=tmp_path)

    def test_extra_fields_forbidden(self):
        """Test that misspelled flags do not pass silently."""
        with pytest.raises(ValidationError):
            BaseRunInput(mas=1.0)


class TestVerifyVnwInput:
    """Test suite for VerifyVnwInput."""

    def test_defaults_build_full_grid(self):
        """Test that the defaults give [-80, 80] at h = 0.005."""
        model = VerifyVnwInput()
        grid = model.to_grid()
        assert (grid.x_min, grid.x_max, grid.n_points) == (-80.0, 80.0, 32001)
        assert model.window == (0.5, 1.5)

    def test_window_string(self):
        """Test that the window flag accepts 'lo,hi'."""
        assert VerifyVnwInput(window="17,30").window == (17.0, 30.0)

    def test_formula_selects_kind(self):
        """Test that the formula flag picks the potential variant."""
        assert VerifyVnwInput().to_spec().kind is PotentialKind.VNW_DERIVED
        assert VerifyVnwInput(formula="printed").to_spec().kind is PotentialKind.VNW_PRINTED

    def test_params_are_scalar(self):
        """Test that the vNW problem is a scalar interaction on the line."""
        params = VerifyVnwInput(mass=2.0).to_params()
        assert params.is_scalar
        assert params.mass == 2.0

    def test_grid_without_interior_rejected(self):
        """Test that a spacing as wide as the domain is rejected."""
        with pytest.raises(ValidationError, match="no interior node"):
            VerifyVnwInput(x_min=-1.0, x_max=1.0, h=1.5)

    def test_reversed_domain_rejected(self):
        """Test that --xmin must be below --xmax."""
        with pytest.raises(ValidationError, match="--xmin"):
            VerifyVnwInput(x_min=5.0, x_max=-5.0)

    def test_unknown_formula_rejected(self):
        """Test that only derived and printed are accepted."""
        with pytest.raises(ValidationError):
            VerifyVnwInput(formula="guessed")


class TestCheckConditionsInput:
    """Test suite for CheckConditionsInput."""

    def test_square_well_spec(self):
        """Test that depth and half-width reach the potential."""
        spec = CheckConditionsInput(potential="square_well", depth=3.0, half_width=0.5).to_spec()
        assert spec.kind is PotentialKind.SQUARE_WELL
        assert spec.depth == 3.0
        assert spec.half_width == 0.5

    def test_zero_spec(self):
        """Test the zero potential."""
        assert CheckConditionsInput(potential="zero").to_spec().kind is PotentialKind.ZERO

    def test_lambda_min_below_mass_squared(self):
        """Test that lambda_min must lie below m^2."""
        with pytest.raises(ValidationError, match="lambda_min"):
            CheckConditionsInput(mass=0.01, lambda_min=1e-3)

    def test_scan_window_string(self):
        """Test that the scan window accepts 'lo,hi'."""
        assert CheckConditionsInput(scan_window="-10,10").scan_window == (-10.0, 10.0)


class TestCoulombInput:
    """Test suite for CoulombInput."""

    def test_attractive_charge_branches(self):
        """Test that e < 0 binds on the positive branch."""
        model = CoulombInput(charge=-0.1)
        assert model.bound_branch is Branch.POSITIVE
        assert model.forbidden_branch is Branch.POSITIVE

    def test_repulsive_charge_branches(self):
        """Test that e > 0 binds on the negative branch."""
        model = CoulombInput(charge=0.1)
        assert model.bound_branch is Branch.NEGATIVE
        assert model.forbidden_branch is Branch.NEGATIVE

    def test_zero_charge_has_no_bound_branch(self):
        """Test that e = 0 has no attractive branch."""
        assert CoulombInput(charge=0.0).bound_branch is None

    def test_charge_bound_enforced_by_params(self):
        """Test that |e| >= 1/(2 sqrt 17) is rejected when building the parameters."""
        model = CoulombInput(charge=-0.5)
        with pytest.raises(ValidationError, match="violates"):
            model.to_params()

    def test_radial_grid(self):
        """Test that the grid is radial and starts at r_min."""
        grid = CoulombInput(r_min=1e-3, r_max=100.0, h=0.01).to_grid()
        assert grid.radial
        assert grid.x_min == 1e-3

    def test_r0_between_radii(self):
        """Test that R0 must lie inside (r_min, r_max)."""
        with pytest.raises(ValidationError, match="r_min < r0 < r_max"):
            CoulombInput(r0=300.0)


class TestSweepPoint:
    """Test suite for SweepPoint."""

    def test_line_defaults(self):
        """Test that unset grid fields take the vNW defaults."""
        point = SweepPoint()
        assert point.resolved_window() == (0.5, 1.5)
        assert point.to_grid().n_points == 32001
        assert point.to_params().is_scalar

    def test_coulomb_defaults(self):
        """Test that a Coulomb point uses the radial defaults."""
        point = SweepPoint(interaction="coulomb", charge=0.1)
        assert point.to_grid().radial
        assert point.resolved_window() == (0.0, 20.0)
        assert point.to_params().potential.charge == 0.1

    def test_overrides(self):
        """Test that explicit h and window override the defaults."""
        point = SweepPoint(interaction="zero", h=0.05, x_min=-10.0, x_max=10.0, window="0,4")
        assert point.to_grid().n_points == 401
        assert point.resolved_window() == (0.0, 4.0)

    def test_unknown_key_rejected(self):
        """Test that sweep files cannot carry unknown keys."""
        with pytest.raises(ValidationError):
            SweepPoint(massive=True)


class TestScanInput:
    """Test suite for ScanInput."""

    def test_empty_sweep_rejected(self):
        """Test that an empty sweep is rejected."""
        with pytest.raises(ValidationError, match="sweep is empty"):
            ScanInput(points=[])

    def test_from_grid_product_order(self):
        """Test that repeated flags expand in flag order."""
        model = ScanInput.from_grid(masses=[0.5, 2.0], interactions=["zero"], spacings=[0.1, 0.05])
        assert [(p.mass, p.h) for p in model.points] == [(0.5, 0.1), (0.5, 0.05), (2.0, 0.1), (2.0, 0.05)]

    def test_from_yaml_merges_defaults(self, tmp_path):
        """Test that the defaults mapping sits under every point."""
        path = tmp_path / "sweep.yaml"
        path.write_text(
            "defaults:\n  interaction: zero\n  h: 0.05\npoints:\n  - mass: 1.0\n  - mass: 2.0\n    h: 0.1\n",
            encoding="utf-8",
        )
        model = ScanInput.from_yaml(path, workers=2)
        assert [(p.interaction, p.mass, p.h) for p in model.points] == [("zero", 1.0, 0.05), ("zero", 2.0, 0.1)]
        assert model.workers == 2

    def test_from_yaml_missing_file(self, tmp_path):
        """Test that a missing sweep file is reported."""
        with pytest.raises(FileNotFoundError):
            ScanInput.from_yaml(tmp_path / "missing.yaml")

    def test_from_yaml_wrong_shape(self, tmp_path):
        """Test that 'points' must be a list."""
        path = tmp_path / "sweep.yaml"
        path.write_text("points: 3\n", encoding="utf-8")
        with pytest.raises(ValueError, match="points"):
            ScanInput.from_yaml(path)
