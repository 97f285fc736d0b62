"""Tests for the result types and their invariants."""

import math

import numpy as np
import pytest

from kg_spectra.data_models import (
    AbsenceRegion,
    AsymptoticInfo,
    AuditReport,
    ConditionReport,
    KGEigenResult,
    OperatorMatrix,
    SLambdaValue,
    Verdict,
)
from kg_spectra.models import Grid1D
from kg_spectra.models.kg_models import Branch


class TestConditionReport:
    """Holds and Fails must carry a witness."""

    @pytest.mark.parametrize("verdict", [Verdict.HOLDS, Verdict.FAILS])
    def test_decisive_verdict_needs_witness(self, verdict):
        """Test that Holds and Fails without a witness are rejected."""
        with pytest.raises(ValueError, match="witness|violating"):
            ConditionReport("I", verdict)

    def test_inconclusive_without_witness(self):
        """Test that Inconclusive may omit the witness."""
        report = ConditionReport("SimonB", Verdict.INCONCLUSIVE)
        assert report.as_payload()["witness"] is None

    def test_payload(self):
        """Test that the payload lists every field."""
        report = ConditionReport("II", Verdict.HOLDS, {"bound": 0.5}, {"e": -0.1}, window=(-1.0, 1.0))
        assert report.as_payload() == {
            "condition_id": "II",
            "verdict": "Holds",
            "witness": {"bound": 0.5},
            "parameters": {"e": -0.1},
            "tail_bound": None,
            "window": [-1.0, 1.0],
        }


class TestAbsenceRegion:
    """Essential spectrum and forbidden rays."""

    def test_forbidden_above_not_below_mass(self):
        """Test that a bound below the mass is rejected."""
        with pytest.raises(ValueError):
            AbsenceRegion(mass=2.0, theorem_basis="Theorem2Bound", forbidden_rays=(), forbidden_above=1.5)

    def test_rays_are_open(self):
        """Test that the threshold itself is not forbidden."""
        region = AbsenceRegion(
            mass=1.0, theorem_basis="Theorem4", forbidden_rays=((1.0, math.inf),)
        )
        assert not region.forbids(1.0)
        assert region.forbids(1.0 + 1e-9)
        assert not region.forbids(-3.0)
        assert region.essential_spectrum == ((-math.inf, -1.0), (1.0, math.inf))


class TestKGEigenResult:
    """Energy bookkeeping."""

    def test_mapping_error_and_continuum_flag(self):
        """Test that an exact map has zero error and is flagged in the continuum."""
        result = KGEigenResult(energy=2.0, branch=Branch.POSITIVE, schrodinger_value=3.0, mass=1.0)
        assert result.mapping_error == 0.0
        assert result.in_continuum

    def test_bound_state_below_threshold(self):
        """Test that |E| < m is not in the continuum."""
        result = KGEigenResult(energy=0.9, branch=Branch.POSITIVE, schrodinger_value=-0.19, mass=1.0)
        assert not result.in_continuum
        assert result.mapping_error == pytest.approx(0.0, abs=1e-15)

    def test_payload_omits_empty_fields(self):
        """Test that empty optional fields are left out of the payload."""
        payload = KGEigenResult(
            energy=-2.0, branch=Branch.NEGATIVE, schrodinger_value=3.0, mass=1.0
        ).as_payload()
        assert payload["branch"] == "negative"
        assert "caveat" not in payload
        assert "iteration_trace" not in payload
        assert payload["iterations"] == 0


class TestNumericValues:
    """Bounds on S_lambda evaluations and the matrix view."""

    def test_s_lambda_bounds(self):
        """Test that the upper bound adds every error term and the lower one subtracts quadrature."""
        value = SLambdaValue(lam=0.5, value=0.8, location=0.0, tail_bound=0.01, quadrature_error=0.001, gap_bound=0.02)
        assert value.upper_bound == pytest.approx(0.831)
        assert value.lower_bound == pytest.approx(0.799)

    def test_lower_bound_floor(self):
        """Test that the lower bound never drops below zero."""
        value = SLambdaValue(lam=0.5, value=0.0, location=0.0, tail_bound=0.0, quadrature_error=1e-9, gap_bound=0.0)
        assert value.lower_bound == 0.0

    def test_operator_matvec_and_norm(self):
        """Test that the tridiagonal matvec, norm and potential view agree."""
        grid = Grid1D(x_min=0.0, x_max=4.0, n_points=5)
        matrix = OperatorMatrix(
            diagonal=np.array([2.0, 3.0, 4.0]), off_diagonal=np.array([-1.0, -1.0]), grid=grid
        )
        assert matrix.matvec(np.ones(3)).tolist() == [1.0, 1.0, 3.0]
        assert matrix.inf_norm == 5.0
        assert matrix.potential_values.tolist() == [0.0, 1.0, 2.0]


class TestAsymptoticInfo:
    """Oscillatory tail parameters."""

    def test_decay_power_positive(self):
        """Test that a non-positive decay power is rejected."""
        with pytest.raises(ValueError):
            AsymptoticInfo(leading_amplitude=-8.0, leading_frequency=2.0, decay_power=0.0, limsup_xdV=16.0)


class TestAuditReport:
    """Audit consistency."""

    def test_consistency_follows_violations(self):
        """Test that any violation makes the audit inconsistent."""
        region = AbsenceRegion(mass=1.0, theorem_basis="Theorem3", forbidden_rays=())
        clean = AuditReport({}, (), (), region, (), {})
        dirty = AuditReport({}, (), (), region, ({"energy": 1.0},), {})
        assert clean.consistent
        assert not dirty.consistent
        assert dirty.as_payload()["consistency"]["violations"] == [{"energy": 1.0}]
