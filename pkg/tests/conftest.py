"""Shared fixtures and Hypothesis profiles."""

import os

import pytest
from hypothesis import HealthCheck, settings

from kg_spectra.models import Grid1D, KGParams, PotentialSpec, PureElectric, PureScalar

settings.register_profile(
    "default",
    max_examples=100,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(autouse=True)
def output_dir(tmp_path, monkeypatch):
    """Send reports written without --out into a temporary directory."""
    target = tmp_path / "results"
    monkeypatch.setenv("KG_SPECTRA_OUTPUT_DIR", str(target))
    return target


@pytest.fixture
def vnw_spec():
    return PotentialSpec.vnw_derived()


@pytest.fixture
def small_line_grid():
    """Reduced vNW grid: [-40, 40] at h = 0.02."""
    return Grid1D.from_spacing(-40.0, 40.0, 0.02)


@pytest.fixture
def square_well():
    return PotentialSpec.square_well(depth=5.0, half_width=1.0)


@pytest.fixture
def vnw_params(vnw_spec):
    return KGParams(mass=1.0, interaction=PureScalar(potential=vnw_spec))


@pytest.fixture
def coulomb_params():
    return KGParams(
        mass=1.0, dimension=3, interaction=PureElectric(potential=PotentialSpec.coulomb(-0.1))
    )


@pytest.fixture
def small_radial_grid():
    """Reduced radial grid: [1e-3, 100] at h = 0.01."""
    return Grid1D.from_spacing(1e-3, 100.0, 0.01, radial=True)
