"""Module-level constants for the Klein-Gordon spectral toolkit."""

import math
from pathlib import Path

# Configuration
CONFIG_PATH = Path(__file__).parent.parent / "settings.yaml"
CONFIG_ENV_VAR = "KG_SPECTRA_CONFIG"
OUTPUT_DIR_ENV_VAR = "KG_SPECTRA_OUTPUT_DIR"

# Exit codes
EXIT_OK = 0
EXIT_ACCEPTANCE_MISS = 1
EXIT_FAILURE = 2

# Reports
REPORT_SCHEMA_VERSION = "1.0"
FLOAT_DIGITS = 12

# von Neumann-Wigner asymptotics: V ~ -8 sin(2x)/x
VNW_LEADING_AMPLITUDE = -8.0
VNW_LEADING_FREQUENCY = 2.0
VNW_DECAY_POWER = 1.0
VNW_LIMSUP_XDV = 16.0
LIMSUP_CROSSCHECK_TOLERANCE = 0.5

# Printed form: V ~ -16 sin(x)/x
VNW_PRINTED_LEADING_AMPLITUDE = -16.0
VNW_PRINTED_LEADING_FREQUENCY = 1.0

# Coulomb charge bounds in dimension n
COULOMB_DIMENSION = 3
SQRT_17 = math.sqrt(17.0)

# Thresholds +-m must never carry a localized state
THRESHOLD_EXCLUSION = 1e-6
