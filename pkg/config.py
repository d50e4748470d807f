"""
Configuration Settings
Global settings for file paths, size limits, solver thresholds and trial counts
"""

import os
from pathlib import Path

# ==========================================
# FILE PATHS
# ==========================================
BASE_DIR = Path(__file__).parent
DATA_DIR = BASE_DIR / "data"
FIXTURE_DIR = DATA_DIR / "fixtures"
OUTPUT_DIR = BASE_DIR / "output"
LOG_DIR = BASE_DIR / "logs"

# Create directories if they don't exist
for directory in [OUTPUT_DIR, LOG_DIR]:
    directory.mkdir(parents=True, exist_ok=True)

# Optional lookup table of irreducible moduli ("p,m" -> coefficients)
CACHE_DIR = os.getenv("WITTCHECK_CACHE_DIR")
IRREDUCIBLE_CACHE_FILE = "irreducibles.json"

# ==========================================
# SIZE LIMITS
# ==========================================
# Largest n*p^n for which ad matrices and derivation systems are materialized
DIM_CAP = 128

# Fields up to this order get log/exp tables; larger ones multiply polynomials
FIELD_TABLE_LIMIT = 1 << 16

# Largest number of algebra elements an exhaustive map check may enumerate
FULL_ENUMERATION_LIMIT = 256

# ==========================================
# EXACT LINEAR ALGEBRA
# ==========================================
# Sparse elimination is used when both conditions hold
SPARSE_DENSITY_THRESHOLD = 0.10
SPARSE_MIN_COLUMNS = 500

# ==========================================
# RANDOMIZED CHECKS
# ==========================================
DEFAULT_SEED = 20240607

RANDOM_REGULAR_VECTORS = 20   # regular vectors per centralizer check
ROUNDTRIP_TRIALS = 100        # random inner elements per determining-pair check
PROPERTY_TRIALS = 1000        # cases per property suite
DELTA_SAMPLE_SIZE = 50        # sampled elements for the support check
PHI_TRIALS = 3                # change-of-variables vectors per check

# Derivation re-check: every basis element up to this dimension, a seeded sample above it
LEIBNIZ_RECHECK_FULL_DIM = 60
LEIBNIZ_RECHECK_SAMPLE = 12

# Show tqdm bars for long randomized loops
SHOW_PROGRESS = False

# ==========================================
# CHECK RUNNER
# ==========================================
# Canonical output order of `verify`; "all" expands to everything but "properties"
CHECK_ORDER = [
    'der-inn',
    'script-d',
    'centralizers',
    'torus-cartan',
    'graded-vanishing',
    'determining-pair',
    'counterexample',
    'roots',
    'change-of-variables',
    'delta-support',
    'properties',
]

DEFAULT_CHECKS = [c for c in CHECK_ORDER if c != 'properties']

# Exit code contract of the command line
EXIT_CODES = {
    'pass': 0,
    'fail': 1,
    'usage': 2,
    'infeasible': 3,
}
