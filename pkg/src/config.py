"""
Runtime Configuration
======================
Environment-driven settings (a local .env file works the same as exported
variables) plus the numeric tolerances shared by every module.

Environment:
    GE_LOG           log level name (default INFO)
    GE_JOBS          default harness worker count (default 1)
    GE_STEP_TIMEOUT  seconds before a single observer step counts as diverged
"""

import os

from dotenv import load_dotenv

load_dotenv()


LOG_LEVEL = os.getenv("GE_LOG", "INFO").upper()
DEFAULT_JOBS = int(os.getenv("GE_JOBS", "1"))
STEP_TIMEOUT_S = float(os.getenv("GE_STEP_TIMEOUT", "60"))

# ─── Numeric tolerances ──────────────────────────────────────────────
LP_TOL = 1e-9            # support / feasibility LPs
MEMBERSHIP_TOL = 1e-9    # contains_point
ELLIPSOID_EPS = 1e-12    # regularization of flat axes
DIVERGENCE_RADIUS = 1e12 # hull radius treated as blow-up

# Sizes used by the sampled validity checks
VALIDATION_SAMPLES = 1000
