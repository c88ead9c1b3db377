"""Global numerical tolerance, overridable through the KC_TOL env var."""

import os

DEFAULT_TOL = float(os.environ.get("KC_TOL", "1e-9"))
