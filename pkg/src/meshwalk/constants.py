"""Shared defaults for meshwalk simulations and artifacts."""

import math

SUMMARY_FORMAT_VERSION = "meshwalk.summary/1"

OUTPUT_DIR_ENV_VAR = "MESHWALK_OUT_DIR"
DEFAULT_OUTPUT_DIR = "meshwalk-out"

DEFAULT_OVERFLOW_GUARD = 1e12
DEFAULT_ALPHA_RANGE = (-5, 5)
DEFAULT_INCIDENT_Q = math.pi / 2

# Fraction of max|phi| that still counts as potential support.
DEFAULT_SUPPORT_FRACTION = 1e-2
# Extra sites added to the cos(beta) cone when checking separation.
DEFAULT_CONE_MARGIN = 10

# Calibrated for the start-in-tail geometry of the bundled presets.
INVISIBILITY_THRESHOLD = 1e-2

ROOT_XTOL = 1e-12
CHANNEL_FLOOR_FACTOR = 10.0


__all__ = [
    "SUMMARY_FORMAT_VERSION",
    "OUTPUT_DIR_ENV_VAR",
    "DEFAULT_OUTPUT_DIR",
    "DEFAULT_OVERFLOW_GUARD",
    "DEFAULT_ALPHA_RANGE",
    "DEFAULT_INCIDENT_Q",
    "DEFAULT_SUPPORT_FRACTION",
    "DEFAULT_CONE_MARGIN",
    "INVISIBILITY_THRESHOLD",
    "ROOT_XTOL",
    "CHANNEL_FLOOR_FACTOR",
]
