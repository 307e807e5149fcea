"""Bundled scenarios: the band diagram and the drifting-potential experiments."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

from .config import ExperimentFile, parse_config

SLOW_DRIFT_BETA = 0.95 * math.pi / 2
POLE_AMPLITUDE = (0.0, -1.0)
POLE_POSITION = (90.0, 1.0)
POLE_ORDER = 2
SLOW_DRIFT = 0.2
FAST_DRIFT = 0.8
RANDOM_POLE_COUNT = 25
RANDOM_POLE_BASE = (90.0, 1.0)
RANDOM_AMPLITUDE_RANGE = (0.0, 0.5)
SCATTERING_STEPS = 1500
RANDOM_SCATTERING_STEPS = 2000
RECORD_STRIDE = 10
RECORD_SITES = (-200, 200)


@dataclass(frozen=True)
class BandPreset:
    """Parameters of the quasi-energy diagram."""

    beta: float
    v: float
    q0: float
    alpha_range: Tuple[int, int]

    def to_dict(self) -> Dict[str, Any]:
        return {"beta": self.beta, "v": self.v, "q0": self.q0, "alpha": list(self.alpha_range)}


FIG2 = BandPreset(beta=math.pi / 3, v=0.8, q0=0.5, alpha_range=(-3, 3))

SCATTERING_PRESETS = ("fig3a", "fig3b", "fig3c", "fig4")
PRESET_NAMES = ("fig2",) + SCATTERING_PRESETS


def _single_pole(kind: str) -> Dict[str, Any]:
    return {
        "kind": kind,
        "poles": [
            {"amplitude": list(POLE_AMPLITUDE), "position": list(POLE_POSITION), "order": POLE_ORDER}
        ],
    }


def _scattering_document(name: str, drift: float, potential: Dict[str, Any], steps: int, seed: int) -> Dict[str, Any]:
    return {
        "name": name,
        "coin": {"beta": SLOW_DRIFT_BETA},
        "drift": drift,
        "potential": potential,
        "excitation": {"kind": "delta", "site": 0},
        "steps": steps,
        "window": "auto",
        "record": {"stride": RECORD_STRIDE, "sites": list(RECORD_SITES)},
        "seed": seed,
    }


def scattering_preset(name: str, seed: int = 0, steps: Optional[int] = None) -> ExperimentFile:
    """Experiment document for one of ``SCATTERING_PRESETS``."""
    if name == "fig3a":
        document = _scattering_document(name, SLOW_DRIFT, _single_pole("kk"), SCATTERING_STEPS, seed)
    elif name == "fig3b":
        document = _scattering_document(name, FAST_DRIFT, _single_pole("kk"), SCATTERING_STEPS, seed)
    elif name == "fig3c":
        document = _scattering_document(name, SLOW_DRIFT, _single_pole("real_kk"), SCATTERING_STEPS, seed)
    elif name == "fig4":
        potential = {
            "kind": "random_kk",
            "count": RANDOM_POLE_COUNT,
            "base": list(RANDOM_POLE_BASE),
            "amplitude_range": list(RANDOM_AMPLITUDE_RANGE),
            "order": POLE_ORDER,
        }
        document = _scattering_document(name, SLOW_DRIFT, potential, RANDOM_SCATTERING_STEPS, seed)
    else:
        raise KeyError(f"Unknown preset {name!r}. Available: {', '.join(PRESET_NAMES)}")
    if steps is not None:
        document["steps"] = steps
    return parse_config(document, f"preset {name}")


__all__ = [
    "SLOW_DRIFT_BETA",
    "SLOW_DRIFT",
    "FAST_DRIFT",
    "BandPreset",
    "FIG2",
    "SCATTERING_PRESETS",
    "PRESET_NAMES",
    "scattering_preset",
]
