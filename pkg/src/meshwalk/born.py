"""First-order (Born) channel weights from the potential spectrum."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np

from .bands import ChannelSet
from .lattice import Band
from .potentials import FFTGrid, ShapeFunction, spectrum

BORN_CAVEAT = (
    "Weights are phi_hat(q - q0); the overall proportionality constant of the "
    "channel amplitudes is not computed, compare relative magnitudes only."
)


@dataclass(frozen=True)
class BornWeight:
    alpha: int
    band: Band
    q: float
    transfer: float
    weight: complex
    relative: complex
    incident: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha": self.alpha,
            "band": self.band.value,
            "q": self.q,
            "transfer": self.transfer,
            "weight": [self.weight.real, self.weight.imag],
            "magnitude": abs(self.weight),
            "relative_magnitude": abs(self.relative),
            "incident": self.incident,
        }


@dataclass(frozen=True)
class BornPrediction:
    incident_q: float
    incident_band: Band
    weights: Tuple[BornWeight, ...]
    caveat: str = BORN_CAVEAT

    def find(self, alpha: int, band) -> BornWeight:
        key = (int(alpha), Band.parse(band))
        for entry in self.weights:
            if (entry.alpha, entry.band) == key:
                return entry
        raise KeyError(f"No Born weight for alpha={alpha} band={key[1].value}")

    def max_scattered_magnitude(self) -> float:
        magnitudes = [abs(entry.weight) for entry in self.weights if not entry.incident]
        return max(magnitudes, default=0.0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "incident_q": self.incident_q,
            "incident_band": self.incident_band.value,
            "caveat": self.caveat,
            "weights": [entry.to_dict() for entry in self.weights],
        }


def born_weights(
    channels: ChannelSet,
    shape: ShapeFunction,
    grid: Optional[FFTGrid] = None,
) -> BornPrediction:
    """Attach phi_hat(q_channel - q0) to every channel.

    Uses the analytic spectrum when the shape has one and the FFT estimate
    otherwise. Relative weights are scaled so the largest magnitude is 1.
    """
    transfers = np.array([channel.q - channels.q0 for channel in channels], dtype=np.float64)
    raw = np.asarray(spectrum(shape, transfers, grid), dtype=np.complex128)
    peak = float(np.max(np.abs(raw))) if raw.size else 0.0
    relative = raw / peak if peak > 0.0 else np.zeros_like(raw)

    entries = tuple(
        BornWeight(
            alpha=channel.alpha,
            band=channel.band,
            q=channel.q,
            transfer=float(transfer),
            weight=complex(weight),
            relative=complex(rel),
            incident=channel.incident,
        )
        for channel, transfer, weight, rel in zip(channels, transfers, raw, relative)
    )
    return BornPrediction(channels.q0, channels.incident_band, entries)


__all__ = ["BORN_CAVEAT", "BornWeight", "BornPrediction", "born_weights"]
