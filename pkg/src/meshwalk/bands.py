"""Static and moving-frame band structure, and scattering-channel enumeration."""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, replace
from typing import Any, Dict, Iterator, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import bisect

from .constants import DEFAULT_ALPHA_RANGE, ROOT_XTOL
from .lattice import Band, band_energy
from .potentials import ShapeFunction, spectrum

logger = logging.getLogger(__name__)

BandLike = Union[Band, str, int]


class ChannelSearchError(RuntimeError):
    """No sign change could be established for a channel root."""


@dataclass(frozen=True)
class MovingFrameParams:
    beta: float
    v: float

    def __post_init__(self) -> None:
        beta, v = float(self.beta), float(self.v)
        if not math.isfinite(beta) or not 0.0 < beta < math.pi:
            raise ValueError(f"Coupling angle beta must lie in (0, pi), got {self.beta!r}")
        if not math.isfinite(v):
            raise ValueError(f"Drift speed must be finite, got {self.v!r}")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "v", v)

    @property
    def max_group_velocity(self) -> float:
        return abs(math.cos(self.beta))

    @property
    def reflectionless(self) -> bool:
        """Quasi-energies are strictly increasing (v > cos beta)."""
        return self.v > self.max_group_velocity

    def require_reflectionless(self) -> None:
        if not self.reflectionless:
            raise ValueError(
                f"Channel roots are not unique: drift speed v={self.v:g} must exceed "
                f"cos(beta)={self.max_group_velocity:.6g}"
            )


def quasi_energy(params: MovingFrameParams, q: ArrayLike, band: BandLike = Band.PLUS):
    """eps_pm(q) = q v pm acos(cos beta cos q), principal acos branch."""
    result = np.asarray(q, dtype=np.float64) * params.v + np.asarray(band_energy(params.beta, q, band))
    return float(result) if result.ndim == 0 else result


def group_velocity(beta: float, q: ArrayLike, band: BandLike = Band.PLUS):
    """dE_pm/dq = pm cos b sin q / sqrt(1 - cos^2 b cos^2 q)."""
    sign = Band.parse(band).sign
    c = math.cos(beta)
    qs = np.asarray(q, dtype=np.float64)
    result = sign * c * np.sin(qs) / np.sqrt(1.0 - (c * np.cos(qs)) ** 2)
    return float(result) if result.ndim == 0 else result


def moving_bloch_amplitudes(
    params: MovingFrameParams,
    q: float,
    band: BandLike = Band.PLUS,
) -> Tuple[complex, complex]:
    """(F, G) = (i sin b e^{iq(1-v)}, e^{-i eps} - cos b e^{iq(1-v)})."""
    eps = quasi_energy(params, q, band)
    phase = cmath.exp(1j * q * (1.0 - params.v))
    return 1j * math.sin(params.beta) * phase, cmath.exp(-1j * eps) - math.cos(params.beta) * phase


@dataclass(frozen=True)
class Channel:
    alpha: int
    band: Band
    q: float
    bloch: Tuple[complex, complex]
    incident: bool = False
    born_weight: Optional[complex] = None

    @property
    def key(self) -> Tuple[int, str]:
        return self.alpha, self.band.value

    def with_born_weight(self, weight: complex) -> "Channel":
        return replace(self, born_weight=complex(weight))

    def to_dict(self) -> Dict[str, Any]:
        weight = self.born_weight
        return {
            "alpha": self.alpha,
            "band": self.band.value,
            "q": self.q,
            "incident": self.incident,
            "bloch": [[z.real, z.imag] for z in self.bloch],
            "born_weight": None if weight is None else [weight.real, weight.imag],
            "born_magnitude": None if weight is None else abs(weight),
        }


@dataclass(frozen=True)
class ChannelSet:
    params: MovingFrameParams
    q0: float
    eps0: float
    incident_band: Band
    channels: Tuple[Channel, ...]

    def __iter__(self) -> Iterator[Channel]:
        return iter(self.channels)

    def __len__(self) -> int:
        return len(self.channels)

    def find(self, alpha: int, band: BandLike) -> Channel:
        key = (int(alpha), Band.parse(band))
        for channel in self.channels:
            if (channel.alpha, channel.band) == key:
                return channel
        raise KeyError(f"No channel alpha={alpha} band={Band.parse(band).value}")

    @property
    def incident(self) -> Channel:
        return self.find(0, self.incident_band)

    def scattered(self) -> Tuple[Channel, ...]:
        return tuple(channel for channel in self.channels if not channel.incident)

    def residual(self, channel: Channel) -> float:
        """|eps_band(q) - eps0 - 2 pi alpha| for one enumerated channel."""
        target = self.eps0 + 2.0 * math.pi * channel.alpha
        return abs(quasi_energy(self.params, channel.q, channel.band) - target)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "beta": self.params.beta,
            "v": self.params.v,
            "q0": self.q0,
            "eps0": self.eps0,
            "incident_band": self.incident_band.value,
            "channels": [channel.to_dict() for channel in self.channels],
        }


def _search_bracket(params: MovingFrameParams, target: float) -> Tuple[float, float]:
    # |acos| <= pi pins the root between these bounds
    return (target - math.pi) / params.v - 1.0, (target + math.pi) / params.v + 1.0


def _solve_channel(params: MovingFrameParams, target: float, band: Band, alpha: int) -> float:
    lo, hi = _search_bracket(params, target)

    def mismatch(q: float) -> float:
        return quasi_energy(params, q, band) - target

    f_lo, f_hi = mismatch(lo), mismatch(hi)
    if not (f_lo < 0.0 < f_hi):
        raise ChannelSearchError(
            f"Could not bracket channel alpha={alpha} band={band.value} "
            f"on [{lo:.6g}, {hi:.6g}] (mismatch {f_lo:.3g}, {f_hi:.3g})"
        )
    return float(bisect(mismatch, lo, hi, xtol=ROOT_XTOL, maxiter=200))


def enumerate_channels(
    params: MovingFrameParams,
    q0: float,
    alpha_range: Sequence[int] = DEFAULT_ALPHA_RANGE,
    incident_band: BandLike = Band.PLUS,
    shape: Optional[ShapeFunction] = None,
) -> ChannelSet:
    """All real channel roots eps_band(q) = eps0 + 2 pi alpha for alpha in ``alpha_range``.

    ``alpha_range`` is an inclusive (lo, hi) pair. With ``shape`` given, each
    channel carries the Born weight phi_hat(q - q0).
    """
    params.require_reflectionless()
    q0 = float(q0)
    if not -math.pi <= q0 <= math.pi:
        raise ValueError(f"q0 must lie in the first Brillouin zone [-pi, pi], got {q0}")
    alpha_lo, alpha_hi = (int(bound) for bound in alpha_range)
    if alpha_hi < alpha_lo:
        raise ValueError(f"Empty alpha range {alpha_range!r}")
    incident = Band.parse(incident_band)
    eps0 = quasi_energy(params, q0, incident)

    channels = []
    for alpha in range(alpha_lo, alpha_hi + 1):
        for band in (Band.PLUS, Band.MINUS):
            is_incident = alpha == 0 and band is incident
            if is_incident:
                q = q0
            else:
                q = _solve_channel(params, eps0 + 2.0 * math.pi * alpha, band, alpha)
            channels.append(
                Channel(alpha, band, q, moving_bloch_amplitudes(params, q, band), incident=is_incident)
            )

    if shape is not None:
        transfers = np.array([channel.q - q0 for channel in channels])
        weights = spectrum(shape, transfers)
        channels = [channel.with_born_weight(w) for channel, w in zip(channels, weights)]

    logger.debug(
        "Enumerated scattering channels",
        extra={"beta": params.beta, "v": params.v, "q0": q0, "count": len(channels)},
    )
    return ChannelSet(params, q0, eps0, incident, tuple(channels))


@dataclass(frozen=True, eq=False)
class BandTable:
    """Lab- and moving-frame band data on a q grid."""

    params: MovingFrameParams
    q: NDArray[np.float64]
    energy_plus: NDArray[np.float64]
    energy_minus: NDArray[np.float64]
    eps_plus: NDArray[np.float64]
    eps_minus: NDArray[np.float64]
    vg_plus: NDArray[np.float64]
    vg_minus: NDArray[np.float64]

    columns = ("q", "E_plus", "E_minus", "eps_plus", "eps_minus", "vg_plus", "vg_minus")

    def rows(self) -> Iterator[Tuple[float, ...]]:
        yield from zip(
            self.q,
            self.energy_plus,
            self.energy_minus,
            self.eps_plus,
            self.eps_minus,
            self.vg_plus,
            self.vg_minus,
        )


def default_q_grid(points: int = 512) -> NDArray[np.float64]:
    """``points`` equally spaced values on (-pi, pi]."""
    if points < 2:
        raise ValueError(f"points must be >= 2, got {points}")
    return -math.pi + 2.0 * math.pi * np.arange(1, points + 1) / points


def band_table(params: MovingFrameParams, q_grid: Optional[ArrayLike] = None) -> BandTable:
    q = default_q_grid() if q_grid is None else np.asarray(q_grid, dtype=np.float64).reshape(-1)
    return BandTable(
        params=params,
        q=q,
        energy_plus=np.asarray(band_energy(params.beta, q, Band.PLUS)),
        energy_minus=np.asarray(band_energy(params.beta, q, Band.MINUS)),
        eps_plus=np.asarray(quasi_energy(params, q, Band.PLUS)),
        eps_minus=np.asarray(quasi_energy(params, q, Band.MINUS)),
        vg_plus=np.asarray(group_velocity(params.beta, q, Band.PLUS)),
        vg_minus=np.asarray(group_velocity(params.beta, q, Band.MINUS)),
    )


__all__ = [
    "ChannelSearchError",
    "MovingFrameParams",
    "quasi_energy",
    "group_velocity",
    "moving_bloch_amplitudes",
    "band_energy",
    "Channel",
    "ChannelSet",
    "enumerate_channels",
    "BandTable",
    "default_q_grid",
    "band_table",
]
