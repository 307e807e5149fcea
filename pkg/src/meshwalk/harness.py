"""Paired simulations (potential on / potential off) and their analysis.

A paired run evolves the same excitation twice in lockstep, once through the
drifting potential and once through the clean lattice, and records

    P_n^m    = |u|^2 + |v|^2                      (potential run)
    Pref_n^m = |u_ref|^2 + |v_ref|^2              (clean run)
    Q_n^m    = |u - u_ref|^2 + |v - v_ref|^2

together with the scalar residual r(m) = sum_n Q_n^m / sum_n Pref_n^m.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, ClassVar, Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

import numpy as np
from numpy.typing import NDArray
from scipy.signal import windows

from .bands import ChannelSet, MovingFrameParams, enumerate_channels, moving_bloch_amplitudes
from .born import BornPrediction, born_weights
from .constants import (
    CHANNEL_FLOOR_FACTOR,
    DEFAULT_ALPHA_RANGE,
    DEFAULT_CONE_MARGIN,
    DEFAULT_INCIDENT_Q,
    DEFAULT_OVERFLOW_GUARD,
    DEFAULT_SUPPORT_FRACTION,
)
from .lattice import (
    ZERO_POTENTIAL,
    Band,
    CoinConfig,
    LatticeState,
    PotentialField,
    check_overflow,
    plane_wave,
    step,
    touches_edge,
    warn_edge,
)
from .potentials import DriftingPotential, shape_support

logger = logging.getLogger(__name__)

ENVELOPE_CUTOFF = 1e-16
MIN_PACKET_WIDTH = 2.0
SPECTRAL_GRID_POINTS = 256
MAP_NAMES = ("P", "Q", "Pref")
FIELD_NAMES = ("u", "v")


class IncompleteScatteringError(RuntimeError):
    """The potential support has not drifted past the excitation by the final step."""


def packet_reach(width: float, cutoff: float = ENVELOPE_CUTOFF) -> int:
    """Distance from the centre at which the Gaussian envelope drops below ``cutoff``."""
    return int(math.ceil(width * math.sqrt(2.0 * math.log(1.0 / cutoff))))


def make_wavepacket(
    coin: CoinConfig,
    q_carrier: float,
    width: float,
    center: int = 0,
    band: Union[Band, str] = Band.PLUS,
    window: Optional[Tuple[int, int]] = None,
) -> LatticeState:
    """Gaussian-enveloped Bloch wave with unit total power.

    Envelope values below 1e-16 are set to zero so the packet has a finite
    support of about 8.6 widths on either side of ``center``.
    """
    if not width >= MIN_PACKET_WIDTH:
        raise ValueError(
            f"Wave packet width must be >= {MIN_PACKET_WIDTH:g} sites, got {width!r}; "
            "narrower envelopes leak outside the Brillouin zone"
        )
    if abs(q_carrier) > math.pi:
        raise ValueError(f"Carrier wavenumber must satisfy |q| <= pi, got {q_carrier}")

    reach = packet_reach(width)
    n_lo, n_hi = window if window is not None else (center - reach, center + reach)
    sites = np.arange(n_lo, n_hi + 1)
    envelope = np.exp(-((sites - center) ** 2) / (2.0 * width ** 2))
    envelope[envelope < ENVELOPE_CUTOFF] = 0.0

    state = plane_wave(coin, q_carrier, band, n_lo, n_hi, envelope)
    power = state.power()
    if power == 0.0:
        raise ValueError(f"Window [{n_lo}, {n_hi}] does not overlap the packet centred at {center}")
    return state.scaled(1.0 / math.sqrt(power))


@dataclass(frozen=True)
class DeltaExcitation:
    """Single pulse u_n = u, v_n = v at ``site``."""

    kind: ClassVar[str] = "delta"

    site: int = 0
    u: complex = 1.0
    v: complex = 1.0

    @property
    def carrier(self) -> Optional[float]:
        return None

    @property
    def band(self) -> Band:
        return Band.PLUS

    def extent(self) -> Tuple[int, int]:
        return self.site, self.site

    def bulk(self, fraction: float) -> Tuple[int, int]:
        return self.site, self.site

    def build(self, coin: CoinConfig, window: Tuple[int, int]) -> LatticeState:
        return LatticeState.delta(self.site, window[0], window[1], self.u, self.v)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "site": self.site}


@dataclass(frozen=True)
class WavePacketExcitation:
    kind: ClassVar[str] = "wavepacket"

    q: float
    width: float
    center: int = 0
    band: Band = Band.PLUS

    def __post_init__(self) -> None:
        object.__setattr__(self, "band", Band.parse(self.band))
        if not self.width >= MIN_PACKET_WIDTH:
            raise ValueError(f"Wave packet width must be >= {MIN_PACKET_WIDTH:g}, got {self.width!r}")
        if abs(self.q) > math.pi:
            raise ValueError(f"Carrier wavenumber must satisfy |q| <= pi, got {self.q}")

    @property
    def carrier(self) -> Optional[float]:
        return self.q

    def extent(self) -> Tuple[int, int]:
        reach = packet_reach(self.width)
        return self.center - reach, self.center + reach

    def bulk(self, fraction: float) -> Tuple[int, int]:
        """Sites where the envelope exceeds ``fraction`` of its peak."""
        half = self.width * math.sqrt(2.0 * math.log(1.0 / fraction))
        return int(math.floor(self.center - half)), int(math.ceil(self.center + half))

    def build(self, coin: CoinConfig, window: Tuple[int, int]) -> LatticeState:
        return make_wavepacket(coin, self.q, self.width, self.center, self.band, window)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "q": self.q,
            "width": self.width,
            "center": self.center,
            "band": self.band.value,
        }


Excitation = Union[DeltaExcitation, WavePacketExcitation]


@dataclass(frozen=True)
class RecordConfig:
    """Which space-time maps to keep and how densely."""

    maps: Tuple[str, ...] = MAP_NAMES
    fields: bool = False
    stride: int = 1
    sites: Optional[Tuple[int, int]] = None

    def __post_init__(self) -> None:
        maps = tuple(self.maps)
        unknown = sorted(set(maps) - set(MAP_NAMES))
        if unknown:
            raise ValueError(f"Unknown map names {unknown}; expected a subset of {list(MAP_NAMES)}")
        if int(self.stride) < 1:
            raise ValueError(f"Record stride must be >= 1, got {self.stride}")
        if self.sites is not None and self.sites[1] < self.sites[0]:
            raise ValueError(f"Empty record site range {self.sites!r}")
        object.__setattr__(self, "maps", maps)
        object.__setattr__(self, "stride", int(self.stride))


def auto_window(support: Tuple[int, int], steps: int) -> Tuple[int, int]:
    """Window that contains the full light cone |n - n0| <= m of the excitation."""
    return support[0] - steps - 2, support[1] + steps + 2


@dataclass(frozen=True)
class ExperimentConfig:
    coin: CoinConfig
    potential: Optional[DriftingPotential]
    steps: int
    excitation: Excitation = field(default_factory=DeltaExcitation)
    window: Optional[Tuple[int, int]] = None
    record: RecordConfig = field(default_factory=RecordConfig)
    support_fraction: float = DEFAULT_SUPPORT_FRACTION
    cone_margin: float = DEFAULT_CONE_MARGIN
    require_separation: bool = True
    overflow_guard: float = DEFAULT_OVERFLOW_GUARD
    q0: Optional[float] = None
    alpha_range: Tuple[int, int] = DEFAULT_ALPHA_RANGE
    analyze_channels: bool = True
    name: str = "custom"

    def __post_init__(self) -> None:
        if int(self.steps) < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        object.__setattr__(self, "steps", int(self.steps))
        if not 0.0 < self.support_fraction < 1.0:
            raise ValueError(f"support_fraction must lie in (0, 1), got {self.support_fraction}")
        if self.cone_margin < 0:
            raise ValueError(f"cone_margin must be >= 0, got {self.cone_margin}")
        if not self.overflow_guard > 0:
            raise ValueError(f"overflow_guard must be positive, got {self.overflow_guard}")
        if self.window is not None and self.window[1] < self.window[0]:
            raise ValueError(f"Empty window {self.window!r}")

    @property
    def potential_field(self) -> PotentialField:
        return self.potential if self.potential is not None else ZERO_POTENTIAL

    @property
    def drift_speed(self) -> float:
        return self.potential.drift_speed if self.potential is not None else 0.0

    @property
    def incident_q(self) -> float:
        if self.q0 is not None:
            return float(self.q0)
        carrier = self.excitation.carrier
        return carrier if carrier is not None else DEFAULT_INCIDENT_Q

    @property
    def incident_band(self) -> Band:
        return self.excitation.band

    def resolved_window(self) -> Tuple[int, int]:
        cone = auto_window(self.excitation.extent(), self.steps)
        if self.window is None:
            return cone
        if self.window[0] > cone[0] or self.window[1] < cone[1]:
            logger.warning(
                "Explicit window is narrower than the light cone; amplitudes will leave the window",
                extra={"window": list(self.window), "light_cone": list(cone)},
            )
        return self.window


@dataclass(frozen=True, eq=False)
class SpaceTimeMap:
    """Values on a (step, site) grid; rows are steps, columns are sites."""

    name: str
    steps: NDArray[np.int64]
    sites: NDArray[np.int64]
    values: NDArray[Any]

    def __post_init__(self) -> None:
        steps = np.asarray(self.steps, dtype=np.int64).reshape(-1)
        sites = np.asarray(self.sites, dtype=np.int64).reshape(-1)
        values = np.asarray(self.values)
        if values.shape != (steps.size, sites.size):
            raise ValueError(
                f"Map values have shape {values.shape}, expected {(steps.size, sites.size)}"
            )
        if values.size == 0:
            raise ValueError("SpaceTimeMap must not be empty")
        object.__setattr__(self, "steps", steps)
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "values", values)

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)

    def row(self, m: int) -> NDArray[Any]:
        index = np.flatnonzero(self.steps == m)
        if index.size == 0:
            raise KeyError(f"Step {m} was not recorded in map {self.name}")
        return self.values[int(index[0])]

    def at(self, m: int, n: int):
        column = np.flatnonzero(self.sites == n)
        if column.size == 0:
            raise KeyError(f"Site {n} was not recorded in map {self.name}")
        return self.row(m)[int(column[0])]

    def items(self) -> Iterator[Tuple[int, int, Any]]:
        """(m, n, value) in lexicographic (m, n) order."""
        for i, m in enumerate(self.steps):
            for j, n in enumerate(self.sites):
                yield int(m), int(n), self.values[i, j]


class _MapRecorder:
    def __init__(self, record: RecordConfig, origin: int, size: int, final_step: int) -> None:
        lo, hi = origin, origin + size - 1
        if record.sites is not None:
            lo, hi = max(lo, record.sites[0]), min(hi, record.sites[1])
            if hi < lo:
                raise ValueError(
                    f"Record site range {record.sites!r} does not intersect the window "
                    f"[{origin}, {origin + size - 1}]"
                )
        self._columns = slice(lo - origin, hi - origin + 1)
        self._sites = np.arange(lo, hi + 1)
        self._stride = record.stride
        self._final_step = final_step
        names = list(record.maps) + (list(FIELD_NAMES) if record.fields else [])
        self._rows: Dict[str, List[NDArray[Any]]] = {name: [] for name in names}
        self._steps: List[int] = []

    def capture(self, current: LatticeState, reference: LatticeState) -> None:
        m = current.step
        if m % self._stride and m != self._final_step:
            return
        cols = self._columns
        self._steps.append(m)
        rows = self._rows
        if "P" in rows:
            rows["P"].append(current.site_power()[cols])
        if "Pref" in rows:
            rows["Pref"].append(reference.site_power()[cols])
        if "Q" in rows:
            du = current.u[cols] - reference.u[cols]
            dv = current.v[cols] - reference.v[cols]
            rows["Q"].append(np.abs(du) ** 2 + np.abs(dv) ** 2)
        if "u" in rows:
            rows["u"].append(current.u[cols].copy())
            rows["v"].append(current.v[cols].copy())

    def build(self) -> Dict[str, SpaceTimeMap]:
        steps = np.asarray(self._steps, dtype=np.int64)
        return {
            name: SpaceTimeMap(name, steps, self._sites, np.vstack(rows))
            for name, rows in self._rows.items()
        }


def _residual(current: LatticeState, reference: LatticeState) -> float:
    difference = np.abs(current.u - reference.u) ** 2 + np.abs(current.v - reference.v) ** 2
    reference_power = reference.power()
    if reference_power == 0.0:
        return 0.0
    return float(np.sum(difference) / reference_power)


@dataclass(frozen=True)
class SeparationReport:
    """Where the potential support sits relative to the excitation at the final step."""

    potential_support: Optional[Tuple[float, float]]
    excitation_front: float
    separated: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "potential_support": None if self.potential_support is None else list(self.potential_support),
            "excitation_front": self.excitation_front,
            "separated": self.separated,
        }


def check_separation(config: ExperimentConfig) -> SeparationReport:
    """Geometric test that the scattering event is over at step ``config.steps``.

    The potential support (|phi| > support_fraction * max|phi|) drifts left by
    v * M sites. The excitation's left front is its initial bulk edge moved by
    cos(beta) * M plus ``cone_margin`` sites.
    """
    steps = config.steps
    bulk_lo = config.excitation.bulk(config.support_fraction)[0]
    front = bulk_lo - config.coin.max_group_velocity * steps - config.cone_margin
    if config.potential is None:
        return SeparationReport(None, front, True)
    support = shape_support(config.potential.shape, config.support_fraction)
    if support is None:
        return SeparationReport(None, front, True)
    shift = config.potential.drift_speed * steps
    lo, hi = support[0] - shift, support[1] - shift
    return SeparationReport((lo, hi), front, hi < front)


@dataclass(frozen=True)
class MeasuredChannel:
    alpha: int
    band: Band
    q: float
    lattice_k: float
    amplitude: Optional[float]
    raw_amplitude: Optional[float]
    resolved: bool
    incident: bool = False
    floor: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha": self.alpha,
            "band": self.band.value,
            "q": self.q,
            "lattice_k": self.lattice_k,
            "amplitude": self.amplitude,
            "raw_amplitude": self.raw_amplitude,
            "floor": self.floor,
            "resolved": self.resolved,
            "incident": self.incident,
        }


@dataclass(frozen=True)
class ChannelMeasurement:
    channels: Tuple[MeasuredChannel, ...]
    noise_floor: float
    normalization: float
    window: Tuple[int, int]

    def find(self, alpha: int, band) -> MeasuredChannel:
        key = (int(alpha), Band.parse(band))
        for channel in self.channels:
            if (channel.alpha, channel.band) == key:
                return channel
        raise KeyError(f"No measured channel alpha={alpha} band={key[1].value}")

    def max_scattered(self) -> float:
        values = [
            channel.amplitude
            for channel in self.channels
            if channel.resolved and not channel.incident and channel.amplitude is not None
        ]
        return max(values, default=0.0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "noise_floor": self.noise_floor,
            "normalization": self.normalization,
            "window": list(self.window),
            "channels": [channel.to_dict() for channel in self.channels],
        }


@dataclass(frozen=True, eq=False)
class ExperimentResult:
    maps: Mapping[str, SpaceTimeMap]
    residual_steps: NDArray[np.int64]
    residual_values: NDArray[np.float64]
    final_state: LatticeState
    reference_state: LatticeState
    runtime_seconds: float = 0.0
    config: Optional[ExperimentConfig] = None
    separation: Optional[SeparationReport] = None
    channels: Optional[ChannelSet] = None
    born: Optional[BornPrediction] = None
    measurement: Optional[ChannelMeasurement] = None

    @property
    def P(self) -> Optional[SpaceTimeMap]:
        return self.maps.get("P")

    @property
    def Q(self) -> Optional[SpaceTimeMap]:
        return self.maps.get("Q")

    @property
    def Pref(self) -> Optional[SpaceTimeMap]:
        return self.maps.get("Pref")

    @property
    def final_residual(self) -> float:
        return float(self.residual_values[-1])


def simulate_pair(
    initial: LatticeState,
    coin: CoinConfig,
    potential: Optional[PotentialField],
    steps: int,
    record: Optional[RecordConfig] = None,
    *,
    overflow_guard: float = DEFAULT_OVERFLOW_GUARD,
) -> ExperimentResult:
    """Evolve ``initial`` with and without ``potential`` in lockstep."""
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    active = potential if potential is not None else ZERO_POTENTIAL
    recorder = _MapRecorder(record or RecordConfig(), initial.origin, initial.size, initial.step + steps)

    current = reference = initial
    residual_steps = [initial.step]
    residual_values = [0.0]
    recorder.capture(current, reference)

    edge_reported = False
    for _ in range(steps):
        if not edge_reported and (touches_edge(current) or touches_edge(reference)):
            warn_edge(current)
            edge_reported = True
        current = step(current, coin, active)
        check_overflow(current, overflow_guard)
        reference = step(reference, coin)
        residual_steps.append(current.step)
        residual_values.append(_residual(current, reference))
        recorder.capture(current, reference)

    return ExperimentResult(
        maps=recorder.build(),
        residual_steps=np.asarray(residual_steps, dtype=np.int64),
        residual_values=np.asarray(residual_values, dtype=np.float64),
        final_state=current,
        reference_state=reference,
    )


def residual_series(result: ExperimentResult) -> List[Tuple[int, float]]:
    return [(int(m), float(r)) for m, r in zip(result.residual_steps, result.residual_values)]


def wrap_wavenumber(q: float) -> float:
    """Lattice wavenumber of e^{iqn}, folded into (-pi, pi]."""
    return math.pi - (math.pi - q) % (2.0 * math.pi)


def _analysis_window(result: ExperimentResult, fraction: float) -> Tuple[int, int]:
    reference, final = result.reference_state, result.final_state
    ref_power = reference.site_power()
    diff_power = np.abs(final.u - reference.u) ** 2 + np.abs(final.v - reference.v) ** 2
    mask = ref_power > fraction * np.max(ref_power)
    if np.max(diff_power) > 0.0:
        mask |= diff_power > fraction * np.max(diff_power)
    occupied = np.flatnonzero(mask)
    return reference.origin + int(occupied[0]), reference.origin + int(occupied[-1])


def _band_coefficients(
    params: MovingFrameParams,
    q: float,
    spectra: Tuple[complex, complex],
) -> NDArray[np.complex128]:
    """Expand a two-component spectrum on the Bloch vectors of both bands at ``q``."""
    plus = moving_bloch_amplitudes(params, q, Band.PLUS)
    minus = moving_bloch_amplitudes(params, q, Band.MINUS)
    basis = np.array([[plus[0], minus[0]], [plus[1], minus[1]]], dtype=np.complex128)
    return np.linalg.solve(basis, np.asarray(spectra, dtype=np.complex128))


def transmitted_channel_analysis(result: ExperimentResult, channels: ChannelSet) -> ChannelMeasurement:
    """Measure channel amplitudes of the scattered field at the final step.

    The difference field is Hann-windowed over the occupied region and
    Fourier-analysed at each channel's lattice wavenumber; the two-component
    spectrum is split between the bands and divided by the clean run's
    incident-band amplitude at q0.

    Each channel gets its own floor: 10x the larger of the median spectral
    magnitude of the difference field and the clean field's spectrum at the
    channel wavenumber scaled by the relative distortion at q0. Amplitudes at
    or below the floor are reported as 0.
    """
    config = result.config
    fraction = DEFAULT_SUPPORT_FRACTION
    if config is not None:
        if config.excitation.carrier is None:
            raise ValueError("Channel analysis needs a wave-packet excitation with a carrier wavenumber")
        separation = result.separation or check_separation(config)
        if not separation.separated:
            raise IncompleteScatteringError(
                f"Potential support {separation.potential_support} still overlaps the excitation "
                f"front {separation.excitation_front:.1f} at step {config.steps}"
            )
        fraction = config.support_fraction

    params = channels.params
    reference, final = result.reference_state, result.final_state
    lo, hi = _analysis_window(result, fraction ** 2)
    start, stop = lo - reference.origin, hi - reference.origin + 1
    sites = np.arange(lo, hi + 1, dtype=np.float64)
    taper = windows.hann(sites.size) if sites.size > 2 else np.ones(sites.size)
    du = (final.u - reference.u)[start:stop] * taper
    dv = (final.v - reference.v)[start:stop] * taper
    ru = reference.u[start:stop] * taper
    rv = reference.v[start:stop] * taper

    def transform(a: NDArray[np.complex128], b: NDArray[np.complex128], k: float) -> Tuple[complex, complex]:
        phase = np.exp(-1j * k * sites)
        return complex(np.sum(a * phase)), complex(np.sum(b * phase))

    def magnitude(pair: Tuple[complex, complex]) -> float:
        return math.hypot(abs(pair[0]), abs(pair[1]))

    band_index = {Band.PLUS: 0, Band.MINUS: 1}
    incident_index = band_index[channels.incident_band]
    k0 = wrap_wavenumber(channels.q0)
    reference_at_k0 = transform(ru, rv, k0)
    reference_coeffs = _band_coefficients(params, channels.q0, reference_at_k0)
    normalization = float(abs(reference_coeffs[incident_index]))
    if normalization == 0.0:
        logger.warning("Clean run has no incident-band amplitude at q0; channel amplitudes left unnormalized")
        normalization = 1.0
    reference_peak = magnitude(reference_at_k0)
    distortion = magnitude(transform(du, dv, k0)) / reference_peak if reference_peak > 0.0 else 0.0

    k_grid = np.linspace(-math.pi, math.pi, SPECTRAL_GRID_POINTS, endpoint=False)
    phases = np.exp(-1j * np.outer(k_grid, sites))
    leakage = np.sqrt(np.abs(phases @ du) ** 2 + np.abs(phases @ dv) ** 2)
    median_leakage = float(np.median(leakage))
    floor = CHANNEL_FLOOR_FACTOR * median_leakage / normalization

    resolution = 4.0 * math.pi / sites.size
    measured = []
    for channel in channels:
        k = wrap_wavenumber(channel.q)
        distance = abs(math.remainder(k - k0, 2.0 * math.pi))
        aliased = channel.band is channels.incident_band and distance < resolution
        if aliased and not channel.incident:
            measured.append(
                MeasuredChannel(channel.alpha, channel.band, channel.q, k, None, None, False, channel.incident)
            )
            continue
        incident_leakage = 0.0 if channel.incident else distortion * magnitude(transform(ru, rv, k))
        channel_floor = CHANNEL_FLOOR_FACTOR * max(median_leakage, incident_leakage) / normalization
        coeffs = _band_coefficients(params, channel.q, transform(du, dv, k))
        raw = float(abs(coeffs[band_index[channel.band]])) / normalization
        measured.append(
            MeasuredChannel(
                channel.alpha,
                channel.band,
                channel.q,
                k,
                raw if raw > channel_floor else 0.0,
                raw,
                True,
                channel.incident,
                channel_floor,
            )
        )

    return ChannelMeasurement(tuple(measured), floor, normalization, (lo, hi))


def run_pair(config: ExperimentConfig) -> ExperimentResult:
    """Run the experiment described by ``config`` and analyse it."""
    started = time.perf_counter()
    window = config.resolved_window()
    logger.info(
        "Starting paired run",
        extra={
            "experiment": config.name,
            "beta": config.coin.beta,
            "drift": config.drift_speed,
            "steps": config.steps,
            "window": list(window),
        },
    )

    separation = check_separation(config)
    if not separation.separated and config.require_separation:
        raise IncompleteScatteringError(
            f"After {config.steps} steps the potential support {separation.potential_support} "
            f"has not passed the excitation front {separation.excitation_front:.1f}; "
            "increase steps or disable the separation requirement"
        )

    initial = config.excitation.build(config.coin, window)
    result = simulate_pair(
        initial,
        config.coin,
        config.potential,
        config.steps,
        config.record,
        overflow_guard=config.overflow_guard,
    )
    result = replace(result, config=config, separation=separation)

    channels = born = measurement = None
    if config.analyze_channels and config.potential is not None:
        params = MovingFrameParams(config.coin.beta, config.drift_speed)
        if params.reflectionless:
            channels = enumerate_channels(
                params, config.incident_q, config.alpha_range, config.incident_band
            )
            born = born_weights(channels, config.potential.shape)
            if config.excitation.carrier is not None and separation.separated:
                measurement = transmitted_channel_analysis(result, channels)
        else:
            logger.warning(
                "Drift speed does not exceed cos(beta); scattering channels skipped",
                extra={"drift": params.v, "cos_beta": params.max_group_velocity},
            )

    runtime = time.perf_counter() - started
    logger.info(
        "Finished paired run",
        extra={"experiment": config.name, "final_residual": result.final_residual, "runtime_s": runtime},
    )
    return replace(
        result,
        runtime_seconds=runtime,
        channels=channels,
        born=born,
        measurement=measurement,
    )


def run_sweep(configs: Iterable[ExperimentConfig], max_workers: Optional[int] = None) -> List[ExperimentResult]:
    """Run independent experiments on a thread pool; results keep input order."""
    config_list = list(configs)
    if not config_list:
        return []
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        return list(executor.map(run_pair, config_list))


__all__ = [
    "IncompleteScatteringError",
    "packet_reach",
    "make_wavepacket",
    "DeltaExcitation",
    "WavePacketExcitation",
    "Excitation",
    "RecordConfig",
    "auto_window",
    "ExperimentConfig",
    "SpaceTimeMap",
    "SeparationReport",
    "check_separation",
    "MeasuredChannel",
    "ChannelMeasurement",
    "ExperimentResult",
    "simulate_pair",
    "residual_series",
    "wrap_wavenumber",
    "transmitted_channel_analysis",
    "run_pair",
    "run_sweep",
]
