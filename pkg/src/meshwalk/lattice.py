"""Two-amplitude mesh lattice state and its discrete-time step map."""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Protocol, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .constants import DEFAULT_OVERFLOW_GUARD

logger = logging.getLogger(__name__)


class Band(str, Enum):
    """Upper (+) or lower (-) quasi-energy band."""

    PLUS = "+"
    MINUS = "-"

    @property
    def sign(self) -> int:
        return 1 if self is Band.PLUS else -1

    @classmethod
    def parse(cls, value: Union["Band", str, int]) -> "Band":
        if isinstance(value, Band):
            return value
        if isinstance(value, int) and value in (1, -1):
            return cls.PLUS if value == 1 else cls.MINUS
        text = str(value).strip().lower()
        if text in {"+", "plus", "upper", "+1"}:
            return cls.PLUS
        if text in {"-", "minus", "lower", "-1", "−"}:
            return cls.MINUS
        raise ValueError(f"Unknown band {value!r}. Expected '+' or '-'.")


@dataclass(frozen=True)
class CoinConfig:
    """Fiber coupler with coupling angle ``beta`` (radians)."""

    beta: float

    def __post_init__(self) -> None:
        beta = float(self.beta)
        if not math.isfinite(beta) or not 0.0 < beta < math.pi:
            raise ValueError(f"Coupling angle beta must lie in (0, pi), got {self.beta!r}")
        object.__setattr__(self, "beta", beta)

    @property
    def cos(self) -> float:
        return math.cos(self.beta)

    @property
    def sin(self) -> float:
        return math.sin(self.beta)

    @property
    def max_group_velocity(self) -> float:
        return abs(math.cos(self.beta))


class PotentialField(Protocol):
    """Space-time potential V(n, m); vectorized over the site array."""

    def __call__(self, sites: NDArray[np.int64], step: int) -> NDArray[np.complex128]:
        ...


class ZeroPotential:
    """The clean lattice, V identically zero."""

    def __call__(self, sites: NDArray[np.int64], step: int) -> NDArray[np.complex128]:
        return np.zeros(np.shape(sites), dtype=np.complex128)

    def __repr__(self) -> str:
        return "ZeroPotential()"


ZERO_POTENTIAL = ZeroPotential()


@dataclass(frozen=True, eq=False)
class LatticeState:
    """Amplitudes (u, v) on sites origin .. origin + len(u) - 1 at time ``step``.

    Sites outside the stored window are zero.
    """

    step: int
    origin: int
    u: NDArray[np.complex128]
    v: NDArray[np.complex128]

    def __post_init__(self) -> None:
        u = np.array(self.u, dtype=np.complex128, copy=True).reshape(-1)
        v = np.array(self.v, dtype=np.complex128, copy=True).reshape(-1)
        if u.size == 0 or v.size == 0:
            raise ValueError("LatticeState needs at least one site")
        if u.shape != v.shape:
            raise ValueError(f"u and v must have equal length, got {u.size} and {v.size}")
        if int(self.step) < 0:
            raise ValueError(f"step must be non-negative, got {self.step}")
        u.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "step", int(self.step))
        object.__setattr__(self, "origin", int(self.origin))

    @classmethod
    def zeros(cls, n_lo: int, n_hi: int, step: int = 0) -> "LatticeState":
        if n_hi < n_lo:
            raise ValueError(f"Empty window [{n_lo}, {n_hi}]")
        size = n_hi - n_lo + 1
        return cls(step, n_lo, np.zeros(size), np.zeros(size))

    @classmethod
    def delta(
        cls,
        site: int,
        n_lo: int,
        n_hi: int,
        u: complex = 1.0,
        v: complex = 1.0,
    ) -> "LatticeState":
        """Single-pulse excitation u_n = u, v_n = v at ``site``."""
        if not n_lo <= site <= n_hi:
            raise ValueError(f"Site {site} lies outside the window [{n_lo}, {n_hi}]")
        size = n_hi - n_lo + 1
        uu = np.zeros(size, dtype=np.complex128)
        vv = np.zeros(size, dtype=np.complex128)
        uu[site - n_lo] = u
        vv[site - n_lo] = v
        return cls(0, n_lo, uu, vv)

    @property
    def size(self) -> int:
        return int(self.u.size)

    @property
    def sites(self) -> NDArray[np.int64]:
        return np.arange(self.origin, self.origin + self.size, dtype=np.int64)

    @property
    def last_site(self) -> int:
        return self.origin + self.size - 1

    def site_power(self) -> NDArray[np.float64]:
        return np.abs(self.u) ** 2 + np.abs(self.v) ** 2

    def power(self) -> float:
        return float(np.sum(self.site_power()))

    def max_amplitude(self) -> float:
        return float(max(np.max(np.abs(self.u)), np.max(np.abs(self.v))))

    def amplitude(self, site: int) -> Tuple[complex, complex]:
        k = site - self.origin
        if 0 <= k < self.size:
            return complex(self.u[k]), complex(self.v[k])
        return 0j, 0j

    def support(self) -> Optional[Tuple[int, int]]:
        """First and last site carrying a nonzero amplitude."""
        nonzero = np.flatnonzero((self.u != 0) | (self.v != 0))
        if nonzero.size == 0:
            return None
        return self.origin + int(nonzero[0]), self.origin + int(nonzero[-1])

    def scaled(self, factor: complex) -> "LatticeState":
        return LatticeState(self.step, self.origin, self.u * factor, self.v * factor)

    def _check_compatible(self, other: "LatticeState") -> None:
        if (self.step, self.origin, self.size) != (other.step, other.origin, other.size):
            raise ValueError("States live on different windows or time steps")

    def __add__(self, other: "LatticeState") -> "LatticeState":
        self._check_compatible(other)
        return LatticeState(self.step, self.origin, self.u + other.u, self.v + other.v)

    def __sub__(self, other: "LatticeState") -> "LatticeState":
        self._check_compatible(other)
        return LatticeState(self.step, self.origin, self.u - other.u, self.v - other.v)

    def __mul__(self, factor: complex) -> "LatticeState":
        return self.scaled(factor)

    __rmul__ = __mul__


class LatticeOverflowError(RuntimeError):
    """Raised when amplitudes exceed the overflow guard (runaway gain)."""

    def __init__(self, step: int, max_amplitude: float, guard: float) -> None:
        super().__init__(
            f"Amplitude {max_amplitude:.3e} exceeded the overflow guard {guard:.1e} at step {step}"
        )
        self.step = step
        self.max_amplitude = max_amplitude
        self.guard = guard


StateRecorder = Callable[[LatticeState], None]


def step(
    state: LatticeState,
    coin: CoinConfig,
    potential: PotentialField = ZERO_POTENTIAL,
) -> LatticeState:
    """Advance ``state`` from step m to m + 1.

    u_n <- [cos b u_{n+1} + i sin b v_{n+1}] exp(-i V_{n,m+1})
    v_n <- cos b v_{n-1} + i sin b u_{n-1}
    """
    c, s = coin.cos, coin.sin
    u, v = state.u, state.v
    next_step = state.step + 1

    u_new = np.zeros_like(u)
    v_new = np.zeros_like(v)
    u_new[:-1] = c * u[1:] + 1j * s * v[1:]
    v_new[1:] = c * v[:-1] + 1j * s * u[:-1]

    if potential is not ZERO_POTENTIAL:
        values = np.broadcast_to(
            np.asarray(potential(state.sites, next_step), dtype=np.complex128),
            u.shape,
        )
        if not np.all(np.isfinite(values)):
            raise ValueError(f"Potential returned non-finite values at step {next_step}")
        u_new *= np.exp(-1j * values)

    return LatticeState(next_step, state.origin, u_new, v_new)


def touches_edge(state: LatticeState) -> bool:
    """True when the next step would push amplitude out of the stored window."""
    return bool(state.u[0] != 0 or state.v[-1] != 0)


def warn_edge(state: LatticeState) -> None:
    logger.warning(
        "Excitation reached the window edge; amplitudes leaving the window are dropped",
        extra={"step": state.step, "origin": state.origin, "size": state.size},
    )


def check_overflow(state: LatticeState, guard: float = DEFAULT_OVERFLOW_GUARD) -> None:
    peak = state.max_amplitude()
    if not math.isfinite(peak) or peak > guard:
        raise LatticeOverflowError(state.step, peak, guard)


def evolve(
    state: LatticeState,
    coin: CoinConfig,
    potential: PotentialField = ZERO_POTENTIAL,
    steps: int = 1,
    recorder: Optional[StateRecorder] = None,
    *,
    overflow_guard: float = DEFAULT_OVERFLOW_GUARD,
) -> LatticeState:
    """Apply :func:`step` ``steps`` times.

    ``recorder`` is called with every new state (steps m+1 .. m+steps), not
    with the initial one.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")

    edge_reported = False
    current = state
    for _ in range(steps):
        if not edge_reported and touches_edge(current):
            warn_edge(current)
            edge_reported = True
        current = step(current, coin, potential)
        check_overflow(current, overflow_guard)
        if recorder is not None:
            recorder(current)
    return current


def band_energy(beta: float, q: ArrayLike, band: Union[Band, str] = Band.PLUS):
    """Lab-frame quasi-energy E_pm(q) = pm acos(cos beta cos q)."""
    sign = Band.parse(band).sign
    arg = np.clip(math.cos(beta) * np.cos(q), -1.0, 1.0)
    result = sign * np.arccos(arg)
    return float(result) if np.ndim(result) == 0 else result


def bloch_eigenpair(
    coin: CoinConfig,
    q: float,
    band: Union[Band, str] = Band.PLUS,
) -> Tuple[float, Tuple[complex, complex]]:
    """Quasi-energy and (unnormalized) Bloch amplitudes (U, V) of the clean lattice."""
    energy = band_energy(coin.beta, q, band)
    phase = cmath.exp(1j * q)
    upper = 1j * coin.sin * phase
    lower = cmath.exp(-1j * energy) - coin.cos * phase
    return energy, (upper, lower)


def plane_wave(
    coin: CoinConfig,
    q: float,
    band: Union[Band, str],
    n_lo: int,
    n_hi: int,
    envelope: Optional[NDArray[np.float64]] = None,
) -> LatticeState:
    """Bloch wave (U, V) exp(i q n) on [n_lo, n_hi], optionally enveloped."""
    _, (upper, lower) = bloch_eigenpair(coin, q, band)
    sites = np.arange(n_lo, n_hi + 1)
    carrier = np.exp(1j * q * sites)
    if envelope is not None:
        carrier = carrier * envelope
    return LatticeState(0, n_lo, upper * carrier, lower * carrier)


__all__ = [
    "Band",
    "CoinConfig",
    "PotentialField",
    "ZeroPotential",
    "ZERO_POTENTIAL",
    "LatticeState",
    "LatticeOverflowError",
    "StateRecorder",
    "step",
    "touches_edge",
    "warn_edge",
    "check_overflow",
    "evolve",
    "band_energy",
    "bloch_eigenpair",
    "plane_wave",
]
