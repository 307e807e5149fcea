"""Drifting complex potentials and their Fourier spectra.

Fourier convention used throughout: phi_hat(q) = integral dx phi(x) exp(-i q x).
With every pole in the upper half plane (Im x_l > 0) the spectrum of a
Kramers-Kronig multi-pole shape vanishes for q >= 0; with every pole in the
lower half plane it vanishes for q <= 0.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Protocol, Sequence, Tuple, runtime_checkable

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.interpolate import CubicSpline

logger = logging.getLogger(__name__)

# |phi| above this at either grid edge means the FFT grid clips the shape.
FFT_EDGE_TOLERANCE = 1e-8
MIN_FFT_POINTS = 2 ** 10


@runtime_checkable
class ShapeFunction(Protocol):
    """Real-line shape phi(x) -> complex, vectorized over ``x``."""

    def __call__(self, x: ArrayLike) -> NDArray[np.complex128]:
        ...

    def extent(self) -> Tuple[float, float]:
        """Interval that contains the bulk of the shape."""
        ...


@dataclass(frozen=True)
class Pole:
    amplitude: complex
    position: complex
    order: int = 2

    def __post_init__(self) -> None:
        object.__setattr__(self, "amplitude", complex(self.amplitude))
        object.__setattr__(self, "position", complex(self.position))
        if isinstance(self.order, bool) or int(self.order) != self.order or self.order < 2:
            raise ValueError(f"Pole order must be an integer >= 2, got {self.order!r}")
        object.__setattr__(self, "order", int(self.order))
        if self.position.imag == 0.0:
            raise ValueError(
                f"Pole at {self.position} sits on the real axis; the shape would be singular"
            )


@dataclass(frozen=True)
class KKMultiPole:
    """phi(x) = sum_l A_l (x - x_l)^(-h_l) with all poles on one side of the real axis."""

    poles: Tuple[Pole, ...]

    def __post_init__(self) -> None:
        poles = tuple(self.poles)
        if not poles:
            raise ValueError("KKMultiPole needs at least one pole")
        signs = {math.copysign(1.0, pole.position.imag) for pole in poles}
        if len(signs) != 1:
            raise ValueError("All poles must lie in the same half of the complex plane")
        object.__setattr__(self, "poles", poles)

    @classmethod
    def single(cls, amplitude: complex, position: complex, order: int = 2) -> "KKMultiPole":
        return cls((Pole(amplitude, position, order),))

    @property
    def upper_half_plane(self) -> bool:
        return self.poles[0].position.imag > 0

    def __call__(self, x: ArrayLike) -> NDArray[np.complex128]:
        xs = np.asarray(x, dtype=np.float64)
        total = np.zeros(xs.shape, dtype=np.complex128)
        for pole in self.poles:
            total += pole.amplitude / (xs - pole.position) ** pole.order
        return total

    def spectrum(self, q: ArrayLike) -> NDArray[np.complex128]:
        return spectrum_analytic(self, q)

    def extent(self) -> Tuple[float, float]:
        reals = [pole.position.real for pole in self.poles]
        reach = max(abs(pole.position.imag) for pole in self.poles)
        return min(reals) - reach, max(reals) + reach


@dataclass(frozen=True)
class RealPartOf:
    """Hermitian truncation x -> Re(base(x))."""

    base: ShapeFunction

    def __call__(self, x: ArrayLike) -> NDArray[np.complex128]:
        return np.real(self.base(x)).astype(np.complex128)

    def spectrum(self, q: ArrayLike) -> NDArray[np.complex128]:
        base_spectrum = getattr(self.base, "spectrum", None)
        if not callable(base_spectrum):
            raise TypeError(f"{type(self.base).__name__} has no analytic spectrum")
        qs = np.asarray(q, dtype=np.float64)
        return 0.5 * (base_spectrum(qs) + np.conj(base_spectrum(-qs)))

    def extent(self) -> Tuple[float, float]:
        return self.base.extent()


@dataclass(frozen=True, eq=False)
class Tabulated:
    """Sampled shape, linearly interpolated and zero outside the table."""

    x: NDArray[np.float64]
    values: NDArray[np.complex128]

    def __post_init__(self) -> None:
        xs = np.asarray(self.x, dtype=np.float64).reshape(-1)
        vals = np.asarray(self.values, dtype=np.complex128).reshape(-1)
        if xs.size < 2 or xs.size != vals.size:
            raise ValueError("Tabulated shape needs >= 2 samples with matching x and values")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("Tabulated x must be strictly increasing")
        if not np.all(np.isfinite(vals)):
            raise ValueError("Tabulated values must be finite")
        object.__setattr__(self, "x", xs)
        object.__setattr__(self, "values", vals)

    def __call__(self, x: ArrayLike) -> NDArray[np.complex128]:
        xs = np.asarray(x, dtype=np.float64)
        re = np.interp(xs, self.x, self.values.real, left=0.0, right=0.0)
        im = np.interp(xs, self.x, self.values.imag, left=0.0, right=0.0)
        return re + 1j * im

    def spectrum(self, q: ArrayLike) -> NDArray[np.complex128]:
        """Exact transform of the piecewise-linear interpolant.

        A segment of length h with midpoint c and end values f_a, f_b contributes
        h exp(-i q c) [ (f_a + f_b)/2 sinc(t) - i (f_b - f_a)/2 g(t) ] with
        t = q h / 2 and g(t) = (sin t - t cos t) / t^2.
        """
        qs = np.asarray(q, dtype=np.float64)
        h = np.diff(self.x)
        mid = 0.5 * (self.x[1:] + self.x[:-1])
        mean = 0.5 * (self.values[1:] + self.values[:-1])
        slope = 0.5 * (self.values[1:] - self.values[:-1])

        flat = qs.reshape(-1, 1)
        t = 0.5 * flat * h
        sinc = np.sinc(t / math.pi)
        small = np.abs(t) < 1e-2
        safe = np.where(small, 1.0, t)
        odd = np.where(
            small,
            t / 3.0 - t ** 3 / 30.0 + t ** 5 / 840.0,
            (np.sin(safe) - safe * np.cos(safe)) / safe ** 2,
        )
        segments = h * np.exp(-1j * flat * mid) * (mean * sinc - 1j * slope * odd)
        out = segments.sum(axis=1).reshape(qs.shape)
        return complex(out) if out.ndim == 0 else out

    def extent(self) -> Tuple[float, float]:
        return float(self.x[0]), float(self.x[-1])


@dataclass(frozen=True)
class DriftingPotential:
    """V_{n,m} = phi(n + m v): the shape drifts backward by ``drift_speed`` sites per step."""

    shape: ShapeFunction
    drift_speed: float

    def __post_init__(self) -> None:
        speed = float(self.drift_speed)
        if not math.isfinite(speed) or speed < 0:
            raise ValueError(f"drift_speed must be finite and >= 0, got {self.drift_speed!r}")
        object.__setattr__(self, "drift_speed", speed)

    def __call__(self, sites: ArrayLike, step: int) -> NDArray[np.complex128]:
        return self.shape(np.asarray(sites, dtype=np.float64) + step * self.drift_speed)


def eval_shape(p: KKMultiPole, x: ArrayLike):
    """Evaluate a multi-pole shape; scalars in, complex scalar out."""
    value = p(x)
    return complex(value) if np.ndim(value) == 0 else value


def spectrum_analytic(p: KKMultiPole, q: ArrayLike):
    """phi_hat(q) from the residues of the enclosed poles.

    An order-h pole at x_l contributes 2 pi i A (-i q)^(h-1) exp(-i q x_l) / (h-1)!
    for q < 0 when Im x_l > 0 (contour closed upward), and minus that for
    q > 0 when Im x_l < 0. Everywhere else the contour encloses nothing.
    """
    qs = np.asarray(q, dtype=np.float64)
    out = np.zeros(qs.shape, dtype=np.complex128)
    for pole in p.poles:
        if pole.position.imag > 0:
            mask, orientation = qs < 0, 1.0
        else:
            mask, orientation = qs > 0, -1.0
        if not np.any(mask):
            continue
        qm = qs[mask]
        h = pole.order
        term = (
            orientation
            * 2j
            * math.pi
            * pole.amplitude
            * (-1j * qm) ** (h - 1)
            * np.exp(-1j * qm * pole.position)
            / math.factorial(h - 1)
        )
        out[mask] += term
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class FFTGrid:
    x_min: float
    x_max: float
    n: int

    def __post_init__(self) -> None:
        if self.n < MIN_FFT_POINTS or self.n & (self.n - 1):
            raise ValueError(f"FFT grid size must be a power of two >= {MIN_FFT_POINTS}, got {self.n}")
        if not self.x_max > self.x_min:
            raise ValueError("FFT grid needs x_max > x_min")

    @classmethod
    def around(cls, center: float, spacing: float, n: int) -> "FFTGrid":
        half = 0.5 * spacing * n
        return cls(center - half, center + half, n)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n

    @property
    def x(self) -> NDArray[np.float64]:
        return self.x_min + self.dx * np.arange(self.n)


def default_fft_grid(
    shape: ShapeFunction,
    spacing: float = 0.25,
    n: int = 2 ** 19,
    q_max: Optional[float] = None,
) -> FFTGrid:
    """Grid centred on the shape extent.

    With ``q_max`` given the spacing shrinks so that q_max stays below 80 % of
    the Nyquist limit, and ``n`` grows until the grid still spans the extent.
    """
    lo, hi = shape.extent()
    if q_max is not None and q_max > 0.0:
        spacing = min(spacing, 0.8 * math.pi / q_max)
        while n * spacing < 4.0 * (hi - lo):
            n *= 2
    return FFTGrid.around(0.5 * (lo + hi), spacing, n)


def has_analytic_spectrum(shape: ShapeFunction) -> bool:
    """Whether ``shape.spectrum`` exists and can be evaluated in closed form."""
    if isinstance(shape, RealPartOf):
        return has_analytic_spectrum(shape.base)
    return callable(getattr(shape, "spectrum", None))


def spectrum_fft(
    shape: ShapeFunction,
    grid: FFTGrid,
    q_list: ArrayLike,
    pad_factor: int = 4,
) -> NDArray[np.complex128]:
    """Discrete estimate of phi_hat at ``q_list``.

    phi_hat(q_k) ~ dx * exp(-i q_k x_min) * FFT[phi(x_j)]_k on the padded grid
    q_k = 2 pi k / (pad * n * dx). The spectrum is demodulated around the
    centroid of |phi| and interpolated with cubic splines.
    """
    qs = np.asarray(q_list, dtype=np.float64)
    dx = grid.dx
    nyquist = math.pi / dx
    if np.any(np.abs(qs) > nyquist):
        raise ValueError(f"Requested |q| exceeds the grid Nyquist limit {nyquist:.4g}")

    x = grid.x
    samples = np.asarray(shape(x), dtype=np.complex128)
    edge = max(abs(samples[0]), abs(samples[-1]))
    if edge >= FFT_EDGE_TOLERANCE:
        logger.warning(
            "Shape is not negligible at the FFT grid edges; spectrum may alias",
            extra={"edge_magnitude": float(edge), "x_min": grid.x_min, "x_max": grid.x_max},
        )

    weights = np.abs(samples)
    total = float(np.sum(weights))
    if total == 0.0:
        return np.zeros(qs.shape, dtype=np.complex128)
    center = float(np.sum(x * weights) / total)

    n_fft = int(pad_factor) * grid.n
    raw = np.fft.fft(samples, n=n_fft)
    q_grid = 2.0 * math.pi * np.fft.fftfreq(n_fft, d=dx)
    demodulated = dx * np.exp(1j * q_grid * (center - grid.x_min)) * raw

    q_sorted = np.fft.fftshift(q_grid)
    s_sorted = np.fft.fftshift(demodulated)
    real_part = CubicSpline(q_sorted, s_sorted.real)(qs)
    imag_part = CubicSpline(q_sorted, s_sorted.imag)(qs)
    return (real_part + 1j * imag_part) * np.exp(-1j * qs * center)


def spectrum(
    shape: ShapeFunction,
    q: ArrayLike,
    grid: Optional[FFTGrid] = None,
) -> NDArray[np.complex128]:
    """Analytic spectrum when the shape provides one, FFT estimate otherwise.

    Without an explicit ``grid`` the FFT grid is sized to resolve the largest
    requested |q|.
    """
    if has_analytic_spectrum(shape):
        return np.asarray(shape.spectrum(q), dtype=np.complex128)
    if grid is None:
        qs = np.asarray(q, dtype=np.float64)
        q_max = float(np.max(np.abs(qs))) if qs.size else None
        grid = default_fft_grid(shape, q_max=q_max)
    return spectrum_fft(shape, grid, q)


def hermitian_truncation(p: KKMultiPole) -> RealPartOf:
    return RealPartOf(p)


def random_multipole(
    count: int,
    base: complex,
    amplitude_range: Sequence[float] = (0.0, 0.5),
    seed: int = 0,
    order: int = 2,
) -> KKMultiPole:
    """Poles at base + l (l = 1..count) with random complex amplitudes.

    |A_l| is uniform on ``amplitude_range`` and arg A_l uniform on (0, 2 pi).
    """
    base = complex(base)
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if base.imag == 0.0:
        raise ValueError("base must have a nonzero imaginary part")
    lo, hi = (float(bound) for bound in amplitude_range)
    if not 0.0 <= lo <= hi:
        raise ValueError(f"Invalid amplitude range {amplitude_range!r}")

    rng = np.random.default_rng(seed)
    moduli = rng.uniform(lo, hi, count)
    phases = rng.uniform(0.0, 2.0 * math.pi, count)
    poles = tuple(
        Pole(modulus * np.exp(1j * phase), base + index, order)
        for index, (modulus, phase) in enumerate(zip(moduli, phases), start=1)
    )
    return KKMultiPole(poles)


def shape_support(
    shape: ShapeFunction,
    fraction: float,
    resolution: float = 0.05,
    initial_reach: float = 200.0,
    max_reach: float = 1e6,
) -> Optional[Tuple[float, float]]:
    """Smallest interval outside which |phi| <= fraction * max|phi|.

    Returns None for a shape that vanishes on the sampled range.
    """
    lo, hi = shape.extent()
    reach = initial_reach
    while True:
        xs = np.arange(lo - reach, hi + reach + resolution, resolution)
        magnitude = np.abs(shape(xs))
        peak = float(np.max(magnitude))
        if peak == 0.0:
            return None
        above = np.flatnonzero(magnitude > fraction * peak)
        first, last = int(above[0]), int(above[-1])
        touches_edge = first == 0 or last == xs.size - 1
        if not touches_edge or reach >= max_reach:
            return float(xs[first]), float(xs[last])
        reach *= 4.0


__all__ = [
    "ShapeFunction",
    "Pole",
    "KKMultiPole",
    "RealPartOf",
    "Tabulated",
    "DriftingPotential",
    "FFTGrid",
    "eval_shape",
    "spectrum_analytic",
    "has_analytic_spectrum",
    "spectrum_fft",
    "spectrum",
    "default_fft_grid",
    "hermitian_truncation",
    "random_multipole",
    "shape_support",
]
