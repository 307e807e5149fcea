"""Shapes, drifting potentials and Fourier spectra."""

from __future__ import annotations

import logging
import math

import numpy as np
import pytest
from scipy.integrate import quad

from meshwalk import potentials
from meshwalk.potentials import (
    DriftingPotential,
    FFTGrid,
    KKMultiPole,
    Pole,
    RealPartOf,
    Tabulated,
    default_fft_grid,
    eval_shape,
    hermitian_truncation,
    random_multipole,
    shape_support,
    spectrum,
    spectrum_analytic,
    spectrum_fft,
)

CENTER = 90.0
SINGLE = KKMultiPole.single(-1j, complex(CENTER, 1.0), 2)
WIDE_GRID = FFTGrid(CENTER - 65536.0, CENTER + 65536.0, 2 ** 19)


class Gaussian:
    def __call__(self, x):
        xs = np.asarray(x, dtype=np.float64)
        return np.exp(-0.5 * xs ** 2).astype(np.complex128)

    def extent(self):
        return -5.0, 5.0


def fourier_oracle(shape, q: float, center: float) -> complex:
    """phi_hat(q) by oscillatory quadrature split at ``center``."""
    w = abs(q)

    def integral(integrand, weight):
        re, _ = quad(lambda t: integrand(t).real, 0.0, np.inf, weight=weight, wvar=w, limlst=100)
        im, _ = quad(lambda t: integrand(t).imag, 0.0, np.inf, weight=weight, wvar=w, limlst=100)
        return complex(re, im)

    def even(t):
        return complex(shape(center + t) + shape(center - t))

    def odd(t):
        return complex(shape(center + t) - shape(center - t))

    cosine = integral(even, "cos")
    sine = integral(odd, "sin")
    return complex(np.exp(-1j * q * center) * (cosine - 1j * math.copysign(1.0, q) * sine))


def test_single_pole_spectrum_is_one_sided():
    q = np.linspace(-4.0, 4.0, 161)
    values = spectrum_analytic(SINGLE, q)

    assert np.all(values[q >= 0] == 0)
    negative = q < 0
    expected = 2 * math.pi * (-1j) * q[negative] * np.exp(-1j * q[negative] * complex(CENTER, 1.0))
    np.testing.assert_allclose(values[negative], expected, rtol=1e-12)
    np.testing.assert_allclose(np.abs(values[negative]), 2 * math.pi * np.abs(q[negative]) * np.exp(q[negative]))


def test_lower_half_plane_poles_vanish_for_negative_transfer():
    shape = KKMultiPole((Pole(1.0, complex(0.0, -1.0)), Pole(0.5j, complex(3.0, -2.0), 3)))
    q = np.linspace(-3.0, 3.0, 61)
    values = spectrum_analytic(shape, q)

    assert not shape.upper_half_plane
    assert np.all(values[q <= 0] == 0)
    assert np.all(np.abs(values[q > 0]) > 0)


@pytest.mark.parametrize("q", [-2.0, -0.6, -0.1, 0.3, 1.7])
def test_analytic_spectrum_matches_quadrature(q):
    expected = fourier_oracle(SINGLE, q, CENTER)
    assert abs(spectrum_analytic(SINGLE, q) - expected) < 1e-6


def test_third_order_pole_matches_quadrature():
    shape = KKMultiPole.single(0.3 + 0.4j, complex(2.0, 0.5), 3)
    for q in (-1.5, -0.4, 0.8):
        assert abs(spectrum_analytic(shape, q) - fourier_oracle(shape, q, 2.0)) < 1e-6


def test_fft_spectrum_matches_analytic():
    q = np.linspace(-3.0, 3.0, 61)
    estimate = spectrum_fft(SINGLE, WIDE_GRID, q)
    np.testing.assert_allclose(estimate, spectrum_analytic(SINGLE, q), rtol=0, atol=1e-4)


def test_fft_spectrum_of_gaussian():
    q = np.linspace(-6.0, 6.0, 49)
    estimate = spectrum_fft(Gaussian(), FFTGrid(-40.0, 40.0, 4096), q)
    np.testing.assert_allclose(estimate, math.sqrt(2 * math.pi) * np.exp(-0.5 * q ** 2), atol=1e-6)


def test_fft_warns_when_shape_touches_grid_edge(caplog):
    with caplog.at_level(logging.WARNING, logger="meshwalk.potentials"):
        spectrum_fft(Gaussian(), FFTGrid(-2.0, 2.0, 1024), [0.0, 1.0])
    assert any("FFT grid edges" in record.getMessage() for record in caplog.records)


def test_fft_rejects_wavenumbers_beyond_nyquist():
    grid = FFTGrid(-128.0, 128.0, 1024)
    assert grid.dx == 0.25
    with pytest.raises(ValueError, match="Nyquist"):
        spectrum_fft(Gaussian(), grid, [13.0])


def test_fft_of_vanishing_shape_is_zero():
    empty = Tabulated([0.0, 1.0], [0.0, 0.0])
    values = spectrum_fft(empty, FFTGrid(-10.0, 10.0, 1024), [-1.0, 0.0, 1.0])
    assert np.array_equal(values, np.zeros(3, dtype=np.complex128))


@pytest.mark.parametrize("n", [1000, 512, 0])
def test_fft_grid_needs_power_of_two(n):
    with pytest.raises(ValueError):
        FFTGrid(0.0, 1.0, n)


def test_default_fft_grid_centres_on_extent():
    grid = default_fft_grid(SINGLE)
    assert grid.n == 2 ** 19
    assert grid.dx == pytest.approx(0.25)
    assert 0.5 * (grid.x_min + grid.x_max) == pytest.approx(CENTER)


def test_hermitian_truncation_spectrum_is_symmetrised():
    real_part = hermitian_truncation(SINGLE)
    q = np.linspace(-2.5, 2.5, 51)
    expected = 0.5 * (spectrum_analytic(SINGLE, q) + np.conj(spectrum_analytic(SINGLE, -q)))

    np.testing.assert_allclose(real_part.spectrum(q), expected)
    np.testing.assert_allclose(real_part.spectrum(-q), np.conj(real_part.spectrum(q)))
    assert abs(real_part.spectrum(1.0)) > 0.1
    assert np.all(np.imag(real_part(np.linspace(80, 100, 11))) == 0)


def test_hermitian_truncation_fft_matches_analytic():
    real_part = RealPartOf(SINGLE)
    q = np.array([-2.0, -0.5, 0.5, 2.0])
    np.testing.assert_allclose(spectrum_fft(real_part, WIDE_GRID, q), real_part.spectrum(q), atol=1e-4)


def test_spectrum_dispatch_prefers_analytic(monkeypatch):
    def fail(*args, **kwargs):
        raise AssertionError("FFT should not be used")

    monkeypatch.setattr(potentials, "spectrum_fft", fail)
    np.testing.assert_array_equal(spectrum(SINGLE, [-1.0, 1.0]), spectrum_analytic(SINGLE, [-1.0, 1.0]))


def test_spectrum_dispatch_falls_back_to_fft(monkeypatch):
    calls = []

    def fake(shape, grid, q):
        calls.append(shape)
        return np.ones(np.shape(q), dtype=np.complex128)

    monkeypatch.setattr(potentials, "spectrum_fft", fake)
    spectrum(Gaussian(), [0.0])
    spectrum(RealPartOf(Gaussian()), [0.0])

    assert len(calls) == 2


def test_spectrum_dispatch_does_not_hide_errors():
    class Broken(Gaussian):
        def spectrum(self, q):
            raise TypeError("bad spectrum")

    with pytest.raises(TypeError, match="bad spectrum"):
        spectrum(Broken(), [0.0])
    with pytest.raises(TypeError, match="bad spectrum"):
        spectrum(RealPartOf(Broken()), [0.0])


def test_has_analytic_spectrum():
    table = Tabulated([0.0, 1.0], [1.0, 1.0])
    assert potentials.has_analytic_spectrum(SINGLE)
    assert potentials.has_analytic_spectrum(table)
    assert potentials.has_analytic_spectrum(RealPartOf(table))
    assert not potentials.has_analytic_spectrum(Gaussian())
    assert not potentials.has_analytic_spectrum(RealPartOf(Gaussian()))


def test_default_fft_grid_resolves_requested_wavenumbers():
    grid = default_fft_grid(Gaussian(), q_max=170.0)
    assert math.pi / grid.dx >= 170.0
    assert grid.x_max - grid.x_min >= 40.0

    values = spectrum(Gaussian(), [-170.0, 0.0, 1.0, 170.0])
    np.testing.assert_allclose(values, math.sqrt(2 * math.pi) * np.exp(-0.5 * np.array([170.0, 0.0, 1.0, 170.0]) ** 2), atol=1e-6)


def test_tabulated_spectrum_of_triangle_is_squared_sinc():
    triangle = Tabulated([-1.0, 0.0, 1.0], [0.0, 1.0, 0.0])
    q = np.array([-7.3, -1.0, -1e-4, 0.0, 2e-3, 0.5, 40.0])
    np.testing.assert_allclose(triangle.spectrum(q), np.sinc(q / (2 * math.pi)) ** 2, atol=1e-13)


def test_tabulated_spectrum_matches_quadrature():
    table = Tabulated([0.0, 0.7, 1.5, 3.0], [0.2, 1.0 - 0.5j, 0.3j, -0.4])
    for q in (-3.0, -0.2, 0.0, 0.01, 1.3, 9.0):
        re, _ = quad(lambda t: (table(t) * np.exp(-1j * q * t)).real, 0.0, 3.0, points=[0.7, 1.5], limit=200, epsabs=1e-13)
        im, _ = quad(lambda t: (table(t) * np.exp(-1j * q * t)).imag, 0.0, 3.0, points=[0.7, 1.5], limit=200, epsabs=1e-13)
        assert abs(table.spectrum(q) - complex(re, im)) < 1e-9


def test_tabulated_spectrum_of_sampled_gaussian():
    x = np.linspace(-20.0, 20.0, 4001)
    table = Tabulated(x, np.exp(-0.5 * x ** 2))
    q = np.linspace(-4.0, 4.0, 17)
    np.testing.assert_allclose(table.spectrum(q), math.sqrt(2 * math.pi) * np.exp(-0.5 * q ** 2), atol=1e-4)
    assert abs(table.spectrum(150.0)) < 1e-3


def test_fft_spectrum_of_real_shape_is_conjugate_symmetric():
    real_part = RealPartOf(SINGLE)
    q = np.array([0.3, 0.9, 1.7, 2.6])
    forward = spectrum_fft(real_part, WIDE_GRID, q)
    backward = spectrum_fft(real_part, WIDE_GRID, -q)

    np.testing.assert_allclose(backward, np.conj(forward), atol=1e-8)
    assert np.all(np.abs(forward) > 1e-3)


def test_pole_validation():
    with pytest.raises(ValueError, match="order"):
        Pole(1.0, 1j, 1)
    with pytest.raises(ValueError, match="real axis"):
        Pole(1.0, 3.0)
    with pytest.raises(ValueError, match="same half"):
        KKMultiPole((Pole(1.0, 1j), Pole(1.0, -1j)))
    with pytest.raises(ValueError):
        KKMultiPole(())


def test_eval_shape_scalar_and_vector():
    value = eval_shape(SINGLE, CENTER)
    assert isinstance(value, complex)
    assert value == pytest.approx(1j)
    assert eval_shape(SINGLE, [CENTER, CENTER + 1]).shape == (2,)


def test_drifting_potential_moves_shape_backward():
    drift = DriftingPotential(SINGLE, 0.2)
    sites = np.arange(-5, 6)
    np.testing.assert_allclose(drift(sites, 100), SINGLE(sites + 20.0))

    with pytest.raises(ValueError):
        DriftingPotential(SINGLE, -0.1)


def test_random_multipole_is_seeded():
    first = random_multipole(25, complex(CENTER, 1.0), seed=3)
    again = random_multipole(25, complex(CENTER, 1.0), seed=3)
    other = random_multipole(25, complex(CENTER, 1.0), seed=4)

    assert first == again
    assert first != other
    assert [pole.position for pole in first.poles] == [complex(CENTER + l, 1.0) for l in range(1, 26)]
    assert all(0.0 <= abs(pole.amplitude) <= 0.5 for pole in first.poles)
    assert first.upper_half_plane


def test_random_multipole_validation():
    with pytest.raises(ValueError):
        random_multipole(0, 1j)
    with pytest.raises(ValueError):
        random_multipole(3, 5.0)
    with pytest.raises(ValueError):
        random_multipole(3, 1j, amplitude_range=(0.5, 0.1))


def test_shape_support_of_single_pole():
    lo, hi = shape_support(SINGLE, 1e-2)
    half_width = math.sqrt(99.0)
    assert lo == pytest.approx(CENTER - half_width, abs=0.06)
    assert hi == pytest.approx(CENTER + half_width, abs=0.06)


def test_shape_support_of_vanishing_shape_is_none():
    assert shape_support(Tabulated([0.0, 1.0], [0.0, 0.0]), 1e-2) is None


def test_tabulated_interpolates_and_vanishes_outside():
    table = Tabulated([0.0, 1.0, 2.0], [0.0, 2.0 + 2j, 0.0])
    np.testing.assert_allclose(table([0.5, 1.0, 3.0, -1.0]), [1.0 + 1j, 2.0 + 2j, 0.0, 0.0])
    assert table.extent() == (0.0, 2.0)

    with pytest.raises(ValueError):
        Tabulated([0.0, 0.0], [1.0, 1.0])
    with pytest.raises(ValueError):
        Tabulated([0.0, 1.0], [1.0, float("inf")])
