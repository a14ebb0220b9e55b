import numpy as np
import pytest

from gpsync.numerics import (derivative_4th, parabolic_peak, principal_angle,
                             simpson_weight_range, simpson_weights)


def test_derivative_exact_for_quartic():
    # the 4th-order stencils are exact on polynomials of degree <= 4
    dt = 0.1
    t = np.arange(12) * dt
    f = 2.0 - t + 3.0 * t**2 - 0.5 * t**3 + 0.25 * t**4
    df = -1.0 + 6.0 * t - 1.5 * t**2 + t**3
    got = derivative_4th(f, dt)
    assert np.abs(got - df).max() < 1e-11


def test_derivative_exact_on_edges():
    dt = 0.05
    t = np.arange(7) * dt
    f = t**4
    got = derivative_4th(f, dt)
    expect = 4.0 * t**3
    # boundary stencils carry the same order as the interior
    assert abs(got[0] - expect[0]) < 1e-12
    assert abs(got[1] - expect[1]) < 1e-12
    assert abs(got[-2] - expect[-2]) < 1e-11
    assert abs(got[-1] - expect[-1]) < 1e-11


def test_derivative_fourth_order_convergence():
    def err(n):
        t = np.linspace(0.0, 1.0, n + 1)
        f = np.cos(3.0 * t)
        return np.abs(derivative_4th(f, t[1] - t[0]) + 3.0 * np.sin(3.0 * t)).max()

    ratio = err(100) / err(200)
    assert 12.0 < ratio < 20.0


def test_derivative_complex_vector_valued():
    dt = 0.01
    t = np.arange(40) * dt
    f = np.stack([np.cos(t), np.sin(t), np.zeros_like(t)], axis=1).astype(complex)
    got = derivative_4th(f, dt)
    expect = np.stack([-np.sin(t), np.cos(t), np.zeros_like(t)], axis=1)
    assert np.abs(got - expect).max() < 1e-8


def test_derivative_needs_five_samples():
    with pytest.raises(ValueError):
        derivative_4th(np.zeros(4), 0.1)


@pytest.mark.parametrize("n", [2, 4, 10, 128])
def test_simpson_even_exact_for_cubics(n):
    h = 1.0 / n
    x = np.arange(n + 1) * h
    w = simpson_weights(n, h)
    f = x**3 - 2.0 * x**2 + x - 1.0
    exact = 1.0 / 4.0 - 2.0 / 3.0 + 1.0 / 2.0 - 1.0
    assert abs(w @ f - exact) < 1e-14


@pytest.mark.parametrize("n", [3, 5, 7, 11, 101])
def test_simpson_odd_exact_for_cubics(n):
    # odd interval counts end with the 3/8 rule, preserving cubic exactness
    h = 1.0 / n
    x = np.arange(n + 1) * h
    w = simpson_weights(n, h)
    f = 4.0 * x**3 + x
    assert abs(w @ f - (1.0 + 0.5)) < 1e-14


@pytest.mark.parametrize("n", [6, 7, 12, 13])
def test_simpson_weight_range_matches_full(n):
    h = 0.3
    full = simpson_weights(n, h)
    for j0, j1 in [(0, 2), (2, n - 1), (n - 1, n + 1), (0, n + 1)]:
        assert np.array_equal(simpson_weight_range(n, h, j0, j1), full[j0:j1])


def test_simpson_fourth_order_convergence():
    def err(n):
        x = np.linspace(0.0, np.pi, n + 1)
        w = simpson_weights(n, x[1] - x[0])
        return abs(w @ np.sin(x) - 2.0)

    ratio = err(64) / err(128)
    assert 12.0 < ratio < 20.0


def test_parabolic_peak_on_cosine():
    h = 0.3
    x0 = 0.2  # grid point nearest to the true peak at 0
    ym, y0, yp = np.cos(x0 - h), np.cos(x0), np.cos(x0 + h)
    x_pk, y_pk = parabolic_peak(x0, h, ym, y0, yp)
    assert abs(x_pk) < 0.02
    assert abs(y_pk - 1.0) < 1e-3


def test_parabolic_peak_flat():
    assert parabolic_peak(1.0, 0.1, 2.0, 2.0, 2.0) == (1.0, 2.0)


def test_principal_angle():
    assert principal_angle(0.0) == 0.0
    assert abs(principal_angle(2.0 * np.pi + 0.3) - 0.3) < 1e-12
    assert abs(principal_angle(-np.pi - 0.1) - (np.pi - 0.1)) < 1e-12
    assert principal_angle(np.pi) == pytest.approx(np.pi)
