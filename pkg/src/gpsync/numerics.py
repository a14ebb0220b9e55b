"""Fourth-order finite-difference stencils and composite quadrature weights.

Both building blocks are O(h^4): the five-point symmetric difference quotient
(with one-sided five-point stencils at the two boundary points on each end)
and the extended composite Simpson rule (switching to the 3/8 rule on the last
three intervals when the interval count is odd).
"""
from __future__ import annotations

import numpy as np

# one-sided five-point first-derivative stencils, all divided by 12 h
_EDGE0 = np.array([-25.0, 48.0, -36.0, 16.0, -3.0])
_EDGE1 = np.array([-3.0, -10.0, 18.0, -6.0, 1.0])


def derivative_4th(f: np.ndarray, dt: float) -> np.ndarray:
    """Differentiate samples f[j] = f(t0 + j*dt) along axis 0 to O(dt^4).

    Requires at least 5 samples. Interior points use the symmetric stencil
    (-f[j+2] + 8 f[j+1] - 8 f[j-1] + f[j-2]) / (12 dt); the two points at each
    boundary use one-sided five-point stencils of the same order.
    """
    if f.shape[0] < 5:
        raise ValueError("need at least 5 samples for the 4th-order stencil")
    d = np.empty_like(f)
    d[2:-2] = (-f[4:] + 8.0 * f[3:-1] - 8.0 * f[1:-3] + f[:-4]) / (12.0 * dt)
    d[0] = np.tensordot(_EDGE0, f[:5], axes=(0, 0)) / (12.0 * dt)
    d[1] = np.tensordot(_EDGE1, f[:5], axes=(0, 0)) / (12.0 * dt)
    d[-2] = -np.tensordot(_EDGE1, f[-1:-6:-1], axes=(0, 0)) / (12.0 * dt)
    d[-1] = -np.tensordot(_EDGE0, f[-1:-6:-1], axes=(0, 0)) / (12.0 * dt)
    return d


def derivative_4th_interior(f: np.ndarray, dt: float) -> np.ndarray:
    """Symmetric-stencil derivative for f[2:-2] only (streaming helper)."""
    return (-f[4:] + 8.0 * f[3:-1] - 8.0 * f[1:-3] + f[:-4]) / (12.0 * dt)


def simpson_weights(n_intervals: int, h: float) -> np.ndarray:
    """Quadrature weights for n_intervals+1 equidistant samples.

    Even interval count: extended Simpson rule. Odd count: Simpson on the
    first n-3 intervals plus the 3/8 rule on the final three.
    """
    return simpson_weight_range(n_intervals, h, 0, n_intervals + 1)


def simpson_weight_range(n_intervals: int, h: float, j0: int, j1: int) -> np.ndarray:
    """Weights for sample indices j0 <= j < j1 of the full n_intervals rule.

    Closed-form per-index evaluation so that streaming consumers never hold
    an O(n) weight array.
    """
    if n_intervals < 2:
        raise ValueError("need at least 2 intervals")
    j = np.arange(j0, j1)
    if n_intervals % 2 == 0:
        w = np.where(j % 2 == 1, 4.0, 2.0)
        w = np.where((j == 0) | (j == n_intervals), 1.0, w)
        return w * (h / 3.0)
    # odd: composite Simpson over [0, m], 3/8 rule over [m, n] with m = n - 3
    m = n_intervals - 3
    t38 = np.select([(j == m) | (j == n_intervals), (j == m + 1) | (j == m + 2)],
                    [1.0, 3.0], default=0.0) * (3.0 * h / 8.0)
    if m == 0:
        return t38
    simp = np.where(j % 2 == 1, 4.0, 2.0)
    simp = np.where((j == 0) | (j == m), 1.0, simp)
    return np.where(j <= m, simp * (h / 3.0), 0.0) + t38


def parabolic_peak(x0: float, h: float, ym: float, y0: float, yp: float) -> tuple[float, float]:
    """Refine a grid maximum by a parabola through (x0-h, ym), (x0, y0), (x0+h, yp).

    Returns (x_peak, y_peak); falls back to the grid point for a flat triple.
    """
    denom = ym - 2.0 * y0 + yp
    if denom == 0.0:
        return x0, y0
    d = 0.5 * (ym - yp) / denom
    d = min(max(d, -1.0), 1.0)
    return x0 + d * h, y0 - 0.25 * (ym - yp) * d


def principal_angle(x: float) -> float:
    """Reduce an angle to the principal branch (-pi, pi]."""
    y = float(np.angle(np.exp(1j * x)))
    if y <= -np.pi:
        y = np.pi
    return y
