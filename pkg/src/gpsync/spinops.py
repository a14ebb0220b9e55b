"""Spin-1 operator algebra, axis rotations, coherent states, and phase-space tools.

Matrices use the basis ordering m = +1, 0, -1. The qubit Pauli operators are
provided as the spin-1/2 special case (basis up, down).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .numerics import parabolic_peak, simpson_weights
from .operators import require_density_matrix

SQRT2 = np.sqrt(2.0)

# spin-1 matrices, basis (|+1>, |0>, |-1>)
_S1_Z = np.diag([1.0, 0.0, -1.0]).astype(complex)
_S1_PLUS = SQRT2 * np.array([[0, 1, 0],
                             [0, 0, 1],
                             [0, 0, 0]], dtype=complex)
_S1_MINUS = _S1_PLUS.conj().T
_S1_X = 0.5 * (_S1_PLUS + _S1_MINUS)
_S1_Y = -0.5j * (_S1_PLUS - _S1_MINUS)

_PAULI_Z = np.diag([1.0, -1.0]).astype(complex)
_PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
_PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)


class SpinOperators(NamedTuple):
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray
    splus: np.ndarray
    sminus: np.ndarray


def spin1_operators() -> SpinOperators:
    """Spin-1 generators and ladder operators, [S_j, S_k] = i eps_jkl S_l."""
    return SpinOperators(_S1_X.copy(), _S1_Y.copy(), _S1_Z.copy(),
                         _S1_PLUS.copy(), _S1_MINUS.copy())


def pauli_operators() -> SpinOperators:
    """Qubit Pauli matrices sigma_x/y/z and sigma_+/- (basis up, down)."""
    splus = 0.5 * (_PAULI_X + 1j * _PAULI_Y)
    return SpinOperators(_PAULI_X.copy(), _PAULI_Y.copy(), _PAULI_Z.copy(),
                         splus, splus.conj().T)


@dataclass(frozen=True)
class ConeAxis:
    """Rotation of the quantization axis on a cone.

    alpha is the cone opening angle; the symmetry axis is
    (sin alpha, 0, cos alpha). omega is the rotation frequency; its sign
    selects the traversal direction of the path.
    """
    alpha: float
    omega: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= np.pi:
            raise ValueError(f"alpha must lie in [0, pi], got {self.alpha}")

    @property
    def direction(self) -> np.ndarray:
        return np.array([np.sin(self.alpha), 0.0, np.cos(self.alpha)])


@lru_cache(maxsize=128)
def _axis_eigensystem(alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending: -1, 0, +1) and eigenvectors of n(alpha) . S."""
    gen = np.sin(alpha) * _S1_X + np.cos(alpha) * _S1_Z
    evals, evecs = np.linalg.eigh(gen)
    evals.flags.writeable = False
    evecs.flags.writeable = False
    return evals, evecs


def axis_generator(axis: ConeAxis) -> np.ndarray:
    """The Hermitian generator n(alpha) . S of the axis rotation."""
    return np.sin(axis.alpha) * _S1_X + np.cos(axis.alpha) * _S1_Z


def rotation_operator(axis: ConeAxis, t: float) -> np.ndarray:
    """Unitary exp(-i omega t n(alpha) . S) rotating the quantization axis."""
    evals, evecs = _axis_eigensystem(axis.alpha)
    phases = np.exp(-1j * axis.omega * t * evals)
    return (evecs * phases) @ evecs.conj().T


def coherent_spin_state(theta: float, phi: float) -> np.ndarray:
    """Spin-1 coherent state exp(-i phi Sz) exp(-i theta Sy) |1,+1>."""
    if not 0.0 <= theta <= np.pi:
        raise ValueError(f"theta must lie in [0, pi], got {theta}")
    return _coherent_components(np.asarray(theta, dtype=float),
                                np.asarray(phi, dtype=float))


def _coherent_components(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Components <m|theta,phi> stacked on the leading axis; broadcasts."""
    c = np.cos(theta / 2.0)
    s = np.sin(theta / 2.0)
    return np.stack([np.exp(-1j * phi) * c * c,
                     SQRT2 * s * c * np.ones_like(phi, dtype=float),
                     np.exp(1j * phi) * s * s])


def husimi_q(rho: np.ndarray, theta, phi):
    """Husimi function ((2S+1)/4pi) <theta,phi| rho |theta,phi> for spin 1.

    The (2S+1)/(4pi) prefactor normalizes the function to unit integral over
    the sphere; scalar or broadcastable array angles are accepted.
    """
    require_density_matrix(rho)
    if rho.shape[0] != 3:
        raise ValueError("husimi_q expects a spin-1 (3x3) density matrix")
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    v = _coherent_components(theta, phi)
    q = np.einsum("a...,ab,b...->...", v.conj(), rho, v).real * (3.0 / (4.0 * np.pi))
    if q.ndim == 0:
        return float(q)
    return q


@dataclass(frozen=True)
class PhaseDistribution:
    """Shifted phase distribution S(phi) on a uniform grid over [0, 2pi)."""
    phi_grid: np.ndarray
    values: np.ndarray

    @property
    def integral(self) -> float:
        """Periodic rectangle-rule integral over phi (zero by construction)."""
        return float(self.values.sum() * (2.0 * np.pi / self.values.size))


def phase_distribution(rho: np.ndarray, n_phi: int, n_theta: int = 129) -> PhaseDistribution:
    """Marginal phase distribution of the Husimi function, shifted to zero mean.

    The theta integral of sin(theta) Q(theta, phi) uses the composite Simpson
    rule on n_theta nodes (the quadrature family shared with the phase
    integration elsewhere in the package). Writing the phi dependence through
    the coherence harmonics e^{i(m-m')phi} removes the uniform 1/(2pi) offset
    identically, so diagonal states evaluate to exactly zero.
    """
    require_density_matrix(rho)
    if rho.shape[0] != 3:
        raise ValueError("phase_distribution expects a spin-1 (3x3) density matrix")
    if n_phi < 16:
        raise ValueError(f"n_phi must be >= 16, got {n_phi}")
    if n_theta < 5:
        raise ValueError(f"n_theta must be >= 5, got {n_theta}")
    thetas = np.linspace(0.0, np.pi, n_theta)
    phis = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
    # real coherent-state components at phi = 0; the phi dependence of
    # sin(theta) Q enters only through e^{i(m-m')phi}
    comps = _coherent_components(thetas, np.zeros_like(thetas)).real
    w = simpson_weights(n_theta - 1, thetas[1] - thetas[0]) * np.sin(thetas)
    overlap_int = (comps * w) @ comps.T  # int sin(theta) a_m a_m' dtheta
    coeff = (3.0 / (4.0 * np.pi)) * rho * overlap_int
    z1 = coeff[0, 1] + coeff[1, 2]  # one-quantum coherences, harmonic e^{i phi}
    z2 = coeff[0, 2]                # two-quantum coherence, harmonic e^{2 i phi}
    values = 2.0 * np.real(z1 * np.exp(1j * phis) + z2 * np.exp(2j * phis))
    return PhaseDistribution(phi_grid=phis, values=values)


def sync_measure_numeric(rho: np.ndarray, n_phi: int = 512,
                         n_theta: int = 129) -> tuple[float, float]:
    """Maximum of the shifted phase distribution and its location.

    Returns (S_max, phi_max); phi_max is refined by a three-point parabolic
    fit around the discrete arg-max. A distribution that is flat to numerical
    precision reports (0, 0) by convention.
    """
    dist = phase_distribution(rho, n_phi=n_phi, n_theta=n_theta)
    values, phis = dist.values, dist.phi_grid
    i0 = int(np.argmax(values))
    if values[i0] < 1e-13:
        return 0.0, 0.0
    h = phis[1] - phis[0]
    n = values.size
    x_peak, y_peak = parabolic_peak(phis[i0], h,
                                    values[(i0 - 1) % n], values[i0], values[(i0 + 1) % n])
    return float(y_peak), float(np.mod(x_peak, 2.0 * np.pi))
