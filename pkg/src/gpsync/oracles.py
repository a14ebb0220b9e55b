"""Closed-form reference results for the driven spin-1 limit-cycle oscillator.

These expressions are exact in their stated limits (first order in the signal
strength T, slow axis rotation) and serve both as fast analytic evaluators
and as independent oracles for the numerical machinery.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .evolver import LindbladModel
from .numerics import principal_angle
from .spinops import SQRT2, pauli_operators
from .vdp import VdpParams

__all__ = [
    "RwaSteadyState", "QubitDephasingParams", "vdp_populations", "vdp_coherences",
    "rwa_steady_state", "perturbative_density_matrix", "sync_measure_closed_form",
    "blockade_ratio", "gp_no_signal", "gp_cyclic_with_signal", "gp_noncyclic",
    "qubit_dephasing_gp", "qubit_dephasing_model",
]


@dataclass(frozen=True)
class RwaSteadyState:
    """First-order rotating-frame steady state: populations and coherences/T."""
    p_plus1: float
    p_0: float
    p_minus1: float
    c_plus1_0: complex
    c_0_minus1: complex

    @property
    def populations(self) -> tuple[float, float, float]:
        return (self.p_plus1, self.p_0, self.p_minus1)


def vdp_populations(gamma_g: float, gamma_d: float) -> tuple[float, float, float]:
    """Limit-cycle populations (p_+1, p_0, p_-1) = (g_g, g_d, 2 g_d)/(3 g_d + g_g)."""
    if gamma_g <= 0 or gamma_d <= 0:
        raise ValueError("rates must be positive")
    norm = 3.0 * gamma_d + gamma_g
    return (gamma_g / norm, gamma_d / norm, 2.0 * gamma_d / norm)


def vdp_coherences(gamma_g: float, gamma_d: float, delta: float,
                   phi_sig: float = 0.0) -> tuple[complex, complex]:
    """First-order coherences (c_{+1,0}, c_{0,-1}) of the entrained steady state.

    c_{+1,0} = a / b with
        a = -i e^{-i phi} [ (4 + 3 sqrt2) g_g g_d - 2 sqrt2 i g_d delta
                            - sqrt2 g_g (3 g_g - 2 i delta) ],
        b = 4 (3 g_d + g_g)(g_d + g_g - i delta)(3 g_g - 2 i delta),
    c_{0,-1} = -i e^{-i phi} g_d / [ sqrt2 (3 g_d + g_g)(3 g_g - 2 i delta) ].
    """
    if gamma_g <= 0 or gamma_d <= 0:
        raise ValueError("rates must be positive")
    phase = -1j * np.exp(-1j * phi_sig)
    a = phase * ((4.0 + 3.0 * SQRT2) * gamma_g * gamma_d
                 - 2.0 * SQRT2 * 1j * gamma_d * delta
                 - SQRT2 * gamma_g * (3.0 * gamma_g - 2j * delta))
    b = 4.0 * (3.0 * gamma_d + gamma_g) * (gamma_d + gamma_g - 1j * delta) \
        * (3.0 * gamma_g - 2j * delta)
    c_plus1_0 = a / b
    c_0_minus1 = phase * gamma_d / (SQRT2 * (3.0 * gamma_d + gamma_g)
                                    * (3.0 * gamma_g - 2j * delta))
    return complex(c_plus1_0), complex(c_0_minus1)


def rwa_steady_state(gamma_g: float, gamma_d: float, delta: float,
                     phi_sig: float = 0.0) -> RwaSteadyState:
    p1, p0, pm1 = vdp_populations(gamma_g, gamma_d)
    c10, c0m1 = vdp_coherences(gamma_g, gamma_d, delta, phi_sig)
    return RwaSteadyState(p1, p0, pm1, c10, c0m1)


def perturbative_density_matrix(ss: RwaSteadyState, T: float) -> np.ndarray:
    """Assemble diag(p) + T * (coherence matrix); valid to O(T^2)."""
    rho = np.diag([ss.p_plus1, ss.p_0, ss.p_minus1]).astype(complex)
    rho[0, 1] = T * ss.c_plus1_0
    rho[1, 0] = np.conj(rho[0, 1])
    rho[1, 2] = T * ss.c_0_minus1
    rho[2, 1] = np.conj(rho[1, 2])
    return rho


def sync_measure_closed_form(T: float, c_plus1_0: complex, c_0_minus1: complex) -> float:
    """Peak of the shifted phase distribution, (3 / 8 sqrt2) T |c_{+1,0} + c_{0,-1}|."""
    if T < 0:
        raise ValueError("T must be nonnegative")
    return float(3.0 / (8.0 * SQRT2) * T * abs(c_plus1_0 + c_0_minus1))


def blockade_ratio() -> float:
    """Gain/damping ratio at which the two coherences cancel on resonance.

    Setting c_{+1,0}(delta=0) = -c_{0,-1}(delta=0) reduces to the quadratic
    3 x^2 - (5 + 2 sqrt2) x - 2 = 0 in x = gamma_g / gamma_d; the positive
    root is returned (approx. 2.8439).
    """
    b = 5.0 + 2.0 * SQRT2
    return float((b + np.sqrt(b * b + 24.0)) / 6.0)


def gp_no_signal(alpha: float, populations: tuple[float, float, float]) -> float:
    """Cyclic adiabatic phase without a signal.

    arg[ p_+1 e^{+2 pi i cos a} + p_0 + p_-1 e^{-2 pi i cos a} ]: each level
    contributes the solid angle swept by its eigenvector on the cone.
    """
    p1, p0, pm1 = populations
    z = (p1 * np.exp(2j * np.pi * np.cos(alpha)) + p0
         + pm1 * np.exp(-2j * np.pi * np.cos(alpha)))
    return principal_angle(float(np.angle(z)))


def _signal_phase_shifts(p: VdpParams) -> tuple:
    """Common pieces of the small-signal phase formulas.

    The coherences are evaluated at the shifted detuning delta - omega cos(alpha)
    left behind by the slow axis rotation.
    """
    p1, p0, pm1 = vdp_populations(p.gamma_g, p.gamma_d)
    delta_eff = p.delta - p.axis.omega * np.cos(p.axis.alpha)
    c10, c0m1 = vdp_coherences(p.gamma_g, p.gamma_d, delta_eff, p.phi_sig)
    r10 = c10 / (p1 - p0)
    r0m = c0m1 / (p0 - pm1)
    q10 = SQRT2 * p.T * np.sin(p.axis.alpha) * (p.axis.omega / p.omega0) * np.imag(r10)
    q0m = SQRT2 * p.T * np.sin(p.axis.alpha) * (p.axis.omega / p.omega0) * np.imag(r0m)
    return (p1, p0, pm1, c10, c0m1, r10, r0m, q10, q0m)


def _warn_validity(p: VdpParams) -> None:
    if p.omega0 == 0.0 or abs(p.axis.omega / p.omega0) > 0.1 or p.T / p.gamma_d >= 1.0:
        warnings.warn("closed-form phase used outside its small-rotation/small-signal "
                      "validity regime (omega/omega0 <= 0.1, T/gamma_d < 1)",
                      stacklevel=3)


def gp_cyclic_with_signal(p: VdpParams) -> float:
    """Cyclic adiabatic phase with a weak signal, first order in T.

    Each level's solid-angle factor exp(+-2 pi i cos a) acquires a correction
    proportional to T sin(a) (omega/omega0) Im c / (population gap).
    """
    _warn_validity(p)
    p1, p0, pm1, _, _, _, _, q10, q0m = _signal_phase_shifts(p)
    ca = np.cos(p.axis.alpha)
    z = (p1 * np.exp(2j * np.pi * ca + 1j * q10)
         + p0 * np.exp(1j * (q0m - q10))
         + pm1 * np.exp(-2j * np.pi * ca - 1j * q0m))
    return principal_angle(float(np.angle(z)))


def gp_noncyclic(p: VdpParams, tau: float) -> float:
    """Open-path adiabatic phase on resonance, first order in T.

    Assembles the phase from the closed-form endpoint overlaps and connection
    integrals of the three eigenvectors. Exact reduction to the cyclic
    formula at tau = 2 pi / omega; the T-dependent connection terms carry no
    explicit tau dependence, so short-path use is flagged.
    """
    _warn_validity(p)
    omega = p.axis.omega
    if p.T != 0.0 and abs(omega * tau) < np.pi:
        warnings.warn("open-path closed form is reliable near a full rotation; "
                      f"omega*tau = {omega * tau:.3g} is deep in the short-path regime",
                      stacklevel=2)
    p1, p0, pm1, c10, c0m1, r10, r0m, q10, q0m = _signal_phase_shifts(p)
    ca, sa = np.cos(p.axis.alpha), np.sin(p.axis.alpha)
    ch, sh = np.cos(omega * tau / 2.0), np.sin(omega * tau / 2.0)
    a = ch - 1j * ca * sh
    b = ch + 1j * ca * sh
    tfac = SQRT2 * 1j * p.T * sa * sh
    ov1 = a * (a - tfac * r10)
    ov0 = (ca * ca + sa * sa * np.cos(omega * tau)
           - tfac * (-a * np.conj(c10) / (p1 - p0) + b * r0m))
    ovm1 = b * (b + tfac * np.conj(c0m1) / (p0 - pm1))
    i1 = 1j * omega * tau * ca + 1j * q10
    i0 = 1j * (q0m - q10)
    im1 = -1j * omega * tau * ca - 1j * q0m
    z = p1 * ov1 * np.exp(i1) + p0 * ov0 * np.exp(i0) + pm1 * ovm1 * np.exp(im1)
    return principal_angle(float(np.angle(z)))


@dataclass(frozen=True)
class QubitDephasingParams:
    """Two-level pure-dephasing benchmark: H = (eta/2) sigma_z, rate lam."""
    eta: float
    lam: float
    theta0: float
    tau: float

    def __post_init__(self) -> None:
        if self.lam <= 0:
            raise ValueError("lam must be positive")
        if not 0.0 <= self.theta0 <= np.pi:
            raise ValueError("theta0 must lie in [0, pi]")


def qubit_dephasing_model(eta: float, lam: float) -> LindbladModel:
    """Pure-dephasing qubit: H = (eta/2) sigma_z, jump sqrt(lam/2) sigma_z."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    s = pauli_operators()
    return LindbladModel.constant(0.5 * eta * s.sz, [np.sqrt(lam / 2.0) * s.sz])


def qubit_dephasing_gp(q: QubitDephasingParams) -> float:
    """Closed-form geometric phase of the dephasing qubit at time tau.

    Bloch vector (sin t0, 0, cos t0): the transverse component decays as
    e^{-lam t} while the z component is conserved, giving

        gamma = arg[ e^{-i eta tau/2} cos(t_tau/2) cos(t0/2)
                     + e^{+i eta tau/2} sin(t_tau/2) sin(t0/2) ]
                + (eta / 4 lam) *
                  ln[ (1-cos t0)(r + cos t0) / ((1+cos t0)(r - cos t0)) ],

    with t_tau = [arctan(e^{-lam tau} tan t0) + pi] mod pi and
    r = sqrt(cos^2 t0 + sin^2 t0 e^{-2 lam tau}). The result is reduced to
    (-pi, pi]. At the poles theta0 in {0, pi} the state is stationary and
    both terms' limits cancel; 0 is returned with a warning.
    """
    if q.theta0 in (0.0, np.pi):
        warnings.warn("theta0 at a pole: stationary pure state, phase limit is 0",
                      stacklevel=2)
        return 0.0
    theta_tau = np.mod(np.arctan(np.exp(-q.lam * q.tau) * np.tan(q.theta0)) + np.pi, np.pi)
    arg_term = np.angle(np.exp(-0.5j * q.eta * q.tau) * np.cos(theta_tau / 2.0)
                        * np.cos(q.theta0 / 2.0)
                        + np.exp(0.5j * q.eta * q.tau) * np.sin(theta_tau / 2.0)
                        * np.sin(q.theta0 / 2.0))
    c0 = np.cos(q.theta0)
    s2 = np.sin(q.theta0) ** 2
    r = np.sqrt(c0 * c0 + s2 * np.exp(-2.0 * q.lam * q.tau))
    # (r -+ c0) rewritten via s^2 e^{-2 lam tau}/(r +- c0): algebraically
    # identical but immune to catastrophic cancellation at large lam*tau
    if c0 >= 0.0:
        log_term = (q.eta / (4.0 * q.lam)) * (
            np.log((1.0 - c0) * (r + c0) ** 2 / ((1.0 + c0) * s2)) + 2.0 * q.lam * q.tau)
    else:
        log_term = (q.eta / (4.0 * q.lam)) * (
            np.log((1.0 - c0) * s2 / ((1.0 + c0) * (r - c0) ** 2)) - 2.0 * q.lam * q.tau)
    return principal_angle(float(arg_term + log_term))
