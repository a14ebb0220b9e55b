"""Spin-1 van der Pol limit-cycle oscillator models.

Two builders are provided: the lab-frame model, in which the quantization
axis rotates on a cone and every operator is conjugated by the rotation
R(alpha, t), and the time-independent model obtained in the frame rotating at
the signal frequency after the rotating-wave approximation, where the slow
axis rotation survives as the detuning shift omega cos(alpha).
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .evolver import LindbladModel, RotatingDriveSpec, liouvillian_superoperator, steady_state
from .spinops import SQRT2, ConeAxis, _axis_eigensystem, rotation_operator, spin1_operators


@dataclass(frozen=True)
class VdpParams:
    """Parameters of the driven spin-1 limit-cycle oscillator.

    Frequencies and rates share one unit system (conventionally gamma_d = 1).
    omega_sig defaults to omega0 (resonant signal); the detuning
    delta = omega_sig - omega0 is derived, never stored.
    """
    omega0: float
    gamma_g: float
    gamma_d: float
    axis: ConeAxis
    tau: float
    T: float = 0.0
    omega_sig: float | None = None
    phi_sig: float = 0.0
    n_step: int = 200_000

    def __post_init__(self) -> None:
        if self.gamma_g <= 0 or self.gamma_d <= 0:
            raise ValueError("gamma_g and gamma_d must be positive")
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        if self.n_step < 4:
            raise ValueError("n_step must be >= 4")
        if self.omega_sig is None:
            object.__setattr__(self, "omega_sig", self.omega0)

    @property
    def delta(self) -> float:
        return self.omega_sig - self.omega0

    def with_(self, **kwargs) -> "VdpParams":
        return replace(self, **kwargs)


def vdp_jump_operators(gamma_g: float, gamma_d: float) -> tuple[np.ndarray, np.ndarray]:
    """Gain and damping jump operators stabilizing the limit cycle.

    G1 = sqrt(gamma_g/2) (sqrt(2) Sz S+ - S+ Sz) pumps one excitation,
    G2 = sqrt(gamma_d/2) S-^2 removes two; neither prefers an oscillation
    phase.
    """
    if gamma_g <= 0 or gamma_d <= 0:
        raise ValueError("rates must be positive")
    s = spin1_operators()
    g1 = np.sqrt(gamma_g / 2.0) * (SQRT2 * s.sz @ s.splus - s.splus @ s.sz)
    g2 = np.sqrt(gamma_d / 2.0) * (s.sminus @ s.sminus)
    return g1, g2


def build_lab_frame_model(p: VdpParams) -> LindbladModel:
    """Lab-frame model with rotating quantization axis and transverse signal.

    H(t) = R(alpha,t) (omega0 Sz + T cos(omega_sig t + phi_sig) Sx) R^dag(alpha,t),
    jump operators R(alpha,t) G_j R^dag(alpha,t). With omega = 0 and T = 0 the
    model is time independent and equals the bare oscillator.
    """
    s = spin1_operators()
    g1, g2 = vdp_jump_operators(p.gamma_g, p.gamma_d)
    h0 = p.omega0 * s.sz
    axis = p.axis
    static = axis.omega == 0.0 and p.T == 0.0

    def hamiltonian_at(t: float) -> np.ndarray:
        h = h0 + p.T * np.cos(p.omega_sig * t + p.phi_sig) * s.sx
        r = rotation_operator(axis, t)
        return r @ h @ r.conj().T

    def jump_operators_at(t: float) -> list[np.ndarray]:
        r = rotation_operator(axis, t)
        rd = r.conj().T
        return [r @ g1 @ rd, r @ g2 @ rd]

    evals, evecs = _axis_eigensystem(axis.alpha)
    spec = RotatingDriveSpec(
        base_superop=liouvillian_superoperator(h0, [g1, g2]),
        drive_superop=liouvillian_superoperator(s.sx, []),
        amp=p.T, drive_freq=p.omega_sig, drive_phase=p.phi_sig,
        rot_eigvals=np.asarray(evals, dtype=float),
        rot_eigvecs=np.asarray(evecs, dtype=complex),
        rot_freq=axis.omega)
    return LindbladModel(dim=3, hamiltonian_at=hamiltonian_at,
                         jump_operators_at=jump_operators_at,
                         time_dependent=not static, fast_spec=spec)


def build_rwa_model(p: VdpParams) -> LindbladModel:
    """Time-independent model in the frame rotating at the signal frequency.

    H = (omega0 - omega_sig + omega cos alpha) Sz
        + (T/4) (exp(-i phi_sig) S+ + exp(+i phi_sig) S-),
    with the bare jump operators; the omega cos(alpha) term is the detuning
    correction left behind by the slow axis rotation.
    """
    s = spin1_operators()
    g1, g2 = vdp_jump_operators(p.gamma_g, p.gamma_d)
    h = ((p.omega0 - p.omega_sig + p.axis.omega * np.cos(p.axis.alpha)) * s.sz
         + 0.25 * p.T * (np.exp(-1j * p.phi_sig) * s.splus
                         + np.exp(1j * p.phi_sig) * s.sminus))
    return LindbladModel.constant(h, [g1, g2])


def initial_steady_state(p: VdpParams) -> np.ndarray:
    """Stationary state of the lab-frame generator frozen at t = 0.

    At t = 0 the rotation is the identity, so this is the steady state of the
    bare oscillator with the instantaneous signal term T cos(phi_sig) Sx; it
    is the natural starting point for adiabatic rotation paths.
    """
    return steady_state(build_lab_frame_model(p), t=0.0)
