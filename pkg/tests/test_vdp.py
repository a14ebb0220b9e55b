import numpy as np
import pytest

from gpsync.evolver import evolve, liouvillian_apply, steady_state
from gpsync.operators import trace_norm
from gpsync.spinops import ConeAxis, rotation_operator, spin1_operators
from gpsync.vdp import (VdpParams, build_lab_frame_model, build_rwa_model,
                        initial_steady_state, vdp_jump_operators)
from gpsync.oracles import vdp_populations

S = spin1_operators()
SQ2 = np.sqrt(2.0)


def params(**kw):
    base = dict(omega0=1.0, gamma_g=0.5, gamma_d=1.0, axis=ConeAxis(np.pi / 4, 0.05),
                tau=10.0, T=0.0, n_step=100)
    base.update(kw)
    return VdpParams(**base)


def test_jump_operator_matrices():
    g1, g2 = vdp_jump_operators(0.3, 0.7)
    # G1 = sqrt(g_g/2) (2 |+1><0| + sqrt2 |0><-1|)
    expect1 = np.zeros((3, 3), dtype=complex)
    expect1[0, 1] = 2.0
    expect1[1, 2] = SQ2
    assert np.abs(g1 - np.sqrt(0.3 / 2.0) * expect1).max() < 1e-14
    # G2 = sqrt(2 g_d) |-1><+1|
    expect2 = np.zeros((3, 3), dtype=complex)
    expect2[2, 0] = 1.0
    assert np.abs(g2 - np.sqrt(2.0 * 0.7) * expect2).max() < 1e-14


def test_jump_operator_norm_sum():
    gg, gd = 0.4, 1.3
    g1, g2 = vdp_jump_operators(gg, gd)
    total = g1.conj().T @ g1 + g2.conj().T @ g2
    assert np.abs(total - np.diag([2.0 * gd, 2.0 * gg, gg])).max() < 1e-14


def test_jump_operators_validate_rates():
    with pytest.raises(ValueError):
        vdp_jump_operators(0.0, 1.0)


def test_lab_model_static_when_unrotated_undriven():
    p = params(axis=ConeAxis(np.pi / 4, 0.0), T=0.0)
    model = build_lab_frame_model(p)
    assert not model.time_dependent
    assert np.abs(model.hamiltonian_at(3.0) - p.omega0 * S.sz).max() < 1e-14
    g1, g2 = vdp_jump_operators(p.gamma_g, p.gamma_d)
    for got, expect in zip(model.jump_operators_at(5.0), (g1, g2)):
        assert np.abs(got - expect).max() < 1e-14


def test_lab_model_at_t0_points_along_z():
    p = params(T=0.3, phi_sig=0.7)
    model = build_lab_frame_model(p)
    expect = p.omega0 * S.sz + p.T * np.cos(p.phi_sig) * S.sx
    assert np.abs(model.hamiltonian_at(0.0) - expect).max() < 1e-13


def test_lab_model_operators_are_rotated_conjugates():
    p = params(T=0.2, omega_sig=1.3)
    model = build_lab_frame_model(p)
    g1, g2 = vdp_jump_operators(p.gamma_g, p.gamma_d)
    for t in (0.0, 1.7, 4.2):
        r = rotation_operator(p.axis, t)
        h_bare = p.omega0 * S.sz + p.T * np.cos(p.omega_sig * t + p.phi_sig) * S.sx
        assert np.abs(model.hamiltonian_at(t) - r @ h_bare @ r.conj().T).max() < 1e-12
        assert np.abs(model.hamiltonian_at(t)
                      - model.hamiltonian_at(t).conj().T).max() < 1e-12
        got1, got2 = model.jump_operators_at(t)
        assert np.abs(got1 - r @ g1 @ r.conj().T).max() < 1e-12
        assert np.abs(got2 - r @ g2 @ r.conj().T).max() < 1e-12


def test_lab_model_liouvillian_traceless():
    p = params(T=0.4, axis=ConeAxis(0.9, 0.2))
    model = build_lab_frame_model(p)
    rho = np.eye(3, dtype=complex) / 3.0
    out = liouvillian_apply(model, rho, 1.3)
    assert abs(np.trace(out)) < 1e-14


def test_rwa_model_trivial_cases():
    # no rotation, resonant, no signal: H = 0
    p = params(axis=ConeAxis(np.pi / 4, 0.0), T=0.0, omega_sig=1.0)
    h = build_rwa_model(p).hamiltonian_at(0.0)
    assert np.abs(h).max() < 1e-14
    # no rotation, signal on, phi = 0: H = -Delta Sz + (T/2) Sx
    delta, t_sig = 0.3, 0.2
    p = params(axis=ConeAxis(np.pi / 4, 0.0), T=t_sig, omega_sig=1.0 + delta)
    h = build_rwa_model(p).hamiltonian_at(0.0)
    assert np.abs(h - (-delta * S.sz + 0.5 * t_sig * S.sx)).max() < 1e-14


def test_rwa_model_detuning_shift():
    # the slow axis rotation shifts the detuning by omega cos(alpha)
    p = params(axis=ConeAxis(np.pi / 3, 0.08), T=0.0, omega_sig=1.25)
    h = build_rwa_model(p).hamiltonian_at(0.0)
    coeff = p.omega0 - p.omega_sig + 0.08 * np.cos(np.pi / 3)
    assert np.abs(h - coeff * S.sz).max() < 1e-14


def test_signal_off_reduction_same_steady_state():
    lab = build_lab_frame_model(params(axis=ConeAxis(0.8, 0.0), T=0.0))
    rwa = build_rwa_model(params(axis=ConeAxis(0.8, 0.0), T=0.0, omega_sig=1.0))
    rho_lab = steady_state(lab)
    rho_rwa = steady_state(rwa)
    assert np.abs(rho_lab - rho_rwa).max() < 1e-12
    assert np.abs(np.diag(rho_lab).real - vdp_populations(0.5, 1.0)).max() < 1e-12


def test_frame_consistency_against_rwa():
    # omega = 0: conjugating the lab evolution by exp(+i omega_sig t Sz)
    # reproduces the rotating-frame evolution up to counter-rotating terms
    t_sig, omega_sig, tau, n = 0.01, 10.0, 2.0, 2000
    p = params(omega0=10.0, axis=ConeAxis(np.pi / 4, 0.0), T=t_sig,
               omega_sig=omega_sig, tau=tau, n_step=n)
    rwa = build_rwa_model(p)
    lab = build_lab_frame_model(p)
    rho0 = steady_state(rwa)
    traj_lab = evolve(lab, rho0, tau, n)
    traj_rwa = evolve(rwa, rho0, tau, n)
    worst = 0.0
    for j in (n // 2, n):
        t = j * (tau / n)
        u = np.diag(np.exp(1j * omega_sig * t * np.array([1.0, 0.0, -1.0])))
        moved = u @ traj_lab.states[j] @ u.conj().T
        worst = max(worst, trace_norm(moved - traj_rwa.states[j]))
    assert worst < 5e-3


def test_population_fixed_point_under_slow_rotation():
    # T = 0, omega well below the rates: the spectrum stays at the
    # limit-cycle populations
    p = params(omega0=2.0, gamma_g=0.25, axis=ConeAxis(np.pi / 4, 0.02),
               T=0.0, tau=30.0, n_step=6000)
    model = build_lab_frame_model(p)
    traj = evolve(model, steady_state(model, 0.0), p.tau, p.n_step)
    pops = np.linalg.eigvalsh(traj.states[:: p.n_step // 20])
    expect = np.sort(vdp_populations(p.gamma_g, p.gamma_d))
    assert np.abs(pops - expect[None]).max() < 1e-3


def test_initial_steady_state_is_stationary_at_t0():
    p = params(T=0.1)
    rho0 = initial_steady_state(p)
    model = build_lab_frame_model(p)
    assert np.abs(liouvillian_apply(model, rho0, 0.0)).max() < 1e-10


def test_params_validation():
    with pytest.raises(ValueError):
        params(gamma_g=-0.1)
    with pytest.raises(ValueError):
        params(n_step=2)
    with pytest.raises(ValueError):
        params(tau=0.0)
    p = params(omega_sig=None)
    assert p.omega_sig == p.omega0
    assert p.delta == 0.0
    assert params(omega_sig=1.4).delta == pytest.approx(0.4)
