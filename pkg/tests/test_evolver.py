import numpy as np
import pytest

from gpsync.errors import NonUniqueSteadyState, TraceDriftError
from gpsync.evolver import (LindbladModel, evolve, liouvillian_apply,
                            liouvillian_superoperator, steady_state)
from gpsync.oracles import qubit_dephasing_model, vdp_populations
from gpsync.spinops import ConeAxis, pauli_operators, spin1_operators
from gpsync.vdp import VdpParams, build_lab_frame_model, build_rwa_model, vdp_jump_operators

PAULI = pauli_operators()
S1 = spin1_operators()


def bloch_state(theta):
    return 0.5 * (np.eye(2, dtype=complex) + np.sin(theta) * PAULI.sx
                  + np.cos(theta) * PAULI.sz)


def test_liouvillian_apply_trivial_zero():
    model = LindbladModel.constant(np.zeros((2, 2), dtype=complex), [])
    rho = bloch_state(0.7)
    assert np.abs(liouvillian_apply(model, rho, 0.0)).max() == 0.0


def test_liouvillian_apply_eigenstate_stationary():
    model = LindbladModel.constant(2.0 * S1.sz, [])
    rho = np.zeros((3, 3), dtype=complex)
    rho[0, 0] = 1.0
    assert np.abs(liouvillian_apply(model, rho, 0.0)).max() < 1e-14


def test_liouvillian_apply_dephasing_coherence_rate():
    # d rho01 / dt = -(i eta + lam) rho01
    eta, lam = 1.3, 0.4
    model = qubit_dephasing_model(eta, lam)
    rho = bloch_state(np.pi / 3)
    out = liouvillian_apply(model, rho, 0.0)
    assert out[0, 1] == pytest.approx(-(1j * eta + lam) * rho[0, 1], abs=1e-14)
    # output is traceless and Hermitian
    assert abs(np.trace(out)) < 1e-14
    assert np.abs(out - out.conj().T).max() < 1e-12


def test_liouvillian_apply_dimension_mismatch():
    model = qubit_dephasing_model(1.0, 0.1)
    with pytest.raises(ValueError):
        liouvillian_apply(model, np.eye(3, dtype=complex) / 3.0, 0.0)


def test_superoperator_matches_apply():
    g1, g2 = vdp_jump_operators(0.5, 1.0)
    h = 1.7 * S1.sz + 0.2 * S1.sx
    model = LindbladModel.constant(h, [g1, g2])
    rho = np.diag([0.5, 0.3, 0.2]).astype(complex)
    rho[0, 2] = 0.1j
    rho[2, 0] = -0.1j
    direct = liouvillian_apply(model, rho, 0.0)
    via_superop = (liouvillian_superoperator(h, [g1, g2]) @ rho.reshape(-1)).reshape(3, 3)
    assert np.abs(direct - via_superop).max() < 1e-13


def test_evolve_free_evolution_constant():
    model = LindbladModel.constant(np.zeros((2, 2), dtype=complex), [])
    rho0 = bloch_state(0.3)
    traj = evolve(model, rho0, 1.0, 10)
    assert np.abs(traj.states - rho0[None]).max() < 1e-15


def test_evolve_dephasing_decay_closed_form():
    eta, lam, tau = 1.0, 0.3, 4.0
    model = qubit_dephasing_model(eta, lam)
    rho0 = bloch_state(np.pi / 4)
    traj = evolve(model, rho0, tau, 400)
    got = traj.states[-1][0, 1]
    expect = rho0[0, 1] * np.exp(-(1j * eta + lam) * tau)
    assert abs(got - expect) < 1e-9
    assert abs(abs(got) - abs(rho0[0, 1]) * np.exp(-lam * tau)) < 1e-9


def test_evolve_trace_and_positivity():
    p = VdpParams(omega0=2.0, gamma_g=0.4, gamma_d=1.0, axis=ConeAxis(np.pi / 4, 0.1),
                  tau=8.0, T=0.15, n_step=4000)
    model = build_lab_frame_model(p)
    traj = evolve(model, steady_state(model, 0.0), p.tau, p.n_step)
    assert traj.trace_drift < 1e-10
    assert np.linalg.eigvalsh(traj.states).min() > -1e-8


def test_evolve_fourth_order_convergence():
    eta, lam, tau = 2.0, 0.5, 2.0
    model = qubit_dephasing_model(eta, lam)
    rho0 = bloch_state(1.0)
    exact = rho0[0, 1] * np.exp(-(1j * eta + lam) * tau)

    def err(n):
        final = evolve(model, rho0, tau, n, use_fast_path=False).states[-1]
        return abs(final[0, 1] - exact)

    ratio = err(50) / err(100)
    assert 12.0 < ratio < 20.0


def test_evolve_kernel_matches_python_loop():
    p = VdpParams(omega0=1.0, gamma_g=0.5, gamma_d=1.0, axis=ConeAxis(np.pi / 4, 0.05),
                  tau=5.0, T=0.2, omega_sig=1.1, phi_sig=0.3, n_step=500)
    model = build_lab_frame_model(p)
    rho0 = steady_state(model, 0.0)
    fast = evolve(model, rho0, p.tau, p.n_step, use_fast_path=True)
    slow = evolve(model, rho0, p.tau, p.n_step, use_fast_path=False)
    assert np.abs(fast.states - slow.states).max() < 1e-13


def test_evolve_streaming_matches_materialized():
    model = qubit_dephasing_model(1.0, 0.2)
    rho0 = bloch_state(0.8)
    mat = evolve(model, rho0, 3.0, 60)
    streamed = evolve(model, rho0, 3.0, 60, store=False)
    assert streamed.states is None
    stream_states = np.array(list(streamed.steps()))
    assert stream_states.shape == (61, 2, 2)
    assert np.abs(stream_states - mat.states).max() == 0.0


def test_evolve_aborts_on_instability():
    # absurdly stiff decay with a tiny step count blows up RK4; the runaway
    # intermediates corrupt the trace, which triggers the abort
    gamma = 1e6
    decay = np.sqrt(gamma) * np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    model = LindbladModel.constant(np.zeros((2, 2), dtype=complex), [decay])
    with pytest.raises(TraceDriftError):
        evolve(model, bloch_state(1.0), 1.0, 4)
    with pytest.raises(TraceDriftError):
        evolve(model, bloch_state(1.0), 1.0, 4, use_fast_path=False)


def test_evolve_validates_input():
    model = qubit_dephasing_model(1.0, 0.1)
    with pytest.raises(ValueError):
        evolve(model, bloch_state(0.5), 1.0, 3)
    with pytest.raises(ValueError):
        evolve(model, np.diag([0.7, 0.7]).astype(complex), 1.0, 10)


def test_steady_state_vdp_populations():
    # stationary populations (gamma_g, gamma_d, 2 gamma_d) / (3 gamma_d + gamma_g)
    for gg in (0.1, 0.5, 2.8439):
        g1, g2 = vdp_jump_operators(gg, 1.0)
        model = LindbladModel.constant(np.zeros((3, 3), dtype=complex), [g1, g2])
        rho = steady_state(model)
        assert np.abs(np.diag(rho).real - vdp_populations(gg, 1.0)).max() < 1e-12
        assert np.abs(rho - np.diag(np.diag(rho))).max() < 1e-12


def test_steady_state_dephasing_not_unique():
    with pytest.raises(NonUniqueSteadyState):
        steady_state(qubit_dephasing_model(1.0, 0.5))


def test_steady_state_coherences_first_order():
    # numerical steady state reproduces the first-order coherences to O(T^2)
    from gpsync.oracles import vdp_coherences

    t_sig, delta = 0.01, 0.0
    p = VdpParams(omega0=1.0, gamma_g=0.5, gamma_d=1.0, axis=ConeAxis(0.0, 0.0),
                  tau=1.0, T=t_sig, omega_sig=1.0 + delta, n_step=10)
    rho = steady_state(build_rwa_model(p))
    c10, c0m1 = vdp_coherences(0.5, 1.0, delta, 0.0)
    assert abs(rho[0, 1] / t_sig - c10) < 10.0 * t_sig ** 2
    assert abs(rho[1, 2] / t_sig - c0m1) < 10.0 * t_sig ** 2
    assert abs(rho[0, 2]) < 10.0 * t_sig ** 2


def test_steady_state_is_fixed_point_of_evolve():
    g1, g2 = vdp_jump_operators(0.7, 1.0)
    model = LindbladModel.constant(1.5 * S1.sz, [g1, g2])
    rho_ss = steady_state(model)
    traj = evolve(model, rho_ss, 5.0, 500)
    assert np.abs(traj.states - rho_ss[None]).max() < 1e-8
