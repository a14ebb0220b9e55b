"""Lindblad master-equation propagation and steady states.

The equation of motion is

    d rho / dt = -i [H(t), rho] + sum_j ( G_j rho G_j^dag - {G_j^dag G_j, rho}/2 )

with the rates folded into the jump-operator prefactors. Propagation uses
classical fixed-step fourth-order Runge-Kutta on an equidistant grid, with the
density matrix re-symmetrized after every step. Models carrying a
:class:`RotatingDriveSpec` are integrated by a compiled kernel that evaluates
the identical Liouvillian (tested to agree with the generic implementation to
machine precision).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import NonUniqueSteadyState, TraceDriftError
from .operators import hermitize, require_density_matrix, require_hermitian

TRACE_ABORT = 1e-6


def liouvillian_superoperator(h: np.ndarray, jumps: Sequence[np.ndarray]) -> np.ndarray:
    """Matrix of the Liouvillian acting on row-major vectorized density matrices."""
    d = h.shape[0]
    eye = np.eye(d)
    super_op = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    for g in jumps:
        gdg = g.conj().T @ g
        super_op += np.kron(g, g.conj()) - 0.5 * (np.kron(gdg, eye) + np.kron(eye, gdg.T))
    return super_op


@dataclass(frozen=True)
class RotatingDriveSpec:
    """Structure descriptor for the compiled fast path.

    Encodes Liouvillians of the form

        L(t) rho = R(t) [ (L0 + amp cos(drive_freq t + drive_phase) L1)
                          (R(t)^dag rho R(t)) ] R(t)^dag,

    R(t) = V diag(exp(-i rot_freq t rot_eigvals)) V^dag, which covers constant
    models (rot_freq = 0, amp = 0) and frame-rotated driven ones alike.
    """
    base_superop: np.ndarray
    drive_superop: np.ndarray
    amp: float
    drive_freq: float
    drive_phase: float
    rot_eigvals: np.ndarray
    rot_eigvecs: np.ndarray
    rot_freq: float

    @classmethod
    def constant(cls, h: np.ndarray, jumps: Sequence[np.ndarray]) -> "RotatingDriveSpec":
        d = h.shape[0]
        return cls(base_superop=liouvillian_superoperator(h, jumps),
                   drive_superop=np.zeros((d * d, d * d), dtype=complex),
                   amp=0.0, drive_freq=0.0, drive_phase=0.0,
                   rot_eigvals=np.zeros(d), rot_eigvecs=np.eye(d, dtype=complex),
                   rot_freq=0.0)


@dataclass(frozen=True)
class LindbladModel:
    """Time-dependent Hamiltonian plus jump operators on a d-dimensional space."""
    dim: int
    hamiltonian_at: Callable[[float], np.ndarray]
    jump_operators_at: Callable[[float], list[np.ndarray]]
    time_dependent: bool = True
    fast_spec: RotatingDriveSpec | None = None

    @classmethod
    def constant(cls, h: np.ndarray, jumps: Sequence[np.ndarray]) -> "LindbladModel":
        h = np.asarray(h, dtype=complex)
        jumps = [np.asarray(g, dtype=complex) for g in jumps]
        require_hermitian(h, name="hamiltonian")
        return cls(dim=h.shape[0],
                   hamiltonian_at=lambda t: h,
                   jump_operators_at=lambda t: jumps,
                   time_dependent=False,
                   fast_spec=RotatingDriveSpec.constant(h, jumps))


def liouvillian_apply(model: LindbladModel, rho: np.ndarray, t: float) -> np.ndarray:
    """Right-hand side -i[H(t), rho] + sum_j D[G_j(t)] rho."""
    if rho.shape != (model.dim, model.dim):
        raise ValueError(f"rho has shape {rho.shape}, model dimension is {model.dim}")
    require_hermitian(rho, name="rho")
    return _rhs(model, rho, t)


@dataclass
class Trajectory:
    """Density matrices on the equidistant grid t_j = t0 + j dt, j = 0..n_step."""
    t0: float
    dt: float
    n_step: int
    states: np.ndarray | None = None
    factory: Callable[[], Iterator[np.ndarray]] | None = None
    trace_drift: float = 0.0

    @property
    def tau(self) -> float:
        return self.n_step * self.dt

    @property
    def materialized(self) -> bool:
        return self.states is not None

    def steps(self) -> Iterator[np.ndarray]:
        """Iterate over the n_step+1 states; streamed trajectories re-integrate."""
        if self.states is not None:
            return iter(self.states)
        if self.factory is None:
            raise ValueError("trajectory has neither states nor a factory")
        return self.factory()


def _rhs(model: LindbladModel, rho: np.ndarray, t: float) -> np.ndarray:
    h = model.hamiltonian_at(t)
    out = -1j * (h @ rho - rho @ h)
    for g in model.jump_operators_at(t):
        gdg = g.conj().T @ g
        out += g @ rho @ g.conj().T - 0.5 * (gdg @ rho + rho @ gdg)
    return out


def _python_steps(model: LindbladModel, rho0: np.ndarray, dt: float,
                  n_step: int, drift_out: list[float]) -> Iterator[np.ndarray]:
    rho = rho0.copy()
    yield rho.copy()
    drift = 0.0
    for j in range(n_step):
        t = j * dt
        k1 = _rhs(model, rho, t)
        k2 = _rhs(model, rho + 0.5 * dt * k1, t + 0.5 * dt)
        k3 = _rhs(model, rho + 0.5 * dt * k2, t + 0.5 * dt)
        k4 = _rhs(model, rho + dt * k3, t + dt)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rho = hermitize(rho)
        dev = abs(np.trace(rho).real - 1.0)
        drift = max(drift, dev)
        if not dev <= TRACE_ABORT:  # catches NaN as well
            raise TraceDriftError(
                f"trace drift {dev:.3e} at step {j + 1} (t = {(j + 1) * dt:.6g}); "
                f"reduce dt (currently {dt:.3e})")
        yield rho.copy()
    drift_out[0] = drift


def _kernel_steps(model: LindbladModel, rho0: np.ndarray, dt: float, n_step: int,
                  drift_out: list[float], chunk: int = 65536) -> Iterator[np.ndarray]:
    from . import _kernels

    spec = model.fast_spec
    rho = rho0.astype(complex).copy()
    yield rho.copy()
    drift = 0.0
    done = 0
    while done < n_step:
        m = min(chunk, n_step - done)
        block = np.empty((m, model.dim, model.dim), dtype=complex)
        bad_step, dev = _kernels.rk4_propagate(
            rho, spec.base_superop, spec.drive_superop, spec.amp, spec.drive_freq,
            spec.drive_phase, spec.rot_eigvecs, spec.rot_eigvals.astype(float),
            spec.rot_freq, dt, done, m, TRACE_ABORT, block)
        drift = max(drift, dev)
        if bad_step >= 0:
            raise TraceDriftError(
                f"trace drift {dev:.3e} at step {bad_step + 1} "
                f"(t = {(bad_step + 1) * dt:.6g}); reduce dt (currently {dt:.3e})")
        for j in range(m):
            yield block[j]
        done += m
    drift_out[0] = drift


def evolve(model: LindbladModel, rho0: np.ndarray, tau: float, n_step: int, *,
           store: bool = True, use_fast_path: bool = True) -> Trajectory:
    """Propagate rho0 over [0, tau] with fixed-step RK4 (dt = tau / n_step).

    With store=False the returned trajectory holds no state array; its
    steps() cursor re-runs the integration and yields one density matrix at a
    time, so arbitrarily long runs can be consumed in O(1) memory.
    Instability is detected by a trace drift above 1e-6 and aborts the run.
    """
    if n_step < 4:
        raise ValueError(f"n_step must be >= 4, got {n_step}")
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    require_density_matrix(rho0)
    if rho0.shape != (model.dim, model.dim):
        raise ValueError(f"rho0 has shape {rho0.shape}, model dimension is {model.dim}")
    require_hermitian(model.hamiltonian_at(0.0), name="hamiltonian_at(0)")
    rho0 = np.asarray(rho0, dtype=complex)
    dt = tau / n_step

    fast = use_fast_path and model.fast_spec is not None

    def make_iter(drift_box: list[float]) -> Iterator[np.ndarray]:
        if fast:
            return _kernel_steps(model, rho0, dt, n_step, drift_box)
        return _python_steps(model, rho0, dt, n_step, drift_box)

    if store:
        box = [0.0]
        states = np.empty((n_step + 1, model.dim, model.dim), dtype=complex)
        for j, s in enumerate(make_iter(box)):
            states[j] = s
        return Trajectory(t0=0.0, dt=dt, n_step=n_step, states=states, trace_drift=box[0])

    def factory() -> Iterator[np.ndarray]:
        return make_iter([0.0])

    return Trajectory(t0=0.0, dt=dt, n_step=n_step, states=None, factory=factory)


def steady_state(model: LindbladModel, t: float = 0.0, *,
                 zero_tol: float = 1e-10, gap_tol: float = 1e-8,
                 residual_tol: float = 1e-10) -> np.ndarray:
    """Unique trace-one stationary state of the model frozen at time t.

    Builds the dim^2 x dim^2 superoperator and takes the eigenvector of the
    eigenvalue of smallest magnitude; that eigenvalue must vanish (|lambda| <=
    zero_tol) and be separated from the next one by gap_tol, otherwise the
    stationary state is not unique (e.g. pure dephasing) and
    NonUniqueSteadyState is raised.
    """
    h = model.hamiltonian_at(t)
    jumps = model.jump_operators_at(t)
    super_op = liouvillian_superoperator(h, jumps)
    evals, evecs = np.linalg.eig(super_op)
    order = np.argsort(np.abs(evals))
    lam0 = abs(evals[order[0]])
    lam1 = abs(evals[order[1]])
    if lam0 > zero_tol:
        raise NonUniqueSteadyState(
            f"no stationary state: smallest |eigenvalue| = {lam0:.3e} > {zero_tol:.0e}")
    if lam1 < gap_tol:
        raise NonUniqueSteadyState(
            f"stationary state not unique: second |eigenvalue| = {lam1:.3e} < {gap_tol:.0e}")
    rho = evecs[:, order[0]].reshape(model.dim, model.dim)
    rho = hermitize(rho)
    tr = np.trace(rho).real
    if abs(tr) < 1e-12:
        raise NonUniqueSteadyState("null vector is traceless; dynamics has no proper steady state")
    rho = rho / tr
    residual = np.linalg.norm(super_op @ rho.reshape(-1))
    if residual > residual_tol:
        raise NonUniqueSteadyState(
            f"steady-state residual {residual:.3e} exceeds {residual_tol:.0e}")
    return rho
