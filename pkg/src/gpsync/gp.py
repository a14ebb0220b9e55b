"""Kinematic geometric phase of a density-matrix trajectory.

The phase is the argument of

    z = sum_k sqrt(p_k(0) p_k(tau)) <phi_k(0)|phi_k(tau)>
                exp( - int_0^tau <phi_k(t)|d/dt phi_k(t)> dt ),

computed in four steps: per-step Hermitian eigendecomposition with a fixed
phase convention, fourth-order differentiation of the eigenvectors, extended
Simpson integration of the connection overlaps, and assembly of z. The result
is gauge invariant; the phase convention only keeps the numerics smooth.

Phase convention: each eigenvector is divided by the phase of a pivot entry
(initially entry k for the k-th eigenvector, ascending populations). When the
pivot magnitude drops below pivot_tol the pivot moves to the largest entry
and a constant compensating phase keeps the gauged path continuous, which
preserves the O(dt^4) accuracy of the differentiation; the compensation
cancels exactly between the overlap and the connection integral.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePopulations, IllConditionedPhase, LabelingError
from .evolver import Trajectory
from .numerics import derivative_4th, simpson_weight_range, simpson_weights

DEFAULT_DEGENERACY_TOL = 1e-8
DEFAULT_PIVOT_TOL = 1e-2
_CHUNK = 65536


@dataclass
class EigenPath:
    """Sorted populations and gauge-fixed eigenvectors along a trajectory."""
    t0: float
    dt: float
    populations: np.ndarray          # (n_step+1, dim)
    vectors: np.ndarray              # (n_step+1, dim, dim), vectors[:, :, k]
    pivots: np.ndarray               # (dim,) final pivot entry per eigenvector
    min_population_gap: float
    min_step_overlap: float          # continuity diagnostic |<phi_k(j)|phi_k(j+1)>|

    @property
    def n_step(self) -> int:
        return self.populations.shape[0] - 1


@dataclass
class GpResult:
    """Geometric phase with per-eigenstate diagnostics."""
    gamma: float
    overlaps: np.ndarray             # (dim,) <phi_k(0)|phi_k(tau)>
    connection_integrals: np.ndarray  # (dim,) int <phi_k|phi_k_dot> dt
    visibility: float                # |z|
    populations_start: np.ndarray
    populations_end: np.ndarray
    min_population: float
    min_population_gap: float
    min_step_overlap: float


@dataclass
class _GaugeState:
    pivots: np.ndarray
    offsets: np.ndarray
    prev: np.ndarray | None = None


def _check_gaps(pops: np.ndarray, tol: float, base_index: int) -> float:
    gaps = np.diff(np.sort(pops, axis=1), axis=1)
    min_gap = float(gaps.min())
    if min_gap < tol:
        j = int(np.argmin(gaps.min(axis=1)))
        raise DegeneratePopulations(
            f"population gap {min_gap:.3e} < {tol:.0e} at step {base_index + j}")
    return min_gap


def _relabel_by_overlap(pops: np.ndarray, vecs: np.ndarray,
                        prev: np.ndarray | None) -> np.ndarray:
    """Permute eigenpairs per step to maximize |overlap| with the previous step."""
    dim = vecs.shape[1]
    for j in range(vecs.shape[0]):
        if prev is not None:
            mags = np.abs(prev.conj().T @ vecs[j])
            perm = np.full(dim, -1)
            m = mags.copy()
            for _ in range(dim):
                row, col = np.unravel_index(np.argmax(m), m.shape)
                if m[row, col] < 0.5:
                    raise LabelingError(
                        f"best eigenvector overlap {m[row, col]:.3f} < 0.5 between steps; "
                        "labeling is ambiguous")
                perm[row] = col
                m[row, :] = -1.0
                m[:, col] = -1.0
            vecs[j] = vecs[j][:, perm]
            pops[j] = pops[j][perm]
        prev = vecs[j]
    return prev


def _gauge_chunk(vecs: np.ndarray, st: _GaugeState, pivot_tol: float) -> None:
    """Apply the pivot phase convention in place, carrying state across chunks."""
    m, dim, _ = vecs.shape
    for k in range(dim):
        pos = 0
        while pos < m:
            piv = int(st.pivots[k])
            mags = np.abs(vecs[pos:, piv, k])
            bad = np.nonzero(mags < pivot_tol)[0]
            run = int(bad[0]) if bad.size else mags.size
            if run:
                ph = vecs[pos:pos + run, piv, k] / mags[:run]
                vecs[pos:pos + run, :, k] *= (np.conj(ph) * st.offsets[k])[:, None]
                pos += run
            if pos < m:
                v = vecs[pos, :, k]
                cand = int(np.argmax(np.abs(v)))
                if pos > 0:
                    prev_vec = vecs[pos - 1, :, k]
                elif st.prev is not None:
                    prev_vec = st.prev[:, k]
                else:
                    prev_vec = None
                switched = cand != int(st.pivots[k])
                st.pivots[k] = cand
                pv = v[cand]
                vg = v * np.conj(pv / abs(pv))
                if switched and prev_vec is not None:
                    ov = np.vdot(prev_vec, vg)
                    if abs(ov) > 0.0:
                        st.offsets[k] = np.conj(ov) / abs(ov)
                vecs[pos, :, k] = vg * st.offsets[k]
                pos += 1
    st.prev = vecs[-1].copy()


def eigen_decompose_path(traj: Trajectory,
                         degeneracy_tol: float = DEFAULT_DEGENERACY_TOL,
                         label_mode: str = "ascending",
                         pivot_tol: float = DEFAULT_PIVOT_TOL) -> EigenPath:
    """Diagonalize every step of a materialized trajectory and fix the gauge.

    label_mode "ascending" (default) sorts eigenpairs by population, which is
    unambiguous when the populations are constant and distinct; "overlap"
    greedily matches eigenvectors to the previous step and raises
    LabelingError when the best match falls below 0.5.
    """
    if traj.states is None:
        raise ValueError("eigen_decompose_path requires a materialized trajectory")
    if label_mode not in ("ascending", "overlap"):
        raise ValueError(f"unknown label_mode {label_mode!r}")
    pops, vecs = np.linalg.eigh(traj.states)
    min_gap = _check_gaps(pops, degeneracy_tol, 0)
    if label_mode == "overlap":
        _relabel_by_overlap(pops, vecs, None)
    dim = vecs.shape[1]
    st = _GaugeState(pivots=np.arange(dim), offsets=np.ones(dim, dtype=complex))
    _gauge_chunk(vecs, st, pivot_tol)
    cont = np.abs(np.einsum("jik,jik->jk", vecs[:-1].conj(), vecs[1:]))
    return EigenPath(t0=traj.t0, dt=traj.dt, populations=pops, vectors=vecs,
                     pivots=st.pivots, min_population_gap=min_gap,
                     min_step_overlap=float(cont.min()) if cont.size else 1.0)


def differentiate_eigenvectors(path: EigenPath, dt: float | None = None) -> np.ndarray:
    """Per-step time derivative of the gauge-fixed eigenvectors, O(dt^4)."""
    return derivative_4th(path.vectors, path.dt if dt is None else dt)


def accumulate_connection(path: EigenPath, derivatives: np.ndarray,
                          dt: float | None = None) -> np.ndarray:
    """Extended-Simpson integral of <phi_k|phi_k_dot> for each eigenstate."""
    h = path.dt if dt is None else dt
    overlaps = np.einsum("jik,jik->jk", path.vectors.conj(), derivatives)
    w = simpson_weights(path.n_step, h)
    return w @ overlaps


def _assemble(p0: np.ndarray, pn: np.ndarray, v0: np.ndarray, vn: np.ndarray,
              integrals: np.ndarray, min_pop: float, min_gap: float,
              min_cont: float) -> GpResult:
    overlaps = np.einsum("ik,ik->k", v0.conj(), vn)
    weights = np.sqrt(np.clip(p0 * pn, 0.0, None))
    z = np.sum(weights * overlaps * np.exp(-integrals))
    if abs(z) < 1e-12:
        raise IllConditionedPhase(f"|z| = {abs(z):.3e} is too small to define a phase")
    gamma = float(np.angle(z))
    if gamma <= -np.pi:
        gamma = np.pi
    return GpResult(gamma=gamma, overlaps=overlaps, connection_integrals=integrals,
                    visibility=float(abs(z)), populations_start=p0.copy(),
                    populations_end=pn.copy(), min_population=min_pop,
                    min_population_gap=min_gap, min_step_overlap=min_cont)


def geometric_phase(traj: Trajectory,
                    degeneracy_tol: float = DEFAULT_DEGENERACY_TOL,
                    *, label_mode: str = "ascending",
                    pivot_tol: float = DEFAULT_PIVOT_TOL,
                    chunk_size: int = _CHUNK) -> GpResult:
    """Geometric phase of a trajectory, streamed in bounded-memory chunks.

    Works for materialized and streamed trajectories alike; only a four-step
    window of gauged eigenvectors is carried between chunks, so memory stays
    O(chunk_size) regardless of n_step. Raises DegeneratePopulations when
    eigenvalue labeling is unsafe and IllConditionedPhase when |z| < 1e-12.
    """
    if label_mode not in ("ascending", "overlap"):
        raise ValueError(f"unknown label_mode {label_mode!r}")
    n = traj.n_step
    if n < 4:
        raise ValueError("need n_step >= 4 for the fourth-order stencils")
    dt = traj.dt
    chunk_size = max(int(chunk_size), 8)

    it = traj.steps()
    dim = None
    st: _GaugeState | None = None
    prev_label: np.ndarray | None = None
    tail: np.ndarray | None = None
    integrals = None
    first = None
    last = None
    min_gap = np.inf
    min_pop = np.inf
    min_cont = 1.0
    g1 = 0  # number of steps consumed so far

    while g1 <= n:
        block = list(itertools.islice(it, chunk_size))
        if not block:
            raise ValueError(f"trajectory ended early at step {g1} of {n}")
        chunk = np.asarray(block)
        m = chunk.shape[0]
        if g1 + m > n + 1:
            raise ValueError(f"trajectory yielded more than n_step+1 = {n + 1} states")
        if dim is None:
            dim = chunk.shape[1]
            st = _GaugeState(pivots=np.arange(dim), offsets=np.ones(dim, dtype=complex))
            integrals = np.zeros(dim, dtype=complex)
        pops, vecs = np.linalg.eigh(chunk)
        gap = _check_gaps(pops, degeneracy_tol, g1)
        min_gap = min(min_gap, gap)
        min_pop = min(min_pop, float(pops.min()))
        if label_mode == "overlap":
            prev_label = _relabel_by_overlap(pops, vecs, prev_label)
        seam = st.prev
        _gauge_chunk(vecs, st, pivot_tol)
        if seam is not None:
            min_cont = min(min_cont, float(np.abs(
                np.einsum("ik,ik->k", seam.conj(), vecs[0])).min()))
        if m > 1:
            cont = np.abs(np.einsum("jik,jik->jk", vecs[:-1].conj(), vecs[1:]))
            min_cont = min(min_cont, float(cont.min()))
        if first is None:
            first = (pops[0].copy(), vecs[0].copy())
        g0 = g1 - (0 if tail is None else tail.shape[0])
        ext = vecs if tail is None else np.concatenate((tail, vecs), axis=0)
        g1 += m
        last = (pops[-1].copy(), vecs[-1].copy())

        # derivative coverage for this extended window
        lo = 2 if g0 == 0 else g0 + 2
        hi = g1 - 2
        if g0 == 0:
            head = derivative_4th(ext[:5], dt)[:2]
            ov = np.einsum("jik,jik->jk", ext[:2].conj(), head)
            integrals += simpson_weight_range(n, dt, 0, 2) @ ov
        if hi > lo:
            sl = ext[lo - g0 - 2: hi - g0 + 2]
            dv = (-sl[4:] + 8.0 * sl[3:-1] - 8.0 * sl[1:-3] + sl[:-4]) / (12.0 * dt)
            ov = np.einsum("jik,jik->jk", ext[lo - g0: hi - g0].conj(), dv)
            integrals += simpson_weight_range(n, dt, lo, hi) @ ov
        if g1 == n + 1:
            tail_d = derivative_4th(ext[-5:], dt)[-2:]
            ov = np.einsum("jik,jik->jk", ext[-2:].conj(), tail_d)
            integrals += simpson_weight_range(n, dt, n - 1, n + 1) @ ov
            break
        tail = ext[-4:].copy()

    p0, v0 = first
    pn, vn = last
    return _assemble(p0, pn, v0, vn, integrals, min_pop, min_gap, min_cont)


def geometric_phase_from_path(path: EigenPath) -> GpResult:
    """Assemble the phase from a materialized EigenPath (one-shot variant)."""
    derivs = differentiate_eigenvectors(path)
    integrals = accumulate_connection(path, derivs)
    return _assemble(path.populations[0], path.populations[-1],
                     path.vectors[0], path.vectors[-1], integrals,
                     float(path.populations.min()), path.min_population_gap,
                     path.min_step_overlap)
