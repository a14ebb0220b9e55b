"""Arnold-tongue parameter sweeps over detuning and signal strength.

Grid points are independent pure computations, dispatched to a process pool
and gathered in deterministic row-major order (detuning outer, signal
strength inner), so results are identical for any worker count. Per-point
numerical failures are recorded as flagged rows instead of aborting the
sweep.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import (DegeneratePopulations, IllConditionedPhase, LabelingError,
                     NonUniqueSteadyState, TraceDriftError)
from .evolver import evolve, steady_state
from .gp import GpResult, geometric_phase
from .oracles import gp_noncyclic, rwa_steady_state, sync_measure_closed_form
from .spinops import ConeAxis, sync_measure_numeric
from .vdp import VdpParams, build_lab_frame_model, build_rwa_model

MODES = ("sync-analytic", "sync-numeric", "gp-numeric", "gp-analytic")
_POINT_ERRORS = {
    DegeneratePopulations: "degenerate",
    IllConditionedPhase: "ill-conditioned",
    TraceDriftError: "unstable",
    NonUniqueSteadyState: "non-unique",
    LabelingError: "labeling",
}


@dataclass(frozen=True)
class SweepConfig:
    """Grid specification for a detuning / signal-strength sweep."""
    delta_min: float
    delta_max: float
    t_min: float
    t_max: float
    n_delta: int
    n_t: int
    mode: str
    base: VdpParams
    threads: int | None = None

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.n_delta < 2 or self.n_t < 2:
            raise ValueError("n_delta and n_t must be >= 2")
        if self.delta_max < self.delta_min:
            raise ValueError("delta_max must be >= delta_min")
        if self.t_max < self.t_min:
            raise ValueError("t_max must be >= t_min")
        if self.t_min < 0:
            raise ValueError("t_min must be >= 0")

    @property
    def deltas(self) -> np.ndarray:
        return np.linspace(self.delta_min, self.delta_max, self.n_delta)

    @property
    def ts(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.n_t)


@dataclass
class SweepTable:
    """Row-major sweep results: values[i, j] at (deltas[i], ts[j])."""
    deltas: np.ndarray
    ts: np.ndarray
    values: np.ndarray
    unwrapped: np.ndarray
    flags: np.ndarray  # dtype=object, "" for clean points
    mode: str

    def rows(self):
        for i, d in enumerate(self.deltas):
            for j, t in enumerate(self.ts):
                yield (d, t, self.values[i, j], self.unwrapped[i, j], self.flags[i, j])


def gp_numeric_point(params: VdpParams) -> GpResult:
    """Full numerical pipeline for one parameter point.

    Builds the lab-frame model, starts from the steady state of the generator
    frozen at t = 0, propagates over tau, and extracts the phase.
    """
    model = build_lab_frame_model(params)
    rho0 = steady_state(model, t=0.0)
    traj = evolve(model, rho0, params.tau, params.n_step)
    return geometric_phase(traj)


def _point_params(base: VdpParams, delta: float, t_sig: float) -> VdpParams:
    return replace(base, T=t_sig, omega_sig=base.omega0 + delta)


def _eval_point(job) -> tuple[int, float, str]:
    index, mode, delta, t_sig, base = job
    try:
        if mode == "sync-analytic":
            ss = rwa_steady_state(base.gamma_g, base.gamma_d, delta, base.phi_sig)
            return index, sync_measure_closed_form(t_sig, ss.c_plus1_0, ss.c_0_minus1), ""
        if mode == "sync-numeric":
            # synchronization properties are those of the unrotated oscillator
            p = _point_params(base, delta, t_sig).with_(axis=ConeAxis(base.axis.alpha, 0.0))
            rho = steady_state(build_rwa_model(p))
            s_max, _ = sync_measure_numeric(rho)
            return index, s_max, ""
        if mode == "gp-analytic":
            p = _point_params(base, delta, t_sig)
            return index, gp_noncyclic(p, p.tau), ""
        p = _point_params(base, delta, t_sig)
        return index, gp_numeric_point(p).gamma, ""
    except tuple(_POINT_ERRORS) as exc:
        return index, np.nan, _POINT_ERRORS[type(exc)]


def _unwrap_along(values: np.ndarray) -> np.ndarray:
    """Unwrap each row over the signal-strength axis, skipping flagged NaNs."""
    out = values.copy()
    for row in out:
        idx = np.flatnonzero(np.isfinite(row))
        if idx.size > 1:
            row[idx] = np.unwrap(row[idx])
    return out


def run_sweep(cfg: SweepConfig) -> SweepTable:
    """Evaluate the grid; row-major (delta outer, T inner), parallel workers."""
    deltas, ts = cfg.deltas, cfg.ts
    jobs = [(i * cfg.n_t + j, cfg.mode, float(d), float(t), cfg.base)
            for i, d in enumerate(deltas) for j, t in enumerate(ts)]
    workers = cfg.threads if cfg.threads is not None else (os.cpu_count() or 1)
    flat_vals = np.empty(len(jobs))
    flat_flags = np.empty(len(jobs), dtype=object)

    def gather(results) -> None:
        for index, value, flag in results:
            flat_vals[index] = value
            flat_flags[index] = flag

    if workers <= 1:
        gather(map(_eval_point, jobs))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            gather(pool.map(_eval_point, jobs, chunksize=1))
    values = flat_vals.reshape(cfg.n_delta, cfg.n_t)
    flags = flat_flags.reshape(cfg.n_delta, cfg.n_t)
    if cfg.mode.startswith("gp"):
        unwrapped = _unwrap_along(values)
    else:
        unwrapped = values.copy()
    return SweepTable(deltas=deltas, ts=ts, values=values, unwrapped=unwrapped,
                      flags=flags, mode=cfg.mode)


def _fmt(x: float) -> str:
    return "%.17g" % x


def emit_csv(table: SweepTable, path) -> None:
    """Write the table as UTF-8 CSV with LF endings and full double precision.

    Columns: delta,T,value,value_unwrapped,flag. Flagged points have empty
    value fields and a nonempty flag.
    """
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("delta,T,value,value_unwrapped,flag\n")
            for d, t, v, u, flag in table.rows():
                if flag:
                    fh.write(f"{_fmt(d)},{_fmt(t)},,,{flag}\n")
                else:
                    fh.write(f"{_fmt(d)},{_fmt(t)},{_fmt(v)},{_fmt(u)},\n")
    except OSError as exc:
        raise OSError(f"cannot write sweep CSV to {path}: {exc}") from exc


def read_csv(path) -> SweepTable:
    """Read a table written by emit_csv; values round-trip bit-identically."""
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            header = fh.readline().strip()
            if header != "delta,T,value,value_unwrapped,flag":
                raise ValueError(f"unexpected CSV header in {path}: {header!r}")
            rows = []
            for line in fh:
                line = line.rstrip("\n")
                if not line:
                    continue
                d, t, v, u, flag = line.split(",")
                rows.append((float(d), float(t),
                             float(v) if v else np.nan,
                             float(u) if u else np.nan, flag))
    except OSError as exc:
        raise OSError(f"cannot read sweep CSV from {path}: {exc}") from exc
    deltas = list(dict.fromkeys(r[0] for r in rows))
    ts = list(dict.fromkeys(r[1] for r in rows))
    if len(rows) != len(deltas) * len(ts):
        raise ValueError(f"non-rectangular sweep table in {path}: "
                         f"{len(rows)} rows != {len(deltas)} x {len(ts)}")
    values = np.array([r[2] for r in rows]).reshape(len(deltas), len(ts))
    unwrapped = np.array([r[3] for r in rows]).reshape(len(deltas), len(ts))
    flags = np.array([r[4] for r in rows], dtype=object).reshape(len(deltas), len(ts))
    return SweepTable(deltas=np.array(deltas), ts=np.array(ts), values=values,
                      unwrapped=unwrapped, flags=flags, mode="unknown")
