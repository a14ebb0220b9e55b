"""Compiled RK4 kernel for Liouvillians with the rotating-drive structure.

The per-stage evaluation is algebraically identical to the generic
liouvillian_apply: for L(t) = R(t) [L0 + a cos(w t + p) L1] R(t)^dag the
conjugation by R(t) is carried out explicitly, so the integration is literal
fixed-step RK4 on the lab-frame equation of motion.
"""
from __future__ import annotations

import numba
import numpy as np


@numba.njit(cache=True)
def rk4_propagate(rho, base, drive, amp, wdrive, pdrive, vrot, drot, wrot,
                  dt, start_step, m, trace_abort, out):  # pragma: no cover - compiled
    """Advance rho by m RK4 steps starting at global step index start_step.

    rho is updated in place; out[i] receives the state after global step
    start_step + i + 1. Returns (bad_step, max_trace_drift); bad_step is the
    global index of the first step whose trace drifted beyond trace_abort,
    or -1 if the block completed.
    """
    dim = rho.shape[0]
    dim2 = dim * dim
    rot = wrot != 0.0
    driven = amp != 0.0

    r = np.empty((dim, dim), dtype=np.complex128)
    phases = np.empty(dim, dtype=np.complex128)
    tmp = np.empty((dim, dim), dtype=np.complex128)
    chi = np.empty(dim2, dtype=np.complex128)
    vec = np.empty(dim2, dtype=np.complex128)
    stage = np.empty((dim, dim), dtype=np.complex128)
    ks = np.empty((4, dim, dim), dtype=np.complex128)
    drift = 0.0

    for jj in range(m):
        j = start_step + jj
        t0 = j * dt
        for s in range(4):
            if s == 0:
                ts = t0
                for a in range(dim):
                    for b in range(dim):
                        stage[a, b] = rho[a, b]
            elif s == 1:
                ts = t0 + 0.5 * dt
                for a in range(dim):
                    for b in range(dim):
                        stage[a, b] = rho[a, b] + 0.5 * dt * ks[0, a, b]
            elif s == 2:
                ts = t0 + 0.5 * dt
                for a in range(dim):
                    for b in range(dim):
                        stage[a, b] = rho[a, b] + 0.5 * dt * ks[1, a, b]
            else:
                ts = t0 + dt
                for a in range(dim):
                    for b in range(dim):
                        stage[a, b] = rho[a, b] + dt * ks[2, a, b]

            if rot:
                for c in range(dim):
                    phases[c] = np.exp(-1j * wrot * ts * drot[c])
                for a in range(dim):
                    for b in range(dim):
                        acc = 0.0 + 0.0j
                        for c in range(dim):
                            acc += vrot[a, c] * phases[c] * np.conj(vrot[b, c])
                        r[a, b] = acc
                # chi = R^dag stage R
                for a in range(dim):
                    for b in range(dim):
                        acc = 0.0 + 0.0j
                        for c in range(dim):
                            acc += np.conj(r[c, a]) * stage[c, b]
                        tmp[a, b] = acc
                for a in range(dim):
                    for b in range(dim):
                        acc = 0.0 + 0.0j
                        for c in range(dim):
                            acc += tmp[a, c] * r[c, b]
                        chi[a * dim + b] = acc
            else:
                for a in range(dim):
                    for b in range(dim):
                        chi[a * dim + b] = stage[a, b]

            if driven:
                cf = amp * np.cos(wdrive * ts + pdrive)
                for a in range(dim2):
                    acc = 0.0 + 0.0j
                    for b in range(dim2):
                        acc += (base[a, b] + cf * drive[a, b]) * chi[b]
                    vec[a] = acc
            else:
                for a in range(dim2):
                    acc = 0.0 + 0.0j
                    for b in range(dim2):
                        acc += base[a, b] * chi[b]
                    vec[a] = acc

            if rot:
                # out = R unvec(vec) R^dag
                for a in range(dim):
                    for b in range(dim):
                        acc = 0.0 + 0.0j
                        for c in range(dim):
                            acc += r[a, c] * vec[c * dim + b]
                        tmp[a, b] = acc
                for a in range(dim):
                    for b in range(dim):
                        acc = 0.0 + 0.0j
                        for c in range(dim):
                            acc += tmp[a, c] * np.conj(r[b, c])
                        ks[s, a, b] = acc
            else:
                for a in range(dim):
                    for b in range(dim):
                        ks[s, a, b] = vec[a * dim + b]

        for a in range(dim):
            for b in range(dim):
                rho[a, b] = rho[a, b] + (dt / 6.0) * (
                    ks[0, a, b] + 2.0 * ks[1, a, b] + 2.0 * ks[2, a, b] + ks[3, a, b])
        # re-symmetrize
        for a in range(dim):
            for b in range(a, dim):
                h = 0.5 * (rho[a, b] + np.conj(rho[b, a]))
                rho[a, b] = h
                rho[b, a] = np.conj(h)
        tr = 0.0
        for a in range(dim):
            tr += rho[a, a].real
        dev = abs(tr - 1.0)
        if not dev <= drift:  # max that also latches NaN
            drift = dev
        for a in range(dim):
            for b in range(dim):
                out[jj, a, b] = rho[a, b]
        if not dev <= trace_abort:
            return j, drift
    return -1, drift
