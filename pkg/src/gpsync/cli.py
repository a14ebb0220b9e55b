"""Command-line interface.

Subcommands: gp (single phase run), tongue (detuning/signal-strength sweep
with CSV and optional SVG output), benchmark-qubit (convergence of the phase
algorithm against the dephasing-qubit closed form), mzi (interferometric
visibility and phase versus time), oracle (closed-form reference values).

Parameters come from built-in defaults, overridden by a flat `key = value`
config file (--config, `#` comments), overridden by individual --key flags.
All rates and frequencies are interpreted in units of gamma_d. Everything is
deterministic; --seedless is accepted for compatibility and is the only mode.
Exit codes: 0 success, 1 usage/configuration error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .errors import (ConfigError, DegeneratePopulations, IllConditionedPhase,
                     LabelingError, NonUniqueSteadyState, TraceDriftError)
from .evolver import evolve
from .gp import geometric_phase
from .heatmap import COLORMAPS, render_heatmap
from .mzi import visibility_and_phase
from .oracles import (QubitDephasingParams, blockade_ratio, gp_cyclic_with_signal,
                      gp_no_signal, gp_noncyclic, qubit_dephasing_gp, qubit_dephasing_model,
                      sync_measure_closed_form, vdp_coherences, vdp_populations)
from .spinops import ConeAxis, pauli_operators
from .sweep import MODES, SweepConfig, emit_csv, gp_numeric_point, run_sweep
from .vdp import VdpParams, build_lab_frame_model

_NUMERICAL_ERRORS = (DegeneratePopulations, IllConditionedPhase, NonUniqueSteadyState,
                     TraceDriftError, LabelingError, np.linalg.LinAlgError)

# defaults in units of gamma_d
_DEFAULTS = {
    "omega0": 1.0,
    "gamma_g": 0.5,
    "gamma_d": 1.0,
    "alpha": float(np.pi / 4),
    "omega": 0.05,
    "T": 0.0,
    "omega_sig": None,
    "phi_sig": 0.0,
    "tau": None,
    "n_step": 200_000,
    "delta_min": -0.5,
    "delta_max": 0.5,
    "t_min": 0.0,
    "t_max": 0.5,
    "n_delta": 11,
    "n_t": 11,
    "mode": "sync-analytic",
    "threads": None,
    "eta": 1.0,
    "lam": 0.2,
    "theta0": float(np.pi / 4),
    "delta": 0.0,
    "n_tau": 101,
}
_INT_KEYS = {"n_step", "n_delta", "n_t", "threads", "n_tau"}
_STR_KEYS = {"mode"}

_PARAM_KEYS = ("omega0", "gamma_g", "gamma_d", "alpha", "omega", "T",
               "omega_sig", "phi_sig", "tau", "n_step")
_SWEEP_KEYS = ("delta_min", "delta_max", "t_min", "t_max", "n_delta", "n_t", "mode")
_QUBIT_KEYS = ("eta", "lam", "theta0", "tau")

_ORACLES = ("blockade-ratio", "populations", "coherences", "sync-measure",
            "gp-no-signal", "gp-cyclic", "gp-noncyclic", "qubit-gp")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with code 2
        raise ConfigError(message)


def _convert(key: str, raw: str):
    if key in _STR_KEYS:
        return raw
    try:
        return int(raw) if key in _INT_KEYS else float(raw)
    except ValueError as exc:
        raise ConfigError(f"invalid value for key '{key}': {raw!r}") from exc


def load_config(path, allowed: set[str]) -> dict:
    """Parse a flat `key = value` file; '#' starts a comment."""
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in allowed:
            raise ConfigError(f"{path}:{lineno}: unknown key '{key}'")
        values[key] = _convert(key, raw)
    return values


def _add_keys(parser: _Parser, keys) -> None:
    for key in dict.fromkeys(keys):
        if key in _STR_KEYS:
            parser.add_argument(f"--{key}", type=str, default=None)
        elif key in _INT_KEYS:
            parser.add_argument(f"--{key}", type=int, default=None)
        else:
            parser.add_argument(f"--{key}", type=float, default=None)


def _resolve(args, keys) -> dict:
    """defaults < config file < explicit flags, restricted to `keys`."""
    keys = tuple(dict.fromkeys(keys))
    allowed = set(keys)
    merged = {k: _DEFAULTS[k] for k in keys}
    if args.config is not None:
        merged.update(load_config(args.config, allowed))
    for key in keys:
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
    return merged


def _vdp_params(vals: dict, default_tau: float | None = None) -> VdpParams:
    tau = vals["tau"]
    if tau is None:
        tau = default_tau
    if tau is None:
        raise ConfigError("key 'tau' is required (no default applies here)")
    try:
        return VdpParams(omega0=vals["omega0"], gamma_g=vals["gamma_g"],
                         gamma_d=vals["gamma_d"],
                         axis=ConeAxis(vals["alpha"], vals["omega"]),
                         tau=tau, T=vals["T"], omega_sig=vals["omega_sig"],
                         phi_sig=vals["phi_sig"], n_step=vals["n_step"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _fmt(x: float) -> str:
    return "%.17g" % x


def _cmd_gp(args) -> int:
    vals = _resolve(args, _PARAM_KEYS)
    default_tau = None
    if vals["omega"] != 0.0:
        default_tau = 2.0 * np.pi / abs(vals["omega"])
    p = _vdp_params(vals, default_tau)
    result = gp_numeric_point(p)
    lines = [f"gamma = {_fmt(result.gamma)}",
             f"visibility = {_fmt(result.visibility)}"]
    for k in range(result.overlaps.size):
        ov = result.overlaps[k]
        ci = result.connection_integrals[k]
        lines.append(f"overlap_{k} = {_fmt(ov.real)}{ov.imag:+.17g}j")
        lines.append(f"connection_integral_{k} = {_fmt(ci.real)}{ci.imag:+.17g}j")
    lines.append(f"min_population_gap = {_fmt(result.min_population_gap)}")
    lines.append(f"min_step_overlap = {_fmt(result.min_step_overlap)}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_tongue(args) -> int:
    vals = _resolve(args, _PARAM_KEYS + _SWEEP_KEYS)
    base = _vdp_params(vals, default_tau=200.0 / vals["omega0"] if vals["omega0"] else None)
    try:
        cfg = SweepConfig(delta_min=vals["delta_min"], delta_max=vals["delta_max"],
                          t_min=vals["t_min"], t_max=vals["t_max"],
                          n_delta=vals["n_delta"], n_t=vals["n_t"],
                          mode=vals["mode"], base=base, threads=args.threads)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    table = run_sweep(cfg)
    out = args.out if args.out is not None else "tongue.csv"
    emit_csv(table, out)
    flagged = int(sum(1 for *_ , f in table.rows() if f))
    sys.stdout.write(f"wrote {out} ({cfg.n_delta}x{cfg.n_t} grid, mode {cfg.mode}, "
                     f"{flagged} flagged)\n")
    if args.svg is not None:
        render_heatmap(table, args.svg, colormap=args.colormap)
        sys.stdout.write(f"wrote {args.svg}\n")
    return 0


def _cmd_benchmark_qubit(args) -> int:
    vals = _resolve(args, _QUBIT_KEYS)
    tau = vals["tau"] if vals["tau"] is not None else 2.0 * np.pi / vals["eta"]
    try:
        q = QubitDephasingParams(eta=vals["eta"], lam=vals["lam"],
                                 theta0=vals["theta0"], tau=tau)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    try:
        n_list = [int(s) for s in args.n_steps.split(",") if s]
    except ValueError as exc:
        raise ConfigError(f"invalid --n-steps list: {args.n_steps!r}") from exc
    if not n_list:
        raise ConfigError("--n-steps must list at least one step count")
    exact = qubit_dephasing_gp(q)
    model = qubit_dephasing_model(q.eta, q.lam)
    s = pauli_operators()
    rho0 = 0.5 * (np.eye(2, dtype=complex) + np.sin(q.theta0) * s.sx
                  + np.cos(q.theta0) * s.sz)
    lines = ["n_step,gamma,abs_error"]
    errors = []
    for n in n_list:
        traj = evolve(model, rho0, q.tau, n)
        g = geometric_phase(traj).gamma
        err = abs(g - exact)
        errors.append(err)
        lines.append(f"{n},{_fmt(g)},{_fmt(err)}")
    if len(n_list) >= 2 and all(e > 0 for e in errors):
        slope = np.polyfit(np.log(n_list), np.log(errors), 1)[0]
        lines.append(f"# loglog_slope = {slope:.4f}")
    lines.append(f"# exact = {_fmt(exact)}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_mzi(args) -> int:
    vals = _resolve(args, _PARAM_KEYS + ("n_tau",))
    default_tau = 2.0 * np.pi / abs(vals["omega"]) if vals["omega"] else None
    p = _vdp_params(vals, default_tau)
    if vals["n_tau"] < 2:
        raise ConfigError("key 'n_tau' must be >= 2")
    model = build_lab_frame_model(p)
    rho0 = np.diag(vdp_populations(p.gamma_g, p.gamma_d)).astype(complex)
    lines = ["tau,visibility,phase,flag"]
    for tau in np.linspace(0.0, p.tau, vals["n_tau"]):
        try:
            res = visibility_and_phase(rho0, model, float(tau))
            lines.append(f"{_fmt(tau)},{_fmt(res.visibility)},{_fmt(res.phase)},")
        except IllConditionedPhase:
            lines.append(f"{_fmt(tau)},,,ill-conditioned")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_oracle(args) -> int:
    which = args.which
    vals = _resolve(args, _PARAM_KEYS + _QUBIT_KEYS + ("delta",))
    out_lines = []
    if which == "blockade-ratio":
        out_lines.append(f"blockade_ratio = {_fmt(blockade_ratio())}")
    elif which == "populations":
        p1, p0, pm1 = vdp_populations(vals["gamma_g"], vals["gamma_d"])
        out_lines += [f"p_plus1 = {_fmt(p1)}", f"p_0 = {_fmt(p0)}", f"p_minus1 = {_fmt(pm1)}"]
    elif which == "coherences":
        c10, c0m1 = vdp_coherences(vals["gamma_g"], vals["gamma_d"], vals["delta"],
                                   vals["phi_sig"])
        out_lines += [f"c_plus1_0 = {_fmt(c10.real)}{c10.imag:+.17g}j",
                      f"c_0_minus1 = {_fmt(c0m1.real)}{c0m1.imag:+.17g}j"]
    elif which == "sync-measure":
        c10, c0m1 = vdp_coherences(vals["gamma_g"], vals["gamma_d"], vals["delta"],
                                   vals["phi_sig"])
        out_lines.append(f"sync_measure = {_fmt(sync_measure_closed_form(vals['T'], c10, c0m1))}")
    elif which == "gp-no-signal":
        pops = vdp_populations(vals["gamma_g"], vals["gamma_d"])
        out_lines.append(f"gamma = {_fmt(gp_no_signal(vals['alpha'], pops))}")
    elif which == "gp-cyclic":
        p = _vdp_params(vals, default_tau=2.0 * np.pi / abs(vals["omega"])
                        if vals["omega"] else 1.0)
        out_lines.append(f"gamma = {_fmt(gp_cyclic_with_signal(p))}")
    elif which == "gp-noncyclic":
        p = _vdp_params(vals)
        out_lines.append(f"gamma = {_fmt(gp_noncyclic(p, p.tau))}")
    elif which == "qubit-gp":
        tau = vals["tau"] if vals["tau"] is not None else 2.0 * np.pi / vals["eta"]
        try:
            q = QubitDephasingParams(eta=vals["eta"], lam=vals["lam"],
                                     theta0=vals["theta0"], tau=tau)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        out_lines.append(f"gamma = {_fmt(qubit_dephasing_gp(q))}")
    else:  # pragma: no cover - argparse restricts choices
        raise ConfigError(f"unknown oracle {which!r}")
    _emit("\n".join(out_lines) + "\n", args.out)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="gpsync",
                     description="Geometric phases of a driven spin-1 limit-cycle "
                                 "oscillator with a slowly rotating quantization axis.")
    common = _Parser(add_help=False)
    common.add_argument("--config", type=str, default=None,
                        help="flat key = value config file ('#' comments)")
    common.add_argument("--threads", type=int, default=None,
                        help="worker count for grid sweeps (default: all cores)")
    common.add_argument("--out", type=str, default=None, help="output file path")
    common.add_argument("--seedless", action="store_true", default=True,
                        help="deterministic mode (default; no randomness anywhere)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gp = sub.add_parser("gp", parents=[common], help="single geometric-phase run")
    _add_keys(p_gp, _PARAM_KEYS)
    p_gp.set_defaults(func=_cmd_gp)

    p_tongue = sub.add_parser("tongue", parents=[common],
                              help="detuning/signal-strength sweep (CSV, optional SVG)")
    _add_keys(p_tongue, _PARAM_KEYS + _SWEEP_KEYS)
    p_tongue.add_argument("--svg", type=str, default=None, help="also render an SVG heatmap")
    p_tongue.add_argument("--colormap", type=str, default="viridis",
                          choices=sorted(COLORMAPS))
    p_tongue.set_defaults(func=_cmd_tongue)

    p_bench = sub.add_parser("benchmark-qubit", parents=[common],
                             help="convergence benchmark on the dephasing qubit")
    _add_keys(p_bench, _QUBIT_KEYS)
    p_bench.add_argument("--n-steps", type=str, default="200,400,800,1600,3200",
                         help="comma-separated step counts")
    p_bench.set_defaults(func=_cmd_benchmark_qubit)

    p_mzi = sub.add_parser("mzi", parents=[common],
                           help="interferometric visibility and phase vs time")
    _add_keys(p_mzi, _PARAM_KEYS + ("n_tau",))
    p_mzi.set_defaults(func=_cmd_mzi)

    p_oracle = sub.add_parser("oracle", parents=[common], help="closed-form values")
    p_oracle.add_argument("which", choices=_ORACLES)
    _add_keys(p_oracle, _PARAM_KEYS + _QUBIT_KEYS + ("delta",))
    p_oracle.set_defaults(func=_cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except _NUMERICAL_ERRORS as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
