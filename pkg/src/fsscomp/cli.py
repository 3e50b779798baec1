"""Command-line front end.

Exit codes: 0 success, 1 configuration/usage error, 2 numerical failure
(invalid density matrix, or non-convergence when ``--strict`` is given).
Diagnostics go to stderr, data to stdout or the requested file.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional, Union

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .cascade import CascadeParams
from .compensation import MismatchSpec, RampParams
from .core_state import NumericalError, format_density, parse_density, validate_density
from .eom import EomSpec, phase_slopes, required_ramp_slope
from .estimators import CompensatedSource
from .experiments import METHODS, gating_tradeoff, sweep_delay, sweep_mismatch
from .montecarlo import McConfig

__all__ = ["ConfigError", "RunConfig", "main", "parse_config", "run"]

logger = logging.getLogger("fsscomp")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2

_FLOAT_KEYS = ("fss_uev", "tau_x_ns", "tau_xx_ns", "rel_tol")
_INT_KEYS = ("seed", "batch_size", "max_samples")
_MISMATCH_KEYS = ("d_omega1", "d_omega2", "delta_t_ns")
_TOP_KEYS = set(_FLOAT_KEYS + _INT_KEYS + _MISMATCH_KEYS) | {"method", "output", "ramp"}
_RAMP_KEYS = {f.name for f in fields(RampParams)}


class ConfigError(ValueError):
    """Invalid run configuration; ``key`` names the offending entry."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass(frozen=True)
class RunConfig:
    cascade: CascadeParams
    mc: McConfig
    ramp: Optional[RampParams] = None
    mismatch: Optional[MismatchSpec] = None
    output: Optional[str] = None
    method: Optional[str] = None

    @property
    def compensation(self) -> Union[RampParams, MismatchSpec]:
        return self.ramp if self.ramp is not None else self.mismatch


def _number(doc: dict, key: str, default, kind=float):
    if key not in doc:
        return default
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(key, f"expected a number, got {value!r}")
    if kind is int:
        if isinstance(value, float) and not value.is_integer():
            raise ConfigError(key, f"expected an integer, got {value!r}")
        return int(value)
    if not math.isfinite(value):
        raise ConfigError(key, "must be finite")
    return float(value)


def parse_config(text: str) -> RunConfig:
    """Parse a TOML run configuration.

    Top-level keys: ``fss_uev`` (required), ``tau_x_ns``, ``tau_xx_ns``,
    ``seed``, ``batch_size``, ``rel_tol``, ``max_samples``, ``d_omega1``,
    ``d_omega2``, ``delta_t_ns``, ``method``, ``output``. Without ``method``
    ``simulate`` uses Monte Carlo and the sweeps use the closed form. An optional
    ``[ramp]`` table gives the twelve ramp constants explicitly and excludes
    the mismatch keys.
    """
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError("<document>", f"malformed TOML: {exc}") from None

    for key in doc:
        if key not in _TOP_KEYS:
            raise ConfigError(key, "unknown key")
    if "fss_uev" not in doc:
        raise ConfigError("fss_uev", "required key missing")

    fss = _number(doc, "fss_uev", None)
    tau_x = _number(doc, "tau_x_ns", 1.0)
    tau_xx = _number(doc, "tau_xx_ns", 0.5)
    if fss < 0:
        raise ConfigError("fss_uev", f"must be >= 0, got {fss}")
    if tau_x <= 0:
        raise ConfigError("tau_x_ns", f"must be > 0, got {tau_x}")
    if tau_xx <= 0:
        raise ConfigError("tau_xx_ns", f"must be > 0, got {tau_xx}")
    cascade = CascadeParams(fss=fss, tau_x=tau_x, tau_xx=tau_xx)

    seed = _number(doc, "seed", 0, int)
    batch_size = _number(doc, "batch_size", 10_000, int)
    rel_tol = _number(doc, "rel_tol", 1e-6)
    max_samples = _number(doc, "max_samples", 100_000_000, int)
    if batch_size < 1:
        raise ConfigError("batch_size", f"must be >= 1, got {batch_size}")
    if rel_tol <= 0:
        raise ConfigError("rel_tol", f"must be > 0, got {rel_tol}")
    if max_samples < batch_size:
        raise ConfigError("max_samples", "must be >= batch_size")
    mc = McConfig(seed=seed, batch_size=batch_size, rel_tol=rel_tol, max_samples=max_samples)

    method = doc.get("method")
    if method is not None and method not in METHODS:
        raise ConfigError("method", f"must be one of {METHODS}, got {method!r}")
    output = doc.get("output")
    if output is not None and not isinstance(output, str):
        raise ConfigError("output", "must be a string path")

    ramp = mismatch = None
    if "ramp" in doc:
        block = doc["ramp"]
        if not isinstance(block, dict):
            raise ConfigError("ramp", "must be a table")
        clash = [k for k in _MISMATCH_KEYS if k in doc]
        if clash:
            raise ConfigError(clash[0], "cannot be combined with an explicit [ramp] block")
        for key in block:
            if key not in _RAMP_KEYS:
                raise ConfigError(f"ramp.{key}", "unknown key")
        values = {k: _number(block, k, 0.0) for k in _RAMP_KEYS if k in block}
        ramp = RampParams(**values)
    else:
        mismatch = MismatchSpec(
            _number(doc, "d_omega1", 0.0),
            _number(doc, "d_omega2", 0.0),
            _number(doc, "delta_t_ns", 0.0),
        )
    return RunConfig(cascade, mc, ramp, mismatch, output, method)


def _fmt4(x: float) -> str:
    return f"{x:#.4g}"


def _load_config(args) -> RunConfig:
    path = args.config_opt or args.config
    if path is None:
        if getattr(args, "fss", None) is None:
            raise ConfigError("config", "no configuration file given (use a path or --fss)")
        text = f"fss_uev = {float(args.fss)!r}\n"
    else:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
    cfg = parse_config(text)
    if getattr(args, "fss", None) is not None and path is not None:
        cascade = CascadeParams(float(args.fss), cfg.cascade.tau_x, cfg.cascade.tau_xx)
        cfg = RunConfig(cascade, cfg.mc, cfg.ramp, cfg.mismatch, cfg.output, cfg.method)
    return cfg


def _emit_table(result, args, cfg: RunConfig):
    out = args.output or cfg.output
    if out in (None, "-"):
        sys.stdout.write(result.to_csv())
    else:
        result.to_csv(out)
        logger.info("wrote %d rows to %s", len(result), out)


def _cmd_simulate(args) -> int:
    cfg = _load_config(args)
    method = args.method or cfg.method or "monte_carlo"
    mm = cfg.mismatch or MismatchSpec()
    est = CompensatedSource(
        fss=cfg.cascade.fss,
        tau_x=cfg.cascade.tau_x,
        tau_xx=cfg.cascade.tau_xx,
        d_omega1=mm.d_omega1,
        d_omega2=mm.d_omega2,
        delta_t=mm.delta_t,
        ramp=cfg.ramp,
        method=method,
        seed=cfg.mc.seed,
        batch_size=cfg.mc.batch_size,
        rel_tol=cfg.mc.rel_tol,
        max_samples=cfg.mc.max_samples,
        n_jobs=args.jobs,
    ).fit()
    rep = est.metrics_
    print(f"fidelity_phi_plus   {_fmt4(rep.fidelity_phi_plus)}")
    print(f"fidelity_phi_minus  {_fmt4(rep.fidelity_phi_minus)}")
    print(f"concurrence         {_fmt4(rep.concurrence)}")
    print(f"purity              {_fmt4(rep.purity)}")
    print(f"n_samples           {est.n_samples_}")
    print(f"converged           {str(est.converged_).lower()}")
    if args.dump_rho:
        Path(args.dump_rho).write_text(format_density(est.rho_), encoding="utf-8")
    if args.strict and not est.converged_:
        print(
            f"error: not converged after {est.n_samples_} samples "
            f"(last relative change {est.last_rel_change_:.3g})",
            file=sys.stderr,
        )
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_sweep_mismatch(args) -> int:
    cfg = _load_config(args)
    steps = tuple(args.steps) if len(args.steps) == 2 else args.steps[0]
    result = sweep_mismatch(
        cfg.cascade,
        tuple(args.d1),
        tuple(args.d2),
        steps,
        cfg.mc,
        args.method or cfg.method or "analytic",
        n_jobs=args.jobs,
    )
    _emit_table(result, args, cfg)
    return EXIT_OK


def _cmd_sweep_delay(args) -> int:
    cfg = _load_config(args)
    result = sweep_delay(
        cfg.cascade,
        tuple(args.dt),
        args.steps,
        cfg.mc,
        args.method or cfg.method or "analytic",
        n_jobs=args.jobs,
    )
    _emit_table(result, args, cfg)
    return EXIT_OK


def _cmd_gate_tradeoff(args) -> int:
    cfg = _load_config(args)
    result = gating_tradeoff(cfg.cascade, tuple(args.t_gate), args.steps, log=args.log)
    _emit_table(result, args, cfg)
    return EXIT_OK


def _cmd_design_ramp(args) -> int:
    spec = EomSpec(args.vpi_v, args.vpi_h)
    slope = required_ramp_slope(spec, args.fss)
    k_v, k_h = phase_slopes(spec, slope)
    print(f"dV/dt      {_fmt4(slope)} V/ns")
    print(f"k_v        {_fmt4(k_v)} rad/ns")
    print(f"k_h        {_fmt4(k_h)} rad/ns")
    print(f"k_v - k_h  {_fmt4(k_v - k_h)} rad/ns")
    return EXIT_OK


def _cmd_validate(args) -> int:
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("file", f"cannot read {args.file}: {exc.strerror}") from None
    try:
        rho = parse_density(text)
    except ValueError as exc:
        raise ConfigError("file", str(exc)) from None
    rep = validate_density(rho, args.tol)
    print(f"hermiticity_residual  {rep.hermiticity_residual:.3e}")
    print(f"trace_deviation       {rep.trace_deviation:.3e}")
    print(f"min_eigenvalue        {rep.min_eigenvalue:.3e}")
    print(f"valid                 {str(rep.passed).lower()}")
    if not rep.passed:
        print(f"error: {args.file} is not a valid density matrix at tol {args.tol:g}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def _add_config_args(p: argparse.ArgumentParser, jobs=True, method=True):
    p.add_argument("config", nargs="?", help="TOML run configuration")
    p.add_argument("--config", dest="config_opt", metavar="PATH", help="TOML run configuration")
    p.add_argument("--fss", type=float, help="fine structure splitting in ueV (overrides config)")
    if method:
        p.add_argument("--method", choices=METHODS, help="override the config method")
    if jobs:
        p.add_argument("--jobs", type=int, default=1, help="worker threads for Monte Carlo")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fsscomp",
        description="Entanglement restoration for quantum-dot photon pairs with fine structure splitting",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="average one configuration and print its metrics")
    _add_config_args(p)
    p.add_argument("--dump-rho", metavar="PATH", help="write the averaged density matrix")
    p.add_argument("--strict", action="store_true", help="exit 2 if the average did not converge")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep-mismatch", help="metrics over a grid of slope errors (CSV)")
    _add_config_args(p)
    p.add_argument("--d1", nargs=2, type=float, default=[-5.0, 5.0], metavar=("LO", "HI"))
    p.add_argument("--d2", nargs=2, type=float, default=[-5.0, 5.0], metavar=("LO", "HI"))
    p.add_argument("--steps", nargs="+", type=int, default=[41], help="points per axis (1 or 2 values)")
    p.add_argument("-o", "--output", help="CSV path (default: stdout)")
    p.set_defaults(func=_cmd_sweep_mismatch)

    p = sub.add_parser("sweep-delay", help="metrics against ramp timing offset (CSV)")
    _add_config_args(p)
    p.add_argument("--dt", nargs=2, type=float, default=[0.0, 3.0], metavar=("LO", "HI"))
    p.add_argument("--steps", type=int, default=121)
    p.add_argument("-o", "--output", help="CSV path (default: stdout)")
    p.set_defaults(func=_cmd_sweep_delay)

    p = sub.add_parser("gate-tradeoff", help="time-gating acceptance against entanglement (CSV)")
    _add_config_args(p, jobs=False, method=False)
    p.add_argument("--t-gate", nargs=2, type=float, default=[0.05, 10.0], metavar=("LO", "HI"))
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--log", action="store_true", help="log-spaced gate values")
    p.add_argument("-o", "--output", help="CSV path (default: stdout)")
    p.set_defaults(func=_cmd_gate_tradeoff)

    p = sub.add_parser("design-ramp", help="modulator voltage slope for a given FSS")
    p.add_argument("--vpi-v", type=float, required=True, help="half-wave voltage, V polarization (V)")
    p.add_argument("--vpi-h", type=float, required=True, help="half-wave voltage, H polarization (V)")
    p.add_argument("--fss", type=float, required=True, help="fine structure splitting (ueV)")
    p.set_defaults(func=_cmd_design_ramp)

    p = sub.add_parser("validate", help="check a dumped density matrix file")
    p.add_argument("file")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=_cmd_validate)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
