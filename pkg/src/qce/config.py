"""CLI argument and configuration-file parsing.

Values merge with the precedence  defaults < config file < QCE_* environment
variables < command-line flags.  The config file is line-oriented
``key = value`` with ``#`` comments; keys match the long flag names (hyphens
and underscores are interchangeable).  Angle-valued options accept ``pi``,
``pi/2``-style literals or plain radians.
"""

from __future__ import annotations

import argparse
import math
import os
from dataclasses import dataclass

from .errors import ConfigError
from .field import DEFAULT_N_CAP, DEFAULT_TAIL_TOL, FieldParams
from .dynamics import CouplingParams

MODES = ("evolve", "stats", "sweep", "validate")
ENV_PREFIX = "QCE_"

# per-mode (t_end, dt) defaults; validate's dt is auto-derived when None.
# the sweep horizon 500/g sits in the regime where S_bar is near-linear in
# the initial noise figures (see qce.sweep)
_GRID_DEFAULTS = {
    "evolve": (100.0, 0.05),
    "stats": (100.0, 0.05),
    "sweep": (500.0, 0.1),
    "validate": (10.0, None),
}


def parse_angle(text: str) -> float:
    """Radians from a decimal literal or 'pi' / 'pi/2'-style expression."""
    s = str(text).strip().lower().replace(" ", "")
    sign = 1.0
    if s.startswith(("+", "-")):
        if s[0] == "-":
            sign = -1.0
        s = s[1:]
    if s == "pi":
        return sign * math.pi
    if s.startswith("pi/"):
        try:
            return sign * math.pi / float(s[3:])
        except (ValueError, ZeroDivisionError) as err:
            raise ConfigError(f"invalid angle literal {text!r}") from err
    try:
        return sign * float(s)
    except ValueError as err:
        raise ConfigError(f"invalid angle literal {text!r} (expected radians, 'pi' or 'pi/N')") from err


def parse_complex(text: str) -> complex:
    """Complex amplitude from a float or Python complex literal."""
    s = str(text).strip()
    try:
        return complex(float(s))
    except ValueError:
        pass
    try:
        return complex(s.replace(" ", ""))
    except ValueError as err:
        raise ConfigError(f"invalid amplitude literal {text!r}") from err


def _parse_float(text: str) -> float:
    try:
        return float(str(text).strip())
    except ValueError as err:
        raise ConfigError(f"invalid number {text!r}") from err


def _parse_int(text: str) -> int:
    try:
        return int(str(text).strip())
    except ValueError as err:
        raise ConfigError(f"invalid integer {text!r}") from err


def _parse_values(text: str) -> tuple[float, ...]:
    items = [part for part in str(text).split(",") if part.strip()]
    if not items:
        raise ConfigError("sweep values list is empty")
    return tuple(parse_angle(part) for part in items)


# name -> (parser, required); required options must come from file, env or flag
_OPTIONS = {
    "alpha": (parse_complex, True),
    "r": (_parse_float, True),
    "theta": (parse_angle, True),
    "phi": (parse_angle, True),
    "c": (_parse_float, True),
    "lambda": (_parse_float, False),
    "g": (_parse_float, False),
    "t_end": (_parse_float, False),
    "dt": (_parse_float, False),
    "tol": (_parse_float, False),
    "n_cap": (_parse_int, False),
    "output": (str, False),
    "format": (str, False),
    "sweep_axis": (str, False),
    "sweep_values": (_parse_values, False),
    "stats_phi": (parse_angle, False),
    "oracle_tol": (_parse_float, False),
    "mode": (str, False),
}


@dataclass(frozen=True)
class RunConfig:
    """Fully validated run description (deterministic; no random state)."""

    mode: str
    field: FieldParams
    coupling: CouplingParams
    t_end: float
    dt: float | None
    tol: float
    n_cap: int
    output: str
    fmt: str
    sweep_axis: str
    sweep_values: tuple[float, ...] | None
    stats_phi: float
    oracle_tol: float


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # raise instead of sys.exit so callers can report
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="qce", description="Two coupled qubits in a squeezed-cat environment")
    sub = parser.add_subparsers(dest="mode")
    for mode in MODES:
        p = sub.add_parser(mode, add_help=True)
        p.add_argument("--config", default=None, help="key = value config file")
        p.add_argument("--alpha", default=None, help="coherent amplitude (float or complex)")
        p.add_argument("--r", default=None, help="squeezing magnitude >= 0")
        p.add_argument("--theta", default=None, help="squeezing phase (radians or pi literals)")
        p.add_argument("--phi", default=None, help="superposition phase (radians or pi literals)")
        p.add_argument("--c", default=None, help="superposition weight in [0, 1]")
        p.add_argument("--lambda", dest="lam", default=None, help="qubit-qubit coupling (default 1)")
        p.add_argument("--g", default=None, help="qubit-field coupling (default 1)")
        p.add_argument("--t-end", dest="t_end", default=None, help="time horizon")
        p.add_argument("--dt", default=None, help="time step")
        p.add_argument("--tol", default=None, help="Fock tail tolerance (default 1e-12)")
        p.add_argument("--n-cap", dest="n_cap", default=None, help="Fock truncation cap (default 512)")
        p.add_argument("--output", default=None, help="output file path")
        p.add_argument("--format", default=None, choices=["csv", "json"], help="output format")
        if mode == "sweep":
            p.add_argument("--sweep-axis", dest="sweep_axis", default=None, choices=["theta", "c"])
            p.add_argument("--sweep-values", dest="sweep_values", default=None,
                           help="comma-separated swept values (angle literals allowed)")
            p.add_argument("--sweep-linspace", dest="sweep_linspace", nargs=3, default=None,
                           metavar=("START", "STOP", "COUNT"))
            p.add_argument("--stats-phi", dest="stats_phi", default=None,
                           help="phi used for the Q / variance statistics (default 0)")
        if mode == "validate":
            p.add_argument("--oracle-tol", dest="oracle_tol", default=None,
                           help="pass threshold for the oracle deviations (default 1e-8)")
    return parser


def _read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as err:
        raise ConfigError(f"cannot read config file {path!r}: {err}") from err
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'", line=lineno)
        key, _, value = line.partition("=")
        key = key.strip().lower().replace("-", "_")
        if key not in _OPTIONS:
            raise ConfigError(f"line {lineno}: unknown key {key.strip()!r}", key=key, line=lineno)
        values[key] = value.strip()
    return values


def _env_overrides() -> dict[str, str]:
    values = {}
    for key in _OPTIONS:
        env_key = ENV_PREFIX + key.upper()
        if env_key in os.environ:
            values[key] = os.environ[env_key]
    return values


def parse_config(args, file: str | None = None) -> RunConfig:
    """Build a validated RunConfig from CLI arguments plus an optional file."""
    namespace = _build_parser().parse_args(list(args))
    if namespace.mode is None:
        raise ConfigError(f"a mode is required: one of {', '.join(MODES)}")
    mode = namespace.mode

    raw: dict[str, str] = {}
    file_path = file or getattr(namespace, "config", None)
    if file_path:
        raw.update(_read_config_file(file_path))
    raw.update(_env_overrides())

    flag_names = {
        "alpha": "alpha", "r": "r", "theta": "theta", "phi": "phi", "c": "c",
        "lambda": "lam", "g": "g", "t_end": "t_end", "dt": "dt", "tol": "tol",
        "n_cap": "n_cap", "output": "output", "format": "format",
        "sweep_axis": "sweep_axis", "sweep_values": "sweep_values",
        "stats_phi": "stats_phi", "oracle_tol": "oracle_tol",
    }
    for key, attr in flag_names.items():
        value = getattr(namespace, attr, None)
        if value is not None:
            raw[key] = value
    if raw.get("mode", mode) != mode:
        raise ConfigError(
            f"config file mode {raw['mode']!r} conflicts with subcommand {mode!r}", key="mode"
        )

    parsed: dict[str, object] = {}
    for key, value in raw.items():
        if key == "mode":
            continue
        parser_fn = _OPTIONS[key][0]
        try:
            parsed[key] = parser_fn(value)
        except ConfigError as err:
            raise ConfigError(f"parameter {key!r}: {err}", key=key) from err

    missing = [k for k, (_, required) in _OPTIONS.items() if required and k not in parsed]
    if missing:
        raise ConfigError(f"missing required parameter(s): {', '.join(sorted(missing))}",
                          key=sorted(missing)[0])

    t_end_default, dt_default = _GRID_DEFAULTS[mode]
    t_end = float(parsed.get("t_end", t_end_default))
    dt = parsed.get("dt", dt_default)
    dt = None if dt is None else float(dt)
    tol = float(parsed.get("tol", DEFAULT_TAIL_TOL))
    n_cap = int(parsed.get("n_cap", DEFAULT_N_CAP))
    fmt = str(parsed.get("format", "csv"))
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be 'csv' or 'json', got {fmt!r}", key="format")
    sweep_axis = str(parsed.get("sweep_axis", "theta"))
    if sweep_axis not in ("theta", "c"):
        raise ConfigError(f"sweep axis must be 'theta' or 'c', got {sweep_axis!r}", key="sweep_axis")

    sweep_values = parsed.get("sweep_values")
    linspace = getattr(namespace, "sweep_linspace", None)
    if linspace is not None:
        start, stop = parse_angle(linspace[0]), parse_angle(linspace[1])
        count = _parse_int(linspace[2])
        if count < 1:
            raise ConfigError("sweep-linspace COUNT must be >= 1", key="sweep_values")
        if count == 1:
            sweep_values = (start,)
        else:
            step = (stop - start) / (count - 1)
            sweep_values = tuple(start + k * step for k in range(count))

    # range checks, each naming the violated invariant
    if t_end <= 0.0:
        raise ConfigError(f"t_end must satisfy t_end > 0, got {t_end}", key="t_end")
    if dt is not None and dt <= 0.0:
        raise ConfigError(f"dt must satisfy dt > 0, got {dt}", key="dt")
    if dt is not None and dt > t_end:
        raise ConfigError(f"dt must not exceed t_end ({dt} > {t_end})", key="dt")
    if tol <= 0.0:
        raise ConfigError(f"tol must satisfy tol > 0, got {tol}", key="tol")
    if n_cap < 1:
        raise ConfigError(f"n_cap must satisfy n_cap >= 1, got {n_cap}", key="n_cap")

    try:
        field = FieldParams(
            alpha=parsed["alpha"],
            r=float(parsed["r"]),
            theta=float(parsed["theta"]),
            phi=float(parsed["phi"]),
            c=float(parsed["c"]),
        )
    except ValueError as err:
        raise ConfigError(str(err)) from err
    try:
        coupling = CouplingParams(lam=float(parsed.get("lambda", 1.0)), g=float(parsed.get("g", 1.0)))
    except ValueError as err:
        raise ConfigError(str(err)) from err

    default_ext = "json" if mode == "validate" else fmt
    output = str(parsed.get("output", f"qce_{mode}.{default_ext}"))
    return RunConfig(
        mode=mode,
        field=field,
        coupling=coupling,
        t_end=t_end,
        dt=dt,
        tol=tol,
        n_cap=n_cap,
        output=output,
        fmt=fmt,
        sweep_axis=sweep_axis,
        sweep_values=sweep_values,
        stats_phi=float(parsed.get("stats_phi", 0.0)),
        oracle_tol=float(parsed.get("oracle_tol", 1e-8)),
    )
