"""Command-line front end: signal, sensitivity and verify subcommands.

A run is described by a single JSON config document; ``--set key=value``
overrides individual fields.  Numbers are emitted with shortest
round-trip formatting so outputs are byte-stable and re-emittable.

Exit codes: 0 success, 2 config error, 3 numeric/convergence error,
4 empty result, 5 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

from . import closed_form, fock_oracle, sweep
from .errors import EmptyResult, SimulationError
from .params import GainConfig
from .states import (CoherentSqueezed, InputState, ThermalSqueezed,
                     TwoModeCoherent, TwoModeVacuum, VacuumFock)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_EMPTY = 4
EXIT_VERIFY_FAILED = 5

# Operator-equivalence checks in `verify` use a deliberately conservative
# convention: a low-excitation block (n_a + n_b <= n_max/8) and phases on
# the bright side of the fringe, where the truncated conjugation route is
# accurate to well below the default tolerance for gains g <= 0.6.
EQUIV_SAFE_FRACTION = 0.125
EQUIV_PHI_REFS = (0.5, 1.0, 1.5)
EQUIV_DEFAULT_N_MAX = 44

_TOLERANCE_DEFAULTS = {
    "oracle_tol": 1e-6,
    "convergence_tol": 1e-8,
    "fd_step": 1e-5,
    "equivalence_tol": 1e-8,
}

_STATE_FIELDS = {
    "two_mode_vacuum": ((), ()),
    "two_mode_coherent": (("alpha", "beta"), ()),
    "coherent_squeezed": (("alpha", "r"), ("theta_s",)),
    "thermal_squeezed": (("nbar", "r"), ("theta_s",)),
    "vacuum_fock": (("n",), ()),
}


class ConfigError(Exception):
    """Malformed or inconsistent run configuration."""


@dataclass
class RunConfig:
    state: InputState
    gain: GainConfig
    grid: sweep.PhaseGrid
    n_max: int | None  # None means "auto"
    oracle_tol: float
    convergence_tol: float
    fd_step: float
    equivalence_tol: float
    out_path: str
    out_format: str


# ---------------------------------------------------------------------------
# config parsing

def _reject_unknown(section: dict, path: str, allowed) -> None:
    for key in section:
        if key not in allowed:
            raise ConfigError(f"unknown key '{path}.{key}'" if path else f"unknown key '{key}'")


def _require(section: dict, path: str, key: str):
    if key not in section:
        raise ConfigError(f"missing required field '{path}.{key}'")
    return section[key]


def _as_float(path: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"field '{path}' must be a number, got {value!r}")
    if not math.isfinite(float(value)):
        raise ConfigError(f"field '{path}' must be finite, got {value!r}")
    return float(value)


def _as_int(path: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"field '{path}' must be an integer, got {value!r}")
    return value


def _as_amplitude(path: str, value) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(float(value))
    if isinstance(value, list) and len(value) == 2:
        return complex(_as_float(path + "[0]", value[0]), _as_float(path + "[1]", value[1]))
    raise ConfigError(f"field '{path}' must be a number or a [re, im] pair, got {value!r}")


def _parse_state(section) -> InputState:
    if not isinstance(section, dict):
        raise ConfigError("section 'state' must be an object")
    family = _require(section, "state", "family")
    if family not in _STATE_FIELDS:
        raise ConfigError(
            f"field 'state.family' must be one of {sorted(_STATE_FIELDS)}, got {family!r}")
    required, optional = _STATE_FIELDS[family]
    _reject_unknown(section, "state", ("family",) + required + optional)
    for key in required:
        _require(section, "state", key)

    if family == "two_mode_vacuum":
        return TwoModeVacuum()
    if family == "two_mode_coherent":
        return TwoModeCoherent(alpha=_as_amplitude("state.alpha", section["alpha"]),
                               beta=_as_amplitude("state.beta", section["beta"]))
    if family == "coherent_squeezed":
        r = _as_float("state.r", section["r"])
        if r < 0:
            raise ConfigError(f"field 'state.r' must be >= 0, got {r}")
        return CoherentSqueezed(alpha=_as_amplitude("state.alpha", section["alpha"]), r=r,
                                theta_s=_as_float("state.theta_s", section.get("theta_s", 0.0)))
    if family == "thermal_squeezed":
        nbar = _as_float("state.nbar", section["nbar"])
        r = _as_float("state.r", section["r"])
        if nbar < 0:
            raise ConfigError(f"field 'state.nbar' must be >= 0, got {nbar}")
        if r < 0:
            raise ConfigError(f"field 'state.r' must be >= 0, got {r}")
        return ThermalSqueezed(nbar=nbar, r=r,
                               theta_s=_as_float("state.theta_s", section.get("theta_s", 0.0)))
    n = _as_int("state.n", section["n"])
    if n < 0:
        raise ConfigError(f"field 'state.n' must be >= 0, got {n}")
    return VacuumFock(n=n)


def _parse_gain(section) -> GainConfig:
    if not isinstance(section, dict):
        raise ConfigError("section 'gain' must be an object")
    _reject_unknown(section, "gain", ("g", "theta"))
    g = _as_float("gain.g", _require(section, "gain", "g"))
    if g < 0:
        raise ConfigError(f"field 'gain.g' must be >= 0, got {g}")
    return GainConfig(g=g, theta=_as_float("gain.theta", section.get("theta", 0.0)))


def _parse_grid(section) -> sweep.PhaseGrid:
    if not isinstance(section, dict):
        raise ConfigError("section 'grid' must be an object")
    _reject_unknown(section, "grid", ("start", "stop", "points"))
    start = _as_float("grid.start", _require(section, "grid", "start"))
    stop = _as_float("grid.stop", _require(section, "grid", "stop"))
    points = _as_int("grid.points", _require(section, "grid", "points"))
    if points < 2:
        raise ConfigError(f"field 'grid.points' must be >= 2, got {points}")
    if start >= stop:
        raise ConfigError(f"field 'grid.start' must be < 'grid.stop', got {start} >= {stop}")
    return sweep.PhaseGrid(start=start, stop=stop, points=points)


def _parse_cutoff(section) -> int | None:
    if not isinstance(section, dict):
        raise ConfigError("section 'cutoff' must be an object")
    _reject_unknown(section, "cutoff", ("n_max",))
    value = section.get("n_max", "auto")
    if value == "auto":
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"field 'cutoff.n_max' must be an integer or \"auto\", got {value!r}")
    if value < 1:
        raise ConfigError(f"field 'cutoff.n_max' must be >= 1, got {value}")
    return value


def _parse_tolerances(section) -> dict:
    if not isinstance(section, dict):
        raise ConfigError("section 'tolerances' must be an object")
    _reject_unknown(section, "tolerances", tuple(_TOLERANCE_DEFAULTS))
    out = dict(_TOLERANCE_DEFAULTS)
    for key in _TOLERANCE_DEFAULTS:
        if key in section:
            value = _as_float(f"tolerances.{key}", section[key])
            if value <= 0:
                raise ConfigError(f"field 'tolerances.{key}' must be > 0, got {value}")
            out[key] = value
    return out


def _apply_override(raw: dict, assignment: str) -> None:
    if "=" not in assignment:
        raise ConfigError(f"--set expects key=value, got {assignment!r}")
    dotted, text = assignment.split("=", 1)
    keys = [k for k in dotted.strip().split(".") if k]
    if not keys:
        raise ConfigError(f"--set expects a dotted key path, got {assignment!r}")
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        value = text
    node = raw
    for key in keys[:-1]:
        node = node.setdefault(key, {})
        if not isinstance(node, dict):
            raise ConfigError(f"cannot override '{dotted}': '{key}' is not an object")
    node[keys[-1]] = value


def load_config(path: str, overrides: list[str], out_path: str | None,
                out_format: str | None) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    for assignment in overrides:
        _apply_override(raw, assignment)

    _reject_unknown(raw, "", ("state", "gain", "grid", "cutoff", "tolerances", "output"))
    for name in ("state", "gain", "grid"):
        if name not in raw:
            raise ConfigError(f"missing required section '{name}'")
    state = _parse_state(raw["state"])
    gain = _parse_gain(raw["gain"])
    grid = _parse_grid(raw["grid"])
    n_max = _parse_cutoff(raw.get("cutoff", {}))
    tolerances = _parse_tolerances(raw.get("tolerances", {}))

    output = raw.get("output", {})
    if not isinstance(output, dict):
        raise ConfigError("section 'output' must be an object")
    _reject_unknown(output, "output", ("path", "format"))
    resolved_path = out_path or output.get("path")
    if not resolved_path or not isinstance(resolved_path, str):
        raise ConfigError("missing required field 'output.path' (or --output)")
    resolved_format = out_format or output.get("format", "csv")
    if resolved_format not in ("csv", "json"):
        raise ConfigError(f"field 'output.format' must be 'csv' or 'json', got {resolved_format!r}")

    return RunConfig(state=state, gain=gain, grid=grid, n_max=n_max,
                     out_path=resolved_path, out_format=resolved_format, **tolerances)


# ---------------------------------------------------------------------------
# output writers

def _fmt(value) -> str:
    if value is None or value == "":
        return ""
    if isinstance(value, str):
        return value
    return repr(float(value))


def _write_csv(path: str, header: list[str], rows: list[list], comments: list[str]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    lines.extend(comments)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2)
        handle.write("\n")


def _emit(config: RunConfig, header: list[str], rows: list[list],
          comments: list[str], summary: dict) -> None:
    if config.out_format == "csv":
        _write_csv(config.out_path, header, rows, comments)
    else:
        _write_json(config.out_path, {"columns": header, "rows": rows, "summary": summary})


# ---------------------------------------------------------------------------
# subcommands

def cmd_signal(config: RunConfig) -> int:
    """Write the parity curve: columns phi_rad, parity."""
    curve = sweep.parity_curve(config.state, config.gain, config.grid)
    rows = [[float(phi), float(val)] for phi, val in zip(curve.phis, curve.values)]
    _emit(config, ["phi_rad", "parity"], rows, [], {})
    return EXIT_OK


def cmd_sensitivity(config: RunConfig) -> int:
    """Write columns phi_rad, parity, delta_phi plus a summary block."""
    result = sweep.sensitivity_curve(
        config.state, config.gain, config.grid,
        fd_step=config.fd_step, convergence_tol=config.convergence_tol)
    rows = [[phi, closed_form.parity_signal(config.state, config.gain, phi), dphi]
            for phi, dphi in result.curve]
    summary = {
        "phi_opt": result.phi_opt,
        "delta_phi_min": result.delta_phi_min,
        "n_bar": result.n_bar,
        "snl": result.snl,
        "hl": result.hl,
        "n_bar_cutoff": result.n_bar_cutoff,
        "below_hl": bool(result.delta_phi_min < result.hl),
        "skipped": [[phi, reason] for phi, reason in result.skipped],
    }
    comments = ["# summary"]
    for key in ("phi_opt", "delta_phi_min", "n_bar", "snl", "hl"):
        comments.append(f"# {key},{_fmt(summary[key])}")
    comments.append(f"# n_bar_cutoff,{result.n_bar_cutoff}")
    comments.append(f"# below_hl,{'true' if summary['below_hl'] else 'false'}")
    for phi, reason in result.skipped:
        comments.append(f"# skipped,{_fmt(phi)},{reason}")
    _emit(config, ["phi_rad", "parity", "delta_phi"], rows, comments, summary)
    return EXIT_OK


def cmd_verify(config: RunConfig) -> int:
    """Closed-form-vs-oracle table plus the operator-equivalence checks."""
    cutoff = None if config.n_max is None else fock_oracle.FockCutoff(config.n_max)
    report = sweep.verify_closed_form(
        config.state, config.gain, config.grid, cutoff,
        oracle_tol=config.oracle_tol, convergence_tol=config.convergence_tol)

    rows: list[list] = []
    failures = 0
    for row in report.rows:
        status = "FAIL" if row.flagged else "PASS"
        failures += row.flagged
        rows.append(["parity_vs_oracle", row.phi, row.closed_value, row.oracle_value,
                     row.abs_diff, config.oracle_tol, status])
        if row.printed_value is not None:
            # informational only: the sign-free variant is not the shipped form
            # and is expected to fail for odd photon numbers
            variant_status = "PASS" if row.printed_abs_diff <= config.oracle_tol else "FAIL"
            rows.append(["fock_printed_form", row.phi, row.printed_value, row.oracle_value,
                         row.printed_abs_diff, config.oracle_tol, variant_status])

    eq_cutoff = fock_oracle.FockCutoff(config.n_max if config.n_max is not None
                                       else EQUIV_DEFAULT_N_MAX)
    u_res = max(fock_oracle.unitary_equivalence_residual(
        config.gain, phi, eq_cutoff, EQUIV_SAFE_FRACTION) for phi in EQUIV_PHI_REFS)
    mu_res = max(fock_oracle.measurement_equivalence_residual(
        config.gain, phi, eq_cutoff, EQUIV_SAFE_FRACTION) for phi in EQUIV_PHI_REFS)
    for name, residual in (("unitary_equivalence", u_res), ("measurement_equivalence", mu_res)):
        status = "PASS" if residual <= config.equivalence_tol else "FAIL"
        failures += status == "FAIL"
        rows.append([name, "", "", "", residual, config.equivalence_tol, status])

    summary = {
        "passed": failures == 0,
        "max_abs_diff": report.max_abs_diff,
        "oracle_cutoff_max": max(row.cutoff_used for row in report.rows),
        "equivalence_cutoff": eq_cutoff.n_max,
        "equivalence_block": f"n_a+n_b<={int(EQUIV_SAFE_FRACTION * eq_cutoff.n_max)}",
        "equivalence_phi_refs": list(EQUIV_PHI_REFS),
    }
    comments = [
        "# meta",
        f"# max_abs_diff,{_fmt(report.max_abs_diff)}",
        f"# oracle_cutoff_max,{summary['oracle_cutoff_max']}",
        f"# equivalence_cutoff,{eq_cutoff.n_max}",
        f"# equivalence_block,{summary['equivalence_block']}",
        f"# result,{'PASS' if failures == 0 else 'FAIL'}",
    ]
    _emit(config, ["check", "phi_rad", "closed_form", "oracle", "abs_diff", "tolerance", "status"],
          rows, comments, summary)
    return EXIT_OK if failures == 0 else EXIT_VERIFY_FAILED


# ---------------------------------------------------------------------------
# entry point

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="su11parity",
        description="Parity signals and phase sensitivity of a lossless SU(1,1) "
                    "interferometer, with Fock-space verification.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("signal", "evaluate the closed-form parity curve over the phase grid"),
            ("sensitivity", "evaluate the error-propagation sensitivity with SNL/HL references"),
            ("verify", "check closed forms against the Fock-space oracle")):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", required=True, help="path to a JSON run configuration")
        cmd.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                         help="override a config field by dotted path (repeatable)")
        cmd.add_argument("--output", help="output file path (overrides output.path)")
        cmd.add_argument("--format", choices=("csv", "json"),
                         help="output format (overrides output.format)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config, args.set, args.output, args.format)
        handler = {"signal": cmd_signal, "sensitivity": cmd_sensitivity,
                   "verify": cmd_verify}[args.command]
        return handler(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EmptyResult as exc:
        print(f"empty result: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except (SimulationError, ValueError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
