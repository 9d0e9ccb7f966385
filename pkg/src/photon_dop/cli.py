"""Batch command-line front end.

    photon-dop <command> --config <path> [--out <path>] [--format json|csv]

The JSON config holds ``command``, ``seed``, optionally ``output`` and
``format``, plus the command's own keys. Unknown keys are rejected. The
emitted report echoes the fully defaulted config, which is itself a valid
config that reproduces the report byte for byte.

Exit codes: 0 success, 1 config error, 2 numerical error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__, seeding
from .coherent import PairKind, PairSampler, beam_test, bell_probabilities, pair_density
from .dopcalc import DEFAULT_GRID, Method, dop_of_state, q_min_analytic, q_min_grid, reduced_polarization
from .errors import ConfigError, IoError, ParseError, PhotonDopError
from .game import Scenario, ScenarioConfig, run_game
from .polarization import NAMED_STATES, MeasurementDirection, named_state
from .qcore import I2, X, PureState, SubsystemLayout, tensor_state
from .scrambler import (
    IX_SCHEDULE,
    Sampler,
    ScramblerMode,
    apply_schedule,
    partial_flip,
    partial_flip_state,
    per_pulse_ensemble,
    timebin_input,
)

COMMANDS = ("dop", "game", "scramble-sweep", "scramble-ensemble", "singlet-test", "oracle-check")
FORMATS = ("json", "csv")
CSV_COMMANDS = ("scramble-sweep", "oracle-check")


# -- schema -------------------------------------------------------------------

def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _is_num(v) -> bool:
    return (isinstance(v, (int, float)) and not isinstance(v, bool)) and math.isfinite(v)


def _int(lo: int | None = None, hi: int | None = None) -> Callable[[Any], bool]:
    return lambda v: _is_int(v) and (lo is None or v >= lo) and (hi is None or v <= hi)


def _num(lo: float | None = None, hi: float | None = None) -> Callable[[Any], bool]:
    return lambda v: _is_num(v) and (lo is None or v >= lo) and (hi is None or v <= hi)


def _one_of(*choices) -> Callable[[Any], bool]:
    return lambda v: v in choices


def _grid_pair(v) -> bool:
    return isinstance(v, list) and len(v) == 2 and all(_is_int(x) and x >= 2 for x in v)


def _state_spec(v) -> bool:
    if isinstance(v, str):
        return True
    return isinstance(v, list) and len(v) >= 2 and all(
        _is_num(x) or (isinstance(x, list) and len(x) == 2 and all(_is_num(y) for y in x)) for x in v
    )


def _layout_spec(v) -> bool:
    return isinstance(v, list) and all(
        isinstance(f, list) and len(f) == 2 and isinstance(f[0], str) and _is_int(f[1]) for f in v
    )


def _time_dims(v) -> bool:
    return isinstance(v, list) and len(v) >= 1 and all(_is_int(x) and 2 <= x <= 32 for x in v)


# key -> (validator, default, description of the constraint)
SCHEMA: dict[str, dict[str, tuple[Callable[[Any], bool], Any, str]]] = {
    "dop": {
        "state": (_state_spec, None, "a state name or a list of amplitudes"),
        "layout": (lambda v: v is None or _layout_spec(v), None, "list of [label, dim] pairs"),
        "method": (_one_of("ANALYTIC", "GRID"), "ANALYTIC", "ANALYTIC or GRID"),
        "n_theta": (_int(2, 20000), DEFAULT_GRID[0], "integer >= 2"),
        "n_phi": (_int(2, 40000), DEFAULT_GRID[1], "integer >= 2"),
    },
    "game": {
        "scenario": (_one_of(*(s.value for s in Scenario)), None, "a scenario name"),
        "flip_prob": (_num(0.0, 0.5), 0.0, "number in [0, 0.5]"),
        "trials": (_int(1), 100_000, "integer >= 1"),
        "bob_theta": (_num(0.0, math.pi), 0.0, "number in [0, pi]"),
        "bob_phi": (_num(), 0.0, "finite number"),
        "theta_phase": (_num(), 0.0, "finite number"),
        "direction_grid": (lambda v: v is None or _grid_pair(v), None, "[n_theta, n_phi] with entries >= 2"),
    },
    "scramble-sweep": {
        "alpha_start": (_num(0.0, math.pi / 2), 0.0, "number in [0, pi/2]"),
        "alpha_stop": (_num(0.0, math.pi / 2), math.pi / 2, "number in [0, pi/2]"),
        "steps": (_int(1, 100_000), 16, "integer >= 1"),
        "theta_phase": (_num(), 0.0, "finite number"),
        "n_theta": (_int(2, 20000), DEFAULT_GRID[0], "integer >= 2"),
        "n_phi": (_int(2, 40000), DEFAULT_GRID[1], "integer >= 2"),
    },
    "scramble-ensemble": {
        "base": (_one_of(*NAMED_STATES), "V", "a named polarization state"),
        "sampler": (_one_of(*(s.value for s in Sampler)), "IX_COINFLIP", "IX_COINFLIP, HAAR or FIXED"),
        "fixed": (lambda v: v in ("I", "X") or _num(0.0, math.pi / 2)(v), "I", "'I', 'X' or a flip angle in [0, pi/2]"),
        "n": (_int(1), 100_000, "integer >= 1"),
    },
    "singlet-test": {
        "sampler": (_one_of(*(k.value for k in PairKind)), "IDENTICAL_PURE", "a pair sampler name"),
        "n": (_int(1), 10_000, "integer >= 1"),
        "a": (_one_of(*NAMED_STATES), "H", "a named polarization state"),
        "b": (_one_of(*NAMED_STATES), "V", "a named polarization state"),
        "which": (_one_of("PHI_PLUS", "PHI_MINUS", "PSI_PLUS", "PSI_MINUS"), "PSI_MINUS", "a Bell state name"),
    },
    "oracle-check": {
        "n_states": (_int(1), 100, "integer >= 1"),
        "time_dims": (_time_dims, [2, 4], "list of time dimensions in [2, 32]"),
        "n_theta": (_int(2, 20000), DEFAULT_GRID[0], "integer >= 2"),
        "n_phi": (_int(2, 40000), DEFAULT_GRID[1], "integer >= 2"),
    },
}
REQUIRED = {"dop": ("state",), "game": ("scenario",)}


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    output_path: str | None = None
    format: str = "json"

    def echo(self) -> dict:
        out = {"command": self.command, "seed": self.seed, "format": self.format, **self.params}
        if self.output_path is not None:
            out["output"] = self.output_path
        return out


@dataclass
class Report:
    config_echo: RunConfig
    results: dict
    artifact_version: str = __version__
    wall_time_ms: float | None = None
    rows: list[dict] | None = None


def parse_config(text: bytes | str, command: str | None = None) -> RunConfig:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"config is not UTF-8: {exc.reason}", 1, exc.start + 1) from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    raw = dict(raw)

    cmd = raw.pop("command", command)
    if cmd not in COMMANDS:
        raise ConfigError(f"field 'command': expected one of {list(COMMANDS)}, got {cmd!r}")
    if command is not None and cmd != command:
        raise ConfigError(f"field 'command': config says {cmd!r} but {command!r} was invoked")

    seed = raw.pop("seed", 0)
    if not _is_int(seed) or not 0 <= seed <= seeding.MAX_SEED:
        raise ConfigError(f"field 'seed': expected a 64-bit unsigned integer, got {seed!r}")
    output = raw.pop("output", None)
    if output is not None and not isinstance(output, str):
        raise ConfigError("field 'output': expected a path string")
    fmt = raw.pop("format", "json")
    if fmt not in FORMATS:
        raise ConfigError(f"field 'format': expected one of {list(FORMATS)}, got {fmt!r}")

    schema = SCHEMA[cmd]
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ConfigError(f"field {unknown[0]!r}: unknown key for command {cmd!r}")
    params = {}
    for key, (check, default, what) in schema.items():
        if key not in raw:
            if key in REQUIRED.get(cmd, ()):
                raise ConfigError(f"field {key!r}: required for command {cmd!r}")
            if default is not None:
                params[key] = default
            continue
        if not check(raw[key]):
            raise ConfigError(f"field {key!r}: expected {what}, got {raw[key]!r}")
        params[key] = raw[key]
    if cmd == "scramble-sweep" and params["alpha_stop"] < params["alpha_start"]:
        raise ConfigError("field 'alpha_stop': must not be below alpha_start")
    if fmt == "csv" and cmd not in CSV_COMMANDS:
        raise ConfigError(f"field 'format': CSV output is only available for {list(CSV_COMMANDS)}")
    return RunConfig(command=cmd, params=params, seed=seed, output_path=output, format=fmt)


# -- commands -----------------------------------------------------------------

def resolve_state(spec, layout=None) -> PureState:
    """Build a named built-in state or an inline amplitude list."""
    if isinstance(spec, list):
        amps = [complex(x[0], x[1]) if isinstance(x, list) else complex(x) for x in spec]
        if layout is not None:
            lay = SubsystemLayout(tuple((lab, dim) for lab, dim in layout))
        elif len(amps) == 2:
            lay = SubsystemLayout.of(("pol", 2))
        elif len(amps) % 2 == 0:
            lay = SubsystemLayout.of(("time", len(amps) // 2), ("pol", 2))
        else:
            raise ConfigError(f"field 'layout': required for {len(amps)} amplitudes")
        return PureState.normalized(amps, lay)
    name, _, arg = spec.partition(":")
    try:
        if name in ("eq5", "timebin"):
            return timebin_input(float(arg or 0.0))
        if name in ("eq6", "entangled"):
            return apply_schedule(timebin_input(float(arg or 0.0)), IX_SCHEDULE)
        if name == "partial":
            return partial_flip_state(float(arg))
        if name == "product":
            time_part = PureState(np.array([1, 1]) / np.sqrt(2), SubsystemLayout.of(("time", 2)))
            return tensor_state(time_part, named_state(arg))
    except ValueError as exc:
        raise ConfigError(f"field 'state': bad argument in {spec!r}: {exc}") from None
    raise ConfigError(f"field 'state': unknown state {spec!r}; use timebin:<theta>, entangled[:<theta>], partial:<alpha>, product:<name>")


def _cmd_dop(cfg: RunConfig, jobs: int) -> tuple[dict, None]:
    p = cfg.params
    psi = resolve_state(p["state"], p.get("layout"))
    res = dop_of_state(psi, Method(p["method"]), (p["n_theta"], p["n_phi"]))
    rho = reduced_polarization(psi)
    out = res.as_dict()
    out["rho_pol_real"] = rho.matrix.real.tolist()
    out["rho_pol_imag"] = rho.matrix.imag.tolist()
    return out, None


def _cmd_game(cfg: RunConfig, jobs: int) -> tuple[dict, None]:
    p = cfg.params

    def one(theta: float, phi: float) -> dict:
        sc = ScenarioConfig(
            scenario=p["scenario"],
            flip_prob=p["flip_prob"],
            trials=p["trials"],
            seed=cfg.seed,
            bob_direction=MeasurementDirection(theta, phi),
            theta_phase=p["theta_phase"],
        )
        return run_game(sc, jobs=jobs).as_dict()

    if "direction_grid" not in p:
        return one(p["bob_theta"], p["bob_phi"]), None
    nt, nph = p["direction_grid"]
    sweep = []
    for i in range(nt):
        for j in range(nph):
            theta, phi = i * math.pi / (nt - 1), j * 2 * math.pi / nph
            r = one(theta, phi)
            sweep.append({"bob_theta": theta, "bob_phi": phi, "p_win_hat": r["p_win_hat"], "std_err": r["std_err"]})
    best = max(sweep, key=lambda r: r["p_win_hat"])
    return {"sweep": sweep, "max_p_win_hat": best["p_win_hat"], "std_err_at_max": best["std_err"]}, None


def _cmd_sweep(cfg: RunConfig, jobs: int) -> tuple[dict, list[dict]]:
    p = cfg.params
    rows = []
    for alpha in np.linspace(p["alpha_start"], p["alpha_stop"], p["steps"]):
        psi = partial_flip_state(float(alpha), p["theta_phase"])
        rho = reduced_polarization(psi)
        rows.append({
            "alpha": float(alpha),
            "dop_analytic": q_min_analytic(rho).dop,
            "dop_grid": q_min_grid(rho, p["n_theta"], p["n_phi"]).dop,
        })
    worst = max(abs(r["dop_analytic"] - abs(math.cos(r["alpha"]))) for r in rows)
    return {"points": rows, "max_abs_dev_from_cos_alpha": worst}, rows


def _cmd_ensemble(cfg: RunConfig, jobs: int) -> tuple[dict, None]:
    p = cfg.params
    fixed = p["fixed"]
    unitary = {"I": I2, "X": X}.get(fixed) if isinstance(fixed, str) else partial_flip(float(fixed))
    mode = ScramblerMode(sampler=Sampler(p["sampler"]), fixed=unitary)
    return per_pulse_ensemble(named_state(p["base"]), mode, p["n"], cfg.seed, jobs).as_dict(), None


def _cmd_singlet(cfg: RunConfig, jobs: int) -> tuple[dict, None]:
    p = cfg.params
    sampler = PairSampler(PairKind(p["sampler"]), a=p["a"], b=p["b"], which=p["which"])
    out = beam_test(sampler, p["n"], cfg.seed, jobs).as_dict()
    if sampler.kind is not PairKind.IDENTICAL_PURE:
        out["bell_probabilities"] = bell_probabilities(pair_density(sampler))
    return out, None


def random_total_state(rng: np.random.Generator, time_dim: int) -> PureState:
    """Gaussian random pure state on pol (x) time."""
    layout = SubsystemLayout.of(("pol", 2), ("time", time_dim))
    v = rng.standard_normal(layout.dim) + 1j * rng.standard_normal(layout.dim)
    return PureState.normalized(v, layout)


def _cmd_oracle(cfg: RunConfig, jobs: int) -> tuple[dict, list[dict]]:
    p = cfg.params
    rows = []
    for k in range(p["n_states"]):
        td = p["time_dims"][k % len(p["time_dims"])]
        rho = reduced_polarization(random_total_state(seeding.child_rng(cfg.seed, "oracle-check", k), td))
        qa = q_min_analytic(rho).q_min
        qg = q_min_grid(rho, p["n_theta"], p["n_phi"]).q_min
        rows.append({"index": k, "time_dim": td, "q_min_analytic": qa, "q_min_grid": qg, "diff": qg - qa})
    return {
        "n_states": len(rows),
        "max_abs_diff": max(abs(r["diff"]) for r in rows),
        "min_signed_diff": min(r["diff"] for r in rows),
        "states": rows,
    }, rows


DISPATCH = {
    "dop": _cmd_dop,
    "game": _cmd_game,
    "scramble-sweep": _cmd_sweep,
    "scramble-ensemble": _cmd_ensemble,
    "singlet-test": _cmd_singlet,
    "oracle-check": _cmd_oracle,
}


def run(cfg: RunConfig, jobs: int = 1) -> Report:
    start = time.perf_counter()
    results, rows = DISPATCH[cfg.command](cfg, jobs)
    elapsed = (time.perf_counter() - start) * 1000.0
    return Report(config_echo=cfg, results=results, wall_time_ms=elapsed, rows=rows)


# -- emission -----------------------------------------------------------------

def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ConfigError(f"cannot emit non-finite value {x!r}")
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def _dump(obj, indent: int = 0) -> str:
    pad = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_dump(obj[k], indent + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_dump(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _dump(v, indent + 1) for v in obj) + "\n" + "  " * indent + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot emit {type(obj).__name__}")


def emit(report: Report, fmt: str = "json", include_timing: bool = False) -> bytes:
    """Serialize a report. JSON keys are sorted and floats carry 17
    significant digits; CSV has a header row and LF line endings."""
    if fmt == "csv":
        if not report.rows:
            raise ConfigError(f"command {report.config_echo.command!r} has no CSV form")
        cols = list(report.rows[0])
        buf = io.StringIO()
        buf.write(",".join(cols) + "\n")
        for row in report.rows:
            buf.write(",".join(_dump(row[c]) for c in cols) + "\n")
        return buf.getvalue().encode("utf-8")
    doc = {
        "artifact_version": report.artifact_version,
        "config": report.config_echo.echo(),
        "results": report.results,
    }
    if include_timing:
        doc["wall_time_ms"] = report.wall_time_ms
    return (_dump(doc) + "\n").encode("utf-8")


# -- entry point --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="photon-dop", description="Single-photon DOP and polarization-scrambler simulations")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", required=True, help="JSON config file")
    ap.add_argument("--out", help="output path (default: config 'output', else stdout)")
    ap.add_argument("--format", choices=FORMATS, help="output format (default: config 'format', else json)")
    ap.add_argument("--jobs", type=int, default=1, help="worker threads; never changes results")
    ap.add_argument("--timing", action="store_true", help="include wall_time_ms in JSON output")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        try:
            text = Path(args.config).read_bytes()
        except OSError as exc:
            raise IoError(f"cannot read config {args.config}: {exc.strerror}") from None
        cfg = parse_config(text, args.command)
        fmt = args.format or cfg.format
        if fmt == "csv" and cfg.command not in CSV_COMMANDS:
            raise ConfigError(f"CSV output is only available for {list(CSV_COMMANDS)}")
        report = run(cfg, jobs=max(1, args.jobs))
        data = emit(report, fmt, include_timing=args.timing)
        out = args.out or cfg.output_path
        if out is None:
            sys.stdout.write(data.decode("utf-8"))
        else:
            try:
                Path(out).write_bytes(data)
            except OSError as exc:
                raise IoError(f"cannot write {out}: {exc.strerror}") from None
    except PhotonDopError as exc:
        print(f"photon-dop: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
