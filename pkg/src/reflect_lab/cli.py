"""``reflect-lab`` command line tool.

Every command that computes something writes a CSV plus a JSON run-manifest
next to it in ``--out``. Failures print one ``error: <category>: <message>``
line on stderr and exit with 2 (config/arguments), 3 (solver/model) or 4 (I/O).
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import os
import sys
from pathlib import Path

from . import __version__
from .analysis import (
    LinkModel,
    Scenario,
    SweepTable,
    breakeven_elements,
    gain_sweep,
    model_snr,
    rate,
    required_power,
    run_sweep,
)
from .config import PRESETS, parse_config, preset_text, serialize_config
from .exceptions import ConfigError, ModelError, UnreachableTargetError

EXIT_OK, EXIT_CONFIG, EXIT_MODEL, EXIT_IO = 0, 2, 3, 4
SEED_ENV = "REFLECT_LAB_SEED"

SWEEP_HEADER = ("n", "model", "snr", "snr_db", "rate_bpcu", "far_field_valid", "energy_bound_exceeded")
GAIN_HEADER = ("n", "rho_exact", "rho_far_field", "relative_error", "far_field_valid")
POWER_HEADER = ("n", "model", "required_power_w", "required_power_dbm")
BREAKEVEN_HEADER = ("model", "n_ref", "n_breakeven", "target_rate_bpcu", "rate_at_breakeven_bpcu")


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """12 significant digits; booleans as ``true``/``false``."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, str)):
        return str(x)
    return format(float(x), ".12g")


def to_db(x: float) -> float:
    if x == 0:
        return -math.inf
    return 10.0 * math.log10(x) if x > 0 else math.nan


def _write_rows(destination, header, rows):
    def write(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])

    if hasattr(destination, "write"):
        write(destination)
        return destination
    path = Path(destination)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        write(fh)
    return path


def emit_csv(table: SweepTable, destination):
    """Write a sweep table as CSV to a path or an open text file."""
    if not table.rows:
        raise ValueError("refusing to write an empty table")
    rows = (
        (r.n, r.model.value, r.snr, to_db(r.snr), r.rate, r.far_field_valid, r.energy_bound_exceeded)
        for r in table.rows
    )
    return _write_rows(destination, SWEEP_HEADER, rows)


def emit_gain_csv(rows, destination):
    data = ((r.n, r.rho_exact, r.rho_far_field, r.relative_error, r.far_field_valid) for r in rows)
    return _write_rows(destination, GAIN_HEADER, data)


def write_manifest(path, command, scenario: Scenario, outputs, extra=None):
    manifest = {
        "tool": "reflect-lab",
        "version": __version__,
        "command": command,
        "seed": scenario.seed,
        "scenario_digest": scenario.digest(),
        "beta_convention": scenario.beta_convention,
        "beta_h": scenario.beta_h,
        "beta_g": scenario.beta_g,
        "config": serialize_config(scenario),
        "outputs": list(outputs),
    }
    if extra:
        manifest["args"] = extra
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _outputs(out_dir: Path, stem: str):
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir / f"{stem}.csv", out_dir / f"{stem}.manifest.json"


def cmd_gain_sweep(scenario, args, out):
    csv_path, man = _outputs(out, "gain_sweep")
    emit_gain_csv(gain_sweep(scenario), csv_path)
    write_manifest(man, "gain-sweep", scenario, [csv_path.name], {"distance_m": scenario.d_h})
    print(csv_path)


def cmd_rate_compare(scenario, args, out):
    csv_path, man = _outputs(out, "rate_compare")
    emit_csv(run_sweep(scenario), csv_path)
    write_manifest(man, "rate-compare", scenario, [csv_path.name])
    print(csv_path)


def cmd_breakeven(scenario, args, out):
    model = LinkModel.parse(args.model)
    n_be = breakeven_elements(scenario, model, args.ref)
    target = rate(model_snr(scenario, LinkModel.MMIMO, args.ref))
    reached = rate(model_snr(scenario, model, n_be))
    csv_path, man = _outputs(out, "breakeven")
    _write_rows(csv_path, BREAKEVEN_HEADER, [(model.value, args.ref, n_be, target, reached)])
    write_manifest(man, "breakeven", scenario, [csv_path.name], {"model": model.value, "ref": args.ref})
    print(n_be)


def cmd_power_scaling(scenario, args, out):
    target = 10.0 ** (args.target_snr_db / 10.0)
    rows = []
    for model in sorted(scenario.models, key=lambda m: m.order):
        for n in scenario.n_grid:
            p = required_power(scenario, model, n, target)
            rows.append((n, model.value, p, to_db(p) + 30.0))
    csv_path, man = _outputs(out, "power_scaling")
    _write_rows(csv_path, POWER_HEADER, rows)
    write_manifest(man, "power-scaling", scenario, [csv_path.name], {"target_snr_db": args.target_snr_db})
    print(csv_path)


def cmd_preset(args):
    name = args.name or args.preset
    if name is None:
        raise UsageError(f"preset needs a name: one of {', '.join(PRESETS)}")
    text = preset_text(name)
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        path = out / f"{name}.ini"
        path.write_text(text, encoding="utf-8")
        print(path)
    else:
        sys.stdout.write(text)


COMMANDS = {
    "gain-sweep": cmd_gain_sweep,
    "rate-compare": cmd_rate_compare,
    "breakeven": cmd_breakeven,
    "power-scaling": cmd_power_scaling,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="reflect-lab", description="Massive MIMO vs IRS link-budget simulator")
    p.add_argument("--version", action="version", version=f"reflect-lab {__version__}")
    p.add_argument("command", choices=[*COMMANDS, "preset"])
    p.add_argument("name", nargs="?", help="preset name for the 'preset' command")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--config", metavar="FILE")
    src.add_argument("--preset", metavar="NAME", choices=PRESETS)
    p.add_argument("--out", metavar="DIR")
    p.add_argument("--ref", type=int, default=64, help="reference mMIMO antenna count (default 64)")
    p.add_argument("--model", default="irs-exact", help="IRS model for breakeven (default irs-exact)")
    p.add_argument("--target-snr-db", type=float, default=20.0, help="target SNR for power-scaling")
    return p


def load_scenario(args) -> Scenario:
    if args.config is not None:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc.strerror}") from None
    elif args.preset is not None:
        text = preset_text(args.preset)
    else:
        raise UsageError("one of --config or --preset is required")
    scenario = parse_config(text)
    env_seed = os.environ.get(SEED_ENV)
    if env_seed is not None:
        try:
            seed = int(env_seed)
        except ValueError:
            raise ConfigError(f"{SEED_ENV} must be an integer, got {env_seed!r}") from None
        if seed < 0:
            raise ConfigError(f"{SEED_ENV} must be >= 0, got {seed}")
        scenario = dataclasses.replace(scenario, seed=seed)
    return scenario


def _fail(category, message, code):
    print(f"error: {category}: {' '.join(str(message).split())}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "preset":
            cmd_preset(args)
            return EXIT_OK
        if args.ref < 1:
            raise UsageError(f"--ref must be >= 1, got {args.ref}")
        if args.command == "breakeven":
            LinkModel.parse(args.model)
        scenario = load_scenario(args)
        out = Path(args.out) if args.out is not None else Path.cwd()
        COMMANDS[args.command](scenario, args, out)
    except UsageError as exc:
        return _fail("usage", exc, EXIT_CONFIG)
    except ConfigError as exc:
        return _fail("config", exc, EXIT_CONFIG)
    except (ModelError, UnreachableTargetError) as exc:
        return _fail("model", exc, EXIT_MODEL)
    except OSError as exc:
        return _fail("io", f"{exc.strerror or exc}: {exc.filename or ''}", EXIT_IO)
    except ValueError as exc:
        return _fail("usage", exc, EXIT_CONFIG)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
