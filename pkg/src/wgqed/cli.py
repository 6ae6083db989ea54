"""Command line front end.

Five subcommands cover the pipeline: ``modes`` tabulates the guided
spectrum, ``decay`` computes the emission rate and level shift,
``corr`` samples the detection correlation map and fits its two decay
rates, ``omegad`` reports the line center where the rate ratio crosses
the refractive index, and ``validate`` runs the invariant battery.

Every artifact embeds an envelope identifying the tool, the command,
the model tags and the full effective configuration, so a file on its
own says how it was made. Column names and JSON field names are
frozen; docs/artifact_schema.md in the repository is the reference.
With ``--reproducible`` the timestamp is omitted and repeated runs are
byte-identical.

Exit codes: 0 success, 2 configuration error, 3 domain error,
4 convergence failure, 5 validation failure, 6 no crossing found.
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import sys

from . import __version__
from .config import load_config
from .detection import (
    RadicandModel,
    closed_form_crossing,
    correlation_grid,
    fit_decay_rates,
    omega_d,
    pole,
)
from .emission import MarkovParameters, decay_rate, level_shift
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    NoCrossingError,
)
from .modes import (
    ModeIndex,
    Polarization,
    cutoff_frequency,
    transverse_wavenumber,
)
from .validate import run_checks

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_CONVERGENCE = 4
EXIT_VALIDATION = 5
EXIT_NO_CROSSING = 6


def _fmt(value, digits: int) -> str:
    """One deterministic cell; empty string for missing values."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            return repr(value)
        return format(value, f".{digits}g")
    return str(value)


def _json_value(value, digits: int):
    if isinstance(value, float):
        if not math.isfinite(value):
            return repr(value)
        return float(format(value, f".{digits}g"))
    if isinstance(value, dict):
        return {k: _json_value(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(v, digits) for v in value]
    return value


def _envelope(command: str, config, reproducible: bool,
              discrepancies: dict | None = None) -> dict:
    env = {
        "tool": "wgqed",
        "version": __version__,
        "command": command,
        "dos_model": config.dos.value,
        "radicand_model": config.radicand.value,
        "config": dict(config.effective_items()),
        "discrepancies": discrepancies or {},
    }
    if not reproducible:
        env["timestamp"] = datetime.datetime.now(
            datetime.timezone.utc).isoformat()
    return env


def _envelope_lines(env: dict, digits: int):
    yield f"# tool = {env['tool']}"
    yield f"# version = {env['version']}"
    yield f"# command = {env['command']}"
    yield f"# dos_model = {env['dos_model']}"
    yield f"# radicand_model = {env['radicand_model']}"
    for key, value in env["config"].items():
        yield f"# config.{key} = {_fmt(value, digits)}"
    for key in sorted(env["discrepancies"]):
        yield (f"# discrepancy.{key} = "
               f"{_fmt(env['discrepancies'][key], digits)}")
    if "timestamp" in env:
        yield f"# timestamp = {env['timestamp']}"


def _render_csv(env: dict, columns, rows, digits: int,
                extra: dict | None = None) -> str:
    lines = list(_envelope_lines(env, digits))
    for key in sorted(extra or {}):
        for sub in sorted(extra[key]):
            lines.append(
                f"# {key}.{sub} = {_fmt(extra[key][sub], digits)}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(cell, digits) for cell in row))
    return "\n".join(lines) + "\n"


def _render_json(env: dict, columns, rows, digits: int,
                 extra: dict | None = None) -> str:
    doc = {
        "envelope": _json_value(env, digits),
        "columns": list(columns),
        "rows": [[_json_value(c, digits) for c in row]
                 for row in rows],
    }
    if extra:
        doc.update(_json_value(extra, digits))
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _write(path, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _emit(args, config, env, columns, rows, extra=None):
    """Render one tabular artifact. ``extra`` holds named flat dicts
    that land as top level objects in JSON and as comment lines in
    CSV."""
    if config.out_format == "csv":
        text = _render_csv(env, columns, rows, config.digits,
                           extra=extra)
    else:
        text = _render_json(env, columns, rows, config.digits,
                            extra=extra)
    _write(args.out, text)


def cmd_modes(config, args) -> int:
    spec = config.waveguide_spec()
    omega = config.atom_omega
    table = []
    for pol in (Polarization.TE, Polarization.TM):
        for m in range(config.max_mn + 1):
            for n in range(config.max_mn + 1):
                try:
                    mode = ModeIndex(pol, m, n)
                except DomainError:
                    continue
                nu_c = cutoff_frequency(spec, mode)
                branch = "traveling" if omega > nu_c else "decaying"
                table.append((nu_c, pol.value, m, n,
                              transverse_wavenumber(spec, mode),
                              branch))
    table.sort(key=lambda r: (r[0], r[1], r[2], r[3]))
    columns = ("polarization", "m", "n", "transverse_wavenumber",
               "cutoff", "branch_at_omega")
    rows = [(pol, m, n, h, nu_c, branch)
            for nu_c, pol, m, n, h, branch in table]
    env = _envelope("modes", config, args.reproducible)
    _emit(args, config, env, columns, rows)
    return EXIT_OK


def cmd_decay(config, args) -> int:
    spec = config.waveguide_spec()
    atom = config.atom()
    box = config.box()
    decay = decay_rate(spec, atom, box, config.dos,
                       max_index=config.max_mn)
    shift = level_shift(spec, atom, box, config.dos,
                        window=config.shift_window(decay.total),
                        max_index=config.max_mn)
    columns = ("kind", "polarization", "m", "n", "branch", "direction",
               "weight", "coupling_re", "coupling_im", "value")
    rows = []
    for ch in decay.channels:
        rows.append(("decay_channel", ch.mode.polarization.value,
                     ch.mode.m, ch.mode.n, "traveling", ch.direction,
                     ch.weight, ch.coupling.real, ch.coupling.imag,
                     ch.rate))
    for con in shift.contributions:
        rows.append(("shift_contribution",
                     con.mode.polarization.value, con.mode.m,
                     con.mode.n, con.branch.value, None, None, None,
                     None, con.value))
    summary = {
        "decay_total": decay.total,
        "oscillatory": decay.oscillatory,
        "level_shift": shift.value,
        "shifted_frequency": config.atom_omega - shift.value,
        "window_lo": shift.window[0],
        "window_hi": shift.window[1],
    }
    env = _envelope("decay", config, args.reproducible)
    _emit(args, config, env, columns, rows,
          extra={"summary": summary})
    return EXIT_OK


def _corr_chain(config):
    spec = config.waveguide_spec()
    atom = config.atom()
    box = config.box()
    decay = decay_rate(spec, atom, box, config.dos,
                       max_index=config.max_mn)
    if decay.oscillatory:
        raise DomainError(
            "the transition lies below every cutoff; the correlation "
            "map needs a traveling channel")
    shift = level_shift(spec, atom, box, config.dos,
                        window=config.shift_window(decay.total),
                        max_index=config.max_mn)
    params = MarkovParameters(
        decay_total=decay.total, level_shift=shift.value,
        transition_frequency=atom.transition_frequency)
    res = pole(spec, params.shifted_frequency, decay.total,
               config.radicand)
    grid = correlation_grid(spec, atom, res, config.x_values(),
                            config.z_values(),
                            config.t_values(decay.total),
                            dos=config.dos, max_index=config.max_mn)
    return grid


def cmd_corr(config, args) -> int:
    grid = _corr_chain(config)
    fit = fit_decay_rates(grid)
    meta = grid.metadata
    sidecar = {
        "fitted_temporal_slope": -fit.temporal_rate,
        "fitted_spatial_slope": -fit.spatial_rate,
        "slope_ratio": fit.rate_ratio,
        "cone_ratio": fit.cone_ratio,
        "spatial_over_temporal_exact":
            abs(meta.spatial_rate) / meta.decay_rate,
        "max_log_residual": fit.max_log_residual,
        "shifted_frequency": meta.shifted_frequency,
        "decay_rate": meta.decay_rate,
        "spatial_rate": meta.spatial_rate,
        "beta_r": meta.beta_r,
        "beta_i": meta.beta_i,
        "front_speed_factor": meta.front_speed_factor,
    }
    discrepancies = {
        "grid_consistency_max_rel": meta.consistency_max_rel,
        "alternative_prefactor_ratio":
            meta.alternative_prefactor_ratio,
    }
    env = _envelope("corr", config, args.reproducible,
                    discrepancies=discrepancies)
    columns = ("x", "z", "t", "g1", "inside_cone")
    rows = []
    for i, xv in enumerate(grid.x_values):
        for j, zv in enumerate(grid.z_values):
            for k, tv in enumerate(grid.t_values):
                rows.append((float(xv), float(zv), float(tv),
                             float(grid.values[i, j, k]),
                             bool(grid.inside_cone[j, k])))
    if config.out_format == "csv":
        _emit(args, config, env, columns, rows)
        side_doc = {"envelope": _json_value(env, config.digits),
                    "fit": _json_value(sidecar, config.digits)}
        side_text = json.dumps(side_doc, sort_keys=True,
                               indent=2) + "\n"
        side_path = args.out + ".json" if args.out else None
        _write(side_path, side_text)
    else:
        _emit(args, config, env, columns, rows,
              extra={"fit": sidecar})
    return EXIT_OK


def cmd_omegad(config, args) -> int:
    spec = config.waveguide_spec()
    atom = config.atom()
    box = config.box()
    decay = decay_rate(spec, atom, box, config.dos,
                       max_index=config.max_mn)
    if decay.oscillatory or decay.total <= 0.0:
        raise DomainError(
            "the crossing search needs a positive decay rate, but "
            "the transition feeds no traveling channel")
    closed = closed_form_crossing(spec, decay.total)
    columns = ("model", "status", "closed_form", "root_found",
               "discrepancy", "ratio_min_seen", "ratio_max_seen")
    rows = []
    discrepancies = {}
    selected_failed = False
    for model in RadicandModel:
        try:
            report = omega_d(spec, decay.total, model)
            rows.append((model.value, "crossing", closed,
                         report.root_found, report.discrepancy,
                         None, None))
            discrepancies[f"omega_d_{model.value}"] = \
                report.discrepancy
        except NoCrossingError as err:
            rows.append((model.value, "no_crossing", closed, None,
                         None, err.value_range[0], err.value_range[1]))
            if model is config.radicand:
                selected_failed = True
    env = _envelope("omegad", config, args.reproducible,
                    discrepancies=discrepancies)
    _emit(args, config, env, columns, rows)
    return EXIT_NO_CROSSING if selected_failed else EXIT_OK


def cmd_validate(config, args) -> int:
    results = run_checks(config, fault=args.inject_fault)
    columns = ("check", "passed", "measured", "tolerance", "detail")
    rows = [(r.name, r.passed, r.measured, r.tolerance, r.detail)
            for r in results]
    env = _envelope("validate", config, args.reproducible)
    failures = sum(not r.passed for r in results)
    _emit(args, config, env, columns, rows,
          extra={"summary": {"checks": len(results),
                             "failures": failures}})
    return EXIT_VALIDATION if failures else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, metavar="PATH",
                        help="key = value configuration file")
    common.add_argument("--out", metavar="PATH",
                        help="artifact path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"),
                        help="artifact format (default from config)")
    common.add_argument("--reproducible", action="store_true",
                        help="omit the timestamp for byte-identical "
                             "reruns")
    common.add_argument("--max-mn", type=int, dest="max_mn",
                        metavar="N", help="mode index bound override")
    common.add_argument("--dos", choices=("paper", "dispersion"),
                        help="state density model override")
    common.add_argument("--radicand", choices=("paper", "consistent"),
                        help="below-cutoff continuation override")

    parser = argparse.ArgumentParser(
        prog="wgqed",
        description="guided-mode emission and detection pipeline")
    parser.add_argument("--version", action="version",
                        version=f"wgqed {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    handlers = (
        ("modes", cmd_modes, "tabulate the guided mode spectrum"),
        ("decay", cmd_decay, "emission rate and level shift"),
        ("corr", cmd_corr, "correlation map and fitted decay rates"),
        ("omegad", cmd_omegad, "rate-ratio crossing line center"),
        ("validate", cmd_validate, "run the invariant battery"),
    )
    for name, handler, help_text in handlers:
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(handler=handler)
        if name == "validate":
            p.add_argument("--inject-fault", dest="inject_fault",
                           metavar="NAME", help=argparse.SUPPRESS)
        else:
            p.set_defaults(inject_fault=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config).with_overrides(
            dos=args.dos, radicand=args.radicand, max_mn=args.max_mn,
            out_format=args.format)
        return args.handler(config, args)
    except ConfigError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except NoCrossingError as err:
        print(f"no crossing: {err}", file=sys.stderr)
        return EXIT_NO_CROSSING
    except DomainError as err:
        print(f"domain error: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as err:
        print(f"convergence failure: {err}", file=sys.stderr)
        return EXIT_CONVERGENCE
