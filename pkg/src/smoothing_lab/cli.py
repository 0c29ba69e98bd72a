"""Config-driven command-line front end.

Every command takes a TOML config; flags override individual fields.
Exit codes: 0 success, 1 surface hypothesis failure, 2 malformed
configuration, 3 budget exceeded. Scientific disagreement inside a
report is recorded as data, never as a nonzero exit.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import json
import os
import sys
from dataclasses import replace
from fractions import Fraction

from . import __version__
from .config import (ConfigError, ExperimentConfig, SAMPLER_MONTE_CARLO,
                     config_hash, load_config)
from .errors import BudgetExceededError, InsufficientDataError
from .exponents import (SHARPNESS_BETA_AT_MOST_S0, compute_s0_d0,
                        region_of_boundedness)
from .oscillatory import collect_decay_samples, fit_decay_exponent
from .sublevel import (MonteCarloSampler, TensorGridSampler,
                       collect_sublevel_curve, fit_growth_exponent)
from .surfaces import validate_ratio_condition
from .vdc import AmplitudeSpec, PhaseSpec, bound_oscillatory_integral

VERDICT_CONSISTENT = "consistent"
VERDICT_INCONSISTENT = "inconsistent"
VERDICT_INDETERMINATE = "indeterminate"
VERDICT_SKIPPED = "skipped"


# -- serialization helpers ---------------------------------------------------

def format_float(x: float) -> str:
    out = format(float(x), ".17g")
    if out in ("inf", "-inf", "nan"):
        raise ValueError(f"cannot serialize {out} as JSON")
    return out


def dumps(obj, indent: int = 0) -> str:
    """Deterministic JSON with 17-significant-digit floats."""
    inner = "\n" + "  " * (indent + 1)
    outer = "\n" + "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        body = ("," + inner).join(
            f"{json.dumps(str(k))}: {dumps(v, indent + 1)}"
            for k, v in obj.items())
        return "{" + inner + body + outer + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        body = ("," + inner).join(dumps(v, indent + 1) for v in obj)
        return "[" + inner + body + outer + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if obj is None:
        return "null"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)
        if not text.endswith("\n"):
            handle.write("\n")


def _write_csv(path: str, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_float(v) if isinstance(v, float) else v
                             for v in row])


def _ensure_outdir(cfg: ExperimentConfig) -> str:
    out = cfg.output.directory
    os.makedirs(out, exist_ok=True)
    return out


def _provenance(cfg: ExperimentConfig) -> dict:
    return {
        "config_sha256": config_hash(cfg),
        "seed": cfg.sampler.seed,
        "version": __version__,
    }


def _validation_to_dict(report) -> dict:
    pairs = []
    for p in report.pairs:
        witness = None
        if p.witness is not None:
            witness = {
                "powers": list(p.witness.powers),
                "ratio_exponent": p.witness.ratio_exponent,
                "path": p.witness.describe(),
            }
        pairs.append({"index": p.index, "passed": p.passed,
                      "detail": p.detail, "witness": witness})
    return {
        "passed": report.passed,
        "pairs": pairs,
        "shell_exponents": list(report.shell_exponents),
        "shell_suprema": [list(row) for row in report.shell_suprema],
    }


# -- command plumbing --------------------------------------------------------

def _build_sampler(cfg: ExperimentConfig):
    s = cfg.sampler
    if s.kind == SAMPLER_MONTE_CARLO:
        return MonteCarloSampler(seed=s.seed, samples=s.budget)
    # Grid budget counts points per axis.
    return TensorGridSampler(points_per_axis=s.budget)


def _validation_gate(cfg: ExperimentConfig):
    """Shared precondition: exit 1 with the witness when nesting fails."""
    report = validate_ratio_condition(cfg.surface)
    if report.passed:
        return report, 0
    for p in report.pairs:
        if not p.passed:
            print(f"hypothesis failure at component pair "
                  f"({p.index}, {p.index + 1}): {p.detail}", file=sys.stderr)
            if p.witness is not None:
                print(f"witness: {p.witness.describe()}", file=sys.stderr)
    return report, 1


def cmd_validate(cfg: ExperimentConfig, args) -> int:
    report, status = _validation_gate(cfg)
    if args.format == "json":
        print(dumps(_validation_to_dict(report)))
    elif status == 0:
        for p in report.pairs:
            print(f"pair ({p.index}, {p.index + 1}): ok - {p.detail}")
        print("surface hypotheses hold")
    return status


def _exponent_payload(cfg: ExperimentConfig) -> dict:
    report = compute_s0_d0(cfg.surface, cfg.kernel)
    region = region_of_boundedness(report.s0, cfg.surface.n)
    return {"exponents": report.to_dict(), "region": region.to_dict()}


def _print_region(region_doc: dict) -> None:
    verts = ", ".join(
        f"({v['x']['num']}/{v['x']['den']}, {v['y']['num']}/{v['y']['den']})"
        for v in region_doc["vertices"])
    print(f"region: open {region_doc['shape']} with vertices {verts}")


def cmd_exponents(cfg: ExperimentConfig, args) -> int:
    _, status = _validation_gate(cfg)
    if status:
        return status
    payload = _exponent_payload(cfg)
    if args.format == "json":
        print(dumps(payload))
        return 0
    exp = payload["exponents"]
    s0 = Fraction(exp["s0"]["num"], exp["s0"]["den"])
    print(f"s0 = {s0} (= {float(s0):.6g}), d0 = {exp['d0']}")
    print(f"sharpness claim: {exp['sharpness_claim']}")
    _print_region(payload["region"])
    return 0


def cmd_region(cfg: ExperimentConfig, args) -> int:
    _, status = _validation_gate(cfg)
    if status:
        return status
    payload = _exponent_payload(cfg)
    if args.format == "json":
        print(dumps(payload["region"]))
    else:
        _print_region(payload["region"])
    return 0


def _run_sublevel(cfg: ExperimentConfig):
    sampler = _build_sampler(cfg)
    curve = collect_sublevel_curve(cfg.surface, cfg.kernel, sampler,
                                   cfg.eps_grid.min, cfg.eps_grid.max,
                                   cfg.eps_grid.count)
    fit = None
    note = None
    try:
        fit = fit_growth_exponent(curve)
    except InsufficientDataError as exc:
        note = str(exc)
    return curve, fit, note


def _sublevel_doc(cfg: ExperimentConfig, curve, fit, note) -> dict:
    return {
        "curve": [{"eps": e, "mu_hat": v, "stderr": s}
                  for e, v, s in curve.entries],
        "fit": fit.to_dict() if fit is not None else None,
        "fit_note": note,
        "provenance": _provenance(cfg),
    }


def cmd_sublevel(cfg: ExperimentConfig, args) -> int:
    _, status = _validation_gate(cfg)
    if status:
        return status
    out = _ensure_outdir(cfg)
    curve, fit, note = _run_sublevel(cfg)
    if "csv" in cfg.output.formats:
        _write_csv(os.path.join(out, "sublevel.csv"),
                   ("eps", "mu_hat", "stderr"), curve.entries)
    if "json" in cfg.output.formats:
        _write_text(os.path.join(out, "sublevel.json"),
                    dumps(_sublevel_doc(cfg, curve, fit, note)))
    if fit is not None:
        print(f"growth fit: s = {fit.s:.6g}, d = {fit.d}, "
              f"residual = {fit.residual:.3g}")
    else:
        print(f"growth fit unavailable: {note}")
    return 0


def _run_decay(cfg: ExperimentConfig):
    report = compute_s0_d0(cfg.surface, cfg.kernel)
    samples = collect_decay_samples(cfg.surface, cfg.kernel,
                                    cfg.tau_blocks.min_exponent,
                                    cfg.tau_blocks.max_exponent,
                                    cfg.tau_blocks.samples_per_block)
    fit = None
    note = None
    try:
        fit = fit_decay_exponent(samples, allowed_log_powers=(0, report.d0))
    except ValueError as exc:
        note = str(exc)
    return samples, fit, note


def _decay_doc(cfg: ExperimentConfig, samples, fit, note) -> dict:
    return {
        "samples": [s.to_dict() for s in samples],
        "fit": fit.to_dict() if fit is not None else None,
        "fit_note": note,
        "provenance": _provenance(cfg),
    }


def cmd_decay(cfg: ExperimentConfig, args) -> int:
    _, status = _validation_gate(cfg)
    if status:
        return status
    out = _ensure_outdir(cfg)
    samples, fit, note = _run_decay(cfg)
    if "csv" in cfg.output.formats:
        rows = [(s.tau, s.value.real, s.value.imag, abs(s.value), s.error)
                for s in samples]
        _write_csv(os.path.join(out, "decay.csv"),
                   ("tau", "re", "im", "abs", "err"), rows)
    if "json" in cfg.output.formats:
        _write_text(os.path.join(out, "decay.json"),
                    dumps(_decay_doc(cfg, samples, fit, note)))
    if fit is not None:
        print(f"decay fit: beta = {fit.exponent:.6g}, d = {fit.log_power}, "
              f"residual = {fit.residual:.3g}")
    else:
        print(f"decay fit unavailable: {note}")
    return 0


def cmd_vdcbound(cfg: ExperimentConfig, args) -> int:
    if cfg.vdc is None:
        raise ConfigError("vdcbound requires a [vdc] table")
    try:
        phase = PhaseSpec(cfg.vdc.phase_exponents, cfg.vdc.phase_coefficients)
        amplitude = AmplitudeSpec(b=cfg.vdc.amplitude_b)
    except ValueError as exc:
        raise ConfigError(f"vdc: {exc}") from None
    bound = bound_oscillatory_integral(phase, amplitude, cfg.vdc.delta)
    out = _ensure_outdir(cfg)
    doc = {
        "phase": phase.to_dict(),
        "amplitude": amplitude.to_dict(),
        "delta": cfg.vdc.delta,
        "total": bound.total,
        "pieces": [p.to_dict() for p in bound.pieces],
        "provenance": _provenance(cfg),
    }
    if "json" in cfg.output.formats:
        _write_text(os.path.join(out, "vdcbound.json"), dumps(doc))
    if "csv" in cfg.output.formats:
        rows = [(p.lo, p.hi, p.order, p.lower_bound, p.lemma, p.bound)
                for p in bound.pieces]
        _write_csv(os.path.join(out, "vdcbound.csv"),
                   ("lo", "hi", "order", "lower_bound", "lemma", "bound"),
                   rows)
    print(f"certified bound: total = {bound.total:.6g} "
          f"over {len(bound.pieces)} pieces")
    return 0


def _verdicts(cfg: ExperimentConfig, exponent_report, growth_fit,
              decay_fit) -> list:
    tol = cfg.tolerances.exponent
    s0 = float(exponent_report.s0)
    floor = min(s0, 1.0 / cfg.surface.n)
    out = []
    if growth_fit is None:
        out.append({"name": "fit_vs_formula",
                    "verdict": VERDICT_INDETERMINATE, "tolerance": tol})
    else:
        ok = abs(growth_fit.s - s0) <= tol and growth_fit.d == exponent_report.d0
        out.append({"name": "fit_vs_formula",
                    "verdict": VERDICT_CONSISTENT if ok
                    else VERDICT_INCONSISTENT,
                    "tolerance": tol, "fitted_s": growth_fit.s,
                    "fitted_d": growth_fit.d, "s0": s0,
                    "d0": exponent_report.d0})
    claim = exponent_report.sharpness_claim == SHARPNESS_BETA_AT_MOST_S0
    if not claim:
        out.append({"name": "decay_ceiling", "verdict": VERDICT_SKIPPED,
                    "tolerance": tol})
    elif decay_fit is None:
        out.append({"name": "decay_ceiling",
                    "verdict": VERDICT_INDETERMINATE, "tolerance": tol})
    else:
        ok = decay_fit.exponent <= s0 + tol
        out.append({"name": "decay_ceiling",
                    "verdict": VERDICT_CONSISTENT if ok
                    else VERDICT_INCONSISTENT,
                    "tolerance": tol, "fitted_beta": decay_fit.exponent,
                    "s0": s0})
    if decay_fit is None:
        out.append({"name": "decay_floor",
                    "verdict": VERDICT_INDETERMINATE, "tolerance": tol})
    else:
        ok = decay_fit.exponent >= floor - tol
        out.append({"name": "decay_floor",
                    "verdict": VERDICT_CONSISTENT if ok
                    else VERDICT_INCONSISTENT,
                    "tolerance": tol, "fitted_beta": decay_fit.exponent,
                    "floor": floor})
    return out


def cmd_report(cfg: ExperimentConfig, args) -> int:
    validation, status = _validation_gate(cfg)
    if status:
        return status
    out = _ensure_outdir(cfg)
    exponent_report = compute_s0_d0(cfg.surface, cfg.kernel)
    region = region_of_boundedness(exponent_report.s0, cfg.surface.n)
    curve, growth_fit, growth_note = _run_sublevel(cfg)
    samples, decay_fit, decay_note = _run_decay(cfg)
    verdicts = _verdicts(cfg, exponent_report, growth_fit, decay_fit)
    if "csv" in cfg.output.formats:
        _write_csv(os.path.join(out, "sublevel.csv"),
                   ("eps", "mu_hat", "stderr"), curve.entries)
        rows = [(s.tau, s.value.real, s.value.imag, abs(s.value), s.error)
                for s in samples]
        _write_csv(os.path.join(out, "decay.csv"),
                   ("tau", "re", "im", "abs", "err"), rows)
    provenance = _provenance(cfg)
    provenance["generated_at"] = datetime.datetime.now(
        datetime.timezone.utc).isoformat()
    doc = {
        "validation": _validation_to_dict(validation),
        "exponents": exponent_report.to_dict(),
        "region": region.to_dict(),
        "sublevel": {
            "curve": [{"eps": e, "mu_hat": v, "stderr": s}
                      for e, v, s in curve.entries],
            "fit": growth_fit.to_dict() if growth_fit else None,
            "fit_note": growth_note,
        },
        "decay": {
            "samples": [s.to_dict() for s in samples],
            "fit": decay_fit.to_dict() if decay_fit else None,
            "fit_note": decay_note,
        },
        "verdicts": verdicts,
        "provenance": provenance,
    }
    _write_text(os.path.join(out, "report.json"), dumps(doc))
    for v in verdicts:
        print(f"{v['name']}: {v['verdict']} (tolerance {v['tolerance']:g})")
    return 0


_DISPATCH = {
    "validate": cmd_validate,
    "exponents": cmd_exponents,
    "region": cmd_region,
    "sublevel": cmd_sublevel,
    "decay": cmd_decay,
    "vdcbound": cmd_vdcbound,
    "report": cmd_report,
}

_COMMAND_HELP = {
    "validate": "check the surface nesting hypotheses",
    "exponents": "print exact s0, d0 and the boundedness region",
    "region": "print the boundedness region",
    "sublevel": "run the sublevel-measure experiment and growth fit",
    "decay": "run the oscillatory-decay experiment and envelope fit",
    "vdcbound": "assemble a certified Van der Corput bound",
    "report": "run the full pipeline and write report.json",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smoothing-lab",
        description="Numerical laboratory for smoothing exponents of "
                    "weighted averaging operators")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in _COMMAND_HELP.items():
        cmd = sub.add_parser(name, help=text)
        cmd.add_argument("--config", required=True,
                         help="TOML experiment configuration")
        cmd.add_argument("--out", help="override output.directory")
        cmd.add_argument("--format", choices=("json", "csv"),
                         help="select a single output format")
        cmd.add_argument("--seed", type=int, help="override sampler.seed")
        cmd.add_argument("--samples", type=int,
                         help="override sampler.budget")
        cmd.add_argument("--tau-max-exp", type=int, dest="tau_max_exp",
                         help="override tau_blocks.max_exponent")
        cmd.add_argument("--tolerance", type=float,
                         help="override tolerances.exponent")
    return parser


def _apply_overrides(cfg: ExperimentConfig, args) -> ExperimentConfig:
    if args.out is not None:
        cfg = replace(cfg, output=replace(cfg.output, directory=args.out))
    if args.format is not None:
        cfg = replace(cfg, output=replace(cfg.output, formats=(args.format,)))
    if args.seed is not None:
        cfg = replace(cfg, sampler=replace(cfg.sampler, seed=args.seed))
    if args.samples is not None:
        cfg = replace(cfg, sampler=replace(cfg.sampler, budget=args.samples))
    if args.tau_max_exp is not None:
        cfg = replace(cfg, tau_blocks=replace(
            cfg.tau_blocks, max_exponent=args.tau_max_exp))
    if args.tolerance is not None:
        cfg = replace(cfg, tolerances=replace(
            cfg.tolerances, exponent=args.tolerance))
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        cfg = _apply_overrides(cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return 2
    try:
        return _DISPATCH[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        cap = exc.max_feasible_tau
        extra = f"; max feasible tau = {cap:g}" if cap is not None else ""
        print(f"budget exceeded: {exc}{extra}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
