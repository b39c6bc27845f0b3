"""Command-line front end: ``ramanpump <command> config.json``."""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import analytic, spectra
from .config import SCHEMA_VERSION, ConfigError, config_from_dict, parse_config
from .core import DomainError, validate_params
from .ensemble import coherence_length, enhancement_factor, wavevector_mismatch
from .oracle.integrator import IntegratorError

COMMANDS = ("spectrum", "coherence", "chi3", "xsection", "enhance", "validate", "sweep")
EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN, EXIT_ORACLE = 0, 1, 2, 3
FLOAT_FMT = "%.12e"


class OracleFailure(Exception):
    """Oracle run failed or its comparison did not pass."""

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload


def jsonable(obj):
    """Convert results to plain JSON: complex -> {re, im}, non-finite floats -> strings."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": jsonable(float(obj.real)), "im": jsonable(float(obj.imag))}
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


def dump_json(path, obj):
    text = json.dumps(jsonable(obj), indent=2, sort_keys=True, allow_nan=False)
    path.write_text(text + "\n", encoding="utf-8")


def write_csv(path, header, rows):
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([FLOAT_FMT % v if isinstance(v, float) else v for v in row])


class Context:
    def __init__(self, cfg, out_dir, jobs, grid):
        self.cfg = cfg
        self.out = out_dir
        self.jobs = jobs
        self.grid = grid
        self.mol = cfg.molecule.build()
        self.drive = cfg.drive.build()
        self.env = cfg.environment.build()
        self.files = []

    def path(self, name):
        self.files.append(name)
        return self.out / name


def parse_grid(text):
    try:
        lo, hi, n = text.split(",")
        return spectra.FrequencyGrid(float(lo), float(hi), int(n))
    except ValueError as err:
        raise ConfigError("invalid", f"--grid expects MIN,MAX,POINTS: {err}", ["--grid"]) from None


def resolve_grid(ctx):
    if ctx.grid is not None:
        return ctx.grid
    g = ctx.cfg.output.grid
    if g is not None:
        return spectra.FrequencyGrid(g.omega_min_eV, g.omega_max_eV, g.n_points)
    return spectra.FrequencyGrid.around_probe(ctx.mol, ctx.drive)


def detuning_grid(ctx):
    scan = ctx.cfg.detuning_scan
    half = scan.half_span_eV if scan.half_span_eV is not None else 10.0 * ctx.mol.gamma_v
    return np.linspace(-half, half, scan.n_points)


def _at_detuning(ctx, delta):
    return replace(ctx.drive, omega_ir=0.5 * (ctx.mol.omega_v - delta))


def _require(ctx, section, command):
    if getattr(ctx.cfg, section) is None:
        raise ConfigError("invalid", f"command {command!r} needs a '{section}' section", [section])
    return getattr(ctx.cfg, section)


def coherence_summary(mol, drive, env):
    n_coh = analytic.coherent_quanta(mol, drive)
    n_incoh = env.n_bar(mol.omega_v)
    b = analytic.coherent_vibration_amplitude(mol, drive)
    return {
        "n_coh": n_coh,
        "n_coh_exact": analytic.coherent_quanta_exact(mol, drive),
        "n_incoh": n_incoh,
        "ratio": n_coh / n_incoh if n_incoh > 0 else math.inf,
        "b_coh": b.amplitude,
        "b_coh_abs": abs(b.amplitude),
        "b_coh_frequency_eV": b.frequency,
        "resonant": analytic.is_resonant(mol, drive),
    }


def cmd_spectrum(ctx):
    model = analytic.incoherent_spectrum(ctx.mol, ctx.drive, ctx.env)
    if ctx.drive.rabi_vis > 0 and ctx.drive.rabi_ir > 0:
        model = model + analytic.coherent_sideband_weights(ctx.mol, ctx.drive)
    grid = resolve_grid(ctx)
    sampled = spectra.sample(model, grid, render_delta_as=ctx.cfg.output.render_delta_width_eV)
    rows = [
        (float(w), float(v), label)
        for label, values in sampled.components.items()
        for w, v in zip(sampled.omega, values)
    ]
    write_csv(ctx.path("spectrum.csv"), ("omega_eV", "intensity_arb", "component"), rows)
    write_csv(ctx.path("spectrum.deltas.csv"), ("omega_eV", "weight_arb", "component"),
              [(float(c), float(w), label) for c, w, label in sampled.delta_markers])
    dump_json(ctx.path("spectrum.model.json"), model.as_dict())
    powers = {line.label: spectra.integrated_line_power(model, line.label)
              for line in (*model.delta_lines, *model.lorentz_lines)}
    result = {"grid": sampled.metadata, "line_power": powers,
              "omega_min_eV": float(sampled.omega[0]), "omega_max_eV": float(sampled.omega[-1])}
    if ctx.cfg.oracle.spectrum_enabled:
        from .oracle.correlation import emission_spectrum

        osp = emission_spectrum(ctx.mol, ctx.drive, ctx.env, ctx.cfg.oracle.build())
        ref = analytic.incoherent_spectrum(ctx.mol, ctx.drive, ctx.env, radiation_factor=False,
                                           n_bar=_oracle_n_bar(ctx))
        cmp_ = spectra.compare_spectra(ref, osp, grid)
        write_csv(ctx.path("spectrum.oracle.csv"), ("omega_eV", "intensity_arb", "component"), cmp_.rows())
        result["oracle"] = osp.as_dict()
    return result


def _oracle_n_bar(ctx):
    o = ctx.cfg.oracle
    return o.n_bar_override if o.n_bar_override is not None else ctx.env.n_bar(ctx.mol.omega_v)


def cmd_coherence(ctx):
    out = coherence_summary(ctx.mol, ctx.drive, ctx.env)
    out["force_components"] = [
        {"label": f.label, "frequency_eV": f.frequency, "weight": f.complex_weight}
        for f in analytic.effective_force_components(ctx.mol, ctx.drive)
    ]
    out["incoherent_antistokes_stokes_ratio"] = analytic.incoherent_stokes_antistokes_ratio(ctx.env, ctx.mol)
    return out


def cmd_chi3(ctx):
    ens = _require(ctx, "ensemble", "chi3")
    if ens.concentration_cm3 is None:
        raise ConfigError("invalid", "chi3 needs ensemble.concentration_cm3", ["ensemble.concentration_cm3"])
    rows = []
    for d in detuning_grid(ctx):
        values = analytic.chi3(ctx.mol, _at_detuning(ctx, d), ens.concentration_cm3)
        for branch in ("stokes", "antistokes"):
            v = values[branch]
            rows.append((float(d), branch, v.value.real, v.value.imag, abs(v.esu)))
    write_csv(ctx.path("chi3.csv"),
              ("detuning_eV", "branch", "re_nm3_per_eV", "im_nm3_per_eV", "abs_esu"), rows)
    here = analytic.chi3(ctx.mol, ctx.drive, ens.concentration_cm3)
    return {
        "detuning_eV": ctx.mol.omega_v - 2.0 * ctx.drive.omega_ir,
        "chi3_nm3_per_eV": {k: v.value for k, v in here.items()},
        "chi3_esu": {k: v.esu for k, v in here.items()},
        "resonant_to_nonresonant": analytic.resonant_to_nonresonant_ratio(ctx.mol, ctx.drive),
    }


def cmd_xsection(ctx):
    sigma = analytic.stokes_cross_section(ctx.mol, ctx.drive)
    sigma_q = spectra.stokes_cross_section_quadrature(ctx.mol, ctx.drive, n_bar=0.0)
    result = {
        "omega_stokes_eV": analytic.raman_stokes_frequency(ctx.mol, ctx.drive),
        "sigma_nm2": sigma,
        "sigma_quadrature_nm2": sigma_q,
        "relative_difference": abs(sigma_q - sigma) / sigma if sigma > 0 else 0.0,
    }
    ens = ctx.cfg.ensemble
    if ens is not None and ens.concentration_cm3 is not None:
        rows = []
        for d in detuning_grid(ctx):
            drive = _at_detuning(ctx, d)
            back = analytic.chi3_from_cross_section(ctx.mol, drive, ens.concentration_cm3, sigma).value
            res = analytic.chi3(ctx.mol, drive, ens.concentration_cm3, resonant_only=True)["stokes"].value
            rows.append((float(d), back.real, back.imag, res.real, res.imag))
        write_csv(ctx.path("xsection.csv"),
                  ("detuning_eV", "re_chi3_from_sigma", "im_chi3_from_sigma",
                   "re_chi3_resonant", "im_chi3_resonant"), rows)
    return result


def cmd_enhance(ctx):
    ens = _require(ctx, "ensemble", "enhance")
    ensemble = ens.build()
    dk = wavevector_mismatch(ens.dispersion(), ctx.drive)
    coh = coherence_summary(ctx.mol, ctx.drive, ctx.env)
    lc = coherence_length(abs(dk))
    return {
        "delta_k_per_nm": dk,
        "coherence_length_m": lc,
        "coherence_length_unbounded": math.isinf(lc),
        "n_molecules": ensemble.count,
        "n_coh": coh["n_coh"],
        "n_incoh": coh["n_incoh"],
        "enhancement_factor": enhancement_factor(ensemble, coh["n_coh"], coh["n_incoh"]),
    }


def cmd_validate(ctx):
    from .oracle.validation import compare_with_analytic

    o = ctx.cfg.oracle
    report = compare_with_analytic(ctx.mol, ctx.drive, ctx.env, o.build(), tolerance=o.tolerance,
                                   thresholds=ctx.cfg.thresholds.build())
    ctx.path("validate.table.txt").write_text(report.table() + "\n", encoding="utf-8")
    payload = report.as_dict()
    if not report.passed:
        raise OracleFailure("oracle comparison failed", payload)
    return payload


def sweep_point(task):
    echo, parameter, value, with_oracle = task
    cfg = config_from_dict(echo).with_value(parameter, value)
    mol, drive, env = cfg.molecule.build(), cfg.drive.build(), cfg.environment.build()
    coh = coherence_summary(mol, drive, env)
    rows = [(value, key, float(coh[key])) for key in ("n_coh", "n_coh_exact", "n_incoh", "ratio", "b_coh_abs")]
    diag = validate_params(mol, drive, env, cfg.thresholds.build())
    rows.append((value, "epsilon", float(diag.epsilon)))
    if with_oracle:
        from .oracle.simulate import simulate

        res = simulate(mol, drive, env, cfg.oracle.build())
        rows.append((value, "oracle_b_abs", abs(res.b_amplitude)))
        rows.append((value, "oracle_n_coh", abs(res.b_amplitude) ** 2))
    return rows


def sweep_values(sweep):
    if sweep.scale == "log":
        return np.geomspace(sweep.start, sweep.stop, sweep.n_points)
    return np.linspace(sweep.start, sweep.stop, sweep.n_points)


def cmd_sweep(ctx):
    sweep = _require(ctx, "sweep", "sweep")
    echo = ctx.cfg.echo()
    tasks = [(echo, sweep.parameter, float(v), sweep.oracle) for v in sweep_values(sweep)]
    if ctx.jobs > 1:
        with ProcessPoolExecutor(max_workers=ctx.jobs) as pool:
            chunks = list(pool.map(sweep_point, tasks))
    else:
        chunks = [sweep_point(t) for t in tasks]
    rows = [r for chunk in chunks for r in chunk]
    write_csv(ctx.path("sweep.csv"), (sweep.parameter, "quantity", "value"), rows)
    values = [t[2] for t in tasks]
    n_coh = [r[2] for r in rows if r[1] == "n_coh_exact"]
    result = {"parameter": sweep.parameter, "n_points": len(values), "scale": sweep.scale}
    if sweep.scale == "log" and all(v > 0 for v in n_coh):
        result["log_slope_n_coh"] = float(np.polyfit(np.log(values), np.log(n_coh), 1)[0])
    return result


HANDLERS = {
    "spectrum": cmd_spectrum,
    "coherence": cmd_coherence,
    "chi3": cmd_chi3,
    "xsection": cmd_xsection,
    "enhance": cmd_enhance,
    "validate": cmd_validate,
    "sweep": cmd_sweep,
}


def output_dir(arg, cfg):
    if arg:
        return Path(arg)
    if cfg.output.directory:
        return Path(cfg.output.directory)
    return Path(os.environ.get("RAMANPUMP_OUT", "ramanpump_out"))


def run(command, cfg, out_dir, *, jobs=1, grid=None):
    """Execute one command and write its report; returns the report dict."""
    out_dir.mkdir(parents=True, exist_ok=True)
    ctx = Context(cfg, out_dir, jobs, grid)
    diag = validate_params(ctx.mol, ctx.drive, ctx.env, cfg.thresholds.build())
    dump_json(ctx.path(f"{command}.config.json"), cfg.echo())
    t0 = time.perf_counter()
    status, result, error = "ok", None, None
    try:
        result = HANDLERS[command](ctx)
    except OracleFailure as err:
        status, result, error = "oracle_failure", err.payload, str(err)
    except IntegratorError as err:
        status, error = "oracle_failure", f"{err} (t = {err.last_time:.6g})"
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "status": status,
        "error": error,
        "config": cfg.echo(),
        "result": result,
        "diagnostics": diag.as_dict(),
        "files": list(ctx.files),
        "duration_s": time.perf_counter() - t0,
    }
    dump_json(out_dir / f"{command}.report.json", report)
    return report


def build_parser():
    p = argparse.ArgumentParser(prog="ramanpump",
                                description="IR-pumped coherent Raman scattering calculator.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("config", help="path to a JSON run configuration")
    p.add_argument("--out", help="output directory (default: config output.directory, "
                                 "then $RAMANPUMP_OUT, then ./ramanpump_out)")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for sweeps")
    p.add_argument("--grid", help="spectrum grid as MIN,MAX,POINTS in eV")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config)
        grid = parse_grid(args.grid) if args.grid else None
        if args.jobs < 1:
            raise ConfigError("invalid", "--jobs must be >= 1", ["--jobs"])
        report = run(args.command, cfg, output_dir(args.out, cfg), jobs=args.jobs, grid=grid)
    except ConfigError as err:
        print(f"config error [{err.category}]: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as err:
        print(f"domain error: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    if report["status"] != "ok":
        print(f"oracle failure: {report['error']}", file=sys.stderr)
        if report["result"] is not None and args.command == "validate":
            print((Path(output_dir(args.out, cfg)) / "validate.table.txt").read_text(), file=sys.stderr)
        return EXIT_ORACLE
    summary = {k: v for k, v in report["result"].items() if not isinstance(v, (dict, list))}
    print(json.dumps(jsonable(summary), sort_keys=True))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
