"""Report assembly, JSON/CSV serialization, and schema validation.

A report is reproducible by construction: every hyperparameter, seed,
and provenance detail needed to regenerate each number is embedded next
to it. Serialization is deterministic (sorted keys, repr floats) so
re-running a command byte-identically reproduces its outputs.
"""

from __future__ import annotations

import csv
import importlib.resources
import json
import math
import re
from dataclasses import asdict
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .errors import InputError, NumericalError
from .fit import MpFit
from .marchenko_pastur import mp_density
from .matrices import SingularSpectrum
from .simulate import McResult
from .spikes import SimilarityReport, phi, theta_hat

SCHEMA_VERSION = 1


def _schema() -> dict:
    ref = importlib.resources.files("rmt_spectre") / "schemas" / "report-v1.schema.json"
    return json.loads(ref.read_text())


def validate_report(payload: dict) -> None:
    """Raise InputError if the payload violates the shipped report schema."""
    try:
        jsonschema.validate(payload, _schema())
    except jsonschema.ValidationError as exc:
        raise InputError(f"report does not match schema v{SCHEMA_VERSION}: "
                         f"{exc.message}") from exc


def sanitize_name(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", name).strip("_") or "matrix"


def histogram_data(gamma: np.ndarray) -> dict:
    bins = max(10, int(round(math.sqrt(gamma.size))))
    counts, edges = np.histogram(gamma, bins=bins)
    return {"bin_edges": edges.tolist(), "counts": counts.tolist()}


def density_curves(gamma: np.ndarray, fits: dict[str, MpFit],
                   points: int = 512) -> dict:
    upper = float(gamma[0])
    for fit in fits.values():
        upper = max(upper, fit.params.x_max)
    x = np.linspace(0.0, 1.05 * upper, points)
    curves = {name: mp_density(x, fit.params).tolist() for name, fit in fits.items()}
    return {"x": x.tolist(), "per_method": curves}


def sweep_metric(gamma: np.ndarray, q: float, sigma_hat: float,
                 k: int) -> list[dict]:
    """Weighted similarity as a function of the retained count s = 1..k.

    Each sweep point uses the next singular value gamma_{s+1} as its
    effective cutoff (so the strict spike count at that cutoff is exactly
    s) and extends phi by its sub-threshold limit 0 for values inside the
    bulk edge.
    """
    m = gamma.size
    k = int(min(k, m - 1))
    edge = sigma_hat * (1.0 + math.sqrt(q))
    phis = np.empty(k)
    for i in range(k):
        g_i = float(gamma[i])
        phis[i] = (phi(theta_hat(g_i, q, sigma_hat), q, sigma_hat)
                   if g_i > edge else 0.0)
    out = []
    for s in range(1, k + 1):
        cutoff = float(gamma[s])
        weights = gamma[:s] - cutoff
        total = float(np.sum(weights))
        value = float(np.sum(phis[:s] * weights) / total) if total > 0 else None
        out.append({"s": s, "gamma_plus": cutoff, "ave_w": value})
    return out


def fit_payload(fit: MpFit) -> dict:
    return {
        "sigma_hat": fit.sigma_hat,
        "q": fit.q,
        "method": fit.method,
        "alpha": fit.alpha,
        "beta": fit.beta,
        "window_a": fit.window_a,
        "diagnostics": fit.diagnostics,
    }


def similarity_payload(rep: SimilarityReport) -> dict:
    thr = rep.threshold
    return {
        "fit": fit_payload(rep.fit),
        "threshold": {
            "gamma_plus_sq": thr.gamma_plus_sq,
            "gamma_plus": thr.gamma_plus,
            "t": thr.t,
            "s_hat": thr.s_hat,
            "sigma_hat": thr.sigma_hat,
            "q": thr.q,
            "n": thr.n,
            "beta": thr.beta,
        },
        "spikes": [asdict(sp) for sp in rep.spikes],
        "ave_w": rep.ave_w,
        "warnings": list(rep.warnings),
    }


def matrix_entry(name: str, spectrum: SingularSpectrum,
                 reports: dict[str, SimilarityReport],
                 sweep_fraction: float | None) -> dict:
    gamma = spectrum.gamma
    entry: dict = {
        "name": name,
        "status": "ok",
        "error": None,
        "source": {
            "path": spectrum.source.path,
            "layer": spectrum.source.layer,
            "reshape_mode": spectrum.source.reshape_mode,
            "original_shape": (list(spectrum.source.original_shape)
                               if spectrum.source.original_shape else None),
            "transposed": spectrum.source.transposed,
        },
        "n": spectrum.n,
        "m": spectrum.m,
        "q": spectrum.q,
        "methods": {},
        "histogram": histogram_data(gamma),
        "density_curves": density_curves(
            gamma, {name: rep.fit for name, rep in reports.items()}),
    }
    for method, rep in reports.items():
        payload = similarity_payload(rep)
        if sweep_fraction is not None:
            k = max(1, int(math.floor(sweep_fraction * spectrum.m)))
            payload["sweep"] = sweep_metric(gamma, spectrum.q,
                                            rep.fit.sigma_hat, k)
        else:
            payload["sweep"] = None
        entry["methods"][method] = payload
    return entry


def error_entry(name: str, path: str, exc: Exception) -> dict:
    kind = ("input" if isinstance(exc, InputError)
            else "numerical" if isinstance(exc, NumericalError) else "other")
    return {"name": name, "status": "error",
            "error": f"{kind}: {exc}", "source": {"path": path},
            "n": None, "m": None, "q": None, "methods": {},
            "histogram": None, "density_curves": None}


def analysis_report(entries: list[dict], config: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "rmt-spectre", "version": __version__},
        "config": config,
        "matrices": entries,
    }


def dump_json(payload: dict, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True,
                               allow_nan=False) + "\n")


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_matrix_csvs(entry: dict, out_dir: Path) -> list[Path]:
    """Histogram, density, spike, and sweep tables for one report entry."""
    stem = sanitize_name(entry["name"])
    written = []

    hist = entry["histogram"]
    path = out_dir / f"{stem}_histogram.csv"
    rows = [[_fmt(hist["bin_edges"][i]), _fmt(hist["bin_edges"][i + 1]), c]
            for i, c in enumerate(hist["counts"])]
    _write_csv(path, ["bin_left", "bin_right", "count"], rows)
    written.append(path)

    curves = entry["density_curves"]
    methods = sorted(curves["per_method"])
    path = out_dir / f"{stem}_density.csv"
    rows = [[_fmt(x)] + [_fmt(curves["per_method"][m][i]) for m in methods]
            for i, x in enumerate(curves["x"])]
    _write_csv(path, ["x"] + [f"{m}_density" for m in methods], rows)
    written.append(path)

    path = out_dir / f"{stem}_spikes.csv"
    rows = []
    for method in sorted(entry["methods"]):
        for sp in entry["methods"][method]["spikes"]:
            rows.append([method, sp["index"], _fmt(sp["gamma"]),
                         _fmt(sp["theta_hat"]), _fmt(sp["phi_hat"]),
                         _fmt(sp["phi_closed_rescaled"])])
    _write_csv(path, ["method", "rank", "gamma", "theta_hat", "phi_hat",
                      "phi_closed_rescaled"], rows)
    written.append(path)

    if any(entry["methods"][m].get("sweep") for m in entry["methods"]):
        path = out_dir / f"{stem}_sweep.csv"
        rows = []
        for method in sorted(entry["methods"]):
            for pt in entry["methods"][method]["sweep"] or []:
                rows.append([method, pt["s"], _fmt(pt["gamma_plus"]),
                             _fmt(pt["ave_w"])])
        _write_csv(path, ["method", "s", "gamma_plus", "ave_w"], rows)
        written.append(path)
    return written


def simulation_payload(result: McResult) -> dict:
    spec = result.spec
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "rmt-spectre", "version": __version__},
        "spec": {"n": spec.n, "m": spec.m, "sigma": spec.sigma,
                 "thetas": list(spec.thetas), "seed": spec.seed,
                 "noise": spec.noise, "q": spec.q},
        "trials": result.trials,
        "trial_seeds": list(result.trial_seeds),
        "gamma1_per_trial": list(result.gamma1),
        "comparison": [asdict(row) for row in result.rows],
    }


def write_simulation_csv(result: McResult, path: Path) -> None:
    header = ["theta", "above_threshold", "mean_gamma", "std_gamma",
              "mean_overlap", "std_overlap", "rho_theory", "phi_theory",
              "dev_gamma", "dev_overlap"]
    rows = [[_fmt(row.theta), int(row.above_threshold), _fmt(row.mean_gamma),
             _fmt(row.std_gamma), _fmt(row.mean_overlap), _fmt(row.std_overlap),
             _fmt(row.rho_theory), _fmt(row.phi_theory), _fmt(row.dev_gamma),
             _fmt(row.dev_overlap)] for row in result.rows]
    _write_csv(path, header, rows)


def write_trials_csv(result: McResult, path: Path) -> None:
    header = ["trial", "seed", "gamma1"]
    rows = [[i, s, _fmt(g)] for i, (s, g) in
            enumerate(zip(result.trial_seeds, result.gamma1))]
    _write_csv(path, header, rows)
