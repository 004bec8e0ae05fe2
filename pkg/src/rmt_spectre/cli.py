"""Command-line interface.

Subcommands::

    rmt-spectre analyze  <inputs...>  # fit, threshold, similarity report
    rmt-spectre simulate              # spiked-model Monte Carlo
    rmt-spectre lowrank  <input>      # rank-s factor export

Exit codes: 0 success, 1 usage error, 2 input error, 3 numerical failure.
The environment variable RMT_SPECTRE_SEED provides the simulate seed when
--seed is not given.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__
from .errors import InputError, NumericalError, SpectreError
from .matrices import RESHAPE_MODES, load_manifest, load_matrix, svd
from .simulate import SpikedSpec, mc_verify
from .spikes import analyze
from .tracy_widom import load_table

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; the contract reserves 2 for input errors
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_fit_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, default=0.2,
                   help="BEMA trim fraction in (0, 1/2) (default 0.2)")
    p.add_argument("--beta", type=float, default=0.1,
                   help="Tracy-Widom tail level for the threshold (default 0.1)")
    p.add_argument("--window-a", type=int, default=5, metavar="A",
                   help="Gaussian-broadening window half-width (default 5)")
    p.add_argument("--reshape-mode", choices=RESHAPE_MODES, default="out-by-rest",
                   help="how 4-D conv tensors become matrices (default out-by-rest)")
    p.add_argument("--tw-table", default=None, metavar="CSV",
                   help="override the embedded Tracy-Widom table "
                        "(CSV, one level,value per line)")


def build_parser() -> _Parser:
    parser = _Parser(prog="rmt-spectre",
                     description="Random-matrix-theory signal/noise separation "
                                 "for singular spectra of weight matrices.")
    parser.add_argument("--version", action="version",
                        version=f"rmt-spectre {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "analyze",
        help="fit the noise bulk, count spikes, and score the threshold",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=(
            "outputs in --out: report.json (schema rmt_spectre/schemas/"
            "report-v1.schema.json) and per-matrix CSVs:\n"
            "  <name>_histogram.csv  bin_left,bin_right,count\n"
            "  <name>_density.csv    x,<method>_density per fitted method\n"
            "  <name>_spikes.csv     method,rank,gamma,theta_hat,phi_hat,"
            "phi_closed_rescaled\n"
            "  <name>_sweep.csv      method,s,gamma_plus,ave_w (with --sweep)\n"
            "plus <name>_spectrum.png / <name>_sweep.png unless --no-plots."))
    p.add_argument("inputs", nargs="+",
                   help="NPY/CSV matrix files or a single manifest JSON")
    p.add_argument("--method", choices=["both", "bema", "gb"], default="both")
    _add_fit_flags(p)
    p.add_argument("--sweep", type=float, default=None, metavar="FRAC",
                   help="also compute the similarity for retained counts up to "
                        "FRAC of the spectrum (e.g. 0.2)")
    p.add_argument("--out", default="spectre-report", metavar="DIR")
    p.add_argument("--jobs", type=int, default=1,
                   help="matrices analyzed concurrently (default 1)")
    p.add_argument("--no-plots", action="store_true",
                   help="skip PNG rendering, keep JSON/CSV only")

    p = sub.add_parser(
        "simulate",
        help="spiked-model Monte Carlo against the limit theory",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=(
            "outputs in --out: simulation.json (full record) and\n"
            "  simulation.csv  theta,above_threshold,mean_gamma,std_gamma,"
            "mean_overlap,std_overlap,rho_theory,phi_theory,dev_gamma,"
            "dev_overlap\n"
            "  trials.csv      trial,seed,gamma1"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--thetas", default="",
                   help="comma-separated planted strengths; empty for pure noise")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=None,
                   help="RNG seed (falls back to RMT_SPECTRE_SEED, then 0)")
    p.add_argument("--noise", choices=["gaussian", "uniform"], default="gaussian")
    p.add_argument("--out", default="spectre-sim", metavar="DIR")

    p = sub.add_parser("lowrank", help="export rank-s factors of a matrix")
    p.add_argument("input", help="NPY/CSV matrix file")
    p.add_argument("--layer", default=None,
                   help="manifest entry name when input is a manifest")
    p.add_argument("--rank", default="auto",
                   help="integer rank, or 'auto' to use the fitted spike count")
    p.add_argument("--method", choices=["bema", "gb"], default="bema",
                   help="fit used when --rank auto (default bema)")
    _add_fit_flags(p)
    p.add_argument("--out", default="spectre-lowrank", metavar="DIR")
    return parser


def _parse_thetas(text: str) -> tuple[float, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        values = tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise InputError(f"could not parse --thetas {text!r}: {exc}") from exc
    return tuple(sorted(values, reverse=True))


def _resolve_inputs(inputs: list[str]) -> list[tuple[str, Path, str | None]]:
    """Expand CLI inputs to (name, path, layer) work items, deduplicating
    display names so per-matrix output files cannot collide."""
    if len(inputs) == 1 and inputs[0].endswith(".json"):
        manifest_path = Path(inputs[0])
        _, entries = load_manifest(manifest_path)
        items = [(e["name"], manifest_path, e["name"]) for e in entries]
    else:
        items = [(Path(p).stem, Path(p), None) for p in inputs]
    seen: dict[str, int] = {}
    resolved = []
    for name, path, layer in items:
        seen[name] = seen.get(name, 0) + 1
        if seen[name] > 1:
            name = f"{name}_{seen[name]}"
        resolved.append((name, path, layer))
    return resolved


def cmd_analyze(args) -> int:
    from . import figures, report

    methods = ["bema", "gb"] if args.method == "both" else [args.method]
    tw_table = load_table(args.tw_table) if args.tw_table else None
    out_dir = Path(args.out)

    try:
        items = _resolve_inputs(args.inputs)
    except SpectreError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    def run_one(item):
        name, path, layer = item
        spectrum = svd(load_matrix(path, layer=layer,
                                   reshape_mode=args.reshape_mode))
        reports = {m: analyze(spectrum, m, alpha=args.alpha, beta=args.beta,
                              window_a=args.window_a, tw_table=tw_table)
                   for m in methods}
        return report.matrix_entry(name, spectrum, reports, args.sweep)

    entries = [None] * len(items)
    failures: list[Exception] = []
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        futures = {pool.submit(run_one, item): i for i, item in enumerate(items)}
        for fut, i in futures.items():
            name, path, _ = items[i]
            try:
                entries[i] = fut.result()
            except SpectreError as exc:
                print(f"error [{name}]: {exc}", file=sys.stderr)
                failures.append(exc)
                entries[i] = report.error_entry(name, str(path), exc)

    config = {"alpha": args.alpha, "beta": args.beta, "window_a": args.window_a,
              "reshape_mode": args.reshape_mode, "tw_order": 1,
              "tw_table": args.tw_table, "methods": methods,
              "sweep": args.sweep}
    payload = report.analysis_report(entries, config)
    report.validate_report(payload)
    report.dump_json(payload, out_dir / "report.json")
    for entry in entries:
        if entry["status"] == "ok":
            report.write_matrix_csvs(entry, out_dir)
            if not args.no_plots:
                figures.render_entry(entry, out_dir)

    ok = sum(1 for e in entries if e["status"] == "ok")
    print(f"analyzed {ok}/{len(entries)} matrices -> {out_dir / 'report.json'}")
    for entry in entries:
        for method in entry["methods"]:
            res = entry["methods"][method]
            ave = res["ave_w"]
            print(f"  {entry['name']} [{method}] sigma_hat="
                  f"{res['fit']['sigma_hat']:.6g} s_hat={res['threshold']['s_hat']} "
                  f"ave_w={'n/a (no spikes)' if ave is None else f'{ave:.4f}'}")
    if failures:
        return (EXIT_NUMERICAL if any(isinstance(e, NumericalError)
                                      for e in failures) else EXIT_INPUT)
    return EXIT_OK


def cmd_simulate(args) -> int:
    from . import report

    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("RMT_SPECTRE_SEED", "0"))
    spec = SpikedSpec(n=args.n, m=args.m, sigma=args.sigma,
                      thetas=_parse_thetas(args.thetas), seed=seed,
                      noise=args.noise)
    result = mc_verify(spec, args.trials)

    out_dir = Path(args.out)
    report.dump_json(report.simulation_payload(result),
                     out_dir / "simulation.json")
    report.write_simulation_csv(result, out_dir / "simulation.csv")
    report.write_trials_csv(result, out_dir / "trials.csv")

    print(f"simulated {args.trials} trials of {args.n}x{args.m} "
          f"(sigma={args.sigma}, seed={seed}) -> {out_dir}")
    for row in result.rows:
        print(f"  theta={row.theta:g}: mean gamma={row.mean_gamma:.4f} "
              f"(theory {row.rho_theory:.4f}), mean overlap={row.mean_overlap:.4f} "
              f"(theory {row.phi_theory:.4f})")
    if not result.rows:
        import numpy as np
        print(f"  pure noise: mean gamma1={np.mean(result.gamma1):.4f}")
    return EXIT_OK


def cmd_lowrank(args) -> int:
    from .lowrank import export_factors, param_savings, truncate

    spectrum = svd(load_matrix(args.input, layer=args.layer,
                               reshape_mode=args.reshape_mode))
    if args.rank == "auto":
        tw_table = load_table(args.tw_table) if args.tw_table else None
        rep = analyze(spectrum, args.method, alpha=args.alpha, beta=args.beta,
                      window_a=args.window_a, tw_table=tw_table)
        s = rep.threshold.s_hat
        if s == 0:
            raise InputError(
                "automatic rank selection found no singular values above the "
                f"{args.method} threshold (gamma_plus="
                f"{rep.threshold.gamma_plus:.6g}); pass --rank explicitly "
                "if you want a fixed-rank truncation")
        print(f"auto rank from {args.method} fit: s={s}")
    else:
        try:
            s = int(args.rank)
        except ValueError:
            raise InputError(f"--rank must be an integer or 'auto', got {args.rank!r}")
        if s <= 0:
            raise InputError(f"--rank must be a positive integer, got {s}; "
                             "a rank-0 truncation would discard the entire matrix")
        if s > spectrum.m:
            raise InputError(f"--rank {s} exceeds the number of singular values "
                             f"{spectrum.m}")

    factors = truncate(spectrum, s)
    stem = Path(args.input).stem if args.layer is None else args.layer
    sidecar = export_factors(factors, args.out, stem,
                             source_path=spectrum.source.path,
                             extra={"rank_selection": args.rank})
    savings = param_savings(spectrum.n, spectrum.m, s)
    print(f"wrote rank-{s} factors to {args.out} "
          f"(recon error {factors.recon_error:.6g})")
    print(f"parameters: original {savings.original}, factored {savings.factored} "
          f"-> {'saves' if savings.saves else 'does not save'}")
    return EXIT_OK if sidecar else EXIT_NUMERICAL


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"analyze": cmd_analyze, "simulate": cmd_simulate,
                "lowrank": cmd_lowrank}
    try:
        return handlers[args.command](args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
