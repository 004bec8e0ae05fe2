"""Matplotlib rendering of report data to PNG files.

Figures are a convenience view over the delimited outputs: the spectrum
plot shows the singular-value histogram against each fitted bulk density
with its detection cutoff, and the sweep plot shows the weighted
similarity as the retained count grows. All numeric content is also
available in the CSVs written next to these files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .report import sanitize_name  # noqa: E402

_METHOD_COLORS = {"bema": "tab:red", "gb": "tab:blue"}
_DPI = 150


def _color(method: str) -> str:
    return _METHOD_COLORS.get(method, "tab:green")


def spectrum_figure(entry: dict, out_dir: Path) -> Path:
    """Histogram + fitted MP densities + threshold lines for one matrix."""
    hist = entry["histogram"]
    curves = entry["density_curves"]
    edges = hist["bin_edges"]
    counts = hist["counts"]
    total = sum(counts)

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    widths = [edges[i + 1] - edges[i] for i in range(len(counts))]
    heights = [c / (total * w) if total and w else 0.0
               for c, w in zip(counts, widths)]
    ax.bar(edges[:-1], heights, width=widths, align="edge",
           color="0.8", edgecolor="0.5", linewidth=0.4, label="singular values")

    for method in sorted(curves["per_method"]):
        res = entry["methods"][method]
        sigma = res["fit"]["sigma_hat"]
        ax.plot(curves["x"], curves["per_method"][method], color=_color(method),
                lw=1.6, label=f"{method} fit (sigma={sigma:.4g})")
        ax.axvline(res["threshold"]["gamma_plus"], color=_color(method),
                   ls="--", lw=1.2,
                   label=f"{method} cutoff (s={res['threshold']['s_hat']})")

    ax.set_xlabel("singular value")
    ax.set_ylabel("density")
    ax.set_title(f"{entry['name']}  ({entry['n']}x{entry['m']}, q={entry['q']:.3g})")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = out_dir / f"{sanitize_name(entry['name'])}_spectrum.png"
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def sweep_figure(entry: dict, out_dir: Path) -> Path | None:
    """Weighted similarity vs retained count, one line per method."""
    has_sweep = any(entry["methods"][m].get("sweep") for m in entry["methods"])
    if not has_sweep:
        return None
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for method in sorted(entry["methods"]):
        res = entry["methods"][method]
        sweep = res.get("sweep") or []
        xs = [pt["s"] for pt in sweep if pt["ave_w"] is not None]
        ys = [pt["ave_w"] for pt in sweep if pt["ave_w"] is not None]
        if not xs:
            continue
        ax.plot(xs, ys, marker="o", ms=2.5, lw=1.2, color=_color(method),
                label=f"{method}")
        ax.axvline(res["threshold"]["s_hat"], color=_color(method), ls="--",
                   lw=1.0, label=f"{method} s_hat={res['threshold']['s_hat']}")
    ax.set_xlabel("retained count s")
    ax.set_ylabel("weighted similarity")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title(f"{entry['name']}: similarity vs retained count")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = out_dir / f"{sanitize_name(entry['name'])}_sweep.png"
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def render_entry(entry: dict, out_dir: Path) -> list[Path]:
    if entry.get("status") != "ok":
        return []
    out_dir.mkdir(parents=True, exist_ok=True)
    written = [spectrum_figure(entry, out_dir)]
    sweep = sweep_figure(entry, out_dir)
    if sweep is not None:
        written.append(sweep)
    return written
