"""CDF figure: one curve per deployment option plus the outage guide line.

The plotted points are exactly the empirical CDF points of the filtered
samples, (x_(i), i/N) for i = 1..N with x sorted ascending; no smoothing
or interpolation is applied to the data.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

REQUIRED_COLUMNS = ("option", "se")


@dataclass
class PlotSpec:
    csv_path: str
    out_path: str
    options: tuple[int, ...] | None = None  # None -> every option in the CSV
    q: float = 0.05
    x_label: str = "Spectral efficiency [bits/s/Hz]"
    y_label: str = "CDF"
    title: str = ""
    extra_labels: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"q must be in (0, 1), got {self.q}")
        if not os.path.isfile(self.csv_path):
            raise FileNotFoundError(f"input CSV not found: {self.csv_path}")


def read_se_samples(csv_path: str) -> dict[int, np.ndarray]:
    """SE samples per option from a results CSV; errors on missing columns."""
    with open(csv_path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if missing:
            raise ValueError(f"{csv_path}: missing column(s) {missing}; header is {header}")
        samples: dict[int, list[float]] = {}
        for row in reader:
            samples.setdefault(int(row["option"]), []).append(float(row["se"]))
    return {opt: np.array(vals) for opt, vals in sorted(samples.items())}


def empirical_cdf_points(samples: np.ndarray) -> np.ndarray:
    """(N, 2) array of (sorted sample, (i+1)/N) pairs, ties kept."""
    x = np.sort(np.asarray(samples, dtype=float))
    if x.size == 0:
        raise ValueError("no samples to plot")
    return np.column_stack([x, np.arange(1, x.size + 1) / x.size])


def render_cdf(spec: PlotSpec):
    """Render the figure described by the spec and write it to
    spec.out_path (format chosen by the file extension). Returns the
    matplotlib Figure; each curve's plotted data are the untouched
    empirical CDF points of that option's samples."""
    by_option = read_se_samples(spec.csv_path)
    if not by_option:
        raise ValueError(f"{spec.csv_path}: no sample rows")
    wanted = spec.options if spec.options is not None else tuple(by_option)
    if not wanted:
        raise ValueError("empty option subset requested")
    unknown = [o for o in wanted if o not in by_option]
    if unknown:
        raise ValueError(
            f"option(s) {unknown} not in the CSV; available: {sorted(by_option)}"
        )

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for opt in wanted:
        pts = empirical_cdf_points(by_option[opt])
        label = spec.extra_labels.get(opt, f"Option {opt}")
        ax.plot(pts[:, 0], pts[:, 1], label=label, linewidth=1.6)
    ax.axhline(spec.q, color="0.3", linestyle="--", linewidth=1.0,
               label=f"{spec.q:g} outage level")
    ax.set_xlabel(spec.x_label)
    ax.set_ylabel(spec.y_label)
    if spec.title:
        ax.set_title(spec.title)
    ax.set_ylim(0.0, 1.0)
    ax.grid(True, alpha=0.4)
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(spec.out_path)
    return fig


def _parse_options(text: str) -> tuple[int, ...]:
    return tuple(int(s) for s in text.replace(",", " ").split())


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot_cdf",
        description="Plot per-option SE CDF curves from a results CSV",
    )
    parser.add_argument("--csv", required=True, help="results CSV path")
    parser.add_argument("--out", required=True, help="output image path (.png/.pdf/.svg)")
    parser.add_argument("--options", type=_parse_options, default=None,
                        help="comma-separated option subset, e.g. 1,3,5 (default: all)")
    parser.add_argument("--q", type=float, default=0.05, help="outage level line (default 0.05)")
    parser.add_argument("--title", default="", help="figure title")
    args = parser.parse_args(argv)
    try:
        spec = PlotSpec(
            csv_path=args.csv,
            out_path=args.out,
            options=args.options,
            q=args.q,
            title=args.title,
        )
        render_cdf(spec)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
