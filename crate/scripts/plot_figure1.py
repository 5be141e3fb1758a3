#!/usr/bin/env python3
"""Render the sampled zero sets from `ncho region-scan --surfaces`.

Left panel: even_plus / even_minus. Right panel: odd_plus / odd_minus.
Axes are (b, a, c) at the fixed |xi| of the scan.

    python3 scripts/plot_figure1.py data/figure1_surfaces.csv figure1.png
"""

import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

COLORS = {"even_plus": "tab:red", "even_minus": "tab:blue", "odd_plus": "tab:orange", "odd_minus": "tab:green"}
LIMIT = 10.0


def load(path):
    pts = {m: ([], [], []) for m in COLORS}
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            b, a, c = (float(row[k]) for k in ("b", "a", "c"))
            if a > LIMIT or c > LIMIT:
                continue
            for axis, v in zip(pts[row["manifold"]], (b, a, c)):
                axis.append(v)
    return pts


def main():
    src = sys.argv[1] if len(sys.argv) > 1 else "data/figure1_surfaces.csv"
    out = sys.argv[2] if len(sys.argv) > 2 else "figure1.png"
    pts = load(src)
    fig = plt.figure(figsize=(12, 5.5))
    for i, (title, names) in enumerate([("even", ("even_plus", "even_minus")), ("odd", ("odd_plus", "odd_minus"))]):
        ax = fig.add_subplot(1, 2, i + 1, projection="3d")
        for m in names:
            b, a, c = pts[m]
            ax.scatter(b, a, c, s=1, c=COLORS[m], label=m, depthshade=False)
        ax.set_xlabel("b")
        ax.set_ylabel("a")
        ax.set_zlabel("c")
        ax.set_ylim(0, LIMIT)
        ax.set_zlim(0, LIMIT)
        ax.set_title(title)
        ax.legend(markerscale=8)
    fig.tight_layout()
    fig.savefig(out, dpi=150)


if __name__ == "__main__":
    main()
