"""Render the CSV sets written by `cavscat figure <id>` with matplotlib.

Usage: python tools/plot_figures.py <dir-with-figure-csvs> [out.png]
"""

import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def load(path):
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def main(src, dest):
    src = Path(src)
    fig, ax = plt.subplots(figsize=(7, 4))
    if (src / "fig2_coefficients.csv").exists():
        d = load(src / "fig2_coefficients.csv")
        edge = load(src / "fig2_forbidden.csv")[0, 1]
        for col, label in [(2, "m=0"), (4, "m=200")]:
            ax.plot(d[:, 0], d[:, col], label=label)
        ax.axvspan(0, edge, color="0.85")
        ax.set_ylabel("|B^b_m|^2")
    elif (src / "fig3_differential.csv").exists():
        d = load(src / "fig3_differential.csv")
        o = load(src / "fig3_overlay.csv")
        ax.plot(d[:, 0], d[:, 2], label="exact")
        ax.plot(o[:, 0], o[:, 1], ".", ms=2, label="stationary phase")
        ax.set_xlim(-0.05, 0.05)
    elif (src / "fig4_totals.csv").exists():
        d = load(src / "fig4_totals.csv")
        b = load(src / "fig4_overlay_b.csv")
        a = load(src / "fig4_overlay_a.csv")
        ax.plot(d[:, 0], d[:, 1], "--", label="lambda_a")
        ax.plot(d[:, 0], d[:, 2], label="lambda_b")
        ax.plot(b[::20, 0], b[::20, 1], "o", ms=3)
        ax.plot(a[::20, 0], a[::20, 1], "o", mfc="none", ms=3)
    elif (src / "fig5_wavefunction.csv").exists():
        u = load(src / "fig5_wavefunction.csv")
        v = load(src / "fig5_potential.csv")
        ax.plot(v[:, 0], v[:, 1], "k")
        ax.axhline(v[0, 2], ls="--")
        ax.fill_between(u[:, 0], 0, u[:, 1] ** 2 * 0.5, alpha=0.4)
        ax.set_ylim(-1.2, 0.6)
    elif (src / "fig6_total_b.csv").exists():
        d = load(src / "fig6_total_b.csv")
        ax.plot(d[:, 0], d[:, 1])
        for line in (src / "fig6_labels.csv").read_text().splitlines()[1:]:
            x, y, m, _ = line.split(",")
            if m:
                ax.annotate(m, (float(x), float(y)), fontsize=7)
    elif (src / "fig7_total_b.csv").exists():
        d = load(src / "fig7_total_b.csv")
        ax.plot(d[:, 0], d[:, 1])
    else:
        sys.exit(f"no figure CSVs in {src}")
    ax.legend(loc="best", fontsize=8) if ax.get_legend_handles_labels()[0] else None
    fig.tight_layout()
    fig.savefig(dest, dpi=150)


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2] if len(sys.argv) > 2 else "figure.png")
