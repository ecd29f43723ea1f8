"""Plot `calx phase-diagram` output.

    calx phase-diagram --n 2 --out phase.csv
    python scripts/plot_phase_diagram.py phase.csv phase.png
"""
import sys

import matplotlib.pyplot as plt
import pandas as pd

COLOURS = {
    "indicator-by-beta-le-gamma": "tab:blue",
    "indicator-by-monotonicity": "tab:cyan",
    "harmonic-certified": "tab:red",
    "undetermined": "lightgrey",
}


def main(csv_path, png_path):
    cells = pd.read_csv(csv_path)
    fig, ax = plt.subplots(figsize=(5, 5))
    for regime, group in cells.groupby("regime"):
        ax.scatter(group["beta"], group["gamma"], s=12, marker="s", c=COLOURS[regime], label=regime)
    ax.set_xlabel("beta")
    ax.set_ylabel("gamma")
    ax.legend(fontsize=7, loc="upper left")
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)


if __name__ == "__main__":
    main(*sys.argv[1:3])
