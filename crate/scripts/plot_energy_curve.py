"""Plot `calx energy-curve` output.

    calx energy-curve --n 2 --beta 1 --gamma 0.34 --out curve.csv
    python scripts/plot_energy_curve.py curve.csv curve.png
"""
import json
import sys
from pathlib import Path

import matplotlib.pyplot as plt
import pandas as pd


def main(csv_path, png_path):
    curve = pd.read_csv(csv_path)
    sidecar = Path(csv_path).with_suffix(".critical.json")
    roots = json.loads(sidecar.read_text())["critical_radii"] if sidecar.exists() else []

    fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(6, 5))
    top.plot(curve["R"], curve["E"])
    top.set_ylabel("E(R)")
    bottom.plot(curve["R"], curve["dE_dR"])
    bottom.axhline(0.0, color="grey", lw=0.5)
    bottom.set_ylabel("E'(R)")
    bottom.set_xlabel("R")
    for r in roots:
        for ax in (top, bottom):
            ax.axvline(r, color="tab:red", ls="--", lw=0.8)
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)


if __name__ == "__main__":
    main(*sys.argv[1:3])
