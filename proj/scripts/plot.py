"""Plot the CSV outputs of fig1.sh / fig2.sh.

usage: python3 scripts/plot.py results/256 [results/512 ...]
"""

import csv
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

LABELS = {"truth": "ground truth", "modified_ramp": "modified ramp", "ramlak": "Ram-Lak", "learned": "learned"}


def read_columns(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return {key: [float(r[key]) for r in rows] for key in rows[0]}


def fig1(out):
    fig, axes = plt.subplots(1, 2, figsize=(11, 4))
    for ax, phantom in zip(axes, ("disc", "ellipses")):
        for name, label in LABELS.items():
            path = out / f"fig1_{phantom}_{name}.csv"
            if path.exists():
                c = read_columns(path)
                ax.plot(c["x"], c["value"], label=label, lw=1)
        ax.set_title(f"{phantom}, center row")
        ax.set_xlabel("x")
        ax.legend()
    fig.tight_layout()
    fig.savefig(out / "fig1.png", dpi=120)


def fig2(out):
    c = read_columns(out / "fig2_learned_vs_ramlak.csv")
    n = len(c["k"])
    half = n // 2 + 1
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(c["frequency"][:half], c["compare"][:half], label="Ram-Lak", lw=1)
    ax.plot(c["frequency"][:half], c["coefficient"][:half], label="learned", lw=1)
    init = out / "fig2_init_vs_ramlak.csv"
    if init.exists():
        ci = read_columns(init)
        ax.plot(ci["frequency"][:half], ci["coefficient"][:half], label="initial (modified ramp)", lw=1, ls="--")
    ax.set_xlabel("frequency")
    ax.set_ylabel("coefficient")
    ax.legend()
    inset = ax.inset_axes([0.55, 0.1, 0.4, 0.35])
    lo = max(4, n // 64)
    inset.plot(c["k"][:lo], c["compare"][:lo], marker=".")
    inset.plot(c["k"][:lo], c["coefficient"][:lo], marker=".")
    inset.set_title("low bins", fontsize=8)
    fig.tight_layout()
    fig.savefig(out / "fig2.png", dpi=120)


for arg in sys.argv[1:]:
    out = Path(arg)
    fig1(out)
    fig2(out)
    print(f"wrote {out / 'fig1.png'} and {out / 'fig2.png'}")
