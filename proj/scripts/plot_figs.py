#!/usr/bin/env python3
"""Render figures from the CSV files the batch tool writes.

Reads whichever of the known CSV outputs exist in the data directory and
saves one PNG per plot. Missing inputs are skipped with a note, so the
script can be run after any subset of the subcommands.
"""

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd


def load(data_dir: Path, stem: str):
    path = data_dir / f"{stem}.csv"
    if not path.exists():
        print(f"skip: {path} not found")
        return None
    return pd.read_csv(path)


def save(fig, fig_dir: Path, name: str):
    fig_dir.mkdir(parents=True, exist_ok=True)
    out = fig_dir / f"{name}.png"
    fig.savefig(out, dpi=150, bbox_inches="tight")
    plt.close(fig)
    print(f"wrote {out}")


def plot_age_curve(df, fig_dir: Path, stem: str):
    feas = df[df["feasible"] == 1]
    if feas.empty:
        print(f"skip: {stem} has no feasible points")
        return
    best = feas.loc[feas["paoi"].idxmin()]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.semilogy(feas["t_upd"], feas["paoi"] * 1e3, lw=1.0, label="average peak age")
    ax.plot(best["t_upd"], best["paoi"] * 1e3, "v", color="crimson",
            label=f"optimum: {best['t_upd']:.4g} s, {best['paoi']*1e3:.3g} ms")
    ax.set_xlabel("update period $T_{upd}$ (s)")
    ax.set_ylabel("average peak age (ms)")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    ax.set_title("Average peak age vs. reconfiguration period")
    save(fig, fig_dir, stem)


def plot_steady_state(df, fig_dir: Path):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for col, label, style in [
        ("pi1", "reconfiguring", "-"),
        ("pi2", "inside footprint", "-"),
        ("pi3", "outside footprint", "-"),
        ("pi2_adj", "inside (adjusted)", "--"),
        ("pi3_adj", "outside (adjusted)", "--"),
    ]:
        ax.plot(df["t_upd"], df[col], style, lw=1.2, label=label)
    gap = df["pi2_adj"] - df["pi3_adj"]
    sign_change = np.where(np.diff(np.sign(gap)) < 0)[0]
    if sign_change.size:
        i = sign_change[0]
        t0, t1 = df["t_upd"].iloc[i], df["t_upd"].iloc[i + 1]
        g0, g1 = gap.iloc[i], gap.iloc[i + 1]
        cross = t0 + (t1 - t0) * g0 / (g0 - g1)
        ax.axvline(cross, color="gray", ls=":", lw=1)
        ax.annotate(f"crossover {cross:.2f} s", (cross, 0.5),
                    textcoords="offset points", xytext=(6, 0))
    ax.set_xlabel("update period $T_{upd}$ (s)")
    ax.set_ylabel("state share")
    ax.set_ylim(0, 1)
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    ax.set_title("Regenerative state shares vs. update period")
    save(fig, fig_dir, "steady_state")


def plot_snr_map(df, fig_dir: Path):
    xs = np.sort(df["x"].unique())
    ys = np.sort(df["y"].unique())
    grid = df.pivot(index="y", columns="x", values="snr").to_numpy()
    fig, ax = plt.subplots(figsize=(5.6, 4.8))
    mesh = ax.pcolormesh(xs, ys, grid, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="SNR (dB)")
    try:
        cs = ax.contour(xs, ys, grid, levels=[30.0], colors="w", linewidths=1.2)
        ax.clabel(cs, fmt="%g dB", fontsize=8)
    except ValueError:
        pass
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    ax.set_aspect("equal")
    ax.set_title("Beamformed SNR over the user plane")
    save(fig, fig_dir, "snr_map")


def plot_hitting(df, fig_dir: Path):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(df["t"], df["stays_inside"], label="stays inside footprint")
    ax.plot(df["t"], df["stays_outside"], label="stays outside footprint")
    ax.plot(df["t"], df["first_exit_cdf"], "--", label="first-exit CDF")
    ax.plot(df["t"], df["first_entry_cdf"], "--", label="first-entry CDF")
    ax.set_xlabel("time (s)")
    ax.set_ylabel("probability")
    ax.set_ylim(0, 1.02)
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    ax.set_title("First-hitting distributions for the illuminated disc")
    save(fig, fig_dir, "hitting")


def plot_validate(df, fig_dir: Path, stem: str):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(df["t"], df["analytic_cdf"], label="analytic CDF")
    ax.plot(df["t"], df["empirical_cdf"], "--", label="Monte Carlo CDF")
    ax.fill_between(df["t"], 0, df["abs_diff"], color="crimson", alpha=0.4,
                    label=f"|diff| (sup = {df['abs_diff'].max():.3f})")
    ax.set_xlabel("time (s)")
    ax.set_ylabel("probability")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    ax.set_title("Analytic vs. simulated first-hitting CDF")
    save(fig, fig_dir, stem)


def plot_sweep(df, fig_dir: Path):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for variant, group in df.groupby("variant"):
        g = group.sort_values("r_in")
        ax.plot(g["r_in"], g["t_upd_opt"], "o-", label=f"optimum, {variant}")
    ref = df.drop_duplicates("r_in").sort_values("r_in")
    ax.plot(ref["r_in"], ref["straight_exit_time"], "k:",
            label="straight exit time r / v")
    ax.set_xlabel("illuminated radius $r_{in}$ (m)")
    ax.set_ylabel("optimal update period (s)")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    ax.set_title("Optimal period vs. footprint radius")
    save(fig, fig_dir, "sweep_radius")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--data-dir", type=Path, default=Path("out"),
                    help="directory holding the CSV outputs (default: out)")
    ap.add_argument("--fig-dir", type=Path, default=None,
                    help="where to write PNGs (default: <data-dir>/figs)")
    args = ap.parse_args()
    fig_dir = args.fig_dir or (args.data_dir / "figs")

    made = 0
    for stem in ("paoi_curve", "optimize_curve"):
        df = load(args.data_dir, stem)
        if df is not None:
            plot_age_curve(df, fig_dir, stem)
            made += 1
    df = load(args.data_dir, "steady_state")
    if df is not None:
        plot_steady_state(df, fig_dir)
        made += 1
    df = load(args.data_dir, "snr_map")
    if df is not None:
        plot_snr_map(df, fig_dir)
        made += 1
    df = load(args.data_dir, "hitting")
    if df is not None:
        plot_hitting(df, fig_dir)
        made += 1
    for stem in ("validate_exit", "validate_entry"):
        df = load(args.data_dir, stem)
        if df is not None:
            plot_validate(df, fig_dir, stem)
            made += 1
    df = load(args.data_dir, "sweep_radius")
    if df is not None:
        plot_sweep(df, fig_dir)
        made += 1

    if made == 0:
        print("no known CSV files found; run the batch tool first", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
