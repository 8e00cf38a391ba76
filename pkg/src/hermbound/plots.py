"""Figures and two-column plot-data files written next to CLI reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["write_plot_data", "approx_figure", "sweep_figure", "reproduce_figure", "terms_figure"]


def write_plot_data(path, curves):
    """One block per curve: a ``# name`` header then ``x y`` lines.

    Blocks are separated by a blank line (gnuplot ``index`` style).
    """
    with open(path, "w") as fh:
        for i, (name, xs, ys) in enumerate(curves):
            if i:
                fh.write("\n\n")
            fh.write(f"# {name}\n")
            for x, y in zip(xs, ys):
                fh.write(f"{x:.9g} {y:.9g}\n")


def _save(fig, path):
    fig.tight_layout()
    # fixed metadata keeps repeated runs byte-identical
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)


def approx_figure(path, t, f, s, K):
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(6.4, 5.6), sharex=True)
    top.plot(t, f, lw=1.4, label="f")
    top.plot(t, s, lw=1.0, ls="--", label=f"S_{K} f")
    top.legend(frameon=False)
    top.set_ylabel("value")
    bottom.plot(t, f - s, lw=1.0, color="C3")
    bottom.set_xlabel("t")
    bottom.set_ylabel("f - S_K f")
    _save(fig, path)


def sweep_figure(path, Ks, rms, sup, total):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.loglog(Ks, total, "o-", label="bound")
    ax.loglog(Ks, rms, "s-", label="measured RMS")
    ax.loglog(Ks, sup, "^:", label="measured sup (grid)")
    ax.set_xlabel("K")
    ax.set_ylabel("error")
    ax.legend(frameon=False)
    _save(fig, path)


def reproduce_figure(path, labels, reference, computed):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    xs = range(len(labels))
    ax.bar([x - 0.2 for x in xs], reference, width=0.4, label="reference")
    ax.bar([x + 0.2 for x in xs], computed, width=0.4, label="computed")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, rotation=30, ha="right")
    ax.set_yscale("log")
    ax.legend(frameon=False)
    _save(fig, path)


def terms_figure(path, labels, values):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.bar(labels, values, color="C0")
    ax.set_yscale("log")
    ax.set_ylabel("bound term")
    _save(fig, path)
