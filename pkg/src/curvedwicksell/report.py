"""Figure rendering for the CLI report path (matplotlib, file output only)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def save_profile_figure(path, grid, tail_values, density_values=None,
                        title=None):
    """Tail (and optional density) curves rendered next to the CSV."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(grid, tail_values, label="tail", color="tab:blue")
    if density_values is not None:
        ax2 = ax.twinx()
        ax2.plot(grid, density_values, label="density", color="tab:orange",
                 linestyle="--")
        ax2.set_ylabel("density")
    ax.set_xlabel("radius")
    ax.set_ylabel("tail")
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_sweep_figure(path, grid, curves, title=None):
    """Overlay of density curves per curvature; flat curve drawn solid."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for k in sorted(curves):
        vals = curves[k]
        if k == 0:
            ax.plot(grid, vals, label="k=0", color="tab:blue", linewidth=2)
        elif k > 0:
            ax.plot(grid, vals, label=f"k={k:g}", linestyle="--")
        else:
            ax.plot(grid, vals, label=f"k={k:g}", linestyle=":")
    ax.set_xlabel("slice radius")
    ax.set_ylabel("density")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
