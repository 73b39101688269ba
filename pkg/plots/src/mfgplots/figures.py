"""Figure rendering: trajectory quiver panels and correlation heatmaps.

Renders are deterministic: fixed figure sizes, fixed color maps, a fixed SVG
hash salt, and no embedded timestamps, so identical CSV inputs regenerate
byte-identical SVG files.
"""

from __future__ import annotations

import re
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "mfgplots"

import matplotlib.pyplot as plt
import numpy as np

from .io import DataError, load_correlation_matrix, load_trajectories

__all__ = ["plot_trajectories", "plot_correlations"]

MAX_ARROWS_PER_PATH = 20


def _subsample(n: int, cap: int) -> np.ndarray:
    if n <= cap:
        return np.arange(n)
    return np.unique(np.linspace(0, n - 1, cap).astype(int))


def plot_trajectories(csv_path, out_path, max_arrows: int = MAX_ARROWS_PER_PATH) -> Path:
    """Render one panel: positions as curves, velocities as sparse arrows.

    The leader is drawn in black, followers in colors; arrows are subsampled
    to at most ``max_arrows`` per path.
    """
    agents = load_trajectories(csv_path)
    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    cmap = plt.get_cmap("tab10")
    for aid in sorted(agents):
        t, pos, vel = agents[aid]
        color = "black" if aid == 0 else cmap((aid - 1) % 10)
        lw = 1.8 if aid == 0 else 0.9
        ax.plot(pos[:, 0], pos[:, 1], color=color, linewidth=lw, zorder=3 if aid == 0 else 2)
        idx = _subsample(len(t), max_arrows)
        ax.quiver(
            pos[idx, 0],
            pos[idx, 1],
            vel[idx, 0],
            vel[idx, 1],
            color=color,
            width=0.003,
            alpha=0.85,
            zorder=3 if aid == 0 else 2,
        )
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_title(f"leader (black) and {len(agents) - 1} followers")
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return out_path


def _size_key(path: Path):
    match = re.search(r"(\d+)", path.stem)
    return (int(match.group(1)) if match else 0, path.stem)


def plot_correlations(directory, out_path, pattern: str = "chaos_N*.csv") -> dict:
    """Render one heatmap per flock-size file on a shared [-1, 1] color scale.

    NaN cells (degenerate variance markers) are hatched.  Returns a summary
    with the parsed matrices and the number of hatched cells, keyed by file.
    """
    directory = Path(directory)
    files = sorted(directory.glob(pattern), key=_size_key)
    if not files:
        raise DataError(f"no files matching {pattern!r} in {directory}")
    matrices = {f.name: load_correlation_matrix(f) for f in files}

    n_panels = len(files)
    fig, axes = plt.subplots(
        1, n_panels, figsize=(3.2 * n_panels, 3.6), squeeze=False
    )
    hatched = {}
    image = None
    for ax, f in zip(axes[0], files):
        matrix = matrices[f.name]
        masked = np.ma.masked_invalid(matrix)
        image = ax.imshow(masked, vmin=-1.0, vmax=1.0, cmap="RdBu_r")
        n_bad = 0
        bad = ~np.isfinite(matrix)
        for i, j in np.argwhere(bad):
            ax.add_patch(
                plt.Rectangle(
                    (j - 0.5, i - 0.5),
                    1.0,
                    1.0,
                    fill=False,
                    hatch="////",
                    edgecolor="gray",
                    linewidth=0.0,
                )
            )
            n_bad += 1
        hatched[f.name] = n_bad
        ax.set_title(f.stem, fontsize=9)
        ax.set_xticks(range(matrix.shape[0]))
        ax.set_yticks(range(matrix.shape[0]))
    fig.colorbar(image, ax=axes[0], fraction=0.03, pad=0.02)
    out_path = Path(out_path)
    fig.savefig(out_path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return {"files": [f.name for f in files], "matrices": matrices, "hatched": hatched}
