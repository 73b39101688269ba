"""Command line: ``plot trajectories <csv> <out.svg>`` and
``plot correlations <dir> <out.svg>``."""

from __future__ import annotations

import argparse
import sys

from .figures import plot_correlations, plot_trajectories
from .io import DataError


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot", description="Render experiment pipeline CSV outputs to SVG"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_traj = sub.add_parser("trajectories", help="quiver panel from a trajectory CSV")
    p_traj.add_argument("csv", help="trajectory table (t, agent_id, pos*, vel*)")
    p_traj.add_argument("out", help="output SVG path")
    p_traj.add_argument("--max-arrows", type=int, default=20)
    p_corr = sub.add_parser("correlations", help="heatmaps from chaos_N*.csv files")
    p_corr.add_argument("directory", help="directory holding chaos_N*.csv")
    p_corr.add_argument("out", help="output SVG path")
    args = parser.parse_args(argv)

    try:
        if args.command == "trajectories":
            plot_trajectories(args.csv, args.out, max_arrows=args.max_arrows)
        else:
            plot_correlations(args.directory, args.out)
    except (DataError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
