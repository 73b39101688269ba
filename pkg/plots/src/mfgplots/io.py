"""CSV ingestion for the experiment pipeline's output files.

Files may carry leading ``#`` comment lines (the pipeline embeds a config
hash that way); the first non-comment line is the header.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


class DataError(ValueError):
    pass


def _read_table(path) -> tuple:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    header = None
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if header is None:
                header = line.split(",")
                continue
            rows.append(line.split(","))
    if header is None or not rows:
        raise DataError(f"{path}: empty table")
    return header, rows


def load_trajectories(path) -> dict:
    """Parse a trajectory table into {agent_id: (t, pos, vel)} arrays.

    Expects columns t, agent_id, pos*, vel* (any matching dimension); the
    leader (agent 0) must be present.
    """
    header, rows = _read_table(path)
    try:
        t_col = header.index("t")
        id_col = header.index("agent_id")
    except ValueError as err:
        raise DataError(f"{path}: missing column ({err})") from None
    pos_cols = [i for i, name in enumerate(header) if name.startswith("pos")]
    vel_cols = [i for i, name in enumerate(header) if name.startswith("vel")]
    if len(pos_cols) < 2 or len(vel_cols) < 2:
        raise DataError(f"{path}: need at least 2 position and 2 velocity columns")
    agents: dict = {}
    try:
        for row in rows:
            aid = int(float(row[id_col]))
            entry = agents.setdefault(aid, [])
            entry.append(
                [float(row[t_col])]
                + [float(row[i]) for i in pos_cols[:2]]
                + [float(row[i]) for i in vel_cols[:2]]
            )
    except (ValueError, IndexError) as err:
        raise DataError(f"{path}: malformed row ({err})") from None
    if 0 not in agents:
        raise DataError(f"{path}: leader (agent_id 0) missing")
    out = {}
    for aid, entry in agents.items():
        arr = np.asarray(entry)
        arr = arr[np.argsort(arr[:, 0], kind="stable")]
        out[aid] = (arr[:, 0], arr[:, 1:3], arr[:, 3:5])
    return out


def load_correlation_matrix(path) -> np.ndarray:
    """Parse one square correlation matrix; NaN markers pass through."""
    header, rows = _read_table(path)
    try:
        matrix = np.array([[float(v) for v in row] for row in rows])
    except ValueError as err:
        raise DataError(f"{path}: malformed matrix ({err})") from None
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DataError(f"{path}: expected a square matrix, got {matrix.shape}")
    finite_diag = np.diag(matrix)[np.isfinite(np.diag(matrix))]
    if finite_diag.size and not np.allclose(finite_diag, 1.0, atol=1e-9):
        raise DataError(f"{path}: correlation diagonal is not 1")
    return matrix
