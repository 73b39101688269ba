"""Counter-based Gaussian noise streams for reproducible parallel simulation.

Each (master_seed, agent, replicate) triple owns an independent stream, and
the j-th draw of a stream is a pure function of (stream seed, j): draws are
the outputs of SplitMix64 advanced j+1 times from the stream seed.  Agents
and replicates can therefore be simulated in any order, vectorized or not,
with bitwise-identical results.  Normals come from Box-Muller applied to
consecutive uniform pairs.
"""

from __future__ import annotations

import numpy as np

__all__ = ["mix64", "stream_seed", "uniforms", "normals", "psd_factor"]

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30, _S27, _S31 = np.uint64(30), np.uint64(27), np.uint64(31)
_S11 = np.uint64(11)
_INV53 = float(2.0**-53)


def mix64(z):
    """SplitMix64 output function (finalizer) on uint64 scalars or arrays."""
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> _S30)) * _MIX1
        z = (z ^ (z >> _S27)) * _MIX2
        return z ^ (z >> _S31)


def stream_seed(master_seed: int, agent, replicate):
    """Stream seed for (master, agent, replicate); broadcasts over arrays."""
    agent = np.asarray(agent, dtype=np.uint64)
    replicate = np.asarray(replicate, dtype=np.uint64)
    master = np.uint64(master_seed & 0xFFFFFFFFFFFFFFFF)
    with np.errstate(over="ignore"):
        s = mix64(master + _GAMMA * (agent + np.uint64(1)))
        return mix64(s + _GAMMA * (replicate + np.uint64(1)))


def _raw(seeds, counters):
    # counters broadcast against seeds[..., None]; draw j is SplitMix64's
    # (j+1)-th output from the stream seed.
    seeds = np.asarray(seeds, dtype=np.uint64)
    counters = np.asarray(counters, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(seeds[..., None] + _GAMMA * (counters + np.uint64(1)))


def uniforms(seeds, start: int, count: int) -> np.ndarray:
    """Uniform(0, 1] draws at counters start..start+count-1 for each seed."""
    counters = np.arange(start, start + count, dtype=np.uint64)
    bits = _raw(seeds, counters)
    return ((bits >> _S11).astype(np.float64) + 1.0) * _INV53


def normals(seeds, start: int, count: int) -> np.ndarray:
    """Standard normal draws at indices start..start+count-1 for each seed.

    Normal 2p and 2p+1 come from the Box-Muller transform of uniform draws
    at counters 2p and 2p+1, so any contiguous block can be generated without
    knowing what was drawn before it.
    """
    if count <= 0:
        seeds = np.asarray(seeds, dtype=np.uint64)
        return np.empty(seeds.shape + (0,))
    p_lo = start // 2
    p_hi = (start + count - 1) // 2
    pairs = np.arange(p_lo, p_hi + 1, dtype=np.uint64)
    u1 = np.clip(uniforms_at(seeds, 2 * pairs), 1e-300, 1.0)
    u2 = uniforms_at(seeds, 2 * pairs + np.uint64(1))
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    block = np.empty(u1.shape[:-1] + (2 * pairs.size,))
    block[..., 0::2] = radius * np.cos(angle)
    block[..., 1::2] = radius * np.sin(angle)
    offset = start - 2 * p_lo
    return block[..., offset : offset + count]


def uniforms_at(seeds, counters) -> np.ndarray:
    """Uniform(0, 1] draws at explicit counter values."""
    bits = _raw(seeds, counters)
    return ((bits >> _S11).astype(np.float64) + 1.0) * _INV53


def psd_factor(cov: np.ndarray) -> np.ndarray:
    """Deterministic square root F of a PSD matrix (F F' = cov).

    Eigenvalue-based so that rank-deficient covariances (e.g. doubled-state
    embeddings) factor cleanly; tiny negative eigenvalues are clipped.
    """
    cov = np.asarray(cov, dtype=float)
    if not np.all(np.isfinite(cov)):
        raise ValueError("covariance must be finite")
    w, V = np.linalg.eigh(0.5 * (cov + cov.T))
    if np.min(w) < -1e-10 * max(1.0, np.max(np.abs(w))):
        raise ValueError("covariance is not positive semi-definite")
    return V * np.sqrt(np.clip(w, 0.0, None))
