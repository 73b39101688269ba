"""Leader-follower flocking embedded as a major/minor LQ game.

Leader (major) and followers (minors) control the drift of their velocities;
the leader trades off tracking a free-will velocity schedule nu(t) against
staying near the flock's mean velocity, each follower trades off tracking the
leader against sticking with its peers.  The velocity model has cost coupling
between the major state and the population mean that the generic framework
expresses only after doubling the state variable: every player's state is the
velocity stacked on a copy of itself, which lets the two target maps act on
different copies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import Dims, MajorMinorLqModel

__all__ = [
    "FlockingParams",
    "embed",
    "embed_weights",
    "paper_preset",
    "demo_weights",
    "double_state",
    "circle_free_will",
]

#: Flocking demo weights (leader: 0.6/0.2, follower: 0.5/0.3) used across the
#: test-suite; the trajectory experiments vary them panel by panel.
demo_weights = (0.6, 0.2, 0.5, 0.3)


@dataclass(frozen=True)
class FlockingParams:
    """Velocity-space flocking specification.

    ``lambda0``/``lambda1`` weight the leader's free-will tracking and
    flock-cohesion terms, ``l0``/``l1`` the followers' leader-tracking and
    peer-cohesion terms; the control penalties are the complementary weights
    1 - lambda0 - lambda1 and 1 - l0 - l1, which must stay strictly positive.
    """

    dv: int
    lambda0: float
    lambda1: float
    l0: float
    l1: float
    Sigma0: np.ndarray
    Sigma: np.ndarray
    nu: Callable[[float], np.ndarray]
    T: float

    def __post_init__(self):
        object.__setattr__(self, "Sigma0", np.asarray(self.Sigma0, dtype=float))
        object.__setattr__(self, "Sigma", np.asarray(self.Sigma, dtype=float))
        if self.dv < 1:
            raise ValueError("dv must be >= 1")
        if not (self.lambda0 > 0 and self.lambda1 > 0):
            raise ValueError("leader weights must be strictly positive")
        if not (self.l0 > 0 and self.l1 > 0):
            raise ValueError("follower weights must be strictly positive")
        if not self.lambda0 + self.lambda1 < 1:
            raise ValueError("R0 not positive definite: lambda0 + lambda1 must be < 1")
        if not self.l0 + self.l1 < 1:
            raise ValueError("R not positive definite: l0 + l1 must be < 1")
        for name in ("Sigma0", "Sigma"):
            if getattr(self, name).shape != (self.dv, self.dv):
                raise ValueError(f"{name} must be {self.dv}x{self.dv}")


def double_state(v: np.ndarray) -> np.ndarray:
    """Map a velocity vector to its doubled-state representation [v; v]."""
    v = np.asarray(v, dtype=float)
    return np.concatenate([v, v], axis=-1)


def embed(params: FlockingParams) -> MajorMinorLqModel:
    """Build the doubled-state LQ model for the flocking game.

    Weights enter as Q0 = diag(lambda0 I, lambda1 I), Q = diag(l0 I, l1 I),
    R0 = (1 - lambda0 - lambda1) I, R = (1 - l0 - l1) I; the leader's target
    is eta0(t) = [nu(t); 0] and the cross-target maps pick the matching state
    copies.  Both halves of every doubled state receive identical drift and
    noise rows, so simulated halves stay equal.
    """
    return embed_weights(
        params.dv,
        params.lambda0,
        params.lambda1,
        params.l0,
        params.l1,
        params.Sigma0,
        params.Sigma,
        params.nu,
        params.T,
    )


def embed_weights(
    dv: int,
    lambda0: float,
    lambda1: float,
    l0: float,
    l1: float,
    Sigma0: np.ndarray,
    Sigma: np.ndarray,
    nu: Callable[[float], np.ndarray],
    T: float,
) -> MajorMinorLqModel:
    """Permissive embedding: weights may be zero (degenerate diagnostic runs).

    The sums lambda0 + lambda1 and l0 + l1 must still stay below 1 so the
    control penalties remain positive definite.
    """
    if not lambda0 + lambda1 < 1:
        raise ValueError("R0 not positive definite: lambda0 + lambda1 must be < 1")
    if not l0 + l1 < 1:
        raise ValueError("R not positive definite: l0 + l1 must be < 1")
    if min(lambda0, lambda1, l0, l1) < 0:
        raise ValueError("penalty weights must be nonnegative")
    ds = 2 * dv
    I = np.eye(dv)
    Z = np.zeros((dv, dv))
    zero_ds = np.zeros((ds, ds))
    dims = Dims(d0=ds, d=ds, k0=dv, k=dv, m0=dv, m=dv)

    def eta0(t: float) -> np.ndarray:
        return np.concatenate([np.asarray(nu(t), dtype=float), np.zeros(dv)])

    return MajorMinorLqModel(
        dims=dims,
        L0=zero_ds,
        B0=np.vstack([I, I]),
        F0=zero_ds,
        D0=np.vstack([Sigma0, Sigma0]),
        L=zero_ds,
        B=np.vstack([I, I]),
        F=zero_ds,
        G=zero_ds,
        D=np.vstack([Sigma, Sigma]),
        Q0=np.block([[lambda0 * I, Z], [Z, lambda1 * I]]),
        Q=np.block([[l0 * I, Z], [Z, l1 * I]]),
        R0=(1.0 - lambda0 - lambda1) * I,
        R=(1.0 - l0 - l1) * I,
        H0=np.block([[Z, Z], [Z, I]]),
        H=np.block([[I, Z], [Z, Z]]),
        H1=np.block([[Z, Z], [Z, I]]),
        eta0=eta0,
        eta=np.zeros(ds),
        T=T,
    )


def circle_free_will(t: float) -> np.ndarray:
    """Unit-period circular velocity schedule of constant speed 2*pi."""
    w = 2.0 * np.pi
    return np.array([-w * np.sin(w * t), w * np.cos(w * t)])


def paper_preset(lambda0: float, lambda1: float, l0: float, l1: float) -> FlockingParams:
    """Planar flocking preset: circular free will, Sigma0 = Sigma = 0.5 I, T = 5.

    Penalty weights are required arguments; the experiments vary them without a
    canonical default (``demo_weights`` documents the values used by the
    test-suite).
    """
    return FlockingParams(
        dv=2,
        lambda0=lambda0,
        lambda1=lambda1,
        l0=l0,
        l1=l1,
        Sigma0=0.5 * np.eye(2),
        Sigma=0.5 * np.eye(2),
        nu=circle_free_will,
        T=5.0,
    )
