"""Macqueen's basic sequential k-means: nearest prototype, running-mean update."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import MembershipVector, PrototypeSet, as_vector


@dataclass(frozen=True)
class SkMeansState:
    V: np.ndarray        # (k, p) prototypes
    counts: np.ndarray   # (k,) points absorbed per cluster, init included

    @property
    def k(self) -> int:
        return self.V.shape[0]

    @property
    def p(self) -> int:
        return self.V.shape[1]


def skmeans_init(first_k_points) -> SkMeansState:
    """Seed the k prototypes with the first k stream points."""
    pts = [as_vector(x) for x in first_k_points]
    if len(pts) == 0:
        raise ValueError("need at least one point to initialize")
    p = pts[0].shape[0]
    for x in pts:
        if x.shape[0] != p:
            raise ValueError("initialization points have mixed dimensions")
    V = np.stack(pts)
    return SkMeansState(V=V, counts=np.ones(len(pts), dtype=np.int64))


def skmeans_step(state: SkMeansState, x_new):
    """Assign x to the nearest prototype (ties: lowest index) and update it.

    Returns (state', u_crisp, V_old, V_new); the center snapshots feed the
    incremental index update.
    """
    x = as_vector(x_new, state.p)
    d2 = np.sum((state.V - x) ** 2, axis=1)
    m = int(np.argmin(d2))  # argmin takes the first minimum: lowest index wins
    V_old = PrototypeSet(state.V.copy())
    counts = state.counts.copy()
    counts[m] += 1
    V = state.V.copy()
    V[m] = V[m] + (x - V[m]) / counts[m]
    u = np.zeros(state.k)
    u[m] = 1.0
    new_state = SkMeansState(V=V, counts=counts)
    return new_state, MembershipVector(u, kind="crisp"), V_old, PrototypeSet(V.copy())
