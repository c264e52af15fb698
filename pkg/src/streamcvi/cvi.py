"""Incremental Xie-Beni and Davies-Bouldin indices, with and without forgetting.

Four variants are maintained over a stream of (u, V_old, V_new, x) steps
produced by an online clusterer:

    xb        : J / (n * h)          J = sum_i C_i, h = min squared center gap
    xb_lambda : (1 - lam) * J_lam / h
    db        : mean_i max_{j!=i} (L_i + L_j) / ||v_i - v_j||^2, L_i = C_i / M_i
    db_lambda : same with L_i = C_lam_i / max(1, M_lam_i)

Both indices are min-optimal. Undefined steps (coincident centers, or a
single cluster for DB) are flagged, never raised: the state still advances.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from functools import lru_cache

from .core import MembershipVector, PrototypeSet, min_pairwise_center_distance_sq
from .dispersion import (
    DispersionState,
    make_state,
    update_dispersion,
    update_dispersion_forgetting,
)

log = logging.getLogger(__name__)

INDEX_FAMILIES = ("xb", "xb_lambda", "db", "db_lambda")


@lru_cache(maxsize=128)
def _offdiag(k: int) -> np.ndarray:
    return ~np.eye(k, dtype=bool)


@dataclass(frozen=True)
class IndexValue:
    value: float
    n: int
    k: int
    defined: bool = True


@dataclass(frozen=True)
class IndexState:
    """State of one index variant: per-cluster dispersion plus separation."""

    per_cluster: tuple[DispersionState, ...]
    h: float
    n: int
    lam: float
    family: str

    @property
    def k(self) -> int:
        return len(self.per_cluster)


def new_index_state(
    family: str, k: int, p: int, lam: float = 1.0, n0: int = 0, M0: float = 0.0
) -> IndexState:
    if family not in INDEX_FAMILIES:
        raise ValueError(f"unknown index family {family!r}")
    forgetting = family.endswith("_lambda")
    if forgetting and not (0.0 < lam < 1.0):
        raise ValueError("forgetting variants need lam in (0, 1)")
    state_lam = lam if forgetting else 1.0
    states = tuple(make_state(p, lam=state_lam, M0=M0) for _ in range(k))
    return IndexState(per_cluster=states, h=0.0, n=n0, lam=state_lam, family=family)


def add_cluster(state: IndexState, p: int) -> IndexState:
    """Append a zero-initialized dispersion state for a newly created cluster."""
    extra = make_state(p, lam=state.lam)
    return replace(state, per_cluster=state.per_cluster + (extra,))


def _advance(state: IndexState, V_old: PrototypeSet, V_new: PrototypeSet,
             u: MembershipVector, x: np.ndarray) -> tuple[DispersionState, ...]:
    k = state.k
    if V_old.k != k or V_new.k != k or u.k != k:
        raise ValueError(
            f"step shapes (k={V_old.k}/{V_new.k}/{u.k}) disagree with state k={k}"
        )
    step = update_dispersion if state.lam == 1.0 else update_dispersion_forgetting
    return tuple(
        step(ds, V_old[i], V_new[i], float(u.u[i]), x)
        for i, ds in enumerate(state.per_cluster)
    )


def _separation(state: IndexState, V_new: PrototypeSet, x: np.ndarray) -> float:
    """h for the XB denominator; a running max of ||v1 - x||^2 when k == 1."""
    if V_new.k >= 2:
        return min_pairwise_center_distance_sq(V_new)
    d = V_new[0] - x
    return max(state.h, float(d @ d))


def _xb_value(state: IndexState, clusters, h: float, n_new: int) -> IndexValue:
    J = sum(ds.C for ds in clusters)
    k = len(clusters)
    if h <= 0.0:
        log.debug("XB undefined at n=%d: zero separation", n_new)
        return IndexValue(value=math.nan, n=n_new, k=k, defined=False)
    if state.lam == 1.0:
        return IndexValue(value=J / (n_new * h), n=n_new, k=k)
    return IndexValue(value=(1.0 - state.lam) * J / h, n=n_new, k=k)


def _db_value(state: IndexState, clusters, V_new: PrototypeSet, n_new: int) -> IndexValue:
    k = len(clusters)
    if k < 2:
        return IndexValue(value=math.nan, n=n_new, k=k, defined=False)
    L = np.empty(k)
    for i, ds in enumerate(clusters):
        if state.lam == 1.0:
            if ds.M == 0.0:
                log.debug("empty cluster %d at n=%d: L set to 0", i, n_new)
                L[i] = 0.0
            else:
                L[i] = ds.C / ds.M
        else:
            L[i] = ds.C / max(1.0, ds.M)
    C = V_new.centers
    diff = C[:, None, :] - C[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", diff, diff)
    off = _offdiag(k)
    if np.any(d2[off] == 0.0):
        log.debug("DB undefined at n=%d: coincident centers", n_new)
        return IndexValue(value=math.nan, n=n_new, k=k, defined=False)
    ratios = (L[:, None] + L[None, :]) / np.where(off, d2, np.inf)
    value = float(np.mean(np.max(np.where(off, ratios, -np.inf), axis=1)))
    return IndexValue(value=value, n=n_new, k=k)


def _update(state, V_old, V_new, u, x, kind):
    xv = np.asarray(x, dtype=float)
    clusters = _advance(state, V_old, V_new, u, xv)
    n_new = state.n + 1
    if kind == "xb":
        h = _separation(state, V_new, xv)
        value = _xb_value(state, clusters, h, n_new)
    else:
        h = state.h if V_new.k < 2 else min_pairwise_center_distance_sq(V_new)
        value = _db_value(state, clusters, V_new, n_new)
    new_state = replace(state, per_cluster=clusters, h=h, n=n_new)
    return new_state, value


def xb_update(state: IndexState, V_old, V_new, u, x) -> tuple[IndexState, IndexValue]:
    if state.family != "xb":
        raise ValueError(f"state family is {state.family!r}, not 'xb'")
    return _update(state, V_old, V_new, u, x, "xb")


def xb_lambda_update(state: IndexState, V_old, V_new, u, x) -> tuple[IndexState, IndexValue]:
    if state.family != "xb_lambda":
        raise ValueError(f"state family is {state.family!r}, not 'xb_lambda'")
    return _update(state, V_old, V_new, u, x, "xb")


def db_update(state: IndexState, V_old, V_new, u, x) -> tuple[IndexState, IndexValue]:
    if state.family != "db":
        raise ValueError(f"state family is {state.family!r}, not 'db'")
    return _update(state, V_old, V_new, u, x, "db")


def db_lambda_update(state: IndexState, V_old, V_new, u, x) -> tuple[IndexState, IndexValue]:
    if state.family != "db_lambda":
        raise ValueError(f"state family is {state.family!r}, not 'db_lambda'")
    return _update(state, V_old, V_new, u, x, "db")


UPDATERS = {
    "xb": xb_update,
    "xb_lambda": xb_lambda_update,
    "db": db_update,
    "db_lambda": db_lambda_update,
}


def batch_xb_oracle(history, V: PrototypeSet) -> float:
    """Direct evaluation of the batch Xie-Beni index (m=2, Euclidean norm).

    ``history`` is a sequence of (x, u_vec) pairs over a fixed cluster count.
    Test-only reference for the incremental path.
    """
    if len(history) == 0:
        raise ValueError("history must be nonempty")
    n = len(history)
    J = 0.0
    for x, u in history:
        xv = np.asarray(x, dtype=float)
        uv = np.asarray(u, dtype=float)
        d2 = np.sum((V.centers - xv) ** 2, axis=1)
        J += float(np.sum(uv * uv * d2))
    h = min_pairwise_center_distance_sq(V)
    return J / (n * h)


def batch_db_oracle(history, V: PrototypeSet) -> float:
    """Direct evaluation of the batch squared-distance Davies-Bouldin variant.

    Empty clusters (zero membership mass) contribute L = 0, matching the
    incremental convention.
    """
    if len(history) == 0:
        raise ValueError("history must be nonempty")
    k = V.k
    if k < 2:
        raise ValueError("DB needs at least two clusters")
    num = np.zeros(k)
    den = np.zeros(k)
    for x, u in history:
        xv = np.asarray(x, dtype=float)
        uv = np.asarray(u, dtype=float)
        d2 = np.sum((V.centers - xv) ** 2, axis=1)
        num += uv * uv * d2
        den += uv * uv
    L = np.where(den > 0.0, num / np.where(den > 0.0, den, 1.0), 0.0)
    C = V.centers
    diff = C[:, None, :] - C[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", diff, diff)
    off = _offdiag(k)
    ratios = (L[:, None] + L[None, :]) / np.where(off, d2, np.inf)
    return float(np.mean(np.max(np.where(off, ratios, -np.inf), axis=1)))
