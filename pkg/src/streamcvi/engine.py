"""Per-sample orchestration: clustering step, then incremental index step.

The engine owns the warm-up handling (sequential k-means consumes the first k
points as prototypes; the ellipsoidal clusterer consumes the first p+1 points
for its initial prototype), grows every index state coherently when the
clusterer creates a cluster mid-stream, and records one trace row per
evaluated point plus an event log.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import PrototypeSet, as_vector
from .cvi import INDEX_FAMILIES, UPDATERS, IndexState, add_cluster, new_index_state
from .oec import OecConfig, oec_init, oec_step
from .skmeans import skmeans_init, skmeans_step
from .stream_io import EventRecord, TraceRecord


@dataclass(frozen=True)
class RunConfig:
    algorithm: str = "skmeans"               # "skmeans" | "oec"
    k: int = 2                               # sk-means only
    oec: OecConfig = field(default_factory=OecConfig)
    indices: tuple[str, ...] = INDEX_FAMILIES
    lam: float = 0.9                         # forgetting factor of *_lambda indices
    icvi_init: str = "paper"                 # "paper" | "zeros"
    seed: int = 0
    emit_labels: bool = False

    def __post_init__(self):
        if self.algorithm not in ("skmeans", "oec"):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if not self.indices:
            raise ValueError("at least one index must be enabled")
        for fam in self.indices:
            if fam not in INDEX_FAMILIES:
                raise ValueError(f"unknown index family {fam!r}")
        if any(f.endswith("_lambda") for f in self.indices) and not (0.0 < self.lam < 1.0):
            raise ValueError("forgetting variants need lam in (0, 1)")
        if self.icvi_init not in ("paper", "zeros"):
            raise ValueError(f"unknown init mode {self.icvi_init!r}")
        if self.algorithm == "skmeans" and self.k < 1:
            raise ValueError("k must be positive")


def init_icvi_state(
    mode: str, n_warmup: int, k: int, p: int,
    indices=INDEX_FAMILIES, lam: float = 0.9,
) -> dict[str, IndexState]:
    """Fresh index states at the start of evaluation.

    "paper" mode seeds every cluster's membership-mass accumulator with the
    warm-up count; "zeros" starts all accumulators at zero.
    """
    M0 = float(n_warmup) if mode == "paper" else 0.0
    return {
        fam: new_index_state(fam, k, p, lam=lam, n0=n_warmup, M0=M0)
        for fam in indices
    }


class StreamEngine:
    """Single-pass engine over one stream. Feed points via push()."""

    def __init__(self, config: RunConfig):
        self.config = config
        self._buffer: list[np.ndarray] = []
        self._cluster_state = None
        self._index_states: dict[str, IndexState] | None = None
        self._n = 0
        self.trace: list[TraceRecord] = []
        self.events: list[EventRecord] = []

    @property
    def n(self) -> int:
        return self._n

    def _warmup_target(self, p: int) -> int:
        if self.config.algorithm == "skmeans":
            return self.config.k
        return p + 1

    def push(self, x) -> TraceRecord | None:
        """Process one point; returns its trace row, or None during warm-up."""
        x = as_vector(x)
        self._n += 1
        cfg = self.config
        if self._cluster_state is None:
            self._buffer.append(x)
            if len(self._buffer) < self._warmup_target(x.shape[0]):
                return None
            p = x.shape[0]
            if cfg.algorithm == "skmeans":
                self._cluster_state = skmeans_init(self._buffer)
                k0 = cfg.k
            else:
                self._cluster_state = oec_init(self._buffer, cfg.oec)
                k0 = 1
            self._index_states = init_icvi_state(
                cfg.icvi_init, self._n, k0, p, cfg.indices, cfg.lam
            )
            self._buffer = []
            return None

        if cfg.algorithm == "skmeans":
            self._cluster_state, u, V_old, V_new = skmeans_step(self._cluster_state, x)
            step_events = []
        else:
            self._cluster_state, u, V_old, V_new, step_events = oec_step(
                self._cluster_state, x, cfg.oec
            )

        for kind, detail in step_events:
            self.events.append(EventRecord(n=self._n, kind=kind, detail=detail))

        values: dict[str, float | None] = {}
        for fam in cfg.indices:
            state = self._index_states[fam]
            while state.k < V_new.k:
                state = add_cluster(state, V_new.p)
            state, val = UPDATERS[fam](state, V_old, V_new, u, x)
            self._index_states[fam] = state
            if val.defined:
                values[fam] = val.value
            else:
                values[fam] = None
                self.events.append(
                    EventRecord(n=self._n, kind="index_undefined", detail=fam)
                )
        label = int(np.argmax(u.u)) if cfg.emit_labels else None
        record = TraceRecord(n=self._n, k=V_new.k, values=values, label=label)
        self.trace.append(record)
        return record

    def centers(self) -> PrototypeSet:
        if self.config.algorithm == "skmeans":
            return PrototypeSet(self._cluster_state.V.copy())
        return self._cluster_state.centers()

    def state_float_count(self) -> int:
        """Number of scalar slots held by clustering + index state (not output)."""
        total = 0
        cs = self._cluster_state
        if cs is None:
            return sum(b.size for b in self._buffer)
        if self.config.algorithm == "skmeans":
            total += cs.V.size + cs.counts.size
        else:
            for pr in cs.protos:
                total += pr.m.size + pr.cov.size + pr.S_inv.size + 2
            total += cs.forget.m.size + cs.forget.S.size + 1
        for state in (self._index_states or {}).values():
            total += 2  # h, n
            for ds in state.per_cluster:
                total += ds.G.size + 2
        return total


def run(points, config: RunConfig, change_events=()) -> tuple[list, list]:
    """Process a whole stream; returns (trace records, event records).

    ``points`` may be StreamPoints, raw vectors, or an (n, p) array;
    ``change_events`` are ground-truth 1-based shift indices to log.
    """
    engine = StreamEngine(config)
    change_set = set(int(c) for c in change_events)
    for pt in points:
        x = pt.x if hasattr(pt, "x") else pt
        n_here = engine.n + 1
        if n_here in change_set:
            engine.events.append(
                EventRecord(n=n_here, kind="ground_truth_change", detail="")
            )
        engine.push(x)
    if engine._cluster_state is None:
        need = "k" if config.algorithm == "skmeans" else "p+1"
        raise ValueError(f"stream ended during warm-up (need more than {need} points)")
    engine.events.sort(key=lambda e: e.n)
    return engine.trace, engine.events
