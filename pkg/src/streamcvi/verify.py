"""Randomized incremental-vs-batch equivalence checks.

Each trial builds a random stream (fuzzy Dirichlet memberships, centers on a
random walk), advances the incremental index states step by step, and at every
step recomputes each index from the stored history by direct summation of the
batch formulas. The direct summation is vectorized but never reuses any
incremental accumulator, so the two routes stay independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import MembershipVector, PrototypeSet, min_pairwise_center_distance_sq
from .cvi import UPDATERS, new_index_state
from .dispersion import make_state, update_dispersion, update_dispersion_forgetting

REL_TOL = 1e-8


def batch_accumulators(X, U, V, lam=1.0):
    """Direct summation of per-cluster dispersion C_i and mass M_i.

    X: (n, p) history, U: (n, k) memberships, V: (k, p) current centers.
    """
    n = X.shape[0]
    w = lam ** (n - np.arange(1, n + 1))
    d2 = np.sum((X[:, None, :] - V[None, :, :]) ** 2, axis=2)
    U2 = U * U
    C = np.sum(w[:, None] * U2 * d2, axis=0)
    M = np.sum(w[:, None] * U2, axis=0)
    return C, M


def batch_xb(X, U, V):
    C, _ = batch_accumulators(X, U, V, lam=1.0)
    h = min_pairwise_center_distance_sq(PrototypeSet(V))
    return float(np.sum(C)) / (X.shape[0] * h)


def batch_xb_lambda(X, U, V, lam):
    C, _ = batch_accumulators(X, U, V, lam=lam)
    h = min_pairwise_center_distance_sq(PrototypeSet(V))
    return (1.0 - lam) * float(np.sum(C)) / h


def _db_from_L(L, V):
    k = V.shape[0]
    diff = V[:, None, :] - V[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", diff, diff)
    off = ~np.eye(k, dtype=bool)
    ratios = (L[:, None] + L[None, :]) / np.where(off, d2, np.inf)
    return float(np.mean(np.max(np.where(off, ratios, -np.inf), axis=1)))


def batch_db(X, U, V):
    C, M = batch_accumulators(X, U, V, lam=1.0)
    L = np.where(M > 0.0, C / np.where(M > 0.0, M, 1.0), 0.0)
    return _db_from_L(L, V)


def batch_db_lambda(X, U, V, lam):
    C, M = batch_accumulators(X, U, V, lam=lam)
    L = C / np.maximum(1.0, M)
    return _db_from_L(L, V)


def random_stream(rng, n, k, p, center_step=0.05, empty_cluster=False):
    """Random memberships and center trajectories for oracle trials.

    Returns (X, U, Vs) where Vs[t] holds the centers after step t+1 (Vs[0]
    is the starting configuration, so the step-t update moves Vs[t] -> Vs[t+1]).
    """
    X = rng.normal(0.0, 2.0, size=(n, p))
    U = rng.dirichlet(np.ones(k), size=n) if k > 1 else np.ones((n, 1))
    if empty_cluster and k > 1:
        # Redistribute the last cluster's mass so it never receives any.
        U[:, :-1] += U[:, -1:] / (k - 1)
        U[:, -1] = 0.0
    V0 = rng.normal(0.0, 3.0, size=(k, p))
    steps = rng.normal(0.0, center_step, size=(n, k, p))
    Vs = np.concatenate([V0[None], V0[None] + np.cumsum(steps, axis=0)])
    return X, U, Vs


@dataclass
class TrialReport:
    seed: int
    lam: float
    k: int
    p: int
    n: int
    max_rel_err: dict = field(default_factory=dict)  # family -> worst error
    worst_step: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(e <= REL_TOL for e in self.max_rel_err.values())


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def run_trial(seed: int, n=None, k=None, p=None, lam=None, empty_cluster=False) -> TrialReport:
    rng = np.random.default_rng(seed)
    n = n if n is not None else int(rng.integers(50, 250))
    k = k if k is not None else int(rng.integers(2, 12))
    p = p if p is not None else int(rng.choice([2, 8]))
    lam = lam if lam is not None else float(rng.choice([1.0, 0.9, 0.5]))
    X, U, Vs = random_stream(rng, n, k, p, empty_cluster=empty_cluster)

    families = ["xb", "db"] if lam == 1.0 else ["xb", "db", "xb_lambda", "db_lambda"]
    states = {fam: new_index_state(fam, k, p, lam=lam) for fam in families}
    report = TrialReport(seed=seed, lam=lam, k=k, p=p, n=n)
    for fam in families:
        report.max_rel_err[fam] = 0.0
        report.worst_step[fam] = 0

    oracles = {
        "xb": lambda t: batch_xb(X[:t], U[:t], Vs[t]),
        "db": lambda t: batch_db(X[:t], U[:t], Vs[t]),
        "xb_lambda": lambda t: batch_xb_lambda(X[:t], U[:t], Vs[t], lam),
        "db_lambda": lambda t: batch_db_lambda(X[:t], U[:t], Vs[t], lam),
    }
    for t in range(1, n + 1):
        V_old = PrototypeSet(Vs[t - 1])
        V_new = PrototypeSet(Vs[t])
        u = MembershipVector(np.clip(U[t - 1], 0.0, 1.0), kind="fuzzy")
        x = X[t - 1]
        for fam in families:
            states[fam], val = UPDATERS[fam](states[fam], V_old, V_new, u, x)
            if not val.defined:
                continue
            err = _rel(val.value, oracles[fam](t))
            if err > report.max_rel_err[fam]:
                report.max_rel_err[fam] = err
                report.worst_step[fam] = t
    return report


def lambda_one_consistency(seed: int, n=200, k=3, p=2) -> float:
    """Max |C - C_lambda| over a stream where the forgetting update runs at
    lam=1; the two recursions must coincide exactly."""
    rng = np.random.default_rng(seed)
    X, U, Vs = random_stream(rng, n, k, p)
    worst = 0.0
    plain = [make_state(p, lam=1.0) for _ in range(k)]
    ff = [make_state(p, lam=1.0) for _ in range(k)]
    for t in range(1, n + 1):
        for i in range(k):
            plain[i] = update_dispersion(plain[i], Vs[t - 1][i], Vs[t][i], U[t - 1][i], X[t - 1])
            ff[i] = update_dispersion_forgetting(ff[i], Vs[t - 1][i], Vs[t][i], U[t - 1][i], X[t - 1])
            worst = max(worst, abs(plain[i].C - ff[i].C))
    return worst


def k1_xb_trial(seed: int, n=150, p=2) -> float:
    """Single-cluster XB path: incremental running-max separation vs a direct
    recomputation of the same recurrence from stored history."""
    rng = np.random.default_rng(seed)
    X, U, Vs = random_stream(rng, n, 1, p)
    state = new_index_state("xb", 1, p)
    worst = 0.0
    h_ref = 0.0
    for t in range(1, n + 1):
        state, val = UPDATERS["xb"](
            state, PrototypeSet(Vs[t - 1]), PrototypeSet(Vs[t]),
            MembershipVector(U[t - 1], kind="fuzzy"), X[t - 1],
        )
        d = Vs[t][0] - X[t - 1]
        h_ref = max(h_ref, float(d @ d))
        C, _ = batch_accumulators(X[:t], U[:t], Vs[t])
        expected = float(np.sum(C)) / (t * h_ref) if h_ref > 0 else None
        if val.defined and expected is not None:
            worst = max(worst, _rel(val.value, expected))
    return worst


@dataclass
class VerificationReport:
    trials: list
    lambda_one_err: float
    k1_err: float

    @property
    def max_rel_err(self) -> dict:
        out: dict[str, float] = {}
        for tr in self.trials:
            for fam, err in tr.max_rel_err.items():
                out[fam] = max(out.get(fam, 0.0), err)
        return out

    @property
    def passed(self) -> bool:
        return (
            all(tr.passed for tr in self.trials)
            and self.lambda_one_err == 0.0
            and self.k1_err <= REL_TOL
        )

    def failures(self):
        return [tr for tr in self.trials if not tr.passed]


def run_verification(n_trials: int = 100, seed: int = 0) -> VerificationReport:
    rng = np.random.default_rng(seed)
    trial_seeds = rng.integers(0, 2**63 - 1, size=n_trials)
    trials = [run_trial(int(s)) for s in trial_seeds]
    # Make sure an empty-cluster configuration is always exercised.
    trials.append(run_trial(int(rng.integers(0, 2**63 - 1)), k=4, lam=1.0,
                            empty_cluster=True))
    return VerificationReport(
        trials=trials,
        lambda_one_err=lambda_one_consistency(int(rng.integers(0, 2**63 - 1))),
        k1_err=k1_xb_trial(int(rng.integers(0, 2**63 - 1))),
    )
