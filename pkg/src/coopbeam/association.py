"""BS-user association via two-sided stable matching on channel gains."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelSet, Scenario


@dataclass
class Association:
    """Binary matching indicators and the per-BS served user sets."""

    alpha: np.ndarray                  # (L, K) 0/1
    served_sets: list                  # list of L sorted user-index lists
    removed: list = field(default=None)  # per-user set of BSs dropped from its PRR

    def validate(self, N_RF: int):
        col = self.alpha.sum(axis=0)
        if not np.all(col == 1):
            raise ValueError("each user must be served by exactly one BS")
        row = self.alpha.sum(axis=1)
        if np.any(row > N_RF):
            raise ValueError("a BS serves more users than its RF chains")
        for l, users in enumerate(self.served_sets):
            if sorted(users) != sorted(np.flatnonzero(self.alpha[l]).tolist()):
                raise ValueError("served_sets inconsistent with alpha")
        return self

    def objective(self, gains: np.ndarray) -> float:
        return float(np.sum(self.alpha * gains))


def channel_gain_metric(h: np.ndarray) -> float:
    """|h^H h|^2 = ||h||^4, the matching preference key."""
    n2 = float(np.real(np.vdot(h, h)))
    return n2 * n2


def gain_matrix(channels: ChannelSet) -> np.ndarray:
    n2 = np.sum(np.abs(channels.h) ** 2, axis=2)
    return n2 ** 2


def _rank_desc(keys: np.ndarray) -> list:
    """Indices sorted by key descending, lower index winning ties."""
    order = np.lexsort((np.arange(len(keys)), -keys))
    return order.tolist()


def stable_match(channels: ChannelSet, scn: Scenario) -> Association:
    """Deferred acceptance with capacities: users propose down their ranking,
    a BS tentatively holds its N_RF best proposers and evicts the weakest
    tenant when a strictly preferred user proposes.  Ties break toward the
    lower index on both sides, making preferences strict and the run
    deterministic."""
    L, K, N_RF = scn.L, scn.K, scn.N_RF
    if K > L * N_RF:
        raise ValueError(f"infeasible capacity: K={K} > L*N_RF={L * N_RF}")
    gains = gain_matrix(channels)
    user_prr = [_rank_desc(gains[:, k]) for k in range(K)]
    removed = [set() for _ in range(K)]
    tenants = [[] for _ in range(L)]
    free = list(range(K))

    while free:
        k = free.pop(0)
        if not user_prr[k]:
            # unreachable when K <= L*N_RF; kept as a terminal fallback
            open_bs = [l for l in range(L) if len(tenants[l]) < N_RF]
            best = max(open_bs, key=lambda l: (gains[l, k], -l))
            tenants[best].append(k)
            continue
        l = user_prr[k].pop(0)
        if len(tenants[l]) < N_RF:
            tenants[l].append(k)
            continue
        weakest = min(tenants[l], key=lambda m: (gains[l, m], -m))
        if (gains[l, k], -k) > (gains[l, weakest], -weakest):
            tenants[l].remove(weakest)
            tenants[l].append(k)
            removed[weakest].add(l)
            free.insert(0, weakest)
        else:
            removed[k].add(l)
            free.insert(0, k)

    alpha = np.zeros((L, K), dtype=int)
    for l in range(L):
        alpha[l, tenants[l]] = 1
    served = [np.flatnonzero(alpha[l]).tolist() for l in range(L)]
    return Association(alpha=alpha, served_sets=served, removed=removed).validate(N_RF)


def exhaustive_match(channels: ChannelSet, scn: Scenario) -> Association:
    """Capacity-feasible assignment maximizing the sum channel gain exactly."""
    L, K, N_RF = scn.L, scn.K, scn.N_RF
    if K > 12 or L > 4:
        raise ValueError(f"instance too large for enumeration: K={K}, L={L}")
    if K > L * N_RF:
        raise ValueError(f"infeasible capacity: K={K} > L*N_RF={L * N_RF}")
    gains = gain_matrix(channels)

    best = [-np.inf, None]
    assign = np.empty(K, dtype=int)
    load = np.zeros(L, dtype=int)

    def rec(k, total):
        if k == K:
            if total > best[0]:
                best[0] = total
                best[1] = assign.copy()
            return
        # optimistic bound: remaining users get their best BS unconditionally
        bound = total + sum(gains[:, j].max() for j in range(k, K))
        if bound <= best[0]:
            return
        for l in range(L):
            if load[l] < N_RF:
                assign[k] = l
                load[l] += 1
                rec(k + 1, total + gains[l, k])
                load[l] -= 1

    rec(0, 0.0)
    alpha = np.zeros((L, K), dtype=int)
    alpha[best[1], np.arange(K)] = 1
    served = [np.flatnonzero(alpha[l]).tolist() for l in range(L)]
    return Association(alpha=alpha, served_sets=served).validate(N_RF)


def is_blocking_pair_free(assoc: Association, gains: np.ndarray, N_RF: int) -> bool:
    """Stability check under the index-tie-broken strict preferences: a user
    preferring another BS must find it full of users that BS prefers."""
    L, K = gains.shape
    match_of = {k: int(np.flatnonzero(assoc.alpha[:, k])[0]) for k in range(K)}
    for k in range(K):
        mk = match_of[k]
        for l in range(L):
            if l == mk or (gains[l, k], -l) <= (gains[mk, k], -mk):
                continue
            members = np.flatnonzero(assoc.alpha[l])
            if len(members) < N_RF:
                return False
            if not all((gains[l, m], -m) > (gains[l, k], -k)
                       for m in members):
                return False
    return True
