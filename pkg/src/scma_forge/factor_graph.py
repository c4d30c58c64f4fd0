"""Sparse user-to-RE indicator matrix and its greedy girth-aware construction.

The K x L binary matrix fixes which user occupies which resource element:
d_v ones per column (user degree), d_f per row (RE degree). Construction
follows progressive edge growth: users are wired one edge at a time to the
RE that keeps the local graph as cycle-free as possible, with deterministic
tie-breaking so a given parameter set always yields the same matrix.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import ConstructionError, ParameterError, ValidationError


@dataclass(frozen=True)
class IndicatorMatrix:
    """Binary K x L occupancy pattern with regular degrees."""

    entries: np.ndarray
    K: int
    L: int
    d_v: int
    d_f: int

    def __post_init__(self):
        entries = np.ascontiguousarray(self.entries, dtype=np.int8)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        validate_indicator(entries, self.K, self.L, self.d_v, self.d_f)

    @classmethod
    def from_entries(cls, entries) -> "IndicatorMatrix":
        entries = np.asarray(entries, dtype=np.int8)
        if entries.ndim != 2:
            raise ValidationError("matrix shape", "entries must be 2-D")
        K, L = entries.shape
        d_v = int(entries[:, 0].sum())
        d_f = int(entries[0, :].sum())
        return cls(entries, K, L, d_v, d_f)

    def row_bitstrings(self) -> list[str]:
        return ["".join("1" if x else "0" for x in row) for row in self.entries]

    @classmethod
    def from_row_bitstrings(cls, rows: list[str]) -> "IndicatorMatrix":
        entries = np.array([[int(c) for c in row] for row in rows], dtype=np.int8)
        return cls.from_entries(entries)


@dataclass(frozen=True)
class ReUserSet:
    """Users colliding over one RE; indices are 1-based, ascending."""

    re_index: int
    users: tuple

    def __post_init__(self):
        object.__setattr__(self, "users", tuple(int(u) for u in self.users))
        if list(self.users) != sorted(set(self.users)):
            raise ValidationError("user ordering", "users must be strictly increasing")


def validate_indicator(entries: np.ndarray, K: int, L: int, d_v: int, d_f: int) -> None:
    if entries.shape != (K, L):
        raise ValidationError("matrix shape", f"expected {(K, L)}, got {entries.shape}")
    if not np.isin(entries, (0, 1)).all():
        raise ValidationError("binary entries", "entries must be 0/1")
    if not (entries.sum(axis=0) == d_v).all():
        raise ValidationError("column weight", f"every column must have exactly {d_v} ones")
    if not (entries.sum(axis=1) == d_f).all():
        raise ValidationError("row weight", f"every row must have exactly {d_f} ones")
    if K * d_f != L * d_v:
        raise ValidationError("edge count", "K*d_f must equal L*d_v")
    # Distinct footprints are only possible with more than one RE; the K=1
    # star (all users on the single RE) is allowed as a degenerate graph.
    if K > 1:
        cols = {tuple(entries[:, l]) for l in range(L)}
        if len(cols) != L:
            raise ValidationError("distinct footprints", "no two columns may be identical")


def active_users(F: IndicatorMatrix, k: int) -> ReUserSet:
    """Users occupying RE ``k`` (both 1-based), in ascending order."""
    if not 1 <= k <= F.K:
        raise IndexError(f"RE index {k} out of range [1, {F.K}]")
    users = tuple(int(l) + 1 for l in np.flatnonzero(F.entries[k - 1]))
    return ReUserSet(k, users)


def peg_construct(K: int, L: int, d_v: int) -> IndicatorMatrix:
    """Build a regular K x L indicator matrix by progressive edge growth.

    Each user node receives its d_v edges in turn. Candidate REs are those
    still below the target degree d_f and not already attached to the user;
    among them the choice is: lowest current degree first, then largest
    cycle the new edge would close (REs unreachable from the user close no
    cycle and rank highest), then lowest RE index.
    """
    if K < 1 or L < 1 or d_v < 1:
        raise ParameterError("K, L, d_v must be positive")
    if (L * d_v) % K != 0:
        raise ParameterError(f"L*d_v = {L * d_v} not divisible by K = {K}")
    if d_v > K:
        raise ParameterError(f"d_v = {d_v} exceeds the number of REs K = {K}")
    d_f = (L * d_v) // K

    user_adj = [[] for _ in range(L)]  # user -> REs
    re_adj = [[] for _ in range(K)]  # RE -> users
    degree = np.zeros(K, dtype=int)

    for l in range(L):
        for _ in range(d_v):
            candidates = [k for k in range(K) if degree[k] < d_f and k not in user_adj[l]]
            if not candidates:
                raise ConstructionError(
                    f"no RE can accept another edge for user {l + 1} "
                    f"(K={K}, L={L}, d_v={d_v})"
                )
            dist = _re_distances_from_user(user_adj, re_adj, l, K)
            # closing cycle length is dist+1; unreachable (-1) means no cycle
            def rank(k):
                cycle_merit = np.inf if dist[k] < 0 else dist[k]
                return (degree[k], -cycle_merit, k)

            best = min(candidates, key=rank)
            user_adj[l].append(best)
            re_adj[best].append(l)
            degree[best] += 1

    entries = np.zeros((K, L), dtype=np.int8)
    for l in range(L):
        entries[user_adj[l], l] = 1
    try:
        return IndicatorMatrix(entries, K, L, d_v, d_f)
    except ValidationError as exc:
        raise ConstructionError(f"degenerate parameters (K={K}, L={L}, d_v={d_v}): {exc}") from exc


def _re_distances_from_user(user_adj, re_adj, start_user: int, K: int) -> np.ndarray:
    """BFS edge-distance from ``start_user`` to every RE; -1 if unreachable."""
    dist_re = np.full(K, -1, dtype=int)
    dist_user = {start_user: 0}
    queue = deque([("u", start_user)])
    while queue:
        kind, node = queue.popleft()
        if kind == "u":
            d = dist_user[node]
            for k in user_adj[node]:
                if dist_re[k] < 0:
                    dist_re[k] = d + 1
                    queue.append(("r", k))
        else:
            d = dist_re[node]
            for u in re_adj[node]:
                if u not in dist_user:
                    dist_user[u] = d + 1
                    queue.append(("u", u))
    return dist_re


def girth(F: IndicatorMatrix) -> float:
    """Length of the shortest cycle in the bipartite graph; inf if acyclic.

    Computed by removing each edge in turn and measuring the shortest
    remaining path between its endpoints. Intended for desk-scale graphs.
    """
    best = np.inf
    for l in range(F.L):
        for k in np.flatnonzero(F.entries[:, l]):
            d = _shortest_path_without_edge(F, int(k), l)
            if d is not None:
                best = min(best, d + 1)
    return best


def _shortest_path_without_edge(F: IndicatorMatrix, k0: int, l0: int):
    """Shortest user->RE path from l0 to k0 avoiding the direct edge."""
    entries = F.entries
    dist = {("u", l0): 0}
    queue = deque([("u", l0)])
    while queue:
        kind, node = queue.popleft()
        d = dist[(kind, node)]
        if kind == "u":
            for k in np.flatnonzero(entries[:, node]):
                k = int(k)
                if node == l0 and k == k0:
                    continue  # skip the removed edge
                if ("r", k) not in dist:
                    if k == k0:
                        return d + 1
                    dist[("r", k)] = d + 1
                    queue.append(("r", k))
        else:
            for l in np.flatnonzero(entries[node, :]):
                l = int(l)
                if node == k0 and l == l0:
                    continue
                if ("u", l) not in dist:
                    dist[("u", l)] = d + 1
                    queue.append(("u", l))
    return None
