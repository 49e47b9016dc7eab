"""Exact solvers for small graphs.

Budgets count search-tree nodes, never wall time, so results are reproducible.
A solve that runs out of budget returns ``status="unknown"`` with the bounds
it did establish.
"""
from __future__ import annotations

import random
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Any

from .colorings import Coloring, bad_set, dsatur_coloring, is_proper
from .graphcore import Graph, is_independent, square

DEFAULT_BUDGET = 1_000_000
LOCAL_SEARCH_STEPS = 20_000


class _OutOfBudget(Exception):
    pass


@dataclass
class SolveResult:
    status: str  # "exact" or "unknown"
    value: int | None
    lower: int
    upper: int | None
    witness: Any = None
    nodes: int = 0
    elapsed: float = 0.0

    @property
    def exact(self) -> bool:
        return self.status == "exact"

    def describe(self):
        """The value, or ``"unknown[lb,ub]"``."""
        return self.value if self.exact else f"unknown[{self.lower},{self.upper}]"


@dataclass
class FindResult:
    status: str  # "found", "none" or "unknown"
    coloring: Coloring | None = None
    nodes: int = 0
    notes: list[str] = field(default_factory=list)


# --- chromatic number -------------------------------------------------------

def greedy_clique(G: Graph) -> list[int]:
    best: list[int] = []
    for start in sorted(range(G.n), key=lambda v: -G.degree(v)):
        clique = [start]
        cands = set(G.adj[start])
        while cands:
            v = max(cands, key=lambda u: (len(cands & G.adj_sets[u]), -u))
            clique.append(v)
            cands &= G.adj_sets[v]
        if len(clique) > len(best):
            best = clique
    return best


def chromatic_number(G: Graph, budget: int = DEFAULT_BUDGET) -> SolveResult:
    """Branch and bound with DSATUR branching, clique lower bound, DSATUR upper bound."""
    t0 = time.perf_counter()
    if G.n == 0:
        return SolveResult("exact", 0, 0, 0, Coloring([]), 0, 0.0)
    clique = greedy_clique(G)
    lower = len(clique)
    greedy = dsatur_coloring(G)
    best = [greedy[v] for v in range(G.n)]
    upper = max(best) + 1
    nodes = 0
    if upper > lower:
        colors = [-1] * G.n
        # sat[v][c] = number of colored neighbors of v with color c
        sat = [[0] * upper for _ in range(G.n)]
        satdeg = [0] * G.n
        # pre-color the clique: fixed colors break symmetry without losing optimality
        for c, v in enumerate(clique):
            colors[v] = c
            for u in G.adj[v]:
                if sat[u][c] == 0:
                    satdeg[u] += 1
                sat[u][c] += 1
        state = {"upper": upper, "best": best}

        def recurse(n_colored: int, used: int):
            nonlocal nodes
            nodes += 1
            if nodes > budget:
                raise _OutOfBudget
            if n_colored == G.n:
                state["upper"] = used
                state["best"] = list(colors)
                return
            v = -1
            key = (-1, -1)
            for u in range(G.n):
                if colors[u] < 0:
                    k = (satdeg[u], G.degree(u))
                    if k > key:
                        key, v = k, u
            limit = min(used + 1, state["upper"] - 1)
            for c in range(limit):
                if sat[v][c]:
                    continue
                colors[v] = c
                for u in G.adj[v]:
                    if sat[u][c] == 0:
                        satdeg[u] += 1
                    sat[u][c] += 1
                recurse(n_colored + 1, max(used, c + 1))
                for u in G.adj[v]:
                    sat[u][c] -= 1
                    if sat[u][c] == 0:
                        satdeg[u] -= 1
                colors[v] = -1
                if state["upper"] <= lower:
                    return

        try:
            recurse(len(clique), len(clique))
        except _OutOfBudget:
            return SolveResult("unknown", None, lower, state["upper"], Coloring(state["best"]), nodes,
                               time.perf_counter() - t0)
        upper, best = state["upper"], state["best"]
    return SolveResult("exact", upper, upper, upper, Coloring(best), nodes, time.perf_counter() - t0)


# --- r-dynamic search -------------------------------------------------------

def bfs_order(G: Graph) -> list[int]:
    """BFS from a maximum-degree root, restarting in each component."""
    seen = [False] * G.n
    order = []
    for root in sorted(range(G.n), key=lambda v: (-G.degree(v), v)):
        if seen[root]:
            continue
        seen[root] = True
        queue = deque([root])
        while queue:
            v = queue.popleft()
            order.append(v)
            for u in sorted(G.adj[v], key=lambda u: (-G.degree(u), u)):
                if not seen[u]:
                    seen[u] = True
                    queue.append(u)
    return order


class _DynamicSearch:
    """Backtracking for an r-dynamic k-coloring with canonical color introduction."""

    def __init__(self, G: Graph, r: int, budget: int):
        self.G = G
        self.r = r
        self.budget = budget
        self.nodes = 0
        self.order = bfs_order(G)
        self.need = [min(r, G.degree(v)) for v in range(G.n)]

    def search(self, k: int) -> list[int] | None:
        G, need = self.G, self.need
        colors = [-1] * G.n
        seen = [dict() for _ in range(G.n)]  # color -> multiplicity among colored nbrs
        open_nbrs = [G.degree(v) for v in range(G.n)]
        order = self.order

        def feasible_at(u: int) -> bool:
            return len(seen[u]) + open_nbrs[u] >= need[u]

        def recurse(i: int, used: int) -> bool:
            self.nodes += 1
            if self.nodes > self.budget:
                raise _OutOfBudget
            if i == G.n:
                return True
            v = order[i]
            nbrs = G.adj[v]
            for c in range(min(used + 1, k)):
                if any(colors[u] == c for u in nbrs):
                    continue
                colors[v] = c
                for u in nbrs:
                    s = seen[u]
                    s[c] = s.get(c, 0) + 1
                    open_nbrs[u] -= 1
                ok = all(feasible_at(u) for u in nbrs)
                if ok and recurse(i + 1, max(used, c + 1)):
                    return True
                for u in nbrs:
                    s = seen[u]
                    s[c] -= 1
                    if not s[c]:
                        del s[c]
                    open_nbrs[u] += 1
                colors[v] = -1
            return False

        return list(colors) if recurse(0, 0) else None


def dynamic_lower_bound(G: Graph, r: int) -> int:
    if G.n == 0:
        return 0
    return max(min(r, G.degree(v)) + 1 for v in range(G.n))


def r_dynamic_number(G: Graph, r: int, budget: int = DEFAULT_BUDGET, chi: SolveResult | None = None) -> SolveResult:
    """Exact chi_r by trying k = lower bound, lower bound + 1, ... ."""
    t0 = time.perf_counter()
    if r < 1:
        raise ValueError("r must be >= 1")
    if G.n == 0:
        return SolveResult("exact", 0, 0, 0, Coloring([]), 0, 0.0)
    chi = chromatic_number(G, budget) if chi is None else chi
    nodes = chi.nodes
    lower = max(chi.lower, dynamic_lower_bound(G, r))
    search = _DynamicSearch(G, r, max(budget - nodes, 0))
    k = lower
    while k <= G.n:
        try:
            found = search.search(k)
        except _OutOfBudget:
            # a proper coloring of the square is r-dynamic for every r
            sq = dsatur_coloring(square(G))
            witness = Coloring(sq[v] for v in range(G.n))
            status = "exact" if witness.k <= k else "unknown"
            return SolveResult(status, k if status == "exact" else None, k, witness.k, witness,
                               nodes + search.nodes, time.perf_counter() - t0)
        if found is not None:
            return SolveResult("exact", k, k, k, Coloring(found), nodes + search.nodes,
                               time.perf_counter() - t0)
        k += 1
    raise AssertionError("all-distinct coloring is always r-dynamic")


# --- find_coloring ----------------------------------------------------------

def _adjacent_bad_pairs(G: Graph, colors, bad) -> list[tuple[int, int]]:
    return [(u, v) for u in sorted(bad) for v in G.adj[u] if v in bad and u < v]


def _proper_k_coloring(G: Graph, k: int, budget: int) -> FindResult:
    greedy = dsatur_coloring(G)
    if G.n == 0 or max(greedy.values()) < k:
        return FindResult("found", Coloring(greedy[v] for v in range(G.n)))
    res = chromatic_number(G, budget)
    if res.exact:
        if res.value <= k:
            return FindResult("found", res.witness, res.nodes)
        return FindResult("none", None, res.nodes)
    if res.upper is not None and res.upper <= k:
        return FindResult("found", res.witness, res.nodes)
    if res.lower > k:
        return FindResult("none", None, res.nodes)
    return FindResult("unknown", None, res.nodes)


def _enumerate_proper(G: Graph, k: int, budget: int):
    """Yield canonical proper colorings with at most k colors (order-based)."""
    order = bfs_order(G)
    colors = [-1] * G.n
    count = [0]

    def recurse(i, used):
        count[0] += 1
        if count[0] > budget:
            raise _OutOfBudget
        if i == G.n:
            yield list(colors)
            return
        v = order[i]
        for c in range(min(used + 1, k)):
            if any(colors[u] == c for u in G.adj[v]):
                continue
            colors[v] = c
            yield from recurse(i + 1, max(used, c + 1))
            colors[v] = -1

    yield from recurse(0, 0)


def find_coloring(G: Graph, k: int, mode: str = "proper", r: int = 2, budget: int = DEFAULT_BUDGET,
                  seed: int = 0, start: Coloring | None = None) -> FindResult:
    """Search for a k-coloring satisfying ``mode``.

    Modes: ``proper``, ``r_dynamic`` (uses ``r``), ``independent_bad_set``
    (proper coloring whose 2-bad vertices form an independent set).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if mode == "proper":
        return _proper_k_coloring(G, k, budget)
    if mode == "r_dynamic":
        search = _DynamicSearch(G, r, budget)
        try:
            found = search.search(k)
        except _OutOfBudget:
            return FindResult("unknown", None, search.nodes)
        if found is None:
            return FindResult("none", None, search.nodes)
        return FindResult("found", Coloring(found), search.nodes)
    if mode == "independent_bad_set":
        return _independent_bad_set(G, k, budget, seed, start)
    raise ValueError(f"unknown mode {mode!r}")


def _independent_bad_set(G: Graph, k: int, budget: int, seed: int, start: Coloring | None) -> FindResult:
    notes = []
    if start is not None:
        if not is_proper(G, start) or start.k > k:
            raise ValueError("start coloring must be proper with at most k colors")
        base = FindResult("found", start)
    else:
        base = _proper_k_coloring(G, k, budget)
    nodes = base.nodes
    if base.status == "none":
        return FindResult("none", None, nodes, ["no proper k-coloring"])
    if base.status == "found":
        rng = random.Random(seed)
        colors = list(base.coloring.colors)
        palette = range(max(k, max(colors, default=-1) + 1))
        steps = min(budget, LOCAL_SEARCH_STEPS)
        for step in range(steps):
            pairs = _adjacent_bad_pairs(G, colors, bad_set(G, colors, 2).bad)
            if not pairs:
                return FindResult("found", Coloring(colors), nodes + step, notes)
            u, v = rng.choice(pairs)
            x = rng.choice((u, v))
            taken = {colors[w] for w in G.adj[x]}
            options = [c for c in palette if c not in taken and c != colors[x]]
            if not options:
                continue
            scores = {}
            old = colors[x]
            for c in options:
                colors[x] = c
                scores[c] = len(_adjacent_bad_pairs(G, colors, bad_set(G, colors, 2).bad))
            colors[x] = old
            low = min(scores.values())
            colors[x] = rng.choice([c for c, s in scores.items() if s == low])
        nodes += steps
        notes.append("local search exhausted")
    if G.n <= 12:
        try:
            for colors in _enumerate_proper(G, k, budget):
                if is_independent(G, bad_set(G, colors, 2).bad):
                    return FindResult("found", Coloring(colors), nodes, notes + ["exhaustive"])
        except _OutOfBudget:
            return FindResult("unknown", None, nodes + budget, notes)
        return FindResult("none", None, nodes, notes + ["exhaustive"])
    return FindResult("unknown", None, nodes, notes)


# --- alpha and gamma --------------------------------------------------------

def independence_number(G: Graph, budget: int = DEFAULT_BUDGET) -> SolveResult:
    nodes = 0
    best: list[int] = []

    def recurse(cands: frozenset, chosen: list[int]):
        nonlocal nodes, best
        nodes += 1
        if nodes > budget:
            raise _OutOfBudget
        if not cands:
            if len(chosen) > len(best):
                best = list(chosen)
            return
        if len(chosen) + len(cands) <= len(best):
            return
        v = max(cands, key=lambda u: (len(G.adj_sets[u] & cands), -u))
        if not (G.adj_sets[v] & cands):
            # isolated within candidates: always take it
            recurse(cands - {v}, chosen + [v])
            return
        recurse(cands - G.adj_sets[v] - {v}, chosen + [v])
        recurse(cands - {v}, chosen)

    try:
        recurse(frozenset(range(G.n)), [])
    except _OutOfBudget:
        return SolveResult("unknown", None, len(best), G.n, sorted(best), nodes)
    return SolveResult("exact", len(best), len(best), len(best), sorted(best), nodes)


def domination_number(G: Graph, budget: int = DEFAULT_BUDGET) -> SolveResult:
    closed = [G.adj_sets[v] | {v} for v in range(G.n)]
    top = max((len(c) for c in closed), default=1)
    greedy: list[int] = []
    undominated = set(range(G.n))
    while undominated:
        v = max(range(G.n), key=lambda u: (len(closed[u] & undominated), -u))
        greedy.append(v)
        undominated -= closed[v]
    best = greedy
    nodes = 0

    def recurse(undom: frozenset, chosen: list[int]):
        nonlocal nodes, best
        nodes += 1
        if nodes > budget:
            raise _OutOfBudget
        if not undom:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        if len(chosen) + -(-len(undom) // top) >= len(best):
            return
        target = min(undom, key=lambda u: (len(closed[u]), u))
        for w in sorted(closed[target], key=lambda w: -len(closed[w] & undom)):
            recurse(undom - closed[w], chosen + [w])

    try:
        recurse(frozenset(range(G.n)), [])
    except _OutOfBudget:
        lb = -(-G.n // top) if G.n else 0
        return SolveResult("unknown", None, lb, len(best), sorted(best), nodes)
    return SolveResult("exact", len(best), len(best), len(best), sorted(best), nodes)


def invariant_numbers(G: Graph, budget: int = DEFAULT_BUDGET) -> tuple[SolveResult, SolveResult]:
    return independence_number(G, budget), domination_number(G, budget)

