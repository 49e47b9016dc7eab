"""Colorings, the r-dynamic checker, and greedy bounded-palette coloring."""
from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graphcore import Graph, VertexSet


@dataclass(frozen=True)
class Coloring:
    colors: tuple[int, ...]

    def __init__(self, colors: Iterable[int]):
        object.__setattr__(self, "colors", tuple(int(c) for c in colors))

    def __getitem__(self, v: int) -> int:
        return self.colors[v]

    def __len__(self):
        return len(self.colors)

    @property
    def k(self) -> int:
        return len(set(self.colors))

    def classes(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for v, c in enumerate(self.colors):
            out.setdefault(c, []).append(v)
        return out

    def normalized(self) -> "Coloring":
        """Relabel colors to 0..k-1 in order of first appearance."""
        relabel: dict[int, int] = {}
        return Coloring(relabel.setdefault(c, len(relabel)) for c in self.colors)

    def to_json(self) -> str:
        return json.dumps(list(self.colors))

    @classmethod
    def from_json(cls, text: str) -> "Coloring":
        return cls(json.loads(text))

    def to_lines(self) -> str:
        """``s v c`` lines, vertices 1-based as in DIMACS."""
        return "".join(f"s {v + 1} {c}\n" for v, c in enumerate(self.colors))

    @classmethod
    def from_lines(cls, text: str) -> "Coloring":
        pairs = {}
        for line in text.splitlines():
            parts = line.split()
            if not parts or parts[0] != "s":
                continue
            pairs[int(parts[1]) - 1] = int(parts[2])
        if sorted(pairs) != list(range(len(pairs))):
            raise ValueError("coloring lines do not cover vertices 1..n")
        return cls(pairs[v] for v in range(len(pairs)))


@dataclass(frozen=True)
class Deficiency:
    r: int
    bad: VertexSet


def _check_total(G: Graph, c: Coloring | Sequence[int]) -> None:
    if len(c) != G.n:
        raise ValueError(f"coloring covers {len(c)} vertices, graph has {G.n}")


def is_proper(G: Graph, c: Coloring | Sequence[int]) -> bool:
    _check_total(G, c)
    return all(c[u] != c[v] for u, v in G.edges())


def bad_set(G: Graph, c: Coloring | Sequence[int], r: int) -> Deficiency:
    if r < 1:
        raise ValueError("r must be a positive integer")
    _check_total(G, c)
    bad = frozenset(
        v for v in range(G.n)
        if len({c[u] for u in G.adj[v]}) < min(r, len(G.adj[v]))
    )
    return Deficiency(r, bad)


def is_r_dynamic(G: Graph, c: Coloring | Sequence[int], r: int) -> bool:
    return is_proper(G, c) and not bad_set(G, c, r).bad


def default_order(G: Graph) -> list[int]:
    return sorted(range(G.n), key=lambda v: (-G.degree(v), v))


class RepairBudgetExhausted(RuntimeError):
    """Greedy-with-repair ran out of steps; carries the best assignment seen."""

    def __init__(self, best: Coloring, conflicts: int, deficiency: Deficiency, steps: int):
        super().__init__(f"repair budget exhausted after {steps} steps, {conflicts} conflicts remain")
        self.best = best
        self.conflicts = conflicts
        self.deficiency = deficiency
        self.steps = steps


class _ConflictState:
    """Incremental cost: monochromatic edges plus per-vertex missing neighbor colors."""

    def __init__(self, G: Graph, colors: list[int], r: int):
        self.G = G
        self.colors = colors
        self.need = [min(r, G.degree(v)) for v in range(G.n)]
        self.seen = [Counter(colors[u] for u in G.adj[v]) for v in range(G.n)]

    def vertex_conflicts(self, v: int) -> int:
        clash = self.seen[v][self.colors[v]]
        short = max(0, self.need[v] - len(self.seen[v]))
        return clash + short

    def total(self) -> int:
        clashes = sum(self.seen[v][self.colors[v]] for v in range(self.G.n)) // 2
        short = sum(max(0, self.need[v] - len(self.seen[v])) for v in range(self.G.n))
        return clashes + short

    def delta(self, x: int, new: int) -> int:
        old = self.colors[x]
        if new == old:
            return 0
        d = self.seen[x][new] - self.seen[x][old]
        for u in self.G.adj[x]:
            seen = self.seen[u]
            before = len(seen)
            after = before - (seen[old] == 1) + (seen[new] == 0)
            need = self.need[u]
            d += max(0, need - after) - max(0, need - before)
        return d

    def assign(self, x: int, new: int) -> None:
        old = self.colors[x]
        if new == old:
            return
        for u in self.G.adj[x]:
            seen = self.seen[u]
            seen[old] -= 1
            if not seen[old]:
                del seen[old]
            seen[new] += 1
        self.colors[x] = new


def greedy_bounded_palette(G: Graph, palette_size: int, r: int = 2, order: Sequence[int] | None = None,
                           repair_budget: int = 100_000, seed: int = 0, noise: float = 0.1) -> Coloring:
    """Color G with colors ``0..palette_size-1`` so that it is r-dynamic.

    Greedy pass first: each vertex takes the smallest color that avoids its
    colored neighbors and does not leave an already-complete neighbor short of
    colors. Remaining conflicts are repaired by min-conflict recoloring with
    seeded random tie-breaking (and a small random-walk probability).
    Raises RepairBudgetExhausted if conflicts survive ``repair_budget`` steps.
    """
    if palette_size < 1:
        raise ValueError("palette_size must be >= 1")
    if r < 1:
        raise ValueError("r must be >= 1")
    order = default_order(G) if order is None else list(order)
    if sorted(order) != list(range(G.n)):
        raise ValueError("order must be a permutation of the vertices")
    rng = random.Random(seed)

    colors = [-1] * G.n
    uncolored = [G.degree(v) for v in range(G.n)]
    for v in order:
        taken = {colors[u] for u in G.adj[v] if colors[u] >= 0}
        for u in G.adj[v]:
            uncolored[u] -= 1
        chosen = None
        fallback = None
        for col in range(palette_size):
            if col in taken:
                continue
            if fallback is None:
                fallback = col
            ok = True
            for u in G.adj[v]:
                if uncolored[u] == 0:
                    nbr = {colors[w] for w in G.adj[u] if colors[w] >= 0 and w != v}
                    nbr.add(col)
                    if len(nbr) < min(r, G.degree(u)):
                        ok = False
                        break
            if ok:
                chosen = col
                break
        if chosen is None:
            chosen = fallback if fallback is not None else rng.randrange(palette_size)
        colors[v] = chosen

    state = _ConflictState(G, colors, r)
    cost = state.total()
    best, best_cost = list(colors), cost
    steps = 0
    while cost > 0:
        if steps >= repair_budget:
            best_c = Coloring(best)
            raise RepairBudgetExhausted(best_c, best_cost, bad_set(G, best_c, r), steps)
        steps += 1
        conflicted = [v for v in range(G.n) if state.vertex_conflicts(v)]
        v = rng.choice(conflicted)
        # a short vertex is fixed by recoloring a neighbor; a clash by recoloring itself
        if state.seen[v][colors[v]] == 0 and G.adj[v]:
            x = rng.choice(G.adj[v])
        else:
            x = v
        if palette_size == 1:
            continue
        if rng.random() < noise:
            options = [col for col in range(palette_size) if col != colors[x]]
            new = rng.choice(options)
        else:
            deltas = {col: state.delta(x, col) for col in range(palette_size) if col != colors[x]}
            low = min(deltas.values())
            new = rng.choice([col for col, d in deltas.items() if d == low])
        cost += state.delta(x, new)
        state.assign(x, new)
        if cost < best_cost:
            best, best_cost = list(colors), cost
    return Coloring(colors)


def greedy_proper(G: Graph, order: Sequence[int] | None = None) -> Coloring:
    """Plain first-fit proper coloring (at most max degree + 1 colors)."""
    order = default_order(G) if order is None else order
    colors = [-1] * G.n
    for v in order:
        taken = {colors[u] for u in G.adj[v]}
        col = 0
        while col in taken:
            col += 1
        colors[v] = col
    return Coloring(colors)


def dsatur_coloring(G: Graph, vertices: Iterable[int] | None = None) -> dict[int, int]:
    """DSATUR greedy on the subgraph induced by ``vertices`` (default: all)."""
    active = set(range(G.n)) if vertices is None else set(vertices)
    colors: dict[int, int] = {}
    sat: dict[int, set[int]] = {v: set() for v in active}
    deg = {v: sum(1 for u in G.adj[v] if u in active) for v in active}
    while len(colors) < len(active):
        v = max((u for u in active if u not in colors), key=lambda u: (len(sat[u]), deg[u], -u))
        col = 0
        while col in sat[v]:
            col += 1
        colors[v] = col
        for u in G.adj[v]:
            if u in active and u not in colors:
                sat[u].add(col)
    return colors
