"""Dynamic coloring from a base coloring via transversal forests.

Bad vertices of the base coloring are split into classes by a proper coloring
of G^2[B] minus E(G); inside a class the neighborhoods are pairwise disjoint.
For each class we pick a set T_i meeting every bad neighborhood such that
H_i[T_i] is a forest, 2-color that forest with two fresh colors, and keep the
base colors everywhere else. The result uses at most k + 2l colors.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import product
from math import prod
from typing import Sequence

from .colorings import Coloring, bad_set, is_proper, is_r_dynamic
from .exact import chromatic_number, r_dynamic_number
from .graphcore import Graph, VertexSet, degree_stats, from_edge_list, induced_subgraph, neighborhood, remove_edges, square

EXHAUSTIVE_LIMIT = 10 ** 6


class StructuralError(AssertionError):
    """A decomposition or gadget broke an invariant the construction relies on."""

    def __init__(self, message: str, vertices: Sequence[int] = ()):
        super().__init__(f"{message}: {sorted(vertices)}")
        self.vertices = sorted(vertices)


class TransversalFailure(RuntimeError):
    def __init__(self, message: str, certified_none: bool = False):
        super().__init__(message)
        self.certified_none = certified_none


@dataclass
class BadClassDecomposition:
    B: VertexSet
    l: int
    classes: list[list[int]]
    l_exact: bool


@dataclass
class ClassGadget:
    i: int
    members: list[int]
    S: VertexSet  # tractable vertices
    H: Graph  # on the full id range; only ``vertices`` carry edges
    vertices: VertexSet  # N_G(B_i)
    fix_pairs: dict[int, tuple[int, int]]
    case_b: list[int]
    max_degree_ok: bool
    T: VertexSet = frozenset()


@dataclass
class TransversalResult:
    T: VertexSet
    swaps: int
    hypothesis_ok: bool
    exhaustive: bool = False


def bad_class_partition(G: Graph, c: Coloring, budget: int = 100_000) -> BadClassDecomposition:
    if not is_proper(G, c):
        raise ValueError("base coloring must be proper")
    B = bad_set(G, c, 2).bad
    if not B:
        return BadClassDecomposition(B, 0, [], True)
    sub, members = induced_subgraph(square(G), B)
    index = {v: i for i, v in enumerate(members)}
    g_edges = [(index[u], index[v]) for u, v in G.edges() if u in index and v in index]
    conflict = remove_edges(sub, g_edges)
    res = chromatic_number(conflict, budget)
    # the solver keeps its best coloring when it runs out of budget
    col = res.witness.normalized()
    classes: dict[int, list[int]] = {}
    for i, v in enumerate(members):
        classes.setdefault(col[i], []).append(v)
    ordered = [sorted(cls) for _, cls in sorted(classes.items())]
    dec = BadClassDecomposition(B, len(ordered), ordered, res.exact)
    check_decomposition(G, dec)
    return dec


def check_decomposition(G: Graph, dec: BadClassDecomposition) -> None:
    seen = set()
    for cls in dec.classes:
        owner: dict[int, int] = {}
        for v in cls:
            if v in seen:
                raise StructuralError("vertex in two classes", [v])
            seen.add(v)
            for u in G.adj[v]:
                if u in owner:
                    raise StructuralError("class members share a neighbor", [owner[u], v])
                owner[u] = v
    if seen != set(dec.B):
        raise StructuralError("classes do not partition B", set(dec.B) ^ seen)


def build_class_gadget(G: Graph, dec: BadClassDecomposition, i: int) -> ClassGadget:
    members = dec.classes[i]
    Bi = set(members)
    NBi = neighborhood(G, Bi)
    prof = degree_stats(G)
    d = prof.Delta
    S = frozenset(v for v in Bi if v in NBi)

    # each vertex of N(B_i) sees at most one tractable vertex; each tractable one sees exactly one
    for u in NBi:
        hits = [v for v in G.adj[u] if v in S]
        if len(hits) > 1:
            raise StructuralError(f"vertex {u} adjacent to several tractable vertices", hits)
    for w in S:
        hits = [v for v in G.adj[w] if v in S]
        if len(hits) != 1:
            raise StructuralError(f"tractable vertex {w} adjacent to {len(hits)} tractable vertices", [w] + hits)

    inside = {x: sum(1 for y in G.adj[x] if y in NBi) for x in NBi}
    fix_pairs: dict[int, tuple[int, int]] = {}
    case_b: list[int] = []
    for u in range(G.n):
        if u in dec.B or G.degree(u) < 2:
            continue
        nbrs = G.adj[u]
        if not all(x in NBi for x in nbrs):
            continue
        if any(G.has_edge(x, y) for j, x in enumerate(nbrs) for y in nbrs[j + 1:]):
            continue
        light = [x for x in nbrs if inside[x] <= d - 1]
        if len(light) >= 2:
            fix_pairs[u] = (light[0], light[1])
        else:
            case_b.append(u)

    edges = [(x, y) for x, y in G.edges() if x in NBi and y in NBi]
    edges += list(fix_pairs.values())
    H = from_edge_list(G.n, edges)
    for x in S:
        if sum(1 for y in H.adj[x] if y in S) > 1:
            raise StructuralError("tractable vertices do not induce a matching in H_i", [x])
    max_degree_ok = H.max_degree <= d
    return ClassGadget(i, list(members), S, H, NBi, fix_pairs, case_b, max_degree_ok)


def find_cycle(H: Graph, T: Sequence[int]) -> list[int] | None:
    """Vertices of some cycle in H[T], or None if H[T] is a forest."""
    members = set(T)
    parent = {v: v for v in members}

    def root(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    forest: dict[int, list[int]] = {v: [] for v in members}
    for u in sorted(members):
        for v in H.adj[u]:
            if v in members and u < v:
                ru, rv = root(u), root(v)
                if ru == rv:
                    # path v -> u inside the current forest closes the cycle
                    prev = {v: None}
                    stack = [v]
                    while stack:
                        x = stack.pop()
                        if x == u:
                            break
                        for y in forest[x]:
                            if y not in prev:
                                prev[y] = x
                                stack.append(y)
                    cyc = []
                    x = u
                    while x is not None:
                        cyc.append(x)
                        x = prev[x]
                    return cyc
                parent[ru] = rv
                forest[u].append(v)
                forest[v].append(u)
    return None


def is_forest(H: Graph, T: Sequence[int]) -> bool:
    return find_cycle(H, T) is None


def transversal_forest(H: Graph, parts: Sequence[Sequence[int]], budget: int = 10_000, seed: int = 0,
                       fixed: Sequence[int] = ()) -> TransversalResult:
    """One vertex per part such that H[T] (together with ``fixed``) is a forest.

    Randomized swap search: start from random representatives; while a cycle
    exists, move a representative on it to a random alternative in its part.
    Falls back to exhaustive search when the product of part sizes is small.
    """
    parts = [sorted(p) for p in parts]
    if any(not p for p in parts):
        raise ValueError("parts must be nonempty")
    flat = [v for p in parts for v in p]
    if len(flat) != len(set(flat)):
        raise ValueError("parts must be disjoint")
    hypothesis_ok = all(len(p) >= H.max_degree for p in parts)
    rng = random.Random(seed)
    part_of = {v: i for i, p in enumerate(parts) for v in p}
    reps = [rng.choice(p) for p in parts]
    fixed = list(fixed)
    swaps = 0
    while True:
        cyc = find_cycle(H, reps + fixed)
        if cyc is None:
            return TransversalResult(frozenset(reps), swaps, hypothesis_ok)
        movable = [v for v in cyc if v in part_of and len(parts[part_of[v]]) > 1]
        if not movable or swaps >= budget:
            break
        v = rng.choice(movable)
        i = part_of[v]
        reps[i] = rng.choice([u for u in parts[i] if u != v])
        swaps += 1
    if prod(len(p) for p in parts) <= EXHAUSTIVE_LIMIT:
        for choice in product(*parts):
            if is_forest(H, list(choice) + fixed):
                return TransversalResult(frozenset(choice), swaps, hypothesis_ok, exhaustive=True)
        raise TransversalFailure("no transversal induces a forest", certified_none=True)
    raise TransversalFailure(f"swap search exhausted after {swaps} swaps")


def two_color_forest(H: Graph, T: Sequence[int]) -> dict[int, int]:
    members = set(T)
    side: dict[int, int] = {}
    for s in sorted(members):
        if s in side:
            continue
        side[s] = 0
        stack = [s]
        while stack:
            x = stack.pop()
            for y in H.adj[x]:
                if y in members and y not in side:
                    side[y] = 1 - side[x]
                    stack.append(y)
    return side


@dataclass
class SquareBoundResult:
    coloring: Coloring
    k: int
    l: int
    l_exact: bool
    classes: list[list[int]]
    per_class: list[dict]
    valid: bool
    seed: int
    attempts: int
    route: str = "transversal"
    warnings: list[str] = field(default_factory=list)
    gadgets: list[ClassGadget] = field(default_factory=list, repr=False)

    @property
    def colors_used(self) -> int:
        return self.coloring.k

    @property
    def bound(self) -> int:
        return self.k + 2 * self.l

    def record(self) -> dict:
        return {
            "method": "square",
            "k": self.k,
            "l": self.l,
            "l_exact": self.l_exact,
            "classes": self.classes,
            "per_class": self.per_class,
            "colors_used": self.colors_used,
            "valid": self.valid,
            "seed": self.seed,
            "attempts": self.attempts,
            "route": self.route,
            "coloring": list(self.coloring.colors),
        }

    def to_json(self) -> str:
        return json.dumps(self.record(), sort_keys=True)


def _assemble(G: Graph, c: Coloring, gadgets: list[ClassGadget], seed: int, budget: int):
    offset = max(c.colors) + 1
    colors = list(c.colors)
    owner: dict[int, int] = {}
    per_class = []
    for g in gadgets:
        rest = [v for v in g.members if v not in g.S]
        parts = [G.adj[v] for v in rest]
        res = transversal_forest(g.H, parts, budget, seed + g.i, fixed=sorted(g.S))
        T = frozenset(res.T) | g.S
        g.T = T
        forest_ok = is_forest(g.H, sorted(T))
        hits = all(T & G.adj_sets[v] for v in g.members)
        singles = all(len(res.T & G.adj_sets[v]) == 1 for v in rest)
        if not (forest_ok and hits and singles):
            raise StructuralError(f"class {g.i} transversal checks failed", sorted(T))
        sides = two_color_forest(g.H, sorted(T))
        for v in sorted(T):
            if v not in owner:
                owner[v] = g.i
                colors[v] = offset + 2 * g.i + sides[v]
        per_class.append({"i": g.i, "S": len(g.S), "T": len(T), "forest_ok": forest_ok, "swaps": res.swaps,
                          "exhaustive": res.exhaustive, "hypothesis_ok": res.hypothesis_ok,
                          "fix_pairs": len(g.fix_pairs), "case_b": len(g.case_b),
                          "H_max_degree_ok": g.max_degree_ok})
    return Coloring(colors), per_class


def square_bound_coloring(G: Graph, c: Coloring, seed: int = 0, budget: int = 100_000,
                          attempts: int = 50) -> SquareBoundResult:
    """2-dynamic coloring with at most k + 2l colors, k = colors of c, l = classes of bad vertices."""
    prof = degree_stats(G)
    if not prof.regular:
        raise ValueError("square-bound pipeline needs a regular graph")
    dec = bad_class_partition(G, c, budget)
    k = c.k
    if not dec.B:
        return SquareBoundResult(c, k, 0, True, [], [], is_r_dynamic(G, c, 2), seed, 0, "unchanged")
    if prof.d <= 2:
        res = r_dynamic_number(G, 2, budget)
        if res.exact and res.value <= k + 2 * dec.l:
            return SquareBoundResult(res.witness, k, dec.l, dec.l_exact, dec.classes, [],
                                     is_r_dynamic(G, res.witness, 2), seed, 0, "exact")
        raise TransversalFailure("exact route for degree <= 2 did not certify the bound")
    gadgets = [build_class_gadget(G, dec, i) for i in range(dec.l)]
    warnings = [f"class {g.i}: H_i max degree exceeds d" for g in gadgets if not g.max_degree_ok]
    failures = []
    for attempt in range(attempts):
        try:
            col, per_class = _assemble(G, c, gadgets, seed + 1000 * attempt, budget)
        except TransversalFailure as exc:
            failures.append(str(exc))
            continue
        if is_r_dynamic(G, col, 2):
            return SquareBoundResult(col, k, dec.l, dec.l_exact, dec.classes, per_class, True, seed,
                                     attempt + 1, "transversal", warnings, gadgets)
        failures.append(f"attempt {attempt}: bad vertices {sorted(bad_set(G, col, 2).bad)}")
    raise TransversalFailure(f"no valid assembly in {attempts} attempts; last: {failures[-1:]}")
