"""Named graph families and seeded random generators."""
from __future__ import annotations

import random
from itertools import combinations

from .colorings import Coloring, bad_set, dsatur_coloring
from .graphcore import Graph, from_edge_list, is_independent


class GenerationError(RuntimeError):
    pass


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    if n < 1:
        raise ValueError("path needs n >= 1")
    return from_edge_list(n, [(i, i + 1) for i in range(n - 1)])


def complete(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete graph needs n >= 1")
    return from_edge_list(n, combinations(range(n), 2))


def complete_bipartite(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise ValueError("both sides need at least one vertex")
    return from_edge_list(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def star(leaves: int) -> Graph:
    return complete_bipartite(1, leaves)


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return from_edge_list(10, outer + spokes + inner)


def hypercube(k: int) -> Graph:
    if k < 1:
        raise ValueError("hypercube needs k >= 1")
    n = 1 << k
    return from_edge_list(n, [(v, v ^ (1 << b)) for v in range(n) for b in range(k) if v < v ^ (1 << b)])


def random_graph(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p)."""
    rng = random.Random(seed)
    return from_edge_list(n, [e for e in combinations(range(n), 2) if rng.random() < p])


def random_regular(n: int, d: int, seed: int, max_tries: int = 1000) -> Graph:
    """Pairing model: shuffle d stubs per vertex and pair them up.

    Pairs forming loops or repeated edges are discarded and their stubs
    re-paired; a dead end restarts with a fresh pairing.
    """
    if (n * d) % 2:
        raise ValueError(f"n*d must be even (n={n}, d={d})")
    if not 0 <= d < n:
        raise ValueError(f"need 0 <= d < n (n={n}, d={d})")
    rng = random.Random(seed)
    for _ in range(max_tries):
        edges: set[tuple[int, int]] = set()
        stubs = [v for v in range(n) for _ in range(d)]
        while stubs:
            rng.shuffle(stubs)
            leftover = []
            for a, b in zip(stubs[::2], stubs[1::2]):
                e = (min(a, b), max(a, b))
                if a != b and e not in edges:
                    edges.add(e)
                else:
                    leftover += [a, b]
            if len(leftover) == len(stubs):
                break  # no progress: only loops/duplicates left
            stubs = leftover
        if not stubs:
            return from_edge_list(n, sorted(edges))
    raise GenerationError(f"random_regular({n}, {d}) failed after {max_tries} pairings")


FAMILIES = {
    "cycle": cycle,
    "path": path,
    "complete": complete,
    "complete_bipartite": complete_bipartite,
    "star": star,
    "petersen": petersen,
    "hypercube": hypercube,
    "random_regular": random_regular,
    "random_graph": random_graph,
}


def generate(family: str, **params) -> Graph:
    try:
        build = FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}") from None
    return build(**params)


def random_bipartite_regular(side: int, d: int, seed: int, max_tries: int = 1000) -> Graph:
    """Triangle-free d-regular graph on 2*side vertices: pairing between the two sides."""
    if not 0 <= d <= side:
        raise ValueError(f"need 0 <= d <= side (side={side}, d={d})")
    rng = random.Random(seed)
    for _ in range(max_tries):
        edges: set[tuple[int, int]] = set()
        left = [v for v in range(side) for _ in range(d)]
        right = [side + v for v in range(side) for _ in range(d)]
        while left:
            rng.shuffle(right)
            keep_l, keep_r = [], []
            for a, b in zip(left, right):
                if (a, b) in edges:
                    keep_l.append(a)
                    keep_r.append(b)
                else:
                    edges.add((a, b))
            if len(keep_l) == len(left):
                break
            left, right = keep_l, keep_r
        if not left:
            return from_edge_list(2 * side, sorted(edges))
    raise GenerationError(f"random_bipartite_regular({side}, {d}) failed after {max_tries} pairings")


FAMILIES["random_bipartite_regular"] = random_bipartite_regular


def planted_bad_coloring(G: Graph, seed: int, max_bad: int | None = None, spread: int = 1) -> Coloring:
    """Proper coloring with deliberately many bad vertices, all pairwise non-adjacent.

    Picks vertices b whose neighborhoods are independent and can share color 0
    with every previously picked neighborhood; the rest is colored by DSATUR
    with colors >= 1, each DSATUR class split ``spread`` ways (by vertex id
    modulo ``spread``) to raise the color count. Used to exercise the D-set
    route, where random base colorings of dense graphs almost never have bad
    vertices.
    """
    rng = random.Random(seed)
    order = list(range(G.n))
    rng.shuffle(order)
    union: set[int] = set()
    picked: set[int] = set()
    for b in order:
        if max_bad is not None and len(picked) >= max_bad:
            break
        if G.degree(b) < 2 or b in union or G.adj_sets[b] & picked:
            continue
        nb = G.adj_sets[b]
        if not is_independent(G, nb):
            continue
        if any(G.adj_sets[u] & union for u in nb):
            continue
        picked.add(b)
        union |= nb
    rest = dsatur_coloring(G, set(range(G.n)) - union)
    colors = Coloring(0 if v in union else 1 + rest[v] * spread + v % spread for v in range(G.n))
    # drop planted vertices until the bad set is independent
    while not is_independent(G, bad_set(G, colors, 2).bad):
        if not picked:
            break
        b = max(picked)
        picked.discard(b)
        union = set().union(*(G.adj_sets[x] for x in picked)) if picked else set()
        rest = dsatur_coloring(G, set(range(G.n)) - union)
        colors = Coloring(0 if v in union else 1 + rest[v] * spread + v % spread for v in range(G.n))
    return colors
