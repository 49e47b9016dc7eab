import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chromadyn import generators
from chromadyn.colorings import Coloring, bad_set, is_r_dynamic
from chromadyn.exact import chromatic_number
from chromadyn.graphcore import from_edge_list, induced_subgraph, neighborhood
from chromadyn.transversal import (
    StructuralError,
    TransversalFailure,
    bad_class_partition,
    build_class_gadget,
    check_decomposition,
    find_cycle,
    is_forest,
    square_bound_coloring,
    transversal_forest,
    two_color_forest,
)

from oracles import distances


def bipartition(G):
    side = [-1] * G.n
    for s in range(G.n):
        if side[s] < 0:
            side[s] = 0
            stack = [s]
            while stack:
                x = stack.pop()
                for y in G.adj[x]:
                    if side[y] < 0:
                        side[y] = 1 - side[x]
                        stack.append(y)
    return Coloring(side)


def test_k33_decomposition():
    G = generators.complete_bipartite(3, 3)
    dec = bad_class_partition(G, bipartition(G))
    assert dec.B == frozenset(range(6))
    assert dec.l == 3 and dec.l_exact
    for cls in dec.classes:
        assert len(cls) <= 2


def test_c6_decomposition():
    C6 = generators.cycle(6)
    dec = bad_class_partition(C6, Coloring([0, 1, 0, 1, 0, 1]))
    assert dec.B == frozenset(range(6)) and dec.l == 3
    # same-class vertices are never at distance 2
    dist = distances(6, list(C6.edges()))
    for cls in dec.classes:
        assert all(dist[u][v] != 2 for u in cls for v in cls if u != v)


def test_empty_decomposition():
    C6 = generators.cycle(6)
    dec = bad_class_partition(C6, Coloring([0, 1, 2, 0, 1, 2]))
    assert dec.l == 0 and dec.classes == []


def test_decomposition_requires_proper():
    with pytest.raises(ValueError):
        bad_class_partition(generators.cycle(4), Coloring([0, 0, 1, 1]))


def test_check_decomposition_catches_shared_neighbor():
    G = generators.cycle(6)
    dec = bad_class_partition(G, Coloring([0, 1, 0, 1, 0, 1]))
    dec.classes = [[0, 2]] + [cls for cls in dec.classes if 0 not in cls and 2 not in cls]
    with pytest.raises(StructuralError):
        check_decomposition(G, dec)


def test_single_vertex_class_gadget():
    # Petersen with a coloring that makes exactly one vertex bad
    G = generators.petersen()
    c = generators.planted_bad_coloring(G, seed=0, max_bad=1)
    dec = bad_class_partition(G, c)
    assert dec.l == 1 and len(dec.classes[0]) == 1
    g = build_class_gadget(G, dec, 0)
    v = dec.classes[0][0]
    assert g.S == frozenset()
    assert g.vertices == frozenset(G.adj[v])
    H_sub, _ = induced_subgraph(g.H, g.vertices)
    G_sub, _ = induced_subgraph(G, g.vertices)
    assert set(H_sub.edges()) >= set(G_sub.edges())


def test_transversal_singletons():
    H = generators.path(4)
    res = transversal_forest(H, [[0], [1], [2], [3]])
    assert res.T == frozenset(range(4)) and res.swaps == 0


def test_transversal_c4():
    C4 = generators.cycle(4)
    res = transversal_forest(C4, [[0, 2], [1, 3]], seed=5)
    assert len(res.T) == 2 and is_forest(C4, sorted(res.T))


def test_transversal_k4_warning():
    K4 = generators.complete(4)
    res = transversal_forest(K4, [[0, 1], [2, 3]])
    assert not res.hypothesis_ok
    assert is_forest(K4, sorted(res.T))
    assert len(res.T & {0, 1}) == 1 and len(res.T & {2, 3}) == 1


def test_transversal_certified_none():
    K3 = generators.complete(3)
    with pytest.raises(TransversalFailure) as err:
        transversal_forest(K3, [[0], [1], [2]])
    assert err.value.certified_none


def test_transversal_argument_checks():
    with pytest.raises(ValueError):
        transversal_forest(generators.cycle(4), [[0], []])
    with pytest.raises(ValueError):
        transversal_forest(generators.cycle(4), [[0, 1], [1, 2]])


def test_find_cycle():
    C5 = generators.cycle(5)
    cyc = find_cycle(C5, range(5))
    assert sorted(cyc) == [0, 1, 2, 3, 4]
    assert find_cycle(C5, [0, 1, 2, 3]) is None
    K4 = generators.complete(4)
    cyc = find_cycle(K4, range(4))
    assert len(cyc) == 3


@settings(max_examples=50)
@given(st.integers(0, 10**6), st.integers(3, 12))
def test_two_color_forest_is_proper(seed, n):
    import random
    rng = random.Random(seed)
    edges = [(v, rng.randrange(v)) for v in range(1, n) if rng.random() < 0.8]
    F = from_edge_list(n, edges)
    sides = two_color_forest(F, range(n))
    assert all(sides[u] != sides[v] for u, v in F.edges())


def test_square_bound_unchanged():
    C6 = generators.cycle(6)
    res = square_bound_coloring(C6, Coloring([0, 1, 2, 0, 1, 2]))
    assert res.route == "unchanged" and res.coloring == Coloring([0, 1, 2, 0, 1, 2])


def test_square_bound_k33():
    G = generators.complete_bipartite(3, 3)
    res = square_bound_coloring(G, bipartition(G), seed=0)
    assert (res.k, res.l) == (2, 3)
    assert res.valid and res.colors_used <= 8 and res.bound == 8


def test_square_bound_rejects_irregular():
    with pytest.raises(ValueError):
        square_bound_coloring(generators.star(3), Coloring([0, 1, 1, 1]))


@pytest.mark.parametrize("seed", range(6))
def test_square_bound_cubic(seed):
    G = generators.random_regular(20, 3, seed)
    c = chromatic_number(G).witness
    res = square_bound_coloring(G, c, seed=seed)
    assert res.valid and is_r_dynamic(G, res.coloring, 2)
    assert res.colors_used <= res.k + 2 * res.l
    dec = bad_class_partition(G, c)
    for i in range(dec.l):
        g = build_class_gadget(G, dec, i)
        # each neighbor vertex sees at most one tractable vertex; tractable ones pair up
        for u in neighborhood(G, dec.classes[i]):
            assert sum(1 for v in G.adj[u] if v in g.S) <= 1
        for w in g.S:
            assert sum(1 for v in G.adj[w] if v in g.S) == 1
        for u, (x, y) in g.fix_pairs.items():
            assert x < y and g.H.has_edge(x, y)
    for pc in res.per_class:
        assert pc["forest_ok"]


def test_square_bound_planted():
    G = generators.random_bipartite_regular(12, 3, 4)
    c = generators.planted_bad_coloring(G, seed=4)
    assert bad_set(G, c, 2).bad
    res = square_bound_coloring(G, c, seed=4)
    assert res.valid and res.colors_used <= res.bound


def test_square_bound_deterministic():
    G = generators.random_regular(16, 3, 2)
    c = chromatic_number(G).witness
    assert square_bound_coloring(G, c, seed=9).to_json() == square_bound_coloring(G, c, seed=9).to_json()
