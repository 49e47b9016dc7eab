import pytest
from hypothesis import given

from chromadyn import generators
from chromadyn.colorings import (
    Coloring,
    RepairBudgetExhausted,
    bad_set,
    dsatur_coloring,
    greedy_bounded_palette,
    greedy_proper,
    is_proper,
    is_r_dynamic,
)
from chromadyn.graphcore import from_edge_list

from strategies import graphs, graphs_with_coloring


def naive_is_r_dynamic(G, colors, r):
    for v in range(G.n):
        for u in G.adj[v]:
            if colors[u] == colors[v]:
                return False
        if len({colors[u] for u in G.adj[v]}) < min(r, G.degree(v)):
            return False
    return True


def test_c5_three_coloring_is_not_2_dynamic(c5):
    c = [0, 1, 0, 1, 2]
    assert is_proper(c5, c)
    # vertices 1 and 2 each see a single color
    assert bad_set(c5, c, 2).bad == frozenset({1, 2})
    assert not is_r_dynamic(c5, c, 2)
    assert is_r_dynamic(c5, [0, 1, 2, 3, 4], 2)


def test_star_and_isolated():
    S = generators.star(5)
    assert is_r_dynamic(S, [0, 1, 1, 1, 1, 2], 2)
    assert not is_r_dynamic(S, [0, 1, 1, 1, 1, 1], 2)
    assert is_r_dynamic(from_edge_list(3, []), [0, 0, 0], 5)
    assert is_r_dynamic(generators.path(2), [0, 1], 3)


def test_partial_coloring_rejected(c5):
    with pytest.raises(ValueError):
        is_proper(c5, [0, 1])
    with pytest.raises(ValueError):
        bad_set(c5, [0, 1, 0, 1, 2], 0)


@given(graphs_with_coloring(max_n=9))
def test_checker_matches_naive(data):
    G, colors = data
    for r in (1, 2, 3):
        assert is_r_dynamic(G, colors, r) == naive_is_r_dynamic(G, colors, r)


@given(graphs_with_coloring(max_n=9))
def test_bad_set_monotone_in_r(data):
    G, colors = data
    b1, b2, b3 = (bad_set(G, colors, r).bad for r in (1, 2, 3))
    assert b1 == frozenset()
    assert b1 <= b2 <= b3


def test_coloring_serialization():
    c = Coloring([2, 0, 2, 5])
    assert c.k == 3
    assert c.normalized().colors == (0, 1, 0, 2)
    assert Coloring.from_json(c.to_json()) == c
    assert c.to_lines() == "s 1 2\ns 2 0\ns 3 2\ns 4 5\n"
    assert Coloring.from_lines("c comment\n" + c.to_lines()) == c
    with pytest.raises(ValueError):
        Coloring.from_lines("s 2 1\n")
    assert c.classes() == {2: [0, 2], 0: [1], 5: [3]}


def test_greedy_proper_and_dsatur(petersen):
    c = greedy_proper(petersen)
    assert is_proper(petersen, c) and c.k <= 4
    d = dsatur_coloring(petersen)
    assert is_proper(petersen, [d[v] for v in range(10)])
    sub = dsatur_coloring(generators.complete(5), [0, 2, 4])
    assert sorted(sub) == [0, 2, 4] and len(set(sub.values())) == 3


@pytest.mark.parametrize("G,palette", [
    (generators.petersen(), 4),
    (generators.cycle(5), 5),
    (generators.cycle(9), 4),
    (generators.hypercube(3), 4),
    (generators.random_regular(40, 5, 1), 8),
])
def test_greedy_bounded_palette_succeeds(G, palette):
    c = greedy_bounded_palette(G, palette, r=2, seed=3)
    assert is_r_dynamic(G, c, 2)
    assert max(c.colors) < palette


@given(graphs(min_n=1, max_n=12))
def test_greedy_bounded_palette_delta_plus_3(G):
    c = greedy_bounded_palette(G, G.max_degree + 3, r=2, seed=0, repair_budget=50_000)
    assert is_r_dynamic(G, c, 2)


def test_greedy_bounded_palette_impossible(c5):
    with pytest.raises(RepairBudgetExhausted) as err:
        greedy_bounded_palette(c5, 4, r=2, repair_budget=500)
    assert err.value.conflicts > 0
    assert err.value.steps == 500
    assert len(err.value.best) == 5


def test_greedy_bounded_palette_deterministic():
    G = generators.random_regular(30, 4, 2)
    assert greedy_bounded_palette(G, 6, seed=11) == greedy_bounded_palette(G, 6, seed=11)


def test_greedy_bounded_palette_arguments(c5):
    with pytest.raises(ValueError):
        greedy_bounded_palette(c5, 0)
    with pytest.raises(ValueError):
        greedy_bounded_palette(c5, 5, order=[0, 1, 2])
