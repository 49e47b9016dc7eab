import pytest
from hypothesis import given, settings

from chromadyn import generators
from chromadyn.colorings import bad_set, is_proper, is_r_dynamic
from chromadyn.exact import (
    chromatic_number,
    domination_number,
    dynamic_lower_bound,
    find_coloring,
    independence_number,
    r_dynamic_number,
)
from chromadyn.graphcore import degree_stats, from_edge_list, is_independent

from oracles import brute_alpha, brute_chromatic_number, brute_gamma, brute_r_dynamic_number
from strategies import graphs

# chi_2 of C_n for n = 3..12, computed once with the brute-force oracle
CYCLE_CHI2 = {3: 3, 4: 4, 5: 5, 6: 3, 7: 4, 8: 4, 9: 3, 10: 4, 11: 4, 12: 3}

# (chi, chi_2, alpha, gamma), frozen from the oracle
NAMED = {
    "petersen": (generators.petersen(), (3, 4, 4, 3)),
    "q3": (generators.hypercube(3), (2, 4, 4, 2)),
    "k33": (generators.complete_bipartite(3, 3), (2, 4, 3, 2)),
    "star5": (generators.star(5), (2, 3, 5, 1)),
    "k4": (generators.complete(4), (4, 4, 1, 1)),
    "c4": (generators.cycle(4), (2, 4, 2, 2)),
}


@pytest.mark.parametrize("n", sorted(CYCLE_CHI2))
def test_cycle_chi2(n):
    res = r_dynamic_number(generators.cycle(n), 2)
    assert res.exact and res.value == CYCLE_CHI2[n]
    assert is_r_dynamic(generators.cycle(n), res.witness, 2)


def test_cycle_table_against_oracle():
    for n in range(3, 11):
        assert brute_r_dynamic_number(n, list(generators.cycle(n).edges()), 2) == CYCLE_CHI2[n]


@pytest.mark.parametrize("name", sorted(NAMED))
def test_named_invariants(name):
    G, (chi, chi2, alpha, gamma) = NAMED[name]
    assert chromatic_number(G).value == chi
    assert r_dynamic_number(G, 2).value == chi2
    assert independence_number(G).value == alpha
    assert domination_number(G).value == gamma


def test_empty_graph():
    E = from_edge_list(0, [])
    assert chromatic_number(E).value == 0
    assert r_dynamic_number(E, 2).value == 0


def test_r_must_be_positive():
    with pytest.raises(ValueError):
        r_dynamic_number(generators.cycle(4), 0)


@settings(max_examples=40)
@given(graphs(min_n=1, max_n=7))
def test_against_oracle(G):
    edges = list(G.edges())
    chi = chromatic_number(G)
    assert chi.value == brute_chromatic_number(G.n, edges)
    assert is_proper(G, chi.witness) and chi.witness.k == chi.value
    for r in (2, 3):
        res = r_dynamic_number(G, r, chi=chi)
        assert res.value == brute_r_dynamic_number(G.n, edges, r)
        assert is_r_dynamic(G, res.witness, r)
    assert independence_number(G).value == brute_alpha(G.n, edges)
    assert domination_number(G).value == brute_gamma(G.n, edges)


@settings(max_examples=40)
@given(graphs(min_n=1, max_n=8))
def test_monotone_in_r(G):
    values = [r_dynamic_number(G, r).value for r in (1, 2, 3)]
    assert values == sorted(values)
    assert values[0] == chromatic_number(G).value
    delta = min(G.degrees())
    for r, v in zip((1, 2, 3), values):
        assert v >= min(r, delta) + 1
        assert v >= dynamic_lower_bound(G, r)


def test_budget_gives_unknown():
    G = generators.random_regular(24, 5, 1)
    res = r_dynamic_number(G, 2, budget=5)
    assert res.status == "unknown"
    assert res.describe() == f"unknown[{res.lower},{res.upper}]"
    assert res.lower <= res.upper
    assert is_r_dynamic(G, res.witness, 2)


def test_budget_is_deterministic():
    G = generators.random_regular(20, 4, 3)
    a, b = r_dynamic_number(G, 2), r_dynamic_number(G, 2)
    assert (a.value, a.nodes, a.witness) == (b.value, b.nodes, b.witness)


def test_random_regular_fast():
    for seed in range(3):
        G = generators.random_regular(24, 4, seed)
        res = r_dynamic_number(G, 2)
        assert res.exact and res.elapsed < 5


def test_find_coloring_modes():
    C4 = generators.cycle(4)
    assert find_coloring(C4, 2).status == "found"
    assert find_coloring(generators.cycle(5), 2).status == "none"
    assert find_coloring(C4, 2, mode="r_dynamic").status == "none"
    found = find_coloring(C4, 4, mode="r_dynamic")
    assert found.status == "found" and is_r_dynamic(C4, found.coloring, 2)
    with pytest.raises(ValueError):
        find_coloring(C4, 0)
    with pytest.raises(ValueError):
        find_coloring(C4, 3, mode="nonsense")


def test_independent_bad_set_examples():
    # every proper 2-coloring of C4 makes all vertices bad, and they are adjacent
    assert find_coloring(generators.cycle(4), 2, mode="independent_bad_set").status == "none"
    for G, k in [(generators.petersen(), 3), (generators.hypercube(3), 3), (generators.cycle(7), 3)]:
        res = find_coloring(G, k, mode="independent_bad_set", seed=1)
        assert res.status == "found"
        assert is_proper(G, res.coloring) and res.coloring.k <= k
        assert is_independent(G, bad_set(G, res.coloring, 2).bad)


def test_independent_bad_set_regular_corpus():
    for seed in range(5):
        G = generators.random_regular(16, 3, seed)
        k = chromatic_number(G).value + 1
        res = find_coloring(G, k, mode="independent_bad_set", seed=seed)
        assert res.status == "found"
        assert is_independent(G, bad_set(G, res.coloring, 2).bad)
        assert degree_stats(G).regular


def test_budget_exhausted_upper_bound_is_a_real_witness():
    G = generators.random_regular(60, 7, 1)
    res = r_dynamic_number(G, 2, budget=2_000)
    assert res.status == "unknown" and res.upper < G.n
    assert is_r_dynamic(G, res.witness, 2) and res.witness.k == res.upper
