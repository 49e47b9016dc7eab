import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chromadyn import generators
from chromadyn.colorings import Coloring, bad_set, is_r_dynamic
from chromadyn.exact import r_dynamic_number
from chromadyn.graphcore import degree_stats, induced_subgraph
from chromadyn.lll import (
    BadEvent,
    Bernoulli,
    Categorical,
    ConvergenceError,
    Hypergraph,
    RandomModel,
    balanced_hypergraph_coloring,
    check_outcome,
    dset_probability,
    dset_selection,
    regular_additive,
    dynamic_coloring_general,
    dynamic_coloring_regular,
    general_additive,
    max_partition_r,
    moser_tardos,
    partition_additive,
    product_r_dynamic,
    degree_condition,
    r_dynamic_partition_coloring,
    balanced_condition,
)


def test_engine_zero_events():
    model = RandomModel([Bernoulli(0.5)] * 5, seed=4)
    out = moser_tardos(model, [])
    assert out.converged and out.rounds == 0
    assert out == moser_tardos(model, [])


def test_engine_single_event():
    model = RandomModel([Bernoulli(0.5)], seed=1)
    ev = BadEvent(0, (0,), lambda a: a[0] == 1)
    out = moser_tardos(model, [ev])
    assert out.converged and out.assignment == [0]
    assert out.rounds < 30
    assert check_outcome([ev], out)


def test_engine_round_cap_reports_failure():
    model = RandomModel([Bernoulli(0.5)], seed=1)
    out = moser_tardos(model, [BadEvent(0, (0,), lambda a: True)], max_rounds=10)
    assert not out.converged and out.rounds == 10
    assert out.histogram == {0: 10}


def test_engine_rejects_bad_events():
    model = RandomModel([Bernoulli(0.5)] * 2)
    with pytest.raises(ValueError):
        moser_tardos(model, [BadEvent(0, (), lambda a: False)])
    with pytest.raises(ValueError):
        moser_tardos(model, [BadEvent(0, (0,), lambda a: False), BadEvent(0, (1,), lambda a: False)])


def test_categorical_respects_weights():
    import random
    rng = random.Random(0)
    draws = [Categorical((0.0, 1.0, 0.0)).sample(rng) for _ in range(50)]
    assert set(draws) == {1}


def _property_b_instance(seed):
    # 7-uniform hypergraph whose edges each meet few others: well below the threshold
    import random
    rng = random.Random(seed)
    n = 60
    edges = tuple(frozenset(rng.sample(range(n), 7)) for _ in range(20))
    return Hypergraph(n, edges)


def test_property_b_converges_100_seeds():
    for seed in range(100):
        H = _property_b_instance(seed)
        assert balanced_condition(7, H.max_overlap_degree(), 2) <= 1
        res = balanced_hypergraph_coloring(H, 2, seed=seed)
        assert res.outcome.converged
        for e in H.edges:
            assert {res.colors[v] for v in e} == {0, 1}


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_engine_soundness_and_determinism(seed):
    H = _property_b_instance(seed % 1000)
    a = balanced_hypergraph_coloring(H, 2, seed=seed)
    b = balanced_hypergraph_coloring(H, 2, seed=seed)
    assert a.colors == b.colors and a.outcome == b.outcome
    assert all({a.colors[v] for v in e} == {0, 1} for e in H.edges)


def test_balanced_single_edge():
    res = balanced_hypergraph_coloring(Hypergraph(2, (frozenset({0, 1}),)), 2, seed=3)
    assert res.colors[0] != res.colors[1]
    with pytest.raises(ValueError):
        balanced_hypergraph_coloring(Hypergraph(2, (frozenset({0, 1}),)), 1)


def test_balanced_impossible_reports():
    # a 2-vertex hyperedge cannot carry 3 colors
    with pytest.raises(ConvergenceError) as err:
        balanced_hypergraph_coloring(Hypergraph(2, (frozenset({0, 1}),)), 3, max_rounds=50)
    assert not err.value.outcome.converged


def test_condition_values():
    assert round(balanced_condition(7, 42, 2), 3) == 0.934
    assert round(balanced_condition(6, 30, 2), 3) == 1.359
    assert degree_condition(7, 7, 2) == pytest.approx(E44 := math.e * 44 / 128)
    assert E44 < 1 < degree_condition(6, 6, 2)


def test_overlap_degree_of_neighborhood_hypergraph():
    G = generators.random_regular(50, 7, 2)
    H = Hypergraph(G.n, tuple(frozenset(G.adj[v]) for v in range(G.n)))
    assert H.max_overlap_degree() <= 7 * 6


def test_product_route_seven_regular():
    G = generators.random_regular(50, 7, 5)
    res = product_r_dynamic(G, 2, seed=5)
    assert res.valid and is_r_dynamic(G, res.coloring, 2)
    assert res.colors_used <= 2 * res.k_base
    assert res.details["condition_ok"]


def test_product_route_k4_and_r1():
    K4 = generators.complete(4)
    res = product_r_dynamic(K4, 2, seed=0)
    assert res.valid and res.colors_used <= 8
    assert r_dynamic_number(K4, 2).value == 4
    with pytest.raises(ValueError):
        product_r_dynamic(K4, 1)


def test_dset_empty_bad_set():
    G = generators.random_regular(40, 14, 0)
    c = Coloring(range(G.n))
    ds = dset_selection(G, c, frozenset(), "regular", seed=0)
    assert ds.D == frozenset() and ds.outcome.converged and ds.outcome.rounds == 0


def test_dset_fourteen_regular():
    G = generators.random_bipartite_regular(100, 14, 3)
    c = generators.planted_bad_coloring(G, seed=3, max_bad=20, spread=2)
    B = bad_set(G, c, 2).bad
    assert B
    ds = dset_selection(G, c, B, "regular", seed=3)
    assert ds.p == pytest.approx((1 + math.log(197)) / 14)
    assert round(ds.p, 4) == 0.4488
    assert all(ds.checks.values())
    sub, _ = induced_subgraph(G, ds.D)
    assert sub.max_degree < math.e * 14 * ds.p
    assert round(math.e * 14 * ds.p, 2) == 17.08


def test_dset_rejects_small_d():
    G = generators.random_regular(40, 10, 0)
    c = Coloring(range(G.n))
    assert dset_probability(G, "regular") == pytest.approx((1 + math.log(101)) / 10)
    with pytest.raises(ValueError, match="d >= 14"):
        dset_selection(G, c, frozenset(), "regular")


def test_dset_rejects_wrong_bad_set():
    G = generators.random_regular(40, 14, 0)
    with pytest.raises(ValueError):
        dset_selection(G, Coloring(range(G.n)), frozenset({0}), "regular")


def test_budget_arithmetic():
    assert regular_additive(14) == 18
    assert round(math.e * math.log(197) + math.e, 2) == 17.08
    assert 14 + 3 <= math.e * (1 + math.log(197))
    # the general additive term at d = 30 evaluates to 24, not 22
    assert round(math.log(2 * math.e * 901), 2) == 8.50
    assert general_additive(30, 30) == 24
    assert partition_additive(30, 30, 2) == 25
    assert round(math.log(4 * math.e * 901), 2) == 9.19


def test_partition_feasibility():
    assert round(30 / math.log(4 * math.e * 901), 2) == 3.26
    assert round(30 / math.log(6 * math.e * 901), 2) == 3.13
    assert max_partition_r(30, 30) == 3
    assert max_partition_r(5, 5) == 1
    with pytest.raises(ValueError, match="max feasible r"):
        r_dynamic_partition_coloring(generators.random_regular(30, 5, 0), 2)


def test_regular_pipeline_small_d(petersen):
    res = dynamic_coloring_regular(petersen, seed=0)
    assert res.route == "palette_6" and res.valid and res.colors_used <= 6


def test_regular_pipeline_rejects_irregular():
    with pytest.raises(ValueError):
        dynamic_coloring_regular(generators.star(3))


def test_regular_pipeline_dset_route():
    G = generators.random_bipartite_regular(100, 14, 1)
    base = generators.planted_bad_coloring(G, seed=1, max_bad=10, spread=2)
    res = dynamic_coloring_regular(G, seed=1, base=base)
    assert res.route == "dset" and res.valid and res.within_budget
    fresh = {res.coloring[v] for v in res.details["D"]}
    kept = {res.coloring[v] for v in range(G.n) if v not in set(res.details["D"])}
    assert min(fresh) > max(base.colors)
    assert not fresh & kept


def test_general_pipeline_small_cases():
    star = generators.star(5)
    res = dynamic_coloring_general(star, seed=0)
    assert res.valid and res.colors_used <= 6
    assert r_dynamic_number(star, 2).value == 3
    c4 = dynamic_coloring_general(generators.cycle(4), seed=0)
    assert c4.route == "exact" and c4.colors_used == 4 and c4.valid


def test_partition_pipeline():
    G = generators.random_regular(100, 30, 2)
    for r in (2, 3):
        res = r_dynamic_partition_coloring(G, r, seed=r)
        assert res.valid and res.within_budget
        assert res.details["every_neighborhood_meets_all_parts"]
        assert is_r_dynamic(G, res.coloring, r)


def test_pipeline_records_deterministic():
    G = generators.random_regular(40, 7, 9)
    assert product_r_dynamic(G, 2, seed=4).to_json() == product_r_dynamic(G, 2, seed=4).to_json()
    rec = product_r_dynamic(G, 2, seed=4).record()
    for key in ("method", "r", "k_base", "additive_budget", "colors_used", "rounds", "converged", "seed", "valid"):
        assert key in rec
    assert degree_stats(G).d == 7
