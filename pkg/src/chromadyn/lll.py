"""Moser-Tardos resampling and the local-lemma coloring pipelines.

Three constructions live here:

* ``product_r_dynamic``: pair a proper coloring with a balanced hypergraph
  r-coloring of the neighborhoods (colors = r * k_f).
* ``dynamic_coloring_regular`` / ``dynamic_coloring_general``: start from a
  base coloring whose bad vertices are independent, pick a random subset D of
  their neighborhoods by resampling, and recolor G[D] with a fresh palette.
* ``r_dynamic_partition_coloring``: split V(G) into r random parts so that
  every neighborhood meets every part, then give each part its own palette.
"""
from __future__ import annotations

import heapq
import json
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from .colorings import (
    Coloring,
    RepairBudgetExhausted,
    bad_set,
    dsatur_coloring,
    greedy_bounded_palette,
    is_r_dynamic,
)
from .exact import chromatic_number, find_coloring, r_dynamic_number
from .graphcore import Graph, VertexSet, degree_stats, is_independent, neighborhood

E = math.e
DEFAULT_MAX_ROUNDS = 1_000_000
BASE_BUDGET = 20_000


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, outcome: "LLLOutcome | None" = None):
        super().__init__(message)
        self.outcome = outcome


class PipelineFailure(RuntimeError):
    def __init__(self, message: str, diagnostics: dict):
        super().__init__(message)
        self.diagnostics = diagnostics


# --- resampling engine ------------------------------------------------------

@dataclass(frozen=True)
class Bernoulli:
    p: float

    def sample(self, rng: random.Random) -> int:
        return 1 if rng.random() < self.p else 0


@dataclass(frozen=True)
class Categorical:
    weights: tuple[float, ...]

    def sample(self, rng: random.Random) -> int:
        x = rng.random() * sum(self.weights)
        acc = 0.0
        for i, w in enumerate(self.weights):
            acc += w
            if x < acc:
                return i
        return len(self.weights) - 1


@dataclass
class RandomModel:
    distributions: Sequence[Any]  # anything with .sample(rng)
    seed: int = 0


@dataclass
class BadEvent:
    id: int
    scope: tuple[int, ...]
    violated: Callable[[Sequence[int]], bool]


@dataclass
class LLLOutcome:
    assignment: list[int]
    rounds: int
    converged: bool
    histogram: dict[int, int] = field(default_factory=dict)


def moser_tardos(model: RandomModel, events: Sequence[BadEvent], max_rounds: int = DEFAULT_MAX_ROUNDS) -> LLLOutcome:
    """Sample every variable, then resample the scope of the lowest-id violated event until none is violated."""
    rng = random.Random(model.seed)
    assignment = [dist.sample(rng) for dist in model.distributions]
    by_id = {}
    touching: dict[int, list[int]] = {}
    for ev in events:
        if not ev.scope:
            raise ValueError(f"event {ev.id} has an empty scope")
        if ev.id in by_id:
            raise ValueError(f"duplicate event id {ev.id}")
        by_id[ev.id] = ev
        for x in ev.scope:
            touching.setdefault(x, []).append(ev.id)
    violated = {ev.id for ev in events if ev.violated(assignment)}
    heap = sorted(violated)
    histogram: Counter = Counter()
    rounds = 0
    while heap:
        eid = heapq.heappop(heap)
        if eid not in violated:
            continue
        if rounds >= max_rounds:
            heapq.heappush(heap, eid)
            return LLLOutcome(assignment, rounds, False, dict(sorted(histogram.items())))
        rounds += 1
        histogram[eid] += 1
        ev = by_id[eid]
        for x in ev.scope:
            assignment[x] = model.distributions[x].sample(rng)
        affected = {j for x in ev.scope for j in touching[x]}
        for j in sorted(affected):
            now = by_id[j].violated(assignment)
            if now and j not in violated:
                violated.add(j)
                heapq.heappush(heap, j)
            elif now and j == eid:
                heapq.heappush(heap, j)
            elif not now:
                violated.discard(j)
    return LLLOutcome(assignment, rounds, True, dict(sorted(histogram.items())))


def check_outcome(events: Sequence[BadEvent], outcome: LLLOutcome) -> bool:
    """Re-evaluate every event on the final assignment, independent of engine bookkeeping."""
    return not any(ev.violated(outcome.assignment) for ev in events)


# --- balanced hypergraph coloring -------------------------------------------

@dataclass(frozen=True)
class Hypergraph:
    n: int
    edges: tuple[frozenset, ...]

    def max_overlap_degree(self) -> int:
        """Largest number of other hyperedges a hyperedge meets."""
        containing: dict[int, list[int]] = {}
        for i, e in enumerate(self.edges):
            for v in e:
                containing.setdefault(v, []).append(i)
        best = 0
        for i, e in enumerate(self.edges):
            others = {j for v in e for j in containing[v]}
            others.discard(i)
            best = max(best, len(others))
        return best


def balanced_condition(k: int, d: int, r: int) -> float:
    """e((d+1)(r-1)+1)(1-1/r)^k; at most 1 guarantees a balanced r-coloring."""
    return E * ((d + 1) * (r - 1) + 1) * (1 - 1 / r) ** k


def degree_condition(delta: int, Delta: int, r: int) -> float:
    """The degree form: hyperedges of size delta meeting at most delta(Delta-1) others."""
    return balanced_condition(delta, delta * (Delta - 1), r)


@dataclass
class BalancedColoring:
    colors: list[int]
    condition_value: float
    condition_ok: bool
    outcome: LLLOutcome


def balanced_hypergraph_coloring(H: Hypergraph, r: int, seed: int = 0,
                                 max_rounds: int = DEFAULT_MAX_ROUNDS) -> BalancedColoring:
    if r < 2:
        raise ValueError("balanced coloring needs r >= 2")
    if any(not e for e in H.edges):
        raise ValueError("hyperedges must be nonempty")
    k = min((len(e) for e in H.edges), default=0)
    value = balanced_condition(k, H.max_overlap_degree(), r) if H.edges else 0.0
    full = frozenset(range(r))

    def make(members):
        return lambda a: {a[v] for v in members} != full

    events = [BadEvent(i, tuple(sorted(e)), make(tuple(sorted(e)))) for i, e in enumerate(H.edges)]
    model = RandomModel([Categorical((1.0,) * r)] * H.n, seed)
    outcome = moser_tardos(model, events, max_rounds)
    if not outcome.converged:
        raise ConvergenceError(f"balanced {r}-coloring did not converge in {max_rounds} rounds", outcome)
    if not check_outcome(events, outcome):
        raise AssertionError("engine reported convergence with a violated event")
    return BalancedColoring(outcome.assignment, value, value <= 1, outcome)


# --- pipeline records -------------------------------------------------------

@dataclass
class PipelineResult:
    method: str
    r: int
    coloring: Coloring
    k_base: int
    k_base_exact: bool
    additive_budget: int
    rounds: int
    converged: bool
    seed: int
    valid: bool
    route: str = ""
    details: dict = field(default_factory=dict)

    @property
    def colors_used(self) -> int:
        return self.coloring.k

    @property
    def within_budget(self) -> bool:
        return self.colors_used <= self.k_base + self.additive_budget

    def record(self) -> dict:
        return {
            "method": self.method,
            "r": self.r,
            "k_base": self.k_base,
            "k_base_exact": self.k_base_exact,
            "additive_budget": self.additive_budget,
            "colors_used": self.colors_used,
            "rounds": self.rounds,
            "converged": self.converged,
            "seed": self.seed,
            "valid": self.valid,
            "route": self.route,
            "coloring": list(self.coloring.colors),
        }

    def to_json(self) -> str:
        return json.dumps(self.record(), sort_keys=True)


def base_coloring(G: Graph, budget: int = BASE_BUDGET) -> tuple[Coloring, bool]:
    """Proper coloring from the exact solver; falls back to its best upper bound."""
    res = chromatic_number(G, budget)
    return res.witness.normalized(), res.exact


def _ceil(x: float) -> int:
    return math.ceil(x - 1e-12)


# --- product route ----------------------------------------------------------

def product_r_dynamic(G: Graph, r: int, seed: int = 0, budget: int = BASE_BUDGET,
                      max_rounds: int = DEFAULT_MAX_ROUNDS, base: Coloring | None = None) -> PipelineResult:
    """Pair coloring (f(v), g(v)) with f proper and g balanced on the hyperedges N'(v)."""
    if r < 2:
        raise ValueError("product route needs r >= 2; use a proper coloring for r = 1")
    prof = degree_stats(G)
    if prof.delta < 1:
        raise ValueError("product route needs minimum degree >= 1")
    if prof.delta < r:
        raise ValueError(f"hyperedges of size {prof.delta} cannot carry {r} colors")
    H = Hypergraph(G.n, tuple(frozenset(G.adj[v][:prof.delta]) for v in range(G.n)))
    g = balanced_hypergraph_coloring(H, r, seed, max_rounds)
    if base is None:
        f, exact = base_coloring(G, budget)
    else:
        f, exact = base.normalized(), False
    k_f = f.k
    colors = Coloring(f[v] * r + g.colors[v] for v in range(G.n))
    return PipelineResult(
        "product", r, colors, k_f, exact, (r - 1) * k_f, g.outcome.rounds, True, seed,
        is_r_dynamic(G, colors, r), "product",
        {"condition_value": g.condition_value, "condition_ok": g.condition_ok,
         "degree_condition": degree_condition(prof.delta, prof.Delta, r)},
    )


# --- D-set selection --------------------------------------------------------

@dataclass
class DSet:
    D: VertexSet
    p: float
    outcome: LLLOutcome
    checks: dict


def dset_probability(G: Graph, profile: str) -> float:
    prof = degree_stats(G)
    if profile == "regular":
        return math.log(E * (prof.d ** 2 + 1)) / prof.d
    return math.log(2 * E * (prof.Delta ** 2 + 1)) / prof.delta


def check_dset(G: Graph, B: VertexSet, D: VertexSet, p: float) -> dict:
    """Structural postconditions of a D-set, checked directly on the graph."""
    NB = neighborhood(G, B)
    inside = set(D)
    bad_ok = all(inside & set(G.adj[v]) and set(G.adj[v]) - inside for v in B)
    crowd_ok = all(len(inside & set(G.adj[v])) < E * G.degree(v) * p for v in NB)
    out_ok = all(set(G.adj[v]) - inside for v in range(G.n) if v not in B and G.adj[v])
    return {"subset_of_NB": inside <= NB, "bad_split": bool(bad_ok), "sparse": crowd_ok, "escape": out_ok}


def dset_selection(G: Graph, c: Coloring, B: VertexSet, profile: str = "regular", seed: int = 0,
                   max_rounds: int = DEFAULT_MAX_ROUNDS) -> DSet:
    """Random D inside N(B) splitting every bad neighborhood, found by resampling."""
    B = frozenset(B)
    if B != bad_set(G, c, 2).bad:
        raise ValueError("B must be the bad set of c for r = 2")
    if not is_independent(G, B):
        raise ValueError("bad set must be independent")
    prof = degree_stats(G)
    if profile == "regular":
        if not prof.regular:
            raise ValueError("regular profile needs a regular graph")
        if prof.d < 14:
            raise ValueError(f"regular profile needs d >= 14 (got d={prof.d}); smaller d uses the d+3 palette")
    elif profile == "general":
        L = math.log(2 * E * (prof.Delta ** 2 + 1))
        if not L < prof.delta / 2:
            raise ValueError(f"general profile needs log(2e(Delta^2+1)) = {L:.4f} < delta/2 = {prof.delta / 2}")
    else:
        raise ValueError(f"unknown profile {profile!r}")
    p = dset_probability(G, profile)
    if not p < 1:
        raise ValueError(f"selection probability p = {p:.4f} must be below 1")
    if not B:
        empty = LLLOutcome([], 0, True, {})
        return DSet(frozenset(), p, empty, check_dset(G, B, frozenset(), p))

    NB = sorted(neighborhood(G, B))
    var = {v: i for i, v in enumerate(NB)}
    events = []

    def split_event(xs):
        return lambda a: all(a[x] for x in xs) or not any(a[x] for x in xs)

    def crowd_event(xs, limit):
        return lambda a: sum(a[x] for x in xs) >= limit

    def covered_event(xs):
        return lambda a: all(a[x] for x in xs)

    for v in range(G.n):
        local = tuple(var[u] for u in G.adj[v] if u in var)
        if not local:
            continue
        if v in B:
            events.append(BadEvent(v, local, split_event(local)))
        elif v in var:
            limit = E * G.degree(v) * p
            if len(local) >= limit:  # otherwise the event can never occur
                events.append(BadEvent(v, local, crowd_event(local, limit)))
        elif len(local) == G.degree(v):
            events.append(BadEvent(v, local, covered_event(local)))
    model = RandomModel([Bernoulli(p)] * len(NB), seed)
    outcome = moser_tardos(model, events, max_rounds)
    if not outcome.converged:
        raise ConvergenceError(f"D-set selection did not converge in {max_rounds} rounds", outcome)
    if not check_outcome(events, outcome):
        raise AssertionError("engine reported convergence with a violated event")
    D = frozenset(NB[i] for i, x in enumerate(outcome.assignment) if x)
    checks = check_dset(G, B, D, p)
    if not all(checks.values()):
        raise AssertionError(f"D-set postconditions failed: {checks}")
    return DSet(D, p, outcome, checks)


def _recolor_dset(G: Graph, c: Coloring, D: VertexSet) -> Coloring:
    offset = max(c.colors) + 1
    fresh = dsatur_coloring(G, D)
    return Coloring(offset + fresh[v] if v in D else c[v] for v in range(G.n))


# --- dynamic coloring pipelines ---------------------------------------------

def regular_additive(d: int) -> int:
    return _ceil(E * math.log(d * d + 1) + E)


def general_additive(delta: int, Delta: int) -> int:
    return _ceil(E * Delta / delta * math.log(2 * E * (Delta ** 2 + 1)))


def partition_additive(delta: int, Delta: int, r: int) -> int:
    return (r - 1) * _ceil(E * Delta / delta * math.log(2 * E * r * (Delta ** 2 + 1)))


def max_partition_r(delta: int, Delta: int) -> int:
    """Largest r with 2 <= r <= delta / log(2er(Delta^2+1)), or 1 if none."""
    r = 1
    while r + 1 <= delta / math.log(2 * E * (r + 1) * (Delta ** 2 + 1)):
        r += 1
    return r


def _bounded_palette_route(G, method, palette, k_base, exact, additive, seed, diagnostics):
    try:
        col = greedy_bounded_palette(G, palette, 2, repair_budget=100_000, seed=seed)
    except RepairBudgetExhausted as exc:
        diagnostics["bounded_palette"] = str(exc)
        raise PipelineFailure(f"{method}: all routes failed", diagnostics) from exc
    return PipelineResult(method, 2, col, k_base, exact, additive, 0, True, seed,
                          is_r_dynamic(G, col, 2), f"palette_{palette}", {"diagnostics": diagnostics})


def _dset_route(G, method, profile, base, exact, additive, seed, budget, max_rounds, diagnostics):
    """Independent-bad-set base coloring, D-set selection, fresh palette on G[D]."""
    k = base.k
    found = find_coloring(G, k, "independent_bad_set", budget=min(budget, 20_000), seed=seed, start=base)
    if found.status != "found":
        diagnostics["independent_bad_set"] = found.status
        return None
    c = found.coloring
    B = bad_set(G, c, 2).bad
    try:
        ds = dset_selection(G, c, B, profile, seed, max_rounds)
    except ConvergenceError as exc:
        diagnostics["dset"] = str(exc)
        return None
    col = _recolor_dset(G, c, ds.D)
    details = {"B": sorted(B), "D": sorted(ds.D), "p": ds.p, "dset_checks": ds.checks,
               "fresh_colors": len({col[v] for v in ds.D}), "diagnostics": diagnostics}
    return PipelineResult(method, 2, col, k, exact, additive, ds.outcome.rounds, True, seed,
                          is_r_dynamic(G, col, 2), "dset", details)


def _product_route(G, method, base, exact, additive, seed, budget, max_rounds, diagnostics):
    try:
        res = product_r_dynamic(G, 2, seed, budget, max_rounds, base=base)
    except (ConvergenceError, ValueError) as exc:
        diagnostics["product"] = str(exc)
        return None
    res.method = method
    res.k_base_exact = exact
    res.additive_budget = additive
    res.details["diagnostics"] = diagnostics
    if not res.within_budget:
        diagnostics["product"] = f"{res.colors_used} colors exceeds budget"
        return None
    return res


def dynamic_coloring_regular(G: Graph, seed: int = 0, budget: int = BASE_BUDGET,
                             max_rounds: int = DEFAULT_MAX_ROUNDS, base: Coloring | None = None) -> PipelineResult:
    """2-dynamic coloring of a d-regular graph within k_base + ceil(e log(d^2+1) + e) colors."""
    prof = degree_stats(G)
    if not prof.regular:
        raise ValueError("graph is not regular")
    d = prof.d
    additive = regular_additive(d) if d >= 1 else 0
    if base is None:
        base, exact = base_coloring(G, budget)
    else:
        base, exact = base.normalized(), False
    diagnostics: dict = {}
    if d < 14:
        return _bounded_palette_route(G, "dynam1", d + 3, base.k, exact, additive, seed, diagnostics)
    if base.k >= 4:
        res = _dset_route(G, "dynam1", "regular", base, exact, additive, seed, budget, max_rounds, diagnostics)
        if res is not None:
            return res
    else:
        diagnostics["dset"] = "base coloring uses at most 3 colors"
    res = _product_route(G, "dynam1", base, exact, additive, seed, budget, max_rounds, diagnostics)
    if res is not None:
        return res
    return _bounded_palette_route(G, "dynam1", d + 3, base.k, exact, additive, seed, diagnostics)


def dynamic_coloring_general(G: Graph, seed: int = 0, budget: int = BASE_BUDGET,
                             max_rounds: int = DEFAULT_MAX_ROUNDS, base: Coloring | None = None) -> PipelineResult:
    """2-dynamic coloring within k_base + ceil(e (Delta/delta) log(2e(Delta^2+1))) colors."""
    prof = degree_stats(G)
    if prof.delta < 1:
        raise ValueError("minimum degree must be at least 1")
    additive = general_additive(prof.delta, prof.Delta)
    if base is None:
        base, exact = base_coloring(G, budget)
    else:
        base, exact = base.normalized(), False
    diagnostics: dict = {}
    if prof.Delta <= 2:
        res = r_dynamic_number(G, 2, budget)
        if res.exact or res.upper is not None:
            col = res.witness
            return PipelineResult("general", 2, col, base.k, exact, additive, 0, True, seed,
                                  is_r_dynamic(G, col, 2), "exact", {"certified": res.exact})
        return _bounded_palette_route(G, "general", prof.Delta + 3, base.k, exact, additive, seed, diagnostics)
    L = math.log(2 * E * (prof.Delta ** 2 + 1))
    if L < prof.delta / 2:
        if base.k >= 4:
            res = _dset_route(G, "general", "general", base, exact, additive, seed, budget, max_rounds,
                              diagnostics)
            if res is not None:
                return res
        else:
            diagnostics["dset"] = "base coloring uses at most 3 colors"
        res = _product_route(G, "general", base, exact, additive, seed, budget, max_rounds, diagnostics)
        if res is not None:
            return res
    else:
        diagnostics["dset"] = f"log(2e(Delta^2+1)) = {L:.3f} >= delta/2"
    for palette in (prof.Delta + 1, prof.Delta + 2, prof.Delta + 3):
        try:
            return _bounded_palette_route(G, "general", palette, base.k, exact, additive, seed, diagnostics)
        except PipelineFailure:
            continue
    raise PipelineFailure("general: all routes failed", diagnostics)


# --- r-way partition --------------------------------------------------------

def r_dynamic_partition_coloring(G: Graph, r: int, seed: int = 0, budget: int = BASE_BUDGET,
                                 max_rounds: int = DEFAULT_MAX_ROUNDS, base: Coloring | None = None) -> PipelineResult:
    """Random r-way partition meeting every neighborhood, one palette per part."""
    prof = degree_stats(G)
    if prof.delta < 1:
        raise ValueError("minimum degree must be at least 1")
    L = math.log(2 * E * r * (prof.Delta ** 2 + 1))
    if not 2 <= r <= prof.delta / L:
        raise ValueError(f"r = {r} outside 2 <= r <= delta/log(2er(Delta^2+1)) = {prof.delta / L:.4f}; "
                         f"max feasible r is {max_partition_r(prof.delta, prof.Delta)}")
    p = L / prof.delta
    weights = (p,) * (r - 1) + (1 - (r - 1) * p,)
    last = r - 1
    all_parts = frozenset(range(r))

    def missing(xs):
        return lambda a: {a[x] for x in xs} != all_parts

    def overfull(xs, limit):
        def check(a):
            counts = Counter(a[x] for x in xs)
            return any(counts[i] >= limit for i in range(last))
        return check

    events = []
    for v in range(G.n):
        xs = G.adj[v]
        events.append(BadEvent(2 * v, xs, missing(xs)))
        limit = E * len(xs) * p
        if len(xs) >= limit:
            events.append(BadEvent(2 * v + 1, xs, overfull(xs, limit)))
    outcome = moser_tardos(RandomModel([Categorical(weights)] * G.n, seed), events, max_rounds)
    if not outcome.converged:
        raise ConvergenceError(f"partition did not converge in {max_rounds} rounds", outcome)
    if not check_outcome(events, outcome):
        raise AssertionError("engine reported convergence with a violated event")
    parts = [frozenset(v for v in range(G.n) if outcome.assignment[v] == i) for i in range(r)]

    if base is None:
        base, exact = base_coloring(G, budget)
    else:
        base, exact = base.normalized(), False
    k_base = base.k
    colors = [0] * G.n
    for v in parts[last]:
        colors[v] = base[v]
    offset = k_base
    palette_sizes = []
    for i in range(last):
        fresh = dsatur_coloring(G, parts[i])
        for v in parts[i]:
            colors[v] = offset + fresh[v]
        size = max(fresh.values(), default=-1) + 1
        palette_sizes.append(size)
        offset += size
    col = Coloring(colors)
    meets_all = all({outcome.assignment[u] for u in G.adj[v]} == all_parts for v in range(G.n))
    details = {"parts": [len(P) for P in parts], "palette_sizes": palette_sizes, "p": p,
               "every_neighborhood_meets_all_parts": meets_all,
               "max_part_degree": [max((sum(1 for u in G.adj[v] if u in P) for v in P), default=0)
                                   for P in parts[:last]]}
    return PipelineResult("partition", r, col, k_base, exact, partition_additive(prof.delta, prof.Delta, r),
                          outcome.rounds, True, seed, is_r_dynamic(G, col, r), "partition", details)
