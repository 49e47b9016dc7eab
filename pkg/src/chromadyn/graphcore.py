"""Simple undirected graphs on dense vertex ids, plus graph6/DIMACS codecs.

Vertices are always ``0..n-1``; codecs own any external numbering.
"""
from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

VertexSet = frozenset  # canonical: iterate with sorted()

GRAPH6_MAX_N = 258047


class GraphFormatError(ValueError):
    """Malformed graph6 or DIMACS input; ``offset`` is the byte position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class MissingEdgeWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[tuple[int, ...], ...]
    m: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "m", sum(len(a) for a in self.adj) // 2)

    @cached_property
    def adj_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(a) for a in self.adj)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj_sets[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in self.adj[u]:
                if u < v:
                    yield u, v

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def validate(self) -> None:
        """Debug check of the structural invariants; raises AssertionError."""
        assert len(self.adj) == self.n
        total = 0
        for v, nbrs in enumerate(self.adj):
            assert list(nbrs) == sorted(set(nbrs)), f"adjacency of {v} not sorted/unique"
            for u in nbrs:
                assert 0 <= u < self.n and u != v, f"bad neighbor {u} of {v}"
                assert v in self.adj_sets[u], f"asymmetric edge {v}-{u}"
            total += len(nbrs)
        assert total == 2 * self.m

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def from_edge_list(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    if n < 0:
        raise ValueError("vertex count must be non-negative")
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) has a vertex outside 0..{n - 1}")
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        nbrs[u].add(v)
        nbrs[v].add(u)
    return Graph(n, tuple(tuple(sorted(s)) for s in nbrs))


def vertex_set(G: Graph, members: Iterable[int]) -> VertexSet:
    s = frozenset(members)
    for v in s:
        if not 0 <= v < G.n:
            raise ValueError(f"vertex {v} not in graph with n={G.n}")
    return s


def neighborhood(G: Graph, S: Iterable[int]) -> VertexSet:
    """N_G(S): every vertex adjacent to some member of S."""
    out: set[int] = set()
    for v in S:
        out.update(G.adj[v])
    return frozenset(out)


def square(G: Graph) -> Graph:
    nbrs = []
    for v in range(G.n):
        s = set(G.adj[v])
        for u in G.adj[v]:
            s.update(G.adj[u])
        s.discard(v)
        nbrs.append(tuple(sorted(s)))
    return Graph(G.n, tuple(nbrs))


def induced_subgraph(G: Graph, S: Iterable[int]) -> tuple[Graph, list[int]]:
    """Subgraph on S, relabelled 0..|S|-1; the list maps new ids to old ids."""
    members = sorted(vertex_set(G, S))
    index = {v: i for i, v in enumerate(members)}
    edges = [(index[u], index[v]) for u in members for v in G.adj[u] if v in index and u < v]
    return from_edge_list(len(members), edges), members


def remove_edges(G: Graph, F: Iterable[tuple[int, int]]) -> Graph:
    drop = set()
    missing = []
    for u, v in F:
        if G.has_edge(u, v):
            drop.add((min(u, v), max(u, v)))
        else:
            missing.append((u, v))
    if missing:
        warnings.warn(f"{len(missing)} edge(s) not in graph ignored: {missing[:5]}", MissingEdgeWarning)
    return from_edge_list(G.n, (e for e in G.edges() if e not in drop))


@dataclass(frozen=True)
class DegreeProfile:
    delta: int
    Delta: int
    regular: bool
    d: int | None


def degree_stats(G: Graph) -> DegreeProfile:
    if G.n == 0:
        raise ValueError("degree statistics need at least one vertex")
    degs = G.degrees()
    lo, hi = min(degs), max(degs)
    return DegreeProfile(lo, hi, lo == hi, hi if lo == hi else None)


def bfs_distances(G: Graph, source: int) -> list[int]:
    dist = [-1] * G.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for u in G.adj[v]:
            if dist[u] < 0:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def connected_components(G: Graph) -> list[list[int]]:
    seen = [False] * G.n
    comps = []
    for s in range(G.n):
        if seen[s]:
            continue
        seen[s] = True
        comp, stack = [], [s]
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in G.adj[v]:
                if not seen[u]:
                    seen[u] = True
                    stack.append(u)
        comps.append(sorted(comp))
    return comps


def is_independent(G: Graph, S: Iterable[int]) -> bool:
    s = set(S)
    return all(not (s & G.adj_sets[v]) for v in s)


# --- codecs -----------------------------------------------------------------

def _graph6_size(n: int) -> bytes:
    if n < 63:
        return bytes([n + 63])
    if n <= GRAPH6_MAX_N:
        return bytes([126, 63 + (n >> 12 & 63), 63 + (n >> 6 & 63), 63 + (n & 63)])
    raise ValueError(f"graph6 encoding supports n <= {GRAPH6_MAX_N}, got {n}")


def _to_graph6(G: Graph) -> bytes:
    bits = [1 if G.has_edge(i, j) else 0 for j in range(1, G.n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    body = bytes(63 + int("".join(map(str, bits[k:k + 6])), 2) for k in range(0, len(bits), 6))
    return _graph6_size(G.n) + body + b"\n"


def _from_graph6(text: bytes) -> Graph:
    data = text.strip()
    if data.startswith(b">>graph6<<"):
        data = data[10:]
    if not data:
        raise GraphFormatError("empty graph6 string", 0)
    for pos, ch in enumerate(data):
        if not 63 <= ch <= 126:
            raise GraphFormatError(f"invalid graph6 character {chr(ch)!r}", pos)
    if data[0] < 126:
        n, pos = data[0] - 63, 1
    elif len(data) >= 4 and data[1] < 126:
        n, pos = ((data[1] - 63) << 12) | ((data[2] - 63) << 6) | (data[3] - 63), 4
    else:
        raise GraphFormatError("unsupported graph6 size header", 0)
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(data) - pos < need:
        raise GraphFormatError(f"truncated bit vector: need {need} bytes, have {len(data) - pos}", len(data))
    if len(data) - pos > need:
        raise GraphFormatError("trailing bytes after bit vector", pos + need)
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = data[pos + k // 6] - 63
            if byte >> (5 - k % 6) & 1:
                edges.append((i, j))
            k += 1
    return from_edge_list(n, edges)


def _to_dimacs(G: Graph) -> bytes:
    lines = [f"p edge {G.n} {G.m}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in G.edges()]
    return ("\n".join(lines) + "\n").encode()


def _from_dimacs(text: bytes) -> Graph:
    n = None
    declared = 0
    edges = []
    offset = 0
    for raw in text.splitlines(keepends=True):
        line = raw.strip()
        here = offset
        offset += len(raw)
        if not line or line.startswith(b"c"):
            continue
        tokens = line.split()
        if tokens[0] == b"p":
            if n is not None:
                raise GraphFormatError("duplicate problem line", here)
            if len(tokens) != 4 or tokens[1] not in (b"edge", b"col"):
                raise GraphFormatError("malformed header, expected 'p edge n m'", here)
            try:
                n, declared = int(tokens[2]), int(tokens[3])
            except ValueError:
                raise GraphFormatError("non-integer in header", here) from None
            if n < 0 or declared < 0:
                raise GraphFormatError("negative count in header", here)
        elif tokens[0] == b"e":
            if n is None:
                raise GraphFormatError("edge line before 'p edge' header", here)
            if len(tokens) != 3:
                raise GraphFormatError("malformed edge line", here)
            try:
                u, v = int(tokens[1]), int(tokens[2])
            except ValueError:
                raise GraphFormatError("non-integer vertex", here) from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphFormatError(f"vertex out of range 1..{n}", here)
            if u == v:
                raise GraphFormatError("self-loop", here)
            edges.append((u - 1, v - 1))
        else:
            raise GraphFormatError(f"unknown line type {tokens[0]!r}", here)
    if n is None:
        raise GraphFormatError("missing 'p edge' header", 0)
    return from_edge_list(n, edges)


def parse(fmt: str, text: bytes | str) -> Graph:
    if isinstance(text, str):
        text = text.encode()
    if fmt == "graph6":
        return _from_graph6(text)
    if fmt == "dimacs":
        return _from_dimacs(text)
    raise ValueError(f"unknown format {fmt!r}")


def serialize(fmt: str, G: Graph) -> bytes:
    if fmt == "graph6":
        return _to_graph6(G)
    if fmt == "dimacs":
        return _to_dimacs(G)
    raise ValueError(f"unknown format {fmt!r}")


def format_for_path(path: str) -> str:
    return "dimacs" if path.endswith((".col", ".dimacs")) else "graph6"

