from hypothesis import strategies as st

from chromadyn.graphcore import from_edge_list


@st.composite
def graphs(draw, min_n=0, max_n=10):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return from_edge_list(n, chosen)


@st.composite
def graphs_with_coloring(draw, min_n=1, max_n=10, max_colors=5):
    G = draw(graphs(min_n, max_n))
    colors = draw(st.lists(st.integers(0, max_colors - 1), min_size=G.n, max_size=G.n))
    return G, colors
