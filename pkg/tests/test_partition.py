import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minscramble.partition import (
    Edge,
    GraphError,
    InteractionGraph,
    boundary,
    brute_force_mincut,
    canonical_side,
    ising_rate,
    make_cut,
    stoer_wagner,
)
from minscramble.rate import rate_subsystem


def chain(n, J=1.0):
    return InteractionGraph.from_edges(n, [(i, i + 1, J) for i in range(n - 1)])


def random_graph(rng, n, p=0.6, paulis=("ZZ",)):
    edges = [(i, j, rng.standard_normal(), paulis[rng.integers(len(paulis))])
             for i, j in itertools.combinations(range(n), 2) if rng.random() < p]
    return InteractionGraph.from_edges(n, edges)


graphs = st.integers(2, 8).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.floats(-3, 3, allow_nan=False)).filter(lambda e: e[0] != e[1]),
            max_size=16,
        ),
    )
)


def test_path_boundary():
    g = chain(3)
    assert [(e.i, e.j) for e in boundary(g, [1])] == [(0, 1), (1, 2)]


def test_chain_degeneracy():
    cuts = brute_force_mincut(chain(8))
    assert len(cuts) == 7
    assert all(c.weight == 1.0 for c in cuts)
    assert stoer_wagner(chain(8)).weight == 1.0


def test_triangle():
    g = InteractionGraph.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
    cuts = brute_force_mincut(g)
    assert [c.S for c in cuts] == [(0,), (1,), (2,)]
    assert cuts[0].weight == 2.0


def test_constrained_cut():
    g = chain(4)
    (c,) = brute_force_mincut(g, size_constraint=2)
    assert c.S == (0, 1) and c.weight == 1.0


def test_disconnected_graph_has_zero_cut():
    g = InteractionGraph.from_edges(4, [(0, 1, 1.0), (2, 3, 2.0)])
    assert stoer_wagner(g).weight == 0.0
    assert stoer_wagner(InteractionGraph(3)).S == (0,)


def test_stoer_wagner_vs_enumeration(rng):
    for _ in range(60):
        g = random_graph(rng, int(rng.integers(2, 11)))
        sw = stoer_wagner(g)
        bf = brute_force_mincut(g)
        assert sw.weight == bf[0].weight
        assert sw.mask in {c.mask for c in bf}


@settings(max_examples=100, deadline=None)
@given(graphs)
def test_complementation(data):
    n, edges = data
    g = InteractionGraph.from_edges(n, edges)
    S = list(range(0, n, 2)) if n > 2 else [0]
    Sbar = [v for v in range(n) if v not in S]
    assert ising_rate(g, S) == ising_rate(g, Sbar)
    c = ising_rate(g, S)
    assert len(c.S) <= n - len(c.S)


@settings(max_examples=100, deadline=None)
@given(graphs, st.floats(0.01, 3))
def test_adding_boundary_edge_increases_weight(data, J):
    n, edges = data
    g = InteractionGraph.from_edges(n, edges)
    before = make_cut(g, [0]).weight
    g2 = InteractionGraph.from_edges(n, list(g.edges) + [Edge(0, n - 1, J)])
    assert make_cut(g2, [0]).weight > before


def test_boundary_recount(rng):
    g = random_graph(rng, 9)
    S = {0, 3, 4}
    W = g.adjacency()
    recount = sum(W[i, j] for i in S for j in range(9) if j not in S)
    assert ising_rate(g, S).weight == pytest.approx(recount)


def test_dense_equivalence(rng):
    for _ in range(3):
        g = random_graph(rng, 4, p=0.8, paulis=("ZZ", "XY", "YY", "XZ"))
        H = g.hamiltonian()
        dense = min(rate_subsystem(H, 4, S) for k in (1, 2) for S in itertools.combinations(range(4), k))
        assert dense == pytest.approx(stoer_wagner(g).rate, abs=1e-10)
        for k in (1, 2):
            for S in itertools.combinations(range(4), k):
                assert rate_subsystem(H, 4, S) == pytest.approx(ising_rate(g, S).rate, abs=1e-10)


def test_canonical_side():
    assert canonical_side([2, 3], 4) == (0, 1)
    assert canonical_side([0, 1], 4) == (0, 1)
    assert canonical_side([1, 2, 3], 4) == (0,)


def test_cut_rate_is_sqrt_weight():
    c = make_cut(chain(3, 2.0), [0])
    assert c.weight == 4.0 and c.rate == 2.0
    assert c.as_dict() == {"S": [0], "boundary": [[0, 1]], "weight": 4.0, "rate": 2.0}


def test_non_ising_edges():
    g = InteractionGraph(2, (Edge(0, 1, 1.0, "phi+"),))
    with pytest.raises(GraphError):
        ising_rate(g, [0])
    with pytest.raises(GraphError):
        g.hamiltonian()


@pytest.mark.parametrize("edges", [[(0, 0, 1.0)], [(0, 5, 1.0)]])
def test_invalid_edges(edges):
    with pytest.raises(GraphError):
        InteractionGraph.from_edges(3, edges)


def test_invalid_subsets_and_sizes():
    g = chain(3)
    for S in ([], [0, 1, 2], [7]):
        with pytest.raises(GraphError):
            boundary(g, S)
    with pytest.raises(GraphError):
        brute_force_mincut(g, size_constraint=3)
    with pytest.raises(GraphError):
        stoer_wagner(InteractionGraph(1))
    with pytest.raises(GraphError, match="n <= 20"):
        brute_force_mincut(chain(21))


def test_reversed_edge_flips_pauli_pair():
    g = InteractionGraph.from_edges(2, [(1, 0, 1.0, "XZ")])
    assert (g.edges[0].i, g.edges[0].j, g.edges[0].paulis) == (0, 1, "ZX")
