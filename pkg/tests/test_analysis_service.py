import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from app.models.results import SampledGraph
from app.services.analysis_service import has_no_isolated, is_connected, summarize
from app.services.oracle_service import dfs_component_count
from app.utils.disjoint_set import DisjointSet
from app.utils.errors import ParameterError


@st.composite
def small_graphs(draw):
    n = draw(st.integers(min_value=1, max_value=64))
    if n == 1:
        return SampledGraph.from_edges(1, [])
    pairs = draw(st.lists(
        st.tuples(st.integers(min_value=0, max_value=n - 1), st.integers(min_value=0, max_value=n - 1))
        .filter(lambda e: e[0] != e[1]),
        max_size=3 * n,
    ))
    return SampledGraph.from_edges(n, pairs)


class TestDisjointSet:

    def test_union_by_size_and_counts(self):
        ds = DisjointSet(6)
        assert ds.union(0, 1)
        assert ds.union(2, 3)
        assert ds.union(1, 3)
        assert not ds.union(0, 2)
        assert ds.components == 3
        assert ds.largest == 4
        assert ds.find(0) == ds.find(3)
        assert ds.find(4) != ds.find(5)

    def test_long_chain_is_compressed(self):
        ds = DisjointSet(1000)
        for x in range(999):
            ds.union(x, x + 1)
        root = ds.find(0)
        assert all(ds.parent[x] == root for x in (0, 500, 999))
        assert ds.components == 1


class TestSummarize:

    def test_path_is_connected(self):
        graph = SampledGraph.from_edges(4, [(0, 1), (2, 1), (3, 2)])
        summary = summarize(graph)
        assert summary.connected and summary.isolated_free
        assert summary.largest_component == 4

    def test_isolated_nodes_counted(self):
        graph = SampledGraph.from_edges(5, [(0, 1), (1, 2)])
        summary = summarize(graph)
        assert summary.component_count == 3
        assert summary.isolated_count == 2
        assert not is_connected(graph)
        assert not has_no_isolated(graph)

    def test_no_isolated_but_disconnected(self):
        graph = SampledGraph.from_edges(4, [(0, 1), (2, 3)])
        assert has_no_isolated(graph)
        assert not is_connected(graph)

    def test_single_node_counts_as_connected(self):
        graph = SampledGraph.from_edges(1, [])
        assert is_connected(graph)
        assert not has_no_isolated(graph)

    def test_empty_graph_rejected(self):
        graph = SampledGraph.from_edges(0, [])
        with pytest.raises(ParameterError):
            summarize(graph)
        with pytest.raises(ParameterError):
            has_no_isolated(graph)

    def test_from_edges_rejects_bad_pairs(self):
        with pytest.raises(ParameterError):
            SampledGraph.from_edges(3, [(1, 1)])
        with pytest.raises(ParameterError):
            SampledGraph.from_edges(3, [(0, 3)])

    def test_duplicates_and_orientation_normalized(self):
        graph = SampledGraph.from_edges(3, [(2, 0), (0, 2), (1, 2)])
        assert graph.edge_set() == {(0, 2), (1, 2)}
        assert graph.degree.tolist() == [1, 1, 2]

    @settings(max_examples=1000, deadline=None)
    @given(small_graphs())
    def test_union_find_matches_dfs(self, graph):
        summary = summarize(graph)
        assert summary.component_count == dfs_component_count(graph)
        if graph.n >= 2 and summary.connected:
            assert summary.isolated_free
        assert summary.isolated_count == sum(1 for d in graph.degree if d == 0)

    @settings(max_examples=300, deadline=None)
    @given(small_graphs(), st.randoms(use_true_random=False))
    def test_summary_ignores_edge_order(self, graph, random):
        order = list(range(graph.edge_count))
        random.shuffle(order)
        shuffled = SampledGraph.from_canonical(graph.n, graph.edges[np.asarray(order, dtype=np.int64)])
        assert summarize(shuffled) == summarize(graph)
        assert summarize(graph) == summarize(graph)
