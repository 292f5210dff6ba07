import logging

import numpy as np

from app.models.results import ComponentSummary, SampledGraph
from app.utils.disjoint_set import DisjointSet
from app.utils.errors import ParameterError

logger = logging.getLogger(__name__)


def _require_nodes(graph: SampledGraph) -> None:
    if graph.n < 1:
        raise ParameterError("graph must have at least one node")


def summarize(graph: SampledGraph) -> ComponentSummary:
    """Component count via union-find; isolated count from the streamed degrees."""
    _require_nodes(graph)
    ds = DisjointSet(graph.n)
    for x, y in graph.edges.tolist():
        if ds.union(x, y) and ds.components == 1:
            break
    return ComponentSummary(
        n=graph.n,
        component_count=ds.components,
        isolated_count=int(np.count_nonzero(graph.degree == 0)),
        largest_component=ds.largest,
    )


def is_connected(graph: SampledGraph) -> bool:
    """A single node counts as connected."""
    return summarize(graph).component_count == 1


def has_no_isolated(graph: SampledGraph) -> bool:
    _require_nodes(graph)
    return bool(np.all(graph.degree >= 1))
