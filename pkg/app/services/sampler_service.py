"""
Random instances of the key graph, the on-off channel graph and their
intersection.
"""

import logging
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np
from scipy import sparse

from app.models.params import ChannelMatrix, ClassDistribution, KeyProfile, SystemParams
from app.models.results import NodeAssignment, SampledGraph
from app.utils.errors import ParameterError
from app.utils.seeding import TrialStreams

logger = logging.getLogger(__name__)

# above this ring/pool ratio rows come from Generator.choice instead of slot redraws
DENSE_RING_RATIO = 1 / 64

# channel-on pairs tested per sparse row-product batch
PAIR_CHUNK = 1 << 16


@lru_cache(maxsize=8)
def pair_index(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Unordered pairs x < y in canonical (row-major upper triangle) order."""
    xs, ys = np.triu_indices(n, k=1)
    xs.setflags(write=False)
    ys.setflags(write=False)
    return xs, ys


def assign_classes(n: int, dist: ClassDistribution, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. class labels in 1..r drawn from mu."""
    if n < 1:
        raise ParameterError(f"node count must be >= 1 (got {n})")
    return rng.choice(dist.r, size=n, p=dist.as_array()).astype(np.int64) + 1


def sample_sorted_subsets(count: int, k: int, pool: int, rng: np.random.Generator) -> np.ndarray:
    """`count` independent uniform k-subsets of range(pool), one sorted row each."""
    if k > pool:
        raise ParameterError(f"cannot draw {k} distinct keys from a pool of {pool}")
    if count == 0 or k == 0:
        return np.empty((count, k), dtype=np.int64)

    if k > pool * DENSE_RING_RATIO:
        # one row at a time; numpy holds at most one pool-sized scratch
        out = np.empty((count, k), dtype=np.int64)
        for row in range(count):
            out[row] = rng.choice(pool, size=k, replace=False, shuffle=False)
        out.sort(axis=1)
        return out

    # sparse rings: draw with replacement, then redraw only the repeated slots
    out = np.sort(rng.integers(0, pool, size=(count, k)), axis=1)
    while True:
        repeated = np.zeros(out.shape, dtype=bool)
        repeated[:, 1:] = out[:, 1:] == out[:, :-1]
        hits = int(repeated.sum())
        if hits == 0:
            return out
        out[repeated] = rng.integers(0, pool, size=hits)
        out.sort(axis=1)


def sample_key_rings(classes: np.ndarray, keys: KeyProfile, rng: np.random.Generator) -> NodeAssignment:
    classes = np.array(classes, dtype=np.int64)
    if classes.size and (classes.min() < 1 or classes.max() > keys.r):
        raise ParameterError(f"class labels must lie in 1..{keys.r}")
    sizes = keys.as_array()[classes - 1]
    ring_ptr = np.zeros(classes.size + 1, dtype=np.int64)
    np.cumsum(sizes, out=ring_ptr[1:])
    ring_ids = np.empty(int(ring_ptr[-1]), dtype=np.int64)

    for label, k in enumerate(keys.K, start=1):
        nodes = np.flatnonzero(classes == label)
        if nodes.size == 0:
            continue
        block = sample_sorted_subsets(nodes.size, k, keys.P, rng)
        ring_ids[ring_ptr[nodes][:, None] + np.arange(k)] = block

    for array in (classes, ring_ids, ring_ptr):
        array.setflags(write=False)
    return NodeAssignment(classes=classes, ring_ids=ring_ids, ring_ptr=ring_ptr, pool=keys.P)


def rings_intersect(a: Sequence[int], b: Sequence[int]) -> bool:
    """Merge-scan of two ascending rings."""
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            return True
        if a[i] < b[j]:
            i += 1
        else:
            j += 1
    return False


def build_key_graph(assignment: NodeAssignment) -> SampledGraph:
    """Edge (x, y) iff the two rings share a key; pair-by-pair merge-scan."""
    rings: List[List[int]] = [ring.tolist() for ring in assignment.rings]
    edges = [
        (x, y)
        for x in range(assignment.n)
        for y in range(x + 1, assignment.n)
        if rings_intersect(rings[x], rings[y])
    ]
    return SampledGraph.from_canonical(assignment.n, np.asarray(edges, dtype=np.int64))


def _channel_mask(classes: np.ndarray, channel: ChannelMatrix, rng: np.random.Generator) -> np.ndarray:
    # one uniform per unordered pair, always in canonical order
    xs, ys = pair_index(classes.size)
    labels = classes - 1
    on_prob = channel.as_array()[labels[xs], labels[ys]]
    return rng.random(xs.size) < on_prob


def build_channel_graph(classes: np.ndarray, channel: ChannelMatrix, rng: np.random.Generator) -> SampledGraph:
    classes = np.asarray(classes, dtype=np.int64)
    xs, ys = pair_index(classes.size)
    on = _channel_mask(classes, channel, rng)
    return SampledGraph.from_canonical(classes.size, np.column_stack((xs[on], ys[on])))


def ring_incidence(assignment: NodeAssignment) -> sparse.csr_matrix:
    """Sparse n x P node-key incidence matrix."""
    return sparse.csr_matrix(
        (np.ones(assignment.ring_ids.size, dtype=np.int32), assignment.ring_ids, assignment.ring_ptr),
        shape=(assignment.n, assignment.pool),
    )


def co_membership(assignment: NodeAssignment) -> np.ndarray:
    """Dense n x n count of shared keys, from the sparse ring incidence matrix."""
    incidence = ring_incidence(assignment)
    return (incidence @ incidence.T).toarray()


def shared_key_counts(assignment: NodeAssignment, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Shared keys for the listed pairs only, as sparse row dot products."""
    counts = np.zeros(xs.size, dtype=np.int64)
    if xs.size == 0:
        return counts
    incidence = ring_incidence(assignment)
    for start in range(0, xs.size, PAIR_CHUNK):
        stop = start + PAIR_CHUNK
        rows = incidence[xs[start:stop]].multiply(incidence[ys[start:stop]])
        counts[start:stop] = np.asarray(rows.sum(axis=1)).ravel()
    return counts


def build_intersection(n: int, params: SystemParams, streams: TrialStreams) -> Tuple[NodeAssignment, SampledGraph]:
    """Sample H in one pass: channel coin first, key test only for pairs whose channel is on."""
    classes = assign_classes(n, params.dist, streams.classes)
    assignment = sample_key_rings(classes, params.keys, streams.rings)

    xs, ys = pair_index(n)
    on = _channel_mask(classes, params.channel, streams.channel)
    cx, cy = xs[on], ys[on]
    shared = shared_key_counts(assignment, cx, cy) > 0
    graph = SampledGraph.from_canonical(n, np.column_stack((cx[shared], cy[shared])))
    logger.debug(f"sampled H: n={n}, channel-on pairs={cx.size}, edges={graph.edge_count}")
    return assignment, graph


def build_separately(n: int, params: SystemParams,
                     streams: TrialStreams) -> Tuple[NodeAssignment, SampledGraph, SampledGraph]:
    """Key graph and channel graph from the same split streams the fused build uses."""
    classes = assign_classes(n, params.dist, streams.classes)
    assignment = sample_key_rings(classes, params.keys, streams.rings)
    key_graph = build_key_graph(assignment)
    channel_graph = build_channel_graph(classes, params.channel, streams.channel)
    return assignment, key_graph, channel_graph
