"""Per-vertex and whole-network statistics for co-occurrence networks.

Implementations stay deliberately elementary (neighbor-set intersections,
breadth-first search) so they can be checked exactly against brute-force
oracles on small graphs.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .semnet import SemanticNetwork

__all__ = [
    "DegreeDistribution",
    "ClusteringByDegree",
    "GeodesicSummary",
    "SmallWorldReport",
    "degrees",
    "clustering_coefficients",
    "degree_distribution",
    "clustering_by_degree",
    "mean_geodesic",
    "small_world_check",
]


@dataclass(frozen=True)
class DegreeDistribution:
    """counts[k] = number of vertices with degree k; sums to n_vertices."""

    counts: dict[int, int]
    n_vertices: int

    def points(self) -> list[tuple[int, int]]:
        return sorted(self.counts.items())


@dataclass(frozen=True)
class ClusteringByDegree:
    """Mean clustering coefficient per degree, with per-degree vertex counts."""

    means: dict[int, float]
    counts: dict[int, int]

    def points(self) -> list[tuple[int, float]]:
        return sorted(self.means.items())


@dataclass(frozen=True)
class GeodesicSummary:
    mean_geodesic: float
    n_vertices: int
    connected: bool
    unreachable_pairs: int


@dataclass(frozen=True)
class SmallWorldReport:
    mean_geodesic: float
    log10_n: float
    ratio: float
    is_small_world: bool


def degrees(net: SemanticNetwork) -> list[int]:
    """Degree of each vertex, indexed by vertex id."""
    return [len(nbrs) for nbrs in net.adjacency]


def clustering_coefficients(net: SemanticNetwork) -> list[float]:
    """Fraction of each vertex's neighbor pairs that are themselves linked.

    A vertex with fewer than two neighbors has no neighbor pairs; its
    coefficient is defined as 0.
    """
    coeffs: list[float] = []
    for i, nbrs in enumerate(net.adjacency):
        k = len(nbrs)
        if k < 2:
            coeffs.append(0.0)
            continue
        closed = 0
        for j in nbrs:
            # each linked neighbor pair is counted from both ends
            closed += len(nbrs & net.adjacency[j])
        coeffs.append(closed / (k * (k - 1)))
    return coeffs


def degree_distribution(net: SemanticNetwork) -> DegreeDistribution:
    counts: dict[int, int] = {}
    for k in degrees(net):
        counts[k] = counts.get(k, 0) + 1
    return DegreeDistribution(counts=counts, n_vertices=net.n_vertices)


def clustering_by_degree(net: SemanticNetwork) -> ClusteringByDegree:
    """Arithmetic mean of clustering coefficients over vertices of equal degree."""
    sums: dict[int, float] = {}
    counts: dict[int, int] = {}
    coeffs = clustering_coefficients(net)
    for k, c in zip(degrees(net), coeffs):
        sums[k] = sums.get(k, 0.0) + c
        counts[k] = counts.get(k, 0) + 1
    means = {k: sums[k] / counts[k] for k in sums}
    return ClusteringByDegree(means=means, counts=counts)


def _bfs_distances(net: SemanticNetwork, source: int) -> list[int]:
    """Hop counts from source; -1 marks unreachable vertices."""
    dist = [-1] * net.n_vertices
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        d = dist[v] + 1
        for w in net.adjacency[v]:
            if dist[w] < 0:
                dist[w] = d
                queue.append(w)
    return dist


def mean_geodesic(net: SemanticNetwork) -> GeodesicSummary:
    """Average shortest-path length over vertex pairs.

    The sum runs over ordered pairs i >= j (the zero diagonal included)
    and is normalized by N(N+1)/2. Note this differs from the common
    N(N-1)/2 convention by a factor (N-1)/(N+1); the variant here is kept
    on purpose. Unreachable pairs are skipped and reported rather than
    poisoning the average.
    """
    n = net.n_vertices
    total = 0
    unreachable = 0
    for i in range(n):
        dist = _bfs_distances(net, i)
        for j in range(i):
            if dist[j] < 0:
                unreachable += 1
            else:
                total += dist[j]
    denom = n * (n + 1) / 2
    return GeodesicSummary(
        mean_geodesic=total / denom,
        n_vertices=n,
        connected=unreachable == 0,
        unreachable_pairs=unreachable,
    )


def small_world_check(
    summary: GeodesicSummary, band: tuple[float, float] = (0.25, 4.0)
) -> SmallWorldReport:
    """Compare the mean geodesic against log10(N).

    Networks whose ratio l / log10(N) falls inside ``band`` are flagged as
    small-world.
    """
    if summary.n_vertices < 2:
        raise ValueError("small-world check needs at least 2 vertices")
    log10_n = math.log10(summary.n_vertices)
    ratio = summary.mean_geodesic / log10_n
    return SmallWorldReport(
        mean_geodesic=summary.mean_geodesic,
        log10_n=log10_n,
        ratio=ratio,
        is_small_world=band[0] <= ratio <= band[1],
    )
