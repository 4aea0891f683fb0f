"""Word co-occurrence network built from a token stream.

One vertex per unique lemma; an undirected, unweighted edge joins two
lemmas whenever any of their occurrences sit within ``m`` word positions
of each other. Repeat co-occurrences never add parallel edges and a lemma
never links to itself, so the adjacency relation is strictly 0/1 with an
empty diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .errors import EmptyStreamError
from .tokenizer import TokenStream

__all__ = ["SemanticNetwork", "build_network", "edge_count", "edge_list_lines"]


@dataclass
class SemanticNetwork:
    """Adjacency over unique lemmas at word distance ``m``.

    Vertex indices follow first occurrence order in the source stream,
    which keeps dumps and tests order-stable. Treat instances as
    immutable once built.
    """

    m: int
    n_words: int
    labels: list[str]
    vertex_ids: dict[str, int]
    adjacency: list[set[int]] = field(repr=False)
    source_id: str = ""

    @property
    def n_vertices(self) -> int:
        return len(self.labels)

    def neighbors(self, i: int) -> set[int]:
        return self.adjacency[i]

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    def has_edge(self, i: int, j: int) -> bool:
        return j in self.adjacency[i]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Unordered vertex pairs, each yielded once with i < j."""
        for i, nbrs in enumerate(self.adjacency):
            for j in nbrs:
                if i < j:
                    yield (i, j)


def build_network(stream: TokenStream, m: int) -> SemanticNetwork:
    """Link every pair of lemmas occurring within ``m`` positions.

    Positions p and q are linked iff 1 <= |p - q| <= m and their lemmas
    differ. Streams shorter than m + 1 words simply come out complete.
    """
    if m < 1:
        raise ValueError(f"word distance must be >= 1, got {m}")
    if stream.n_words == 0:
        raise EmptyStreamError(f"cannot build a network from empty stream {stream.source_id!r}")

    lemmas = stream.lemmas()
    vertex_ids: dict[str, int] = {}
    labels: list[str] = []
    seq: list[int] = []
    for lemma in lemmas:
        idx = vertex_ids.get(lemma)
        if idx is None:
            idx = len(labels)
            vertex_ids[lemma] = idx
            labels.append(lemma)
        seq.append(idx)

    adjacency: list[set[int]] = [set() for _ in labels]
    n = len(seq)
    for p in range(n):
        a = seq[p]
        for q in range(p + 1, min(p + m, n - 1) + 1):
            b = seq[q]
            if a != b:
                adjacency[a].add(b)
                adjacency[b].add(a)

    return SemanticNetwork(
        m=m,
        n_words=stream.n_words,
        labels=labels,
        vertex_ids=vertex_ids,
        adjacency=adjacency,
        source_id=stream.source_id,
    )


def edge_count(net: SemanticNetwork) -> int:
    """Number of unordered connected vertex pairs."""
    total = sum(len(nbrs) for nbrs in net.adjacency)
    return total // 2


def edge_list_lines(net: SemanticNetwork) -> list[str]:
    """Edges as "lemma_a<TAB>lemma_b" lines, sorted lexicographically.

    Each pair is ordered within the line, so dumps are stable regardless
    of vertex numbering.
    """
    pairs = []
    for i, j in net.edges():
        a, b = sorted((net.labels[i], net.labels[j]))
        pairs.append(f"{a}\t{b}")
    return sorted(pairs)
