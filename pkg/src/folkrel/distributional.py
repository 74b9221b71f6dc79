"""Tag-tag co-occurrence graph and distributional relatedness queries.

Two tags co-occur when some post contains both; the edge weight is the
number of such posts.  Each tag's co-occurrence row doubles as its context
vector (with a zero self-coordinate), so cosine similarity between tags is
the normalized dot product of their rows.  Dot products are accumulated as
exact integers; only the final division is floating point, which makes
cosine values exactly symmetric and exactly invariant under uniform weight
scaling.

The graph is immutable after build; all queries are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import Folksonomy, UnknownTagError, normalize_tag


@dataclass(frozen=True)
class RelatedTag:
    tag: str
    score: float


@dataclass(frozen=True)
class RelatedList:
    """Tags related to ``source``, score-descending, source excluded.

    Equal scores are ordered lexicographically by tag string.
    """

    source: str
    items: tuple[RelatedTag, ...]

    def top(self, k: int) -> tuple[RelatedTag, ...]:
        return self.items[:k]

    def tags(self) -> tuple[str, ...]:
        return tuple(it.tag for it in self.items)


class CoGraph:
    """Sparse symmetric tag co-occurrence graph with cached vector norms."""

    __slots__ = ("tags", "_tag_ids", "neighbors", "norm_sq", "norms")

    def __init__(self, tags: tuple[str, ...], neighbors: list[dict[int, int]]):
        self.tags = tags
        self._tag_ids = {t: i for i, t in enumerate(tags)}
        self.neighbors = neighbors
        self.norm_sq = [sum(w * w for w in nb.values()) for nb in neighbors]
        self.norms = [math.sqrt(sq) for sq in self.norm_sq]

    @property
    def num_tags(self) -> int:
        return len(self.tags)

    def tag_id(self, tag: str) -> int:
        tid = self._tag_ids.get(normalize_tag(tag))
        if tid is None:
            raise UnknownTagError(tag)
        return tid

    def weight(self, t1: str, t2: str) -> int:
        """Stored post count for the pair; 0 when absent (and for t1 == t2)."""
        return self.neighbors[self.tag_id(t1)].get(self.tag_id(t2), 0)

    def edge_count(self) -> int:
        return sum(len(nb) for nb in self.neighbors) // 2

    def iter_edges(self):
        """Yield (tag1, tag2, weight) once per unordered pair, sorted."""
        pairs = []
        for tid, nb in enumerate(self.neighbors):
            a = self.tags[tid]
            for other, w in nb.items():
                b = self.tags[other]
                if a < b:
                    pairs.append((a, b, w))
        pairs.sort()
        yield from pairs


def build_cooccurrence(f: Folksonomy) -> CoGraph:
    """Count, for every unordered tag pair, the posts containing both."""
    counts: dict[tuple[int, int], int] = {}
    for tids in f.posts.values():
        ts = sorted(tids)
        n = len(ts)
        for i in range(n - 1):
            a = ts[i]
            for j in range(i + 1, n):
                key = (a, ts[j])
                counts[key] = counts.get(key, 0) + 1
    neighbors: list[dict[int, int]] = [dict() for _ in range(f.num_tags)]
    for (a, b), w in counts.items():
        neighbors[a][b] = w
        neighbors[b][a] = w
    return CoGraph(f.tags, neighbors)


def freq_relatedness(g: CoGraph, tag: str) -> RelatedList:
    """All co-occurring tags of ``tag``, by weight descending."""
    tid = g.tag_id(tag)
    ranked = sorted(g.neighbors[tid].items(), key=lambda kv: (-kv[1], g.tags[kv[0]]))
    items = tuple(RelatedTag(g.tags[o], float(w)) for o, w in ranked)
    return RelatedList(source=g.tags[tid], items=items)


def _dot(g: CoGraph, t1: int, t2: int) -> int:
    # Iterate the smaller neighbor list; the self coordinates are implicitly
    # zero because no self-loops are stored.  Integer accumulation is exact.
    n1, n2 = g.neighbors[t1], g.neighbors[t2]
    if len(n2) < len(n1):
        n1, n2 = n2, n1
    dot = 0
    for x, wx in n1.items():
        wy = n2.get(x)
        if wy is not None:
            dot += wx * wy
    return dot


def cosine_similarity(g: CoGraph, t1: str, t2: str) -> float:
    """Cosine of the angle between two tags' co-occurrence vectors, in [0, 1].

    Tags with an empty co-occurrence profile have similarity 0 with
    everything (including themselves).
    """
    i, j = g.tag_id(t1), g.tag_id(t2)
    denom = g.norms[i] * g.norms[j]
    if denom == 0.0:
        return 0.0
    # Proportional integer vectors can land one ulp above 1 after the
    # square roots; keep the documented range.
    return min(1.0, _dot(g, i, j) / denom)


def cosine_relatedness(g: CoGraph, tag: str, k: int) -> RelatedList:
    """Top-k tags by cosine similarity to ``tag``.

    Only two-hop neighbors can score above zero, so candidates are
    enumerated through the neighbor lists instead of scanning all tags.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    tid = g.tag_id(tag)
    candidates: set[int] = set()
    for mid in g.neighbors[tid]:
        candidates.update(g.neighbors[mid])
    candidates.discard(tid)

    norm_t = g.norms[tid]
    scored: list[tuple[float, str, int]] = []
    for cand in candidates:
        dot = _dot(g, tid, cand)
        if dot:
            score = min(1.0, dot / (norm_t * g.norms[cand]))
            scored.append((score, g.tags[cand], cand))
    scored.sort(key=lambda s: (-s[0], s[1]))
    items = tuple(RelatedTag(name, score) for score, name, _ in scored[:k])
    return RelatedList(source=g.tags[tid], items=items)


def write_cograph_tsv(g: CoGraph, path) -> None:
    """Export edges as ``tag1<TAB>tag2<TAB>weight``, tag1 < tag2, sorted."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for a, b, w in g.iter_edges():
            handle.write(f"{a}\t{b}\t{w}\n")
