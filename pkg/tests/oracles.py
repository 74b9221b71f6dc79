"""Independent reference implementations used to cross-check the library.

These recompute results from the raw definitions with different data
structures and numeric routes (dense numpy instead of sparse, brute-force
scans instead of inverted indexes), so agreement is meaningful.
"""

from __future__ import annotations

import math
from collections import deque

import numpy as np


def node_order(f):
    """(kind, name) labels in an order of the oracle's own choosing."""
    labels = [("user", u) for u in sorted(f.users)]
    labels += [("tag", t) for t in sorted(f.tags)]
    labels += [("resource", r) for r in sorted(f.resources)]
    return labels


def dense_fold(f):
    """Dense folded adjacency built post by post from the definitions."""
    labels = node_order(f)
    index = {label: i for i, label in enumerate(labels)}
    n = len(labels)
    W = np.zeros((n, n))

    def bump(a, b, w=1.0):
        i, j = index[a], index[b]
        W[i, j] += w
        W[j, i] += w

    for (uid, rid), tids in f.posts.items():
        user = ("user", f.users[uid])
        resource = ("resource", f.resources[rid])
        bump(user, resource, float(len(tids)))
        for tid in tids:
            tag = ("tag", f.tags[tid])
            bump(user, tag)
            bump(tag, resource)
    return labels, W


def dense_rank(f, damping, preference=None, tol=1e-13, max_iter=100000):
    """Reference damped power iteration; returns {(kind, name): weight}.

    ``preference`` is an optional {(kind, name): mass} dict; missing mass
    is spread uniformly over the remaining nodes.
    """
    labels, W = dense_fold(f)
    n = len(labels)
    A = W / W.sum(axis=0)
    if preference is None:
        p = np.full(n, 1.0 / n)
    else:
        p = np.zeros(n)
        fixed = sum(preference.values())
        rest = (1.0 - fixed) / (n - len(preference)) if n > len(preference) else 0.0
        for i, label in enumerate(labels):
            p[i] = preference.get(label, rest)
    w = p.copy()
    for _ in range(max_iter):
        w_next = damping * (A @ w) + (1.0 - damping) * p
        if np.abs(w_next - w).sum() <= tol:
            w = w_next
            break
        w = w_next
    return {label: w[i] for i, label in enumerate(labels)}


def cooccurrence_counts(f):
    """Pair counts recomputed with a brute double loop over each post."""
    counts: dict[tuple[str, str], int] = {}
    for tids in f.posts.values():
        names = sorted(f.tags[t] for t in tids)
        for i in range(len(names)):
            for j in range(i + 1, len(names)):
                key = (names[i], names[j])
                counts[key] = counts.get(key, 0) + 1
    return counts


def dense_cosine(f, t1, t2):
    """Cosine from full dense context vectors with a zero self-coordinate."""
    counts = cooccurrence_counts(f)
    tags = sorted(f.tags)
    index = {t: i for i, t in enumerate(tags)}
    v1 = np.zeros(len(tags))
    v2 = np.zeros(len(tags))
    for (a, b), w in counts.items():
        for x, y in ((a, b), (b, a)):
            if x == t1:
                v1[index[y]] = w
            if x == t2:
                v2[index[y]] = w
    denom = np.linalg.norm(v1) * np.linalg.norm(v2)
    if denom == 0.0:
        return 0.0
    return float(v1 @ v2 / denom)


def taxonomy_distance(tax, lemma1, lemma2):
    """Shortest-path length by plain BFS on the undirected edge set."""
    edges: dict[int, set[int]] = {}
    for node in tax.synsets:
        for parent in tax.parents(node):
            edges.setdefault(node, set()).add(parent)
            edges.setdefault(parent, set()).add(node)
    best = math.inf
    targets = set(tax.synsets_of(lemma2))
    for start in tax.synsets_of(lemma1):
        dist = {start: 0}
        queue = deque([start])
        while queue:
            node = queue.popleft()
            for nb in edges.get(node, ()):
                if nb not in dist:
                    dist[nb] = dist[node] + 1
                    queue.append(nb)
        for target in targets:
            if target in dist:
                best = min(best, dist[target])
    return best
