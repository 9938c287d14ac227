"""Balance-theory primitives over signed graphs.

A path (or cycle) is balanced when it carries an even number of negative
edges -- the "enemy of my enemy is my friend" rule. This module classifies
triangles and paths, and computes, for a chosen origin node, the sets of
nodes reachable along balanced and unbalanced walks of each length. Those
sets are the semantic ground truth that the two-track aggregation layers in
:mod:`sgcn.model` are built to follow.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .graph import SignedGraph

__all__ = [
    "PathClass",
    "ReachSets",
    "TriangleCensus",
    "classify_triangle",
    "path_class",
    "reach_sets",
    "triangle_census",
]


class PathClass(enum.Enum):
    BALANCED = "balanced"
    UNBALANCED = "unbalanced"


def classify_triangle(s1: int, s2: int, s3: int) -> PathClass:
    """Classify a signed triangle: balanced iff the sign product is +1."""
    for s in (s1, s2, s3):
        if s not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {s}")
    return PathClass.BALANCED if s1 * s2 * s3 == 1 else PathClass.UNBALANCED


def path_class(signs: Iterable[int]) -> PathClass:
    """Classify a path by its edge signs: balanced iff negatives are even."""
    negatives = 0
    count = 0
    for s in signs:
        if s not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {s}")
        count += 1
        if s == -1:
            negatives += 1
    if count == 0:
        raise ValueError("empty sign sequence has no class")
    return PathClass.BALANCED if negatives % 2 == 0 else PathClass.UNBALANCED


@dataclass(frozen=True)
class ReachSets:
    """Nodes reachable from ``origin`` along balanced/unbalanced walks.

    ``balanced[l-1]`` / ``unbalanced[l-1]`` hold the nodes at walk length
    ``l`` (1-based, up to the requested maximum). Walks may revisit nodes,
    so a node can appear in both sets at the same length, and the origin can
    appear in its own sets.
    """

    origin: int
    balanced: tuple[frozenset[int], ...]
    unbalanced: tuple[frozenset[int], ...]

    def balanced_at(self, length: int) -> frozenset[int]:
        return self.balanced[length - 1]

    def unbalanced_at(self, length: int) -> frozenset[int]:
        return self.unbalanced[length - 1]


def reach_sets(g: SignedGraph, i: int, max_length: int) -> ReachSets:
    """Compute balanced/unbalanced reach sets for walk lengths ``1..max_length``.

    Length 1 is the positive/negative neighborhood of ``i``. Each longer
    balanced set extends the shorter balanced sets across positive edges and
    the unbalanced sets across negative edges; the unbalanced recursion is
    the mirror image. Sets are plain memberships, not multiplicity counts.
    """
    if not 0 <= i < g.n:
        raise ValueError(f"node id {i} out of range for n={g.n}")
    if max_length < 1:
        raise ValueError(f"walk length must be >= 1, got {max_length}")
    balanced: list[frozenset[int]] = [frozenset(g.pos_adj[i])]
    unbalanced: list[frozenset[int]] = [frozenset(g.neg_adj[i])]
    for _ in range(max_length - 1):
        prev_b, prev_u = balanced[-1], unbalanced[-1]
        next_b: set[int] = set()
        next_u: set[int] = set()
        for k in prev_b:
            next_b.update(g.pos_adj[k])
            next_u.update(g.neg_adj[k])
        for k in prev_u:
            next_b.update(g.neg_adj[k])
            next_u.update(g.pos_adj[k])
        balanced.append(frozenset(next_b))
        unbalanced.append(frozenset(next_u))
    return ReachSets(origin=i, balanced=tuple(balanced), unbalanced=tuple(unbalanced))


class TriangleCensus(NamedTuple):
    """Triangle counts grouped by how many edges are negative."""

    all_positive: int
    one_negative: int
    two_negative: int
    all_negative: int

    @property
    def balanced(self) -> int:
        return self.all_positive + self.two_negative

    @property
    def unbalanced(self) -> int:
        return self.one_negative + self.all_negative

    @property
    def total(self) -> int:
        return self.balanced + self.unbalanced


def triangle_census(g: SignedGraph) -> TriangleCensus:
    """Count each undirected triangle once, bucketed by negative-edge count."""
    counts = [0, 0, 0, 0]
    sign_of: list[dict[int, int]] = [{} for _ in range(g.n)]
    for u in range(g.n):
        for v in g.pos_adj[u]:
            sign_of[u][v] = 1
        for v in g.neg_adj[u]:
            sign_of[u][v] = -1
    for u in range(g.n):
        nbrs = sorted(sign_of[u])
        for v in nbrs:
            if v <= u:
                continue
            for w in sign_of[v]:
                if w <= v:
                    continue
                s_uw = sign_of[u].get(w)
                if s_uw is None:
                    continue
                negatives = (sign_of[u][v] < 0) + (sign_of[v][w] < 0) + (s_uw < 0)
                counts[negatives] += 1
    return TriangleCensus(*counts)
