"""Exact triangle decomposition of K3-divisible graphs by backtracking.

Adjacency is kept as one bitmask per vertex, so "vertices completing an
edge to a triangle" is a single AND + popcount.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from .core import TripleSystem

DEFAULT_BUDGET = 10**8


class DecompositionExhausted(Exception):
    """Search-node budget ran out before the search space was exhausted."""

    def __init__(self, nodes: int):
        super().__init__(f"triangle decomposition budget exhausted after {nodes} nodes")
        self.nodes = nodes


@dataclass
class SimpleGraph:
    n: int
    adj: list  # adj[v] = bitmask of neighbours, bit i set for vertex i

    @classmethod
    def empty(cls, n: int) -> "SimpleGraph":
        return cls(n, [0] * (n + 1))

    @classmethod
    def complete(cls, n: int) -> "SimpleGraph":
        full = ((1 << (n + 1)) - 1) & ~1  # bits 1..n
        return cls(n, [0] + [full & ~(1 << v) for v in range(1, n + 1)])

    @classmethod
    def from_edges(cls, n: int, edges) -> "SimpleGraph":
        g = cls.empty(n)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError("loops are not allowed")
        if not (1 <= u <= self.n and 1 <= v <= self.n):
            raise ValueError(f"edge ({u},{v}) out of range")
        self.adj[u] |= 1 << v
        self.adj[v] |= 1 << u

    def remove_edge(self, u: int, v: int) -> None:
        self.adj[u] &= ~(1 << v)
        self.adj[v] &= ~(1 << u)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list:
        return [
            (u, v)
            for u in range(1, self.n + 1)
            for v in range(u + 1, self.n + 1)
            if self.adj[u] >> v & 1
        ]

    def edge_count(self) -> int:
        return sum(self.adj[v].bit_count() for v in range(1, self.n + 1)) // 2

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def copy(self) -> "SimpleGraph":
        return SimpleGraph(self.n, list(self.adj))


def is_k3_divisible(g: SimpleGraph) -> tuple[bool, str]:
    """3 | e(G) and all degrees even; the reason names the first violation."""
    e = g.edge_count()
    if e % 3 != 0:
        return False, f"edge count {e} not divisible by 3"
    for v in range(1, g.n + 1):
        d = g.degree(v)
        if d % 2 != 0:
            return False, f"vertex {v} has odd degree {d}"
    return True, "divisible"


def shadow(copies) -> SimpleGraph:
    """Union of the 12-pair shadows of the given K222 copies."""
    n = max((v for k in copies for v in k.vertices()), default=0)
    g = SimpleGraph.empty(n)
    for k in copies:
        for u, v in k.shadow_pairs():
            g.add_edge(u, v)
    return g


def triangle_decompose(
    g: SimpleGraph,
    budget: int = DEFAULT_BUDGET,
    random_order_seed: int | None = None,
) -> list:
    """Partition E(g) into triangles by exact backtracking.

    Branches on the uncovered edge with the fewest completing vertices,
    completions tried in ascending order (or seeded-shuffled when
    random_order_seed is set). Raises DecompositionExhausted when the node
    budget runs out; an empty search space without a solution raises
    ValueError only via the divisibility pre-check, otherwise returns [].
    """
    ok, reason = is_k3_divisible(g)
    if not ok:
        raise ValueError(f"graph is not K3-divisible: {reason}")
    adj = list(g.adj)
    n = g.n
    rng = random.Random(random_order_seed) if random_order_seed is not None else None
    result: list = []
    nodes = 0

    def pick_edge():
        """Uncovered edge minimizing the completion count; None when covered."""
        best = None
        best_count = None
        for u in range(1, n + 1):
            rest = adj[u] >> (u + 1) << (u + 1)  # neighbours above u
            while rest:
                v = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                cnt = (adj[u] & adj[v]).bit_count()
                if cnt == 0:
                    return u, v, 0
                if best_count is None or cnt < best_count:
                    best = (u, v)
                    best_count = cnt
        if best is None:
            return None
        return best[0], best[1], best_count

    def rec() -> bool:
        nonlocal nodes
        picked = pick_edge()
        if picked is None:
            return True
        u, v, cnt = picked
        if cnt == 0:
            return False
        nodes += 1
        if nodes > budget:
            raise DecompositionExhausted(nodes)
        common = adj[u] & adj[v]
        ws = []
        while common:
            w = (common & -common).bit_length() - 1
            common &= common - 1
            ws.append(w)
        if rng is not None:
            rng.shuffle(ws)
        for w in ws:
            for a, b in ((u, v), (u, w), (v, w)):
                adj[a] &= ~(1 << b)
                adj[b] &= ~(1 << a)
            result.append(tuple(sorted((u, v, w))))
            if rec():
                return True
            result.pop()
            for a, b in ((u, v), (u, w), (v, w)):
                adj[a] |= 1 << b
                adj[b] |= 1 << a
        return False

    if not rec():
        raise ValueError("graph has no triangle decomposition")
    return result


def verify_decomposition(g: SimpleGraph, triangles) -> bool:
    """Exact partition check: covered pair multiset equals E(g), multiplicity 1."""
    seen = set()
    for t in triangles:
        for u, v in combinations(t, 2):
            if not g.has_edge(u, v) or (u, v) in seen:
                return False
            seen.add((u, v))
    return len(seen) == g.edge_count()


def decomposition_system(n: int, triangles) -> TripleSystem:
    return TripleSystem(n, list(triangles))
