from itertools import combinations

import pytest

from stsdisc.decompose import (
    DecompositionExhausted,
    SimpleGraph,
    decomposition_system,
    is_k3_divisible,
    shadow,
    triangle_decompose,
    verify_decomposition,
)
from stsdisc.gadgets import K222Copy
from stsdisc.sts import validate_sts


def test_k3_divisibility():
    ok, _ = is_k3_divisible(SimpleGraph.complete(7))
    assert ok
    ok, reason = is_k3_divisible(SimpleGraph.complete(4))
    assert not ok and "degree" in reason
    ok, reason = is_k3_divisible(SimpleGraph.complete(6))
    assert not ok


def test_decompose_complete_graphs():
    for n, count in ((7, 7), (9, 12)):
        g = SimpleGraph.complete(n)
        tri = triangle_decompose(g)
        assert len(tri) == count
        assert verify_decomposition(g, tri)
        assert validate_sts(decomposition_system(n, tri))[0]


def test_decompose_k13_minus_one_shadow():
    g = SimpleGraph.complete(13)
    copy = K222Copy.canonical((1, 2), (3, 4), (5, 6))
    for u, v in shadow([copy]).edges():
        g.remove_edge(u, v)
    tri = triangle_decompose(g)
    assert len(tri) == (78 - 12) // 3 == 22
    assert verify_decomposition(g, tri)


def test_shadow_pair_sets():
    copy = K222Copy.canonical((1, 2), (3, 4), (5, 6))
    sh = shadow([copy])
    pairs = set(sh.edges())
    expected = set(combinations(range(1, 7), 2)) - {(1, 2), (3, 4), (5, 6)}
    assert pairs == expected and len(pairs) == 12
    assert shadow([]).edge_count() == 0
    other = K222Copy.canonical((7, 8), (9, 10), (11, 12))
    assert shadow([copy, other]).edge_count() == 24


def test_disjoint_shadow_removal_preserves_divisibility():
    g = SimpleGraph.complete(19)
    copies = [
        K222Copy.canonical((1, 2), (3, 4), (5, 6)),
        K222Copy.canonical((7, 8), (9, 10), (11, 12)),
        K222Copy.canonical((13, 14), (15, 16), (17, 18)),
    ]
    for u, v in shadow(copies).edges():
        g.remove_edge(u, v)
    ok, _ = is_k3_divisible(g)
    assert ok


def test_decompose_rejects_non_divisible():
    with pytest.raises(ValueError, match="divisible"):
        triangle_decompose(SimpleGraph.complete(4))


def test_decompose_proves_nonexistence_on_triangle_free_graph():
    # a 6-cycle is K3-divisible (even degrees, 6 edges) but triangle-free
    g = SimpleGraph.from_edges(6, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 6)])
    with pytest.raises(ValueError, match="no triangle decomposition"):
        triangle_decompose(g)


def test_decompose_budget_exhaustion():
    with pytest.raises(DecompositionExhausted) as exc:
        triangle_decompose(SimpleGraph.complete(15), budget=2)
    assert exc.value.nodes >= 2


def test_decompose_random_order_mode():
    g = SimpleGraph.complete(9)
    tri = triangle_decompose(g, random_order_seed=7)
    assert verify_decomposition(g, tri)
    assert triangle_decompose(g, random_order_seed=7) == tri  # deterministic per seed


def test_verify_decomposition_rejects_partial_cover():
    g = SimpleGraph.complete(7)
    tri = triangle_decompose(g)
    assert not verify_decomposition(g, tri[:-1])
    assert not verify_decomposition(g, tri + [tri[0]])
