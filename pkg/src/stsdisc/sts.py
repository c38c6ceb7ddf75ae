"""Steiner triple system construction, validation, enumeration and embedding."""

from __future__ import annotations

import random
from fractions import Fraction
from math import comb
from typing import Iterator, Optional

from .core import Colouring, TripleSystem, discrepancy

ENUMERABLE_ORDERS = (3, 7, 9)


def sts_order_ok(n: int) -> bool:
    return n >= 3 and n % 6 in (1, 3)


def validate_sts(s: TripleSystem) -> tuple[bool, Optional[tuple]]:
    """True iff every pair of [n] is covered exactly once.

    On failure returns (False, (u, v, count)) for the first offending pair
    in lexicographic order.
    """
    n = s.n
    cover = [[0] * (n + 1) for _ in range(n + 1)]
    for a, b, c in s.triples:
        cover[a][b] += 1
        cover[a][c] += 1
        cover[b][c] += 1
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if cover[u][v] != 1:
                return False, (u, v, cover[u][v])
    return True, None


def _bose(k: int) -> list:
    """STS(6k+3) on Z_{2k+1} x {0,1,2} via an idempotent commutative quasigroup."""
    m = 2 * k + 1
    half = k + 1  # inverse of 2 mod m

    def pt(x, j):
        return j * m + x + 1

    triples = [(pt(x, 0), pt(x, 1), pt(x, 2)) for x in range(m)]
    for j in range(3):
        jj = (j + 1) % 3
        for x in range(m):
            for y in range(x + 1, m):
                q = (x + y) * half % m
                triples.append(tuple(sorted((pt(x, j), pt(y, j), pt(q, jj)))))
    return triples


def _skolem(k: int) -> list:
    """STS(6k+1) on {inf} u (Z_{2k} x {0,1,2}) via a half-idempotent quasigroup."""
    m = 2 * k
    n = 6 * k + 1

    def pt(x, j):
        return j * m + x + 1

    inf = n

    def q(x, y):
        s = (x + y) % m
        return s // 2 if s % 2 == 0 else (s - 1) // 2 + k

    triples = [(pt(i, 0), pt(i, 1), pt(i, 2)) for i in range(k)]
    for j in range(3):
        jj = (j + 1) % 3
        for i in range(k):
            triples.append(tuple(sorted((inf, pt(k + i, j), pt(i, jj)))))
        for x in range(m):
            for y in range(x + 1, m):
                triples.append(tuple(sorted((pt(x, j), pt(y, j), pt(q(x, y), jj)))))
    return triples


def construct_sts(n: int) -> TripleSystem:
    """A valid STS of order n (n = 1, 3 mod 6) with C(n,2)/3 triples."""
    if not sts_order_ok(n):
        raise ValueError(f"no STS of order {n}: n mod 6 = {n % 6}, need 1 or 3")
    if n % 6 == 3:
        triples = _bose(n // 6)
    else:
        triples = _skolem(n // 6)
    return TripleSystem(n, triples)


def random_embedding(s: TripleSystem, seed: int) -> TripleSystem:
    """Apply a uniformly random relabelling of [n] to all triples."""
    rng = random.Random(seed)
    perm = list(range(1, s.n + 1))
    rng.shuffle(perm)
    relabel = {i + 1: perm[i] for i in range(s.n)}
    triples = [tuple(sorted((relabel[a], relabel[b], relabel[c]))) for a, b, c in s.triples]
    return TripleSystem(s.n, triples)


def enumerate_all_sts(n: int) -> Iterator[TripleSystem]:
    """Every labeled STS of order n exactly once, for n in {3, 7, 9}.

    Backtracking branches on the lexicographically-first uncovered pair and
    tries third vertices in ascending order; because any lex-smaller pair is
    already covered, the third vertex always exceeds both, which makes the
    enumeration canonical and duplicate-free.
    """
    if n not in ENUMERABLE_ORDERS:
        raise ValueError(f"enumeration supported only for n in {ENUMERABLE_ORDERS}")
    target = comb(n, 2) // 3
    covered = [[False] * (n + 1) for _ in range(n + 1)]
    chosen: list = []

    def first_uncovered():
        for u in range(1, n + 1):
            for v in range(u + 1, n + 1):
                if not covered[u][v]:
                    return u, v
        return None

    def rec():
        pair = first_uncovered()
        if pair is None:
            yield TripleSystem(n, list(chosen))
            return
        u, v = pair
        for w in range(v + 1, n + 1):
            if covered[u][w] or covered[v][w]:
                continue
            covered[u][v] = covered[u][w] = covered[v][w] = True
            chosen.append((u, v, w))
            yield from rec()
            chosen.pop()
            covered[u][v] = covered[u][w] = covered[v][w] = False

    for s in rec():
        assert len(s) == target
        yield s


def min_max_discrepancy_oracle(chi: Colouring) -> tuple[Fraction, Fraction]:
    """Exact (min, max) of discrepancy over all labeled STS, for n in {7, 9}."""
    if chi.n not in (7, 9):
        raise ValueError("oracle supports only n in {7, 9}")
    lo = hi = None
    for s in enumerate_all_sts(chi.n):
        d = discrepancy(s, chi)
        lo = d if lo is None else min(lo, d)
        hi = d if hi is None else max(hi, d)
    return lo, hi
