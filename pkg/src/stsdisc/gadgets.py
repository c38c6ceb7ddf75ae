"""K222 copies, their unique Pasch-pair decomposition, the gadget predicate,
and exact / sampled gadget counting.

A copy of the complete 3-partite 3-graph with parts of size 2 is stored in
canonical form: each part sorted, parts sorted by minimum element. Its 8
edges split uniquely into two edge-disjoint Pasch configurations with the
same 12-pair shadow; an edge-coloured copy is a gadget when the two
configurations have different colour profiles.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from math import comb

from .core import Colouring, Triple

DEFAULT_EXACT_CAP = 21


@dataclass(frozen=True)
class K222Copy:
    parts: tuple  # ((a1,a2),(b1,b2),(c1,c2)) canonical

    def __post_init__(self):
        if len(self.parts) != 3 or any(len(p) != 2 for p in self.parts):
            raise ValueError("need three vertex pairs")
        flat = [v for p in self.parts for v in p]
        if len(set(flat)) != 6:
            raise ValueError("parts must be six distinct vertices")

    @classmethod
    def canonical(cls, p1, p2, p3) -> "K222Copy":
        parts = sorted((tuple(sorted(p1)), tuple(sorted(p2)), tuple(sorted(p3))))
        return cls(tuple(parts))

    def vertices(self) -> tuple:
        return tuple(sorted(v for p in self.parts for v in p))

    def edges(self) -> list:
        """The 8 triples, one vertex per part."""
        (a1, a2), (b1, b2), (c1, c2) = self.parts
        return [
            tuple(sorted((a, b, c)))
            for a in (a1, a2)
            for b in (b1, b2)
            for c in (c1, c2)
        ]

    def shadow_pairs(self) -> list:
        """The 12 pairs of the shadow: all pairs of the 6 vertices except the parts."""
        parts = {p for p in self.parts}
        return [
            pq for pq in combinations(self.vertices(), 2) if pq not in parts
        ]


@dataclass(frozen=True)
class PaschPair:
    p1: tuple  # 4 triples each
    p2: tuple


def pasch_pair(k: K222Copy) -> PaschPair:
    """The unique decomposition of the copy's 8 edges into two Pasch configurations.

    With parts ((a1,a2),(b1,b2),(c1,c2)): p1 holds the edges with an even
    number of index-2 picks, p2 the others.
    """
    (a1, a2), (b1, b2), (c1, c2) = k.parts
    p1 = (
        tuple(sorted((a1, b1, c1))),
        tuple(sorted((a1, b2, c2))),
        tuple(sorted((a2, b1, c2))),
        tuple(sorted((a2, b2, c1))),
    )
    p2 = (
        tuple(sorted((a1, b1, c2))),
        tuple(sorted((a1, b2, c1))),
        tuple(sorted((a2, b1, c1))),
        tuple(sorted((a2, b2, c2))),
    )
    return PaschPair(p1, p2)


def is_pasch(triples) -> bool:
    """True iff 4 triples on 6 vertices with every vertex in exactly two of
    them and no pair covered twice (the Pasch configuration, up to labels)."""
    ts = list(triples)
    if len(set(ts)) != 4:
        return False
    degree: dict = {}
    pairs = set()
    for t in ts:
        for v in t:
            degree[v] = degree.get(v, 0) + 1
        for pq in combinations(t, 2):
            if pq in pairs:
                return False
            pairs.add(pq)
    return len(degree) == 6 and all(d == 2 for d in degree.values())


@dataclass(frozen=True)
class GadgetRecord:
    copy: K222Copy
    profile1: tuple  # colour counts of p1, indexed by colour-1
    profile2: tuple
    diff_colours: tuple  # all colours with differing counts


def _profiles(chi: Colouring, pair: PaschPair) -> tuple:
    prof1 = [0] * chi.r
    prof2 = [0] * chi.r
    for t in pair.p1:
        prof1[chi.colour_of(t) - 1] += 1
    for t in pair.p2:
        prof2[chi.colour_of(t) - 1] += 1
    return tuple(prof1), tuple(prof2)


def is_gadget(chi: Colouring, k: K222Copy):
    """A GadgetRecord if the copy's Pasch profiles differ, else None."""
    if k.vertices()[-1] > chi.n:
        raise ValueError("copy vertex exceeds colouring order")
    prof1, prof2 = _profiles(chi, pasch_pair(k))
    diff = tuple(c + 1 for c in range(chi.r) if prof1[c] != prof2[c])
    if not diff:
        return None
    return GadgetRecord(k, prof1, prof2, diff)


# The 15 pairings of 6 items into 3 unordered pairs, expressed as index
# patterns over a sorted 6-tuple, together with the p1/p2 edge indices into
# the list of all 20 3-subsets (lex order of combinations(range(6), 3)).
_SUBSET_INDEX = {c: i for i, c in enumerate(combinations(range(6), 3))}


def _build_pairings():
    pairings = []
    first = 0
    for j in range(1, 6):
        rest = [x for x in range(6) if x not in (first, j)]
        for kk in range(1, 4):
            p2a = rest[0]
            p2b = rest[kk]
            p3 = tuple(x for x in rest[1:] if x != p2b)
            parts = ((first, j), (p2a, p2b), p3)
            (a1, a2), (b1, b2), (c1, c2) = parts
            idx1 = tuple(
                _SUBSET_INDEX[tuple(sorted(t))]
                for t in ((a1, b1, c1), (a1, b2, c2), (a2, b1, c2), (a2, b2, c1))
            )
            idx2 = tuple(
                _SUBSET_INDEX[tuple(sorted(t))]
                for t in ((a1, b1, c2), (a1, b2, c1), (a2, b1, c1), (a2, b2, c2))
            )
            pairings.append((parts, idx1, idx2))
    return pairings


_PAIRINGS = _build_pairings()


def iter_copies(n: int):
    """Every canonical K222 copy on [n] exactly once: C(n,6) * 15 of them."""
    for six in combinations(range(1, n + 1), 6):
        for parts, _, _ in _PAIRINGS:
            yield K222Copy(tuple(tuple(six[i] for i in p) for p in parts))


def count_gadgets_exact(chi: Colouring, cap: int = DEFAULT_EXACT_CAP) -> int:
    """Number of canonical K222 copies that are gadgets, by full enumeration."""
    n = chi.n
    if n > cap:
        raise ValueError(f"n={n} exceeds exact cap {cap}; use sampling")
    if n < 6:
        return 0
    values = chi.values
    c3 = chi._c3
    c2 = chi._c2
    count = 0
    r2 = chi.r == 2
    for six in combinations(range(1, n + 1), 6):
        cols = [
            values[c3[six[k] - 1] + c2[six[j] - 1] + six[i] - 1]
            for i, j, k in combinations(range(6), 3)
        ]
        for _, idx1, idx2 in _PAIRINGS:
            if r2:
                # 2 colours: profiles differ iff colour-1 counts differ
                s1 = (cols[idx1[0]] == 1) + (cols[idx1[1]] == 1) \
                    + (cols[idx1[2]] == 1) + (cols[idx1[3]] == 1)
                s2 = (cols[idx2[0]] == 1) + (cols[idx2[1]] == 1) \
                    + (cols[idx2[2]] == 1) + (cols[idx2[3]] == 1)
                if s1 != s2:
                    count += 1
            else:
                if sorted(cols[i] for i in idx1) != sorted(cols[i] for i in idx2):
                    count += 1
    return count


def total_copies(n: int) -> int:
    return comb(n, 6) * 15


def _random_copy(rng: random.Random, n: int) -> K222Copy:
    six = sorted(rng.sample(range(1, n + 1), 6))
    parts, _, _ = _PAIRINGS[rng.randrange(15)]
    return K222Copy(tuple(tuple(six[i] for i in p) for p in parts))


def estimate_gadget_density(chi: Colouring, samples: int, seed: int) -> tuple[float, float]:
    """Monte Carlo fraction of copies that are gadgets, with binomial SE."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if chi.n < 6:
        return 0.0, 0.0
    rng = random.Random(seed)
    hits = sum(
        1 for _ in range(samples) if is_gadget(chi, _random_copy(rng, chi.n)) is not None
    )
    p = hits / samples
    se = (p * (1 - p) / samples) ** 0.5
    return p, se


def collect_gadgets(chi: Colouring, max_count: int, budget: int, seed: int) -> list:
    """Up to max_count distinct gadget records found by seeded random probing
    within `budget` copy inspections."""
    if budget < max_count:
        raise ValueError("budget must be at least max_count")
    found: list = []
    if max_count == 0 or chi.n < 6:
        return found
    rng = random.Random(seed)
    seen = set()
    for _ in range(budget):
        k = _random_copy(rng, chi.n)
        if k.parts in seen:
            continue
        seen.add(k.parts)
        rec = is_gadget(chi, k)
        if rec is not None:
            found.append(rec)
            if len(found) >= max_count:
                break
    return found
