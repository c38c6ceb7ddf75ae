"""Structure recovery for 2-colourings: pair colourings f_xy, unbalanced-C4
detection, matching-based classification of {0,+1,-1} edge colourings, pair
parity, and recovery of the two-part split behind a colouring.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .core import Colouring
from .generators import EdgeColouringZPM

# A pair xy is judged even when at least this fraction of the inspected
# f_xy values is zero. For split colourings the zero fraction of an odd
# pair is at most (n-2)/(2(n-3)) + perturbation slack, which stays below
# 0.75 for every order of interest, while even pairs stay near 1.
EVEN_ZERO_THRESHOLD = 0.75


@dataclass
class PairColouring:
    """f_xy(uv) = chi(xuv) - chi(yuv) on pairs of [n] \\ {x, y}."""

    x: int
    y: int
    vertices: tuple
    values: dict = field(default_factory=dict)

    def value(self, u: int, v: int) -> int:
        return self.values[(u, v)] if u < v else self.values[(v, u)]


def _fxy_value(chi: Colouring, x: int, y: int, u: int, v: int) -> int:
    return chi.colour(*sorted((x, u, v))) - chi.colour(*sorted((y, u, v)))


def pair_colouring(chi: Colouring, x: int, y: int) -> PairColouring:
    if chi.r != 2:
        raise ValueError("pair colourings are defined for 2-colourings; merge colours first")
    if x == y:
        raise ValueError("x and y must differ")
    verts = tuple(v for v in range(1, chi.n + 1) if v not in (x, y))
    values = {
        (u, v): _fxy_value(chi, x, y, u, v) for u, v in combinations(verts, 2)
    }
    return PairColouring(x, y, verts, values)


@dataclass(frozen=True)
class C4Witness:
    """4 distinct vertices a,b,c,d with f(ab) + f(cd) != f(bc) + f(ad)."""

    cycle: tuple  # (a, b, c, d)
    edge_values: tuple  # (f(ab), f(bc), f(cd), f(da))


def _check_c4(f, a, b, c, d):
    """Witness for the 4-cycle a-b-c-d (diagonals ac, bd) or None."""
    ab, cd = f.value(a, b), f.value(c, d)
    bc, da = f.value(b, c), f.value(d, a)
    if ab + cd != bc + da:
        return C4Witness((a, b, c, d), (ab, bc, cd, da))
    return None


def find_unbalanced_c4(f, cap: int = 25, samples: int = 100_000, seed: int = 0):
    """First unbalanced C4 in deterministic scan order, or None.

    Exhaustive over all 3 * C(m, 4) four-cycles when m <= cap; seeded random
    sampling beyond that (a miss is then not a proof of absence).
    """
    verts = f.vertices
    m = len(verts)
    if m <= cap:
        for a, b, c, d in combinations(verts, 4):
            # the three cyclic orders of a 4-set, by choice of diagonals
            for cyc in ((a, b, c, d), (a, b, d, c), (a, c, b, d)):
                w = _check_c4(f, *cyc)
                if w is not None:
                    return w
        return None
    rng = random.Random(seed)
    for _ in range(samples):
        a, b, c, d = rng.sample(verts, 4)
        w = _check_c4(f, a, b, c, d)
        if w is not None:
            return w
    return None


@dataclass
class PairClassification:
    parity: str  # "even" | "odd"
    exceptional: tuple
    a_part: tuple  # empty for even
    b_part: tuple
    fit_defect: int


def _greedy_matching(edges):
    """Inclusion-maximal matching, edges taken in lexicographic order."""
    used: set = set()
    matching = []
    for u, v in edges:
        if u not in used and v not in used:
            matching.append((u, v))
            used.add(u)
            used.add(v)
    return matching, used


def _min_vertex_cover_bipartite(left, right, edges):
    """Koenig cover of a bipartite graph given as (u in left, v in right) edges."""
    adj: dict = {u: [] for u in left}
    for u, v in edges:
        adj[u].append(v)
    match_l: dict = {}
    match_r: dict = {}

    def augment(u, seen):
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            if v not in match_r or augment(match_r[v], seen):
                match_l[u] = v
                match_r[v] = u
                return True
        return False

    for u in sorted(left):
        augment(u, set())
    # alternating reachability from unmatched left vertices
    visited_l, visited_r = set(), set()
    stack = [u for u in left if u not in match_l]
    visited_l.update(stack)
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in visited_r:
                visited_r.add(v)
                w = match_r.get(v)
                if w is not None and w not in visited_l:
                    visited_l.add(w)
                    stack.append(w)
    cover = [u for u in sorted(left) if u not in visited_l] + sorted(visited_r)
    return cover


def classify_zpm(f: EdgeColouringZPM) -> PairClassification:
    """Even/odd classification of a {0,+1,-1} edge colouring via greedy
    inclusion-maximal matchings in colours +1 and -1.

    fit_defect counts the pairs violating the classified pattern after the
    exceptional vertices are removed; it is 0 exactly on structured inputs.
    """
    pairs = sorted(f.values)
    m_pos, v_pos = _greedy_matching([p for p in pairs if f.values[p] == 1])
    m_neg, v_neg = _greedy_matching([p for p in pairs if f.values[p] == -1])
    nonzero_verts = v_pos | v_neg

    if len(nonzero_verts) <= 8:
        exceptional = tuple(sorted(nonzero_verts))
        kept = [v for v in f.vertices if v not in nonzero_verts]
        defect = sum(1 for u, v in combinations(kept, 2) if f.value(u, v) != 0)
        return PairClassification("even", exceptional, (), (), defect)

    exceptional = set(f.vertices) - nonzero_verts  # the all-zero leftover
    a_part = set(v_pos)
    b_part = v_neg - v_pos
    bad_cross = [
        (u, v)
        for u in sorted(a_part)
        for v in sorted(b_part)
        if f.value(u, v) != 0
    ]
    if bad_cross:
        cover = _min_vertex_cover_bipartite(a_part, b_part, bad_cross)
        exceptional.update(cover)
        a_part -= set(cover)
        b_part -= set(cover)

    defect = 0
    for u, v in combinations(sorted(a_part | b_part), 2):
        val = f.value(u, v)
        if u in a_part and v in a_part:
            defect += val != 1
        elif u in b_part and v in b_part:
            defect += val != -1
        else:
            defect += val != 0
    return PairClassification(
        "odd", tuple(sorted(exceptional)), tuple(sorted(a_part)), tuple(sorted(b_part)), defect
    )


def pair_parity(chi: Colouring, x: int, y: int, sample_size: int = 1000, seed: int = 0) -> str:
    """'even' iff the zero fraction of f_xy meets EVEN_ZERO_THRESHOLD.

    Exact over all C(n-2, 2) pairs when that is at most sample_size,
    seeded sampling otherwise.
    """
    if chi.r != 2:
        raise ValueError("parity is defined for 2-colourings")
    verts = [v for v in range(1, chi.n + 1) if v not in (x, y)]
    total = comb(len(verts), 2)
    if total == 0:
        return "even"
    if total <= sample_size:
        zeros = sum(
            1 for u, v in combinations(verts, 2) if _fxy_value(chi, x, y, u, v) == 0
        )
        return "even" if zeros >= EVEN_ZERO_THRESHOLD * total else "odd"
    rng = random.Random(seed)
    zeros = 0
    for _ in range(sample_size):
        u, v = rng.sample(verts, 2)
        zeros += _fxy_value(chi, x, y, u, v) == 0
    return "even" if zeros >= EVEN_ZERO_THRESHOLD * sample_size else "odd"


@dataclass
class StructureReport:
    x_part: tuple
    y_part: tuple
    inside_colour: int
    cross_colour: int
    mismatch_count: int

    @property
    def mismatch_fraction(self) -> float:
        n = len(self.x_part) + len(self.y_part)
        return self.mismatch_count / comb(n, 3)


def _majority_colour(votes, r, exclude=None):
    best = None
    for c in range(1, r + 1):
        if c == exclude:
            continue
        if best is None or votes[c - 1] > votes[best - 1]:
            best = c
    return best


def recover_partition(chi: Colouring, seed: int = 0, sample_size: int = 1000) -> StructureReport:
    """Recover a split partition from a 2-colouring via pair parities.

    Vertex 1 anchors X; every vertex whose pair with the anchor is even
    joins X. Inside/cross colours are majority votes, ties toward colour 1.
    mismatch_count is an exact full pass over all C(n, 3) triples.
    """
    if chi.r != 2:
        raise ValueError("partition recovery is defined for 2-colourings")
    n = chi.n
    in_x = [False] * (n + 1)
    in_x[1] = True
    for v in range(2, n + 1):
        in_x[v] = pair_parity(chi, 1, v, sample_size=sample_size, seed=seed) == "even"
    x_part = tuple(v for v in range(1, n + 1) if in_x[v])
    y_part = tuple(v for v in range(1, n + 1) if not in_x[v])

    votes_inside = [0] * chi.r
    votes_cross = [0] * chi.r
    k = 0
    values = chi.values
    for c in range(3, n + 1):
        for b in range(2, c):
            for a in range(1, b):
                col = values[k]
                k += 1
                if in_x[a] == in_x[b] == in_x[c]:
                    votes_inside[col - 1] += 1
                else:
                    votes_cross[col - 1] += 1
    inside_colour = _majority_colour(votes_inside, chi.r)
    if sum(votes_cross) == 0:
        cross_colour = _majority_colour(votes_cross, chi.r, exclude=inside_colour)
    else:
        cross_colour = _majority_colour(votes_cross, chi.r)

    mismatch = 0
    k = 0
    for c in range(3, n + 1):
        for b in range(2, c):
            for a in range(1, b):
                ideal = inside_colour if in_x[a] == in_x[b] == in_x[c] else cross_colour
                mismatch += values[k] != ideal
                k += 1
    return StructureReport(x_part, y_part, inside_colour, cross_colour, mismatch)


def parity_additivity_check(chi: Colouring, trials: int, seed: int, sample_size: int = 1000) -> int:
    """Sample vertex triples (x, y, z) and count violations of the parity
    composition rule: equal parities of xy, yz force xz even, unequal force odd."""
    if chi.r != 2:
        raise ValueError("parity is defined for 2-colourings")
    rng = random.Random(seed)
    violations = 0
    for _ in range(trials):
        x, y, z = rng.sample(range(1, chi.n + 1), 3)
        pxy = pair_parity(chi, x, y, sample_size=sample_size, seed=seed)
        pyz = pair_parity(chi, y, z, sample_size=sample_size, seed=seed)
        pxz = pair_parity(chi, x, z, sample_size=sample_size, seed=seed)
        expected = "even" if pxy == pyz else "odd"
        violations += pxz != expected
    return violations
