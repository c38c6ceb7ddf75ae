"""Vertex/triple indexing, colourings, triple systems and the discrepancy functional.

Vertices are integers in [1, n]. A triple is a sorted tuple (a, b, c) with
a < b < c. Triples are indexed by their colex rank so that a colouring of
all C(n, 3) triples is a flat array.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

Triple = tuple[int, int, int]


def check_triple(t: Triple, n: int) -> None:
    a, b, c = t
    if not (1 <= a < b < c <= n):
        raise ValueError(f"invalid triple {t} for n={n}")


def triple_rank(t: Triple, n: int) -> int:
    """Colex rank of a triple: (1,2,3) -> 0, ..., (n-2,n-1,n) -> C(n,3)-1."""
    check_triple(t, n)
    a, b, c = t
    return comb(c - 1, 3) + comb(b - 1, 2) + (a - 1)


def triple_unrank(k: int, n: int) -> Triple:
    """Inverse of triple_rank."""
    if not 0 <= k < comb(n, 3):
        raise ValueError(f"rank {k} out of range for n={n}")
    c3 = [comb(i, 3) for i in range(n + 1)]
    c = bisect.bisect_right(c3, k) - 1  # largest c with C(c,3) <= k
    k -= c3[c]
    c2 = [comb(i, 2) for i in range(c + 1)]
    b = bisect.bisect_right(c2, k) - 1
    k -= c2[b]
    return (k + 1, b + 1, c + 1)


class Colouring:
    """An r-colouring of all triples of [n], stored densely in colex order.

    Colour ids are 1-based. Instances are treated as immutable after
    construction.
    """

    __slots__ = ("n", "r", "values", "_c3", "_c2")

    def __init__(self, n: int, r: int, values):
        if r < 2:
            raise ValueError("need at least 2 colours")
        vals = bytes(values)
        if len(vals) != comb(n, 3):
            raise ValueError(f"expected {comb(n, 3)} values, got {len(vals)}")
        if vals and not (1 <= min(vals) and max(vals) <= r):
            raise ValueError("colour id out of range")
        self.n = n
        self.r = r
        self.values = vals
        # binomial tables so colour lookups avoid comb() calls in hot loops
        self._c3 = [comb(i, 3) for i in range(n)]
        self._c2 = [comb(i, 2) for i in range(n)]

    @classmethod
    def constant(cls, n: int, r: int, colour: int = 1) -> "Colouring":
        if not 1 <= colour <= r:
            raise ValueError("colour out of range")
        return cls(n, r, bytes([colour]) * comb(n, 3))

    @classmethod
    def from_function(cls, n: int, r: int, fn) -> "Colouring":
        vals = bytearray(comb(n, 3))
        i = 0
        for c in range(3, n + 1):
            for b in range(2, c):
                for a in range(1, b):
                    vals[i] = fn(a, b, c)
                    i += 1
        return cls(n, r, vals)

    def colour(self, a: int, b: int, c: int) -> int:
        return self.values[self._c3[c - 1] + self._c2[b - 1] + a - 1]

    def colour_of(self, t: Triple) -> int:
        return self.colour(*t)

    def __eq__(self, other):
        return (
            isinstance(other, Colouring)
            and self.n == other.n
            and self.r == other.r
            and self.values == other.values
        )

    def __hash__(self):
        return hash((self.n, self.r, self.values))


@dataclass
class TripleSystem:
    """A set of triples on [n]; an STS when every pair is covered exactly once."""

    n: int
    triples: list = field(default_factory=list)

    def __post_init__(self):
        for t in self.triples:
            check_triple(t, self.n)
        if len(set(self.triples)) != len(self.triples):
            raise ValueError("duplicate triples")

    def __len__(self):
        return len(self.triples)


def colour_profile(s: TripleSystem, chi: Colouring) -> tuple:
    """counts[c-1] = number of triples of s with colour c; sums to |s|."""
    if s.n != chi.n:
        raise ValueError(f"order mismatch: system n={s.n}, colouring n={chi.n}")
    counts = [0] * chi.r
    for t in s.triples:
        counts[chi.colour_of(t) - 1] += 1
    return tuple(counts)


def discrepancy(s: TripleSystem, chi: Colouring) -> Fraction:
    """r * max_c (counts[c] - |s|/r), exact."""
    if not s.triples:
        raise ValueError("discrepancy of an empty system is undefined")
    counts = colour_profile(s, chi)
    return chi.r * (max(counts) - Fraction(len(s), chi.r))


# ---------------------------------------------------------------------------
# file formats

def write_triple_system(s: TripleSystem, path) -> None:
    with open(path, "w") as f:
        f.write(f"{s.n}\n")
        for a, b, c in sorted(s.triples):
            f.write(f"{a} {b} {c}\n")


def read_triple_system(path) -> TripleSystem:
    with open(path) as f:
        lines = [ln.strip() for ln in f if ln.strip()]
    n = int(lines[0])
    triples = []
    for ln in lines[1:]:
        a, b, c = map(int, ln.split())
        triples.append((a, b, c))
    return TripleSystem(n, triples)


def write_colouring(chi: Colouring, path, sparse_default: int | None = None) -> None:
    """Dense format: header 'n r' then one colour per line in colex order.

    With sparse_default, header is 'n r default=<c>' followed by
    'a b c colour' lines for the exceptions only.
    """
    with open(path, "w") as f:
        if sparse_default is None:
            f.write(f"{chi.n} {chi.r}\n")
            for v in chi.values:
                f.write(f"{v}\n")
        else:
            if not 1 <= sparse_default <= chi.r:
                raise ValueError("default colour out of range")
            f.write(f"{chi.n} {chi.r} default={sparse_default}\n")
            for k, v in enumerate(chi.values):
                if v != sparse_default:
                    a, b, c = triple_unrank(k, chi.n)
                    f.write(f"{a} {b} {c} {v}\n")


def read_colouring(path) -> Colouring:
    with open(path) as f:
        header = f.readline().split()
        if len(header) == 3 and header[2].startswith("default="):
            n, r = int(header[0]), int(header[1])
            default = int(header[2].split("=", 1)[1])
            vals = bytearray([default]) * comb(n, 3)
            for ln in f:
                if not ln.strip():
                    continue
                a, b, c, col = map(int, ln.split())
                vals[triple_rank((a, b, c), n)] = col
            return Colouring(n, r, vals)
        n, r = int(header[0]), int(header[1])
        vals = bytearray()
        for ln in f:
            if ln.strip():
                vals.append(int(ln))
        return Colouring(n, r, vals)
