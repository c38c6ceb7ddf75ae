"""Colouring generators: the two-part split construction, random colourings,
perturbations, and structured {0,+1,-1} edge colourings of K_n.

All randomness flows through random.Random(seed) (MT19937), so identical
seeds give identical outputs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb, isqrt

from .core import Colouring


@dataclass(frozen=True)
class SplitSpec:
    """Split colouring spec: X = {1..x_size}, Y = rest; triples touching both
    sides get colour_cross, all others colour_inside."""

    n: int
    x_size: int
    colour_cross: int = 1
    colour_inside: int = 2
    r: int = 2

    def __post_init__(self):
        if not 0 <= self.x_size <= self.n:
            raise ValueError("x_size out of range")
        if self.colour_cross == self.colour_inside:
            raise ValueError("cross and inside colours must differ")
        for c in (self.colour_cross, self.colour_inside):
            if not 1 <= c <= self.r:
                raise ValueError("colour id out of range")


def example1_colouring(spec: SplitSpec) -> Colouring:
    x = spec.x_size

    def fn(a, b, c):
        inside_x = c <= x  # triples are sorted, so max element decides
        inside_y = a > x
        return spec.colour_inside if (inside_x or inside_y) else spec.colour_cross

    return Colouring.from_function(spec.n, spec.r, fn)


def balanced_split_size(n: int) -> int:
    """floor((3 + sqrt(3))/6 * n), computed in exact integer arithmetic.

    floor((3n + n*sqrt(3)) / 6) = (3n + isqrt(3*n^2)) // 6: n*sqrt(3) is
    irrational for n > 0, so adding its fractional part never pushes the
    sum over the next multiple of 6.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    return (3 * n + isqrt(3 * n * n)) // 6


def random_colouring(n: int, r: int, seed: int) -> Colouring:
    if r < 2:
        raise ValueError("need at least 2 colours")
    rng = random.Random(seed)
    return Colouring(n, r, bytes(rng.randrange(1, r + 1) for _ in range(comb(n, 3))))


def perturb(chi: Colouring, flip_count: int, seed: int) -> Colouring:
    """Flip exactly flip_count distinct triples to a uniformly random other colour."""
    m = comb(chi.n, 3)
    if flip_count > m:
        raise ValueError(f"flip_count {flip_count} exceeds C(n,3)={m}")
    rng = random.Random(seed)
    vals = bytearray(chi.values)
    for k in rng.sample(range(m), flip_count):
        new = rng.randrange(1, chi.r)
        if new >= vals[k]:
            new += 1
        vals[k] = new
    return Colouring(chi.n, chi.r, vals)


@dataclass
class EdgeColouringZPM:
    """A {0,+1,-1} colouring of the edges of the complete graph on `vertices`."""

    vertices: tuple
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        self.vertices = tuple(self.vertices)
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValueError("duplicate vertices")
        m = len(self.vertices)
        if len(self.values) != m * (m - 1) // 2:
            raise ValueError("values must cover every pair")
        for (u, v), val in self.values.items():
            if u >= v or u not in vs or v not in vs:
                raise ValueError(f"bad pair ({u},{v})")
            if val not in (-1, 0, 1):
                raise ValueError(f"value {val} not in {{0,+1,-1}}")

    def value(self, u: int, v: int) -> int:
        return self.values[(u, v)] if u < v else self.values[(v, u)]


def structured_zpm(n: int, a_size: int) -> EdgeColouringZPM:
    """+1 inside A = {1..a_size}, -1 inside B = rest, 0 across."""
    if not 0 <= a_size <= n:
        raise ValueError("a_size out of range")
    values = {}
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if v <= a_size:
                values[(u, v)] = 1
            elif u > a_size:
                values[(u, v)] = -1
            else:
                values[(u, v)] = 0
    return EdgeColouringZPM(tuple(range(1, n + 1)), values)
