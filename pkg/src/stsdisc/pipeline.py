"""Discrepancy boosting end to end: gadget selection, leave-graph triangle
decomposition, per-colour accounting, the Pasch-trade local search, the
random-embedding baseline, and multicolour analysis via colour merging.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

from .core import Colouring, TripleSystem, colour_profile, discrepancy
from .decompose import (
    DecompositionExhausted,
    SimpleGraph,
    is_k3_divisible,
    shadow,
    triangle_decompose,
)
from .gadgets import (
    GadgetRecord,
    K222Copy,
    collect_gadgets,
    count_gadgets_exact,
    estimate_gadget_density,
    pasch_pair,
    total_copies,
)
from .structure import recover_partition
from .sts import construct_sts, random_embedding, sts_order_ok, validate_sts


def merge_colours(chi: Colouring, keep: int) -> Colouring:
    """2-colouring sending colour `keep` to 1 and everything else to 2."""
    if not 1 <= keep <= chi.r:
        raise ValueError("keep colour out of range")
    return Colouring(chi.n, 2, bytes(1 if v == keep else 2 for v in chi.values))


@dataclass
class SelectionParams:
    target_count: int
    vertex_cap: int | None = None  # default ceil(n/28), resolved per run
    mode: str = "greedy"  # "greedy" | "sampled"
    p: float | None = None  # sampled-mode inclusion probability; default 1e-5 * n^-4
    seed: int = 0

    def resolved_cap(self, n: int) -> int:
        cap = self.vertex_cap if self.vertex_cap is not None else -(-n // 28)
        if cap < 1:
            raise ValueError("vertex_cap must be >= 1")
        return cap

    def resolved_p(self, n: int) -> float:
        return self.p if self.p is not None else 1e-5 * n**-4


@dataclass
class GadgetSelection:
    chosen: list  # GadgetRecords with pairwise edge-disjoint shadows

    def __len__(self):
        return len(self.chosen)


def _within_cap(rec: GadgetRecord, counts, cap: int) -> bool:
    return all(counts.get(v, 0) < cap for v in rec.copy.vertices())


def _take(rec: GadgetRecord, counts, used_pairs) -> None:
    for v in rec.copy.vertices():
        counts[v] = counts.get(v, 0) + 1
    used_pairs.update(rec.copy.shadow_pairs())


def select_disjoint_gadgets(records: list, params: SelectionParams, n: int) -> GadgetSelection:
    """Shadow-edge-disjoint, vertex-cap-respecting subset of the records.

    greedy: seeded shuffle, then first-fit acceptance up to target_count.
    sampled: independent inclusion with probability p * n^-4, then every
    record in a shadow-conflicting pair is discarded and the vertex cap is
    enforced in order.
    """
    cap = params.resolved_cap(n)
    rng = random.Random(params.seed)
    chosen: list = []
    counts: dict = {}
    used_pairs: set = set()

    if params.mode == "greedy":
        order = list(records)
        rng.shuffle(order)
        for rec in order:
            if len(chosen) >= params.target_count:
                break
            if not _within_cap(rec, counts, cap):
                continue
            if any(pq in used_pairs for pq in rec.copy.shadow_pairs()):
                continue
            chosen.append(rec)
            _take(rec, counts, used_pairs)
        return GadgetSelection(chosen)

    if params.mode != "sampled":
        raise ValueError(f"unknown selection mode {params.mode!r}")
    prob = params.resolved_p(n)
    sampled = [rec for rec in records if rng.random() < prob]
    conflicted = set()
    for i, j in combinations(range(len(sampled)), 2):
        si = set(sampled[i].copy.shadow_pairs())
        if si & set(sampled[j].copy.shadow_pairs()):
            conflicted.add(i)
            conflicted.add(j)
    for i, rec in enumerate(sampled):
        if i in conflicted or not _within_cap(rec, counts, cap):
            continue
        chosen.append(rec)
        _take(rec, counts, used_pairs)
    return GadgetSelection(chosen)


@dataclass
class PipelineReport:
    n: int
    r: int
    status: str  # "ok" | "exhausted"
    gadgets_found: int
    selection: GadgetSelection
    base_triangles: list
    t_counts: tuple  # per-colour triple counts of the decomposition
    i_sums: tuple  # per-colour sums of I_c over the selection
    s_counts: tuple  # S_c = T_c + sum I_c
    chosen_colour: int | None
    final_system: TripleSystem | None
    discrepancy: Fraction | None
    decomposition_nodes: int = 0

    @property
    def selected(self) -> int:
        return len(self.selection)


def _gadget_i_values(rec: GadgetRecord, r: int) -> tuple:
    """I_c = max edges of colour c over the record's two Pasch configurations."""
    return tuple(max(rec.profile1[c], rec.profile2[c]) for c in range(r))


def _best_configuration(chi: Colouring, rec: GadgetRecord, colour: int) -> tuple:
    """The Pasch configuration with more edges of `colour`; ties go to p1."""
    pair = pasch_pair(rec.copy)
    if rec.profile2[colour - 1] > rec.profile1[colour - 1]:
        return pair.p2
    return pair.p1


def _leave_graph(n: int, selection: GadgetSelection) -> SimpleGraph:
    g = SimpleGraph.complete(n)
    for rec in selection.chosen:
        for u, v in rec.copy.shadow_pairs():
            g.remove_edge(u, v)
    return g


def _gadget_quality(rec: GadgetRecord) -> int:
    """Largest per-colour count difference between the two configurations.

    Swapping a gadget's worse configuration for its better one shifts the
    leading colour by up to this much, so higher-quality gadgets are packed
    first."""
    return max(abs(a - b) for a, b in zip(rec.profile1, rec.profile2))


def _tiered_pack(records: list, params: SelectionParams, n: int, seed: int) -> GadgetSelection:
    """Greedy disjoint packing that tries high-quality gadgets first, with a
    seeded shuffle inside each quality tier."""
    cap = params.resolved_cap(n)
    rng = random.Random(seed)
    order: list = []
    for q in sorted({_gadget_quality(rec) for rec in records}, reverse=True):
        tier = [rec for rec in records if _gadget_quality(rec) == q]
        rng.shuffle(tier)
        order.extend(tier)
    chosen: list = []
    counts: dict = {}
    used_pairs: set = set()
    for rec in order:
        if len(chosen) >= params.target_count:
            break
        if not _within_cap(rec, counts, cap):
            continue
        if any(pq in used_pairs for pq in rec.copy.shadow_pairs()):
            continue
        chosen.append(rec)
        _take(rec, counts, used_pairs)
    return GadgetSelection(chosen)


# Leave graphs can be provably undecomposable (K_13 minus two disjoint K222
# shadows is one example), so on failure boost searches subsets of the
# selection in decreasing size order rather than giving up or only dropping
# a fixed half. Individual attempts are cheap, hence the small per-attempt
# node budget and the overall attempt cap.
_RETRY_ATTEMPTS = 60
_RETRY_BUDGET = 150_000


def _decomposable_subset(n: int, selection: GadgetSelection, budget: int):
    """Largest decomposable subset of the selection found within the attempt
    cap. Returns (selection, triangles, leave graph), or None if even the
    empty selection exhausts the node budget."""
    attempts = 0
    for size in range(len(selection), 0, -1):
        if attempts >= _RETRY_ATTEMPTS:
            break
        for sub in combinations(selection.chosen, size):
            attempts += 1
            if attempts > _RETRY_ATTEMPTS:
                break
            sel = GadgetSelection(list(sub))
            g = _leave_graph(n, sel)
            ok, reason = is_k3_divisible(g)
            assert ok, f"leave graph not K3-divisible: {reason}"
            try:
                return sel, triangle_decompose(g, budget=min(budget, _RETRY_BUDGET)), g
            except (DecompositionExhausted, ValueError):
                continue
    # the empty selection leaves K_n, which decomposes for every valid order
    sel = GadgetSelection([])
    g = _leave_graph(n, sel)
    try:
        return sel, triangle_decompose(g, budget=budget), g
    except DecompositionExhausted:
        return None


def _colour_counts(chi: Colouring, triangles: list) -> list:
    counts = [0] * chi.r
    for t in triangles:
        counts[chi.colour_of(t) - 1] += 1
    return counts


def boost(
    chi: Colouring,
    params: SelectionParams,
    budget: int = 10**8,
    collect_budget: int | None = None,
) -> PipelineReport:
    """Select shadow-disjoint gadgets, triangle-decompose the leave graph,
    and complete it with the per-gadget Pasch choice maximizing one colour.

    In greedy mode several tiered packings and several seeded decomposition
    orders are tried and the outcome with the largest leading colour count
    is kept; sampled mode uses the single probabilistic selection.

    Guarantees on success: the output validates as an STS, the counts obey
    3|T| + 12|I| = C(n,2), every gadget has sum_c I_c >= 5, and
    S_{c*} >= (C(n,2)/3 + |I|) / r.
    """
    n, r = chi.n, chi.r
    if not sts_order_ok(n):
        raise ValueError(f"no STS of order {n}: n mod 6 = {n % 6}, need 1 or 3")
    probe = collect_budget if collect_budget is not None else min(total_copies(n), 60_000)
    probe = max(probe, 1)
    records = collect_gadgets(chi, max_count=probe, budget=probe, seed=params.seed)

    pack_tries = 8 if params.mode == "greedy" else 1
    candidates = []  # ((size, quality sum), selection, triangles, leave graph)
    seen_selections: set = set()
    last_selection = GadgetSelection([])
    for i in range(pack_tries):
        if params.mode == "greedy":
            selection = _tiered_pack(records, params, n, params.seed * 97 + i)
        else:
            selection = select_disjoint_gadgets(records, params, n)
        last_selection = selection
        key = frozenset(rec.copy.parts for rec in selection.chosen)
        if key in seen_selections:
            continue
        seen_selections.add(key)
        out = _decomposable_subset(n, selection, budget)
        if out is None:
            continue
        sel, triangles, g = out
        score = (len(sel), sum(_gadget_quality(rec) for rec in sel.chosen))
        candidates.append((score, sel, triangles, g))
    if not candidates:
        return PipelineReport(
            n, r, "exhausted", len(records), last_selection, [], (), (), (),
            None, None, None, decomposition_nodes=budget,
        )

    candidates.sort(key=lambda item: item[0], reverse=True)
    # small orders have few packable gadgets, so more of the effort goes into
    # alternative decompositions of the same leave graph there
    keep = 2 if n <= 15 else 1
    reseeds = 40 if n <= 15 else 12
    best = None  # (leading count, selection, triangles, t_counts, i_sums)
    for _, sel, first_triangles, g in candidates[:keep]:
        i_sums = [0] * r
        for rec in sel.chosen:
            for c, val in enumerate(_gadget_i_values(rec, r)):
                i_sums[c] += val
        for ds in range(reseeds):
            if ds == 0:
                triangles = first_triangles
            else:
                try:
                    triangles = triangle_decompose(
                        g,
                        budget=min(budget, _RETRY_BUDGET),
                        random_order_seed=params.seed * 31 + ds,
                    )
                except (DecompositionExhausted, ValueError):
                    continue
            t_counts = _colour_counts(chi, triangles)
            lead = max(t + i for t, i in zip(t_counts, i_sums))
            if best is None or lead > best[0]:
                best = (lead, sel, triangles, t_counts, i_sums)

    _, selection, triangles, t_counts, i_sums = best
    for rec in selection.chosen:
        assert sum(_gadget_i_values(rec, r)) >= 5, "gadget I_c sum below 5"
    s_counts = tuple(t_counts[c] + i_sums[c] for c in range(r))
    top = max(s_counts)
    chosen_colour = s_counts.index(top) + 1  # smallest colour id on ties

    triples = list(triangles)
    for rec in selection.chosen:
        triples.extend(_best_configuration(chi, rec, chosen_colour))
    final = TripleSystem(n, triples)
    ok, violation = validate_sts(final)
    assert ok, f"boost produced an invalid system: {violation}"
    disc = discrepancy(final, chi)

    assert 3 * len(triangles) + 12 * len(selection) == comb(n, 2)
    assert top >= Fraction(comb(n, 2), 3 * r) + Fraction(len(selection), r)
    assert colour_profile(final, chi)[chosen_colour - 1] == top

    return PipelineReport(
        n, r, "ok", len(records), selection, triangles,
        tuple(t_counts), tuple(i_sums), s_counts, chosen_colour, final, disc,
    )


def _pair_map(s: TripleSystem) -> dict:
    pm = {}
    for t in s.triples:
        for u, v in combinations(t, 2):
            pm[(u, v)] = t
    return pm


def _copy_of_pasch(triples) -> K222Copy:
    """Reconstruct the K222 copy a Pasch configuration decomposes: the three
    parts are exactly the vertex pairs not covered by the configuration."""
    verts = sorted({v for t in triples for v in t})
    covered = {pq for t in triples for pq in combinations(sorted(t), 2)}
    parts = [pq for pq in combinations(verts, 2) if pq not in covered]
    assert len(parts) == 3
    return K222Copy.canonical(*parts)


def find_pasch_trades(s: TripleSystem):
    """Yield (pasch, complement) pairs of configurations inside the system."""
    pm = _pair_map(s)
    triples = sorted(s.triples)
    for t1, t2 in combinations(triples, 2):
        common = set(t1) & set(t2)
        if len(common) != 1:
            continue
        x = common.pop()
        a, b = sorted(set(t1) - {x})
        c, d = sorted(set(t2) - {x})
        for u, v in (((a, c), (b, d)), ((a, d), (b, c))):
            t3 = pm.get(tuple(sorted(u)))
            t4 = pm.get(tuple(sorted(v)))
            if t3 is None or t4 is None or t3 == t4:
                continue
            y3 = (set(t3) - set(u)).pop()
            y4 = (set(t4) - set(v)).pop()
            if y3 != y4 or y3 in (x, a, b, c, d):
                continue
            pasch = (t1, t2, t3, t4)
            if len({vv for t in pasch for vv in t}) != 6:
                continue
            copy = _copy_of_pasch(pasch)
            pp = pasch_pair(copy)
            complement = pp.p2 if set(pp.p1) == set(pasch) else pp.p1
            yield pasch, complement


def pasch_trade_search(
    s: TripleSystem, chi: Colouring, iterations: int, seed: int
) -> TripleSystem:
    """Hill climb: repeatedly swap a Pasch configuration for its complement
    when that strictly grows the leading colour's count. Discrepancy is
    monotone non-decreasing and validity is preserved."""
    rng = random.Random(seed)
    current = TripleSystem(s.n, list(s.triples))
    for _ in range(iterations):
        counts = colour_profile(current, chi)
        lead = counts.index(max(counts)) + 1
        trades = list(find_pasch_trades(current))
        rng.shuffle(trades)
        applied = False
        for pasch, complement in trades:
            gain = sum(chi.colour_of(t) == lead for t in complement) - sum(
                chi.colour_of(t) == lead for t in pasch
            )
            if gain > 0:
                triples = [t for t in current.triples if t not in set(pasch)]
                triples.extend(complement)
                current = TripleSystem(current.n, triples)
                applied = True
                break
        if not applied:
            break
    return current


def baseline_random_embedding(chi: Colouring, trials: int, seed: int):
    """Best of `trials` random embeddings of one constructed STS.

    Returns (system, discrepancy)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    base = construct_sts(chi.n)
    rng = random.Random(seed)
    best = None
    best_disc = None
    for _ in range(trials):
        emb = random_embedding(base, rng.randrange(2**63))
        d = discrepancy(emb, chi)
        if best_disc is None or d > best_disc:
            best, best_disc = emb, d
    return best, best_disc


@dataclass
class AnalyzeParams:
    density_threshold: float = 0.005
    residual_fraction: float = 0.05
    exact_cap: int = 13
    samples: int = 4000
    seed: int = 0


@dataclass
class MulticolourVerdict:
    kind: str  # "many_gadgets" | "two_dominant" | "inconclusive"
    colour: int | None = None  # for many_gadgets
    dominant: tuple | None = None  # (c*, d*) for two_dominant
    residual_count: int | None = None


@dataclass
class MulticolourReport:
    n: int
    r: int
    per_colour: dict = field(default_factory=dict)
    verdict: MulticolourVerdict | None = None


def analyze_r_colouring(chi: Colouring, params: AnalyzeParams | None = None) -> MulticolourReport:
    """Per-colour gadget density of the merged 2-colourings plus recovered
    structure, and the many-gadgets / two-dominant-colours verdict."""
    if chi.r < 3:
        raise ValueError("multicolour analysis needs r >= 3")
    params = params or AnalyzeParams()
    report = MulticolourReport(chi.n, chi.r)
    exact = chi.n <= params.exact_cap
    densities = {}
    for c in range(1, chi.r + 1):
        merged = merge_colours(chi, c)
        if exact:
            density = count_gadgets_exact(merged) / total_copies(chi.n)
            se = 0.0
        else:
            density, se = estimate_gadget_density(merged, params.samples, params.seed + c)
        structure = recover_partition(merged, seed=params.seed)
        densities[c] = density
        report.per_colour[c] = {
            "gadget_density": density,
            "density_se": se,
            "mode": "exact" if exact else "sampled",
            "structure": structure,
        }
    best_colour = max(densities, key=lambda c: (densities[c], -c))
    if densities[best_colour] > params.density_threshold:
        report.verdict = MulticolourVerdict("many_gadgets", colour=best_colour)
        return report

    totals = [0] * chi.r
    for v in chi.values:
        totals[v - 1] += 1
    order = sorted(range(1, chi.r + 1), key=lambda c: (-totals[c - 1], c))
    c_star, d_star = order[0], order[1]
    residual = len(chi.values) - totals[c_star - 1] - totals[d_star - 1]
    if residual <= params.residual_fraction * comb(chi.n, 3):
        report.verdict = MulticolourVerdict(
            "two_dominant", dominant=(c_star, d_star), residual_count=residual
        )
    else:
        report.verdict = MulticolourVerdict("inconclusive")
    return report
