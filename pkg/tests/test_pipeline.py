from fractions import Fraction
from math import comb

import pytest

from stsdisc.core import Colouring, colour_profile, discrepancy
from stsdisc.generators import SplitSpec, example1_colouring, random_colouring
from stsdisc.gadgets import collect_gadgets
from stsdisc.pipeline import (
    AnalyzeParams,
    SelectionParams,
    analyze_r_colouring,
    baseline_random_embedding,
    boost,
    find_pasch_trades,
    merge_colours,
    pasch_trade_search,
    select_disjoint_gadgets,
)
from stsdisc.sts import construct_sts, validate_sts


def test_merge_colours():
    chi = random_colouring(8, 2, seed=0)
    assert merge_colours(chi, 1) == chi
    chi3 = random_colouring(8, 3, seed=1)
    merged = merge_colours(chi3, 2)
    assert merged.r == 2
    for k, v in enumerate(chi3.values):
        assert merged.values[k] == (1 if v == 2 else 2)
    with pytest.raises(ValueError):
        merge_colours(chi3, 4)


def _verify_selection(selection, cap):
    used = set()
    counts = {}
    for rec in selection.chosen:
        pairs = set(rec.copy.shadow_pairs())
        assert not pairs & used
        used |= pairs
        for v in rec.copy.vertices():
            counts[v] = counts.get(v, 0) + 1
    assert all(c <= cap for c in counts.values())


def test_select_empty_input():
    params = SelectionParams(target_count=5, vertex_cap=2)
    assert select_disjoint_gadgets([], params, 13).chosen == []


def test_select_greedy_conflict_rule():
    chi = random_colouring(13, 2, seed=5)
    records = collect_gadgets(chi, 60, 60_000, seed=0)
    # two records on the same 6 vertices always share shadow edges
    same_six = {}
    for rec in records:
        same_six.setdefault(rec.copy.vertices(), []).append(rec)
    conflicting = next(v for v in same_six.values() if len(v) >= 2)[:2]
    params = SelectionParams(target_count=10, vertex_cap=10, seed=1)
    out = select_disjoint_gadgets(conflicting, params, 13)
    assert len(out) == 1


def test_select_greedy_verified_independently():
    chi = random_colouring(15, 2, seed=9)
    records = collect_gadgets(chi, 200, 60_000, seed=2)
    params = SelectionParams(target_count=50, vertex_cap=3, mode="greedy", seed=4)
    out = select_disjoint_gadgets(records, params, 15)
    _verify_selection(out, 3)


def test_select_sampled_mode():
    chi = random_colouring(13, 2, seed=7)
    records = collect_gadgets(chi, 100, 60_000, seed=1)
    # the spec-default probability eps*n^-4 makes selections almost surely empty
    params = SelectionParams(target_count=50, vertex_cap=2, mode="sampled", seed=0)
    assert len(select_disjoint_gadgets(records, params, 13)) == 0
    # with p=1 every record is sampled and all conflicting pairs get dropped
    params = SelectionParams(target_count=50, vertex_cap=2, mode="sampled", p=0.5, seed=0)
    out = select_disjoint_gadgets(records, params, 13)
    _verify_selection(out, 2)


def test_selection_params_validation():
    with pytest.raises(ValueError):
        SelectionParams(target_count=5, vertex_cap=0).resolved_cap(13)
    assert SelectionParams(target_count=5).resolved_cap(21) == 1
    with pytest.raises(ValueError):
        select_disjoint_gadgets([], SelectionParams(target_count=1, mode="bogus"), 13)


def test_boost_no_gadget_colouring():
    chi = example1_colouring(SplitSpec(13, 6))
    report = boost(chi, SelectionParams(target_count=10, vertex_cap=6, seed=0))
    assert report.status == "ok" and report.selected == 0
    assert len(report.base_triangles) == comb(13, 2) // 3
    assert validate_sts(report.final_system)[0]


def test_boost_monochromatic_n7():
    report = boost(Colouring.constant(7, 2, 1), SelectionParams(target_count=5, seed=0))
    assert report.discrepancy == Fraction(7)
    assert report.chosen_colour == 1


def test_boost_accounting_random_colouring():
    chi = random_colouring(13, 2, seed=42)
    report = boost(chi, SelectionParams(target_count=10, vertex_cap=6, seed=0))
    assert report.status == "ok"
    assert 3 * len(report.base_triangles) + 12 * report.selected == comb(13, 2)
    assert report.s_counts == tuple(
        t + i for t, i in zip(report.t_counts, report.i_sums)
    )
    smax = max(report.s_counts)
    assert report.chosen_colour == report.s_counts.index(smax) + 1
    assert smax >= Fraction(comb(13, 2), 3 * 2) + Fraction(report.selected, 2)
    assert validate_sts(report.final_system)[0]
    assert colour_profile(report.final_system, chi)[report.chosen_colour - 1] == smax


def test_boost_rejects_bad_order():
    with pytest.raises(ValueError):
        boost(Colouring.constant(8, 2, 1), SelectionParams(target_count=5))


def test_boost_deterministic():
    chi = random_colouring(13, 2, seed=3)
    params = SelectionParams(target_count=10, vertex_cap=6, seed=5)
    a = boost(chi, params)
    b = boost(chi, params)
    assert a.discrepancy == b.discrepancy
    assert sorted(a.final_system.triples) == sorted(b.final_system.triples)


def test_find_pasch_trades_yields_valid_swaps():
    s = construct_sts(13)
    trades = list(find_pasch_trades(s))
    assert trades
    pasch, complement = trades[0]
    replaced = [t for t in s.triples if t not in set(pasch)] + list(complement)
    from stsdisc.core import TripleSystem

    assert validate_sts(TripleSystem(13, replaced))[0]


def test_trade_search_invariant_on_example1():
    chi = example1_colouring(SplitSpec(13, 6))
    s = construct_sts(13)
    out = pasch_trade_search(s, chi, iterations=5, seed=0)
    assert discrepancy(out, chi) == discrepancy(s, chi)


def test_trade_search_monotone():
    for seed in range(20):
        chi = random_colouring(13, 2, seed=seed)
        s = construct_sts(13)
        out = pasch_trade_search(s, chi, iterations=30, seed=seed)
        assert validate_sts(out)[0]
        assert discrepancy(out, chi) >= discrepancy(s, chi)


def test_baseline():
    chi = Colouring.constant(9, 2, 1)
    _, d1 = baseline_random_embedding(chi, trials=1, seed=0)
    _, d5 = baseline_random_embedding(chi, trials=5, seed=0)
    assert d1 == d5  # monochromatic: constant across embeddings
    with pytest.raises(ValueError):
        baseline_random_embedding(chi, trials=0, seed=0)


def test_baseline_unbalanced_density_gives_positive_discrepancy():
    import random as _random

    rng = _random.Random(1)
    chi = Colouring.from_function(15, 2, lambda a, b, c: 1 if rng.random() < 0.2 else 2)
    _, best = baseline_random_embedding(chi, trials=200, seed=1)
    assert best > 0


def test_analyze_degenerate_third_colour():
    chi2 = random_colouring(10, 2, seed=0)
    chi = Colouring(10, 3, chi2.values)  # colour 3 never used
    report = analyze_r_colouring(chi, AnalyzeParams(seed=0))
    assert report.verdict.kind in ("many_gadgets", "two_dominant")
    if report.verdict.kind == "two_dominant":
        assert report.verdict.residual_count == 0


def test_analyze_random_is_many_gadgets():
    chi = random_colouring(13, 3, seed=2)
    report = analyze_r_colouring(chi)
    assert report.verdict.kind == "many_gadgets"
    assert report.per_colour[report.verdict.colour]["mode"] == "exact"


def test_analyze_two_dominant_from_example1():
    base = example1_colouring(SplitSpec(12, 6))
    chi = Colouring(12, 3, base.values)  # palette has r=3 but colour 3 unused
    report = analyze_r_colouring(chi)
    assert report.verdict.kind == "two_dominant"
    assert report.verdict.dominant is not None
    assert report.verdict.residual_count == 0


def test_analyze_rejects_two_colours():
    with pytest.raises(ValueError):
        analyze_r_colouring(random_colouring(10, 2, seed=0))
