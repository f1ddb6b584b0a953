import itertools
import random

import pytest

from giso.aggregation import (
    GammaJohnson, GammaPartition, aggregate, case3_structures, kary_twin_classes, structure_aut,
    structure_iso, summarize,
)
from giso.certificates import compare_certificates_tuples
from giso.configs import is_johnson, johnson_scheme, wl2_refine
from giso.perm import PermGroup, Permutation, TrackedHom
from giso.solver import GiantContext, Solver
from giso.strings import act

from instances import case_instances, digraph_string, pair_action, random_arcs, subset_action
from oracles import closure, coset_equals, iso_elements


def even_context(m=7):
    alt = PermGroup.alternating(m)
    group, phi, pairs = pair_action(m, alt)
    iota = tuple((a,) for a, b in pairs)
    return GiantContext(phi, iota, m, 1, False), pairs


def aggregation_solver():
    return Solver(brute_threshold=100, relax_k=True, cert_k=3, prefer_giant=True)


@pytest.fixture(scope="module")
def pair_world():
    group, phi, pairs, strings = case_instances()
    elems = closure(group.generators, group.degree)
    return group, elems, strings


@pytest.mark.parametrize("case", ["1", "2a", "2b", "3"])
def test_each_case_is_reached_and_exact(pair_world, case):
    group, elems, strings = pair_world
    x = strings[case]
    rng = random.Random(int.from_bytes(case.encode(), "big"))
    sigma = rng.choice(sorted(elems))
    y = act(x, sigma)
    s = aggregation_solver()
    got = s.iso(group, x, y)
    seen = {r["case_x"] for r in s.records if r["event"] == "aggregate"}
    assert seen == {case}
    assert coset_equals(got, iso_elements(elems, x, y))


def test_non_isomorphic_pair_through_aggregation(pair_world):
    group, elems, strings = pair_world
    x = strings["2b"]
    y = tuple(1 - c if i < 2 else c for i, c in enumerate(x))
    got = aggregation_solver().iso(group, x, y)
    assert coset_equals(got, iso_elements(elems, x, y))


def test_case_statistics_are_shift_invariant():
    ctx, pairs = even_context()
    rng = random.Random(21)
    x = digraph_string(pairs, random_arcs(rng, 7))
    y = digraph_string(pairs, random_arcs(rng, 7))
    sigma = ctx.group.random_element(rng)
    s = aggregation_solver()
    base = aggregate(s, ctx, x, y, 3)
    moved = aggregate(s, ctx, act(x, sigma), act(y, sigma), 3)
    assert base.kind == moved.kind and base.stats == moved.stats


def test_case_three_twin_classes_below_k():
    ctx, pairs = even_context()
    rng = random.Random(3)
    s = aggregation_solver()
    for _ in range(3):
        x = digraph_string(pairs, random_arcs(rng, 7))
        summary = summarize(s, ctx, x, 3, 2)
        if summary.case != "3":
            continue
        x_input, _ = case3_structures(s, ctx, summary, summary, x, x, 3, 2)
        twins = kary_twin_classes(len(x_input.points), 3, x_input.color)
        assert all(len(c) < 3 for c in twins)


def test_tuple_relation_is_an_equivalence():
    ctx, pairs = even_context(7)
    rng = random.Random(5)
    x = digraph_string(pairs, random_arcs(rng, 7))
    s = aggregation_solver()
    tuples = list(itertools.permutations(range(4), 3))[:10]
    rel = {}
    for t in tuples:
        for u in tuples:
            res = compare_certificates_tuples(t, u, ctx.group, ctx.phi, x, x, s.iso, relaxed=True)
            rel[t, u] = not res.iso_coset.is_empty()
    for t in tuples:
        assert rel[t, t]
    for t, u in itertools.product(tuples, repeat=2):
        assert rel[t, u] == rel[u, t]
    for t, u, v in itertools.product(tuples, repeat=3):
        if rel[t, u] and rel[u, v]:
            assert rel[t, v]


def test_partition_structure_alignment():
    sx = GammaPartition.from_coloring([0, 0, 1, 1, 1, 2])
    sy = GammaPartition.from_coloring([1, 0, 1, 2, 0, 1])
    tau = structure_iso(sx, sy)
    assert tau is not None
    assert all(sx.colors[i] == sy.colors[tau[i]] for i in range(6))
    assert structure_aut(sx).order() == 2 * 6
    mismatched = GammaPartition.from_coloring([0, 0, 0, 1, 1, 2])
    assert structure_iso(sx, mismatched) is None


def test_johnson_structure_alignment():
    scheme = johnson_scheme(5, 2)
    cfg = wl2_refine(10, scheme.config.colors)
    m, t, labelling = is_johnson(cfg)
    sx = GammaJohnson(tuple([(3,)] * 10 + [(0,)] * 2), tuple(range(10)), cfg, m, t, labelling)
    aut = structure_aut(sx)
    assert aut.order() == 120 * 2
    sigma = list(range(10))
    random.Random(1).shuffle(sigma)
    moved = cfg.permuted(sigma)
    m2, t2, lab2 = is_johnson(moved)
    sy = GammaJohnson(sx.colors, tuple(range(10)), moved, m2, t2, lab2)
    tau = structure_iso(sx, sy)
    assert tau is not None
    for a in range(10):
        for b in range(10):
            assert cfg.color(a, b) == moved.color(tau[a], tau[b])


def test_primitive_johnson_design_branch():
    group, subs = subset_action(10, 2)
    lines = list(itertools.combinations(range(5), 2))
    x = tuple(int(len(set(lines[a]) & set(lines[b])) == 1) for a, b in subs)
    rng = random.Random(2)
    y = act(x, group.random_element(rng))
    s = aggregation_solver()
    got = s.iso(group, x, y)
    branches = {r.get("branch") for r in s.records if r["event"] == "effect_of_structures"}
    assert "johnson" in branches
    assert got.order() == 120
    assert act(x, got.rep) == y


def test_primitive_johnson_large_twin_class():
    group, subs = subset_action(9, 2)
    # a star: all pairs containing 0 get letter 1, so points 1..8 are twins
    x = tuple(int(0 in s) for s in subs)
    y = act(x, group.random_element(random.Random(4)))
    s = aggregation_solver()
    got = s.iso(group, x, y)
    assert any(r["event"] == "large_symmetry" for r in s.records)
    assert got.order() == 40320
    assert act(x, got.rep) == y
