import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from giso.perm import (
    EmptyPreimage, Giant, PermGroup, Permutation, TrackedHom, even_part, format_permutation, giant_test,
    parse_permutation, subgroup_with_cosets,
)

from oracles import closure, compose, random_generators


perms = st.integers(min_value=1, max_value=7).flatmap(lambda n: st.permutations(list(range(n))))


def test_right_action_convention():
    p = Permutation([1, 2, 0])
    q = Permutation([0, 2, 1])
    assert tuple(p * q) == tuple(q[p[i]] for i in range(3))


@given(perms)
def test_inverse_and_identity(p):
    p = Permutation(p)
    assert (p * ~p).is_identity()
    assert (~p * p).is_identity()


@given(perms)
def test_cycle_notation_round_trip(p):
    p = Permutation(p)
    assert parse_permutation(format_permutation(p), len(p)) == p


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_permutation("(0 1", 3)
    with pytest.raises(ValueError):
        parse_permutation("(0 5)", 3)


def test_symmetric_and_alternating_orders():
    for n in range(1, 9):
        assert PermGroup.symmetric(n).order() == math.factorial(n)
        assert PermGroup.alternating(n).order() == max(1, math.factorial(n) // 2)


def test_schreier_sims_matches_closure_on_fixed_seeds():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randint(1, 7)
        gens = random_generators(rng, n, rng.randint(0, 3))
        g = PermGroup(n, [Permutation(x) for x in gens])
        elems = closure(gens, n)
        assert g.order() == len(elems)
        assert set(map(tuple, g.elements())) == elems


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=2, max_value=7), st.integers(min_value=0, max_value=10**6))
def test_membership_agrees_with_closure(n, seed):
    rng = random.Random(seed)
    gens = random_generators(rng, n, rng.randint(1, 2))
    g = PermGroup(n, [Permutation(x) for x in gens])
    elems = closure(gens, n)
    for _ in range(20):
        p = list(range(n))
        rng.shuffle(p)
        assert g.contains(p) == (tuple(p) in elems)


def test_pointwise_stabilizer_is_exact():
    rng = random.Random(3)
    for _ in range(20):
        n = rng.randint(3, 7)
        gens = random_generators(rng, n, 2)
        g = PermGroup(n, [Permutation(x) for x in gens])
        pts = rng.sample(range(n), rng.randint(1, 2))
        stab = g.pointwise_stabilizer(pts)
        expected = {e for e in closure(gens, n) if all(e[p] == p for p in pts)}
        assert set(map(tuple, stab.elements())) == expected


def test_giant_classification():
    assert giant_test(PermGroup.symmetric(6)) is Giant.SYMMETRIC
    assert giant_test(PermGroup.alternating(6)) is Giant.ALTERNATING
    d8 = PermGroup(4, [Permutation.from_cycles([(0, 1, 2, 3)], 4), Permutation.from_cycles([(1, 3)], 4)])
    assert giant_test(d8) is Giant.NEITHER


def test_even_part():
    for n in range(2, 7):
        assert even_part(PermGroup.symmetric(n)).order() == math.factorial(n) // 2
    d8 = PermGroup(4, [Permutation.from_cycles([(0, 1, 2, 3)], 4), Permutation.from_cycles([(1, 3)], 4)])
    ev = even_part(d8)
    assert ev.order() == 4
    assert all(g.is_even() for g in ev.generators)


def test_subgroup_with_cosets_gives_transversal():
    g = PermGroup.symmetric(5)
    h, reps = subgroup_with_cosets(g, lambda p: p[0] == 0, 100)
    assert h.order() == 24
    assert len(reps) == 5
    assert sorted(r[0] for r in reps) == list(range(5))


def sign_hom(n):
    sym = PermGroup.symmetric(n)
    swap = Permutation([1, 0])
    return TrackedHom(sym, 2, [Permutation([0, 1]) if g.is_even() else swap for g in sym.generators])


def test_tracked_hom_kernel_image_lift():
    hom = sign_hom(5)
    assert hom.kernel().order() == 60
    assert hom.image().order() == 2
    g = hom.lift(Permutation([1, 0]))
    assert not g.is_even()
    assert hom.evaluate(g) == Permutation([1, 0])


def test_tracked_hom_preimage():
    hom = sign_hom(4)
    assert hom.preimage(PermGroup.trivial(2)).order() == 12
    coset = hom.preimage(Permutation([1, 0]))
    assert coset.order() == 12 and not coset.rep.is_even()


def test_lift_outside_image_raises():
    alt = PermGroup.alternating(4)
    hom = TrackedHom(alt, 2, [Permutation([0, 1]) for _ in alt.generators])
    with pytest.raises(EmptyPreimage):
        hom.lift(Permutation([1, 0]))


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_homomorphism_evaluate_is_multiplicative(seed):
    rng = random.Random(seed)
    n = 5
    sym = PermGroup.symmetric(n)
    # action on ordered pairs of distinct points is a faithful homomorphism
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    idx = {p: i for i, p in enumerate(pairs)}

    def induced(g):
        return Permutation(idx[(g[a], g[b])] for a, b in pairs)

    hom = TrackedHom(sym, len(pairs), [induced(g) for g in sym.generators])
    a, b = sym.random_element(rng), sym.random_element(rng)
    assert hom.evaluate(a * b) == hom.evaluate(a) * hom.evaluate(b)
    assert tuple(hom.evaluate(a)) == tuple(induced(a))
    assert hom.kernel().order() == 1


def test_compose_matches_right_action():
    a = (1, 2, 0, 3)
    b = (0, 1, 3, 2)
    assert tuple(Permutation(a) * Permutation(b)) == compose(a, b)
