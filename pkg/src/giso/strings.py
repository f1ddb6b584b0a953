"""Strings under permutation action, coset algebra, and Luks reductions.

A string x is a tuple of symbol ids. The action is x^g(i^g) = x(i): the
letter at position i moves to position g[i].
"""
from __future__ import annotations

from typing import Callable, Sequence

from . import _kernels as K
from .coset import IsoCoset
from .perm import (
    Giant, PermGroup, Permutation, TrackedHom, alternating_generators, giant_test,
    subgroup_with_cosets, symmetric_generators,
)

Solve = Callable[..., IsoCoset]


def act(x: Sequence[int], g: Sequence[int]) -> tuple:
    """x^g."""
    return K.act_string(x, g)


def maps_to(x, y, g) -> bool:
    """True iff x^g = y."""
    return K.maps_string(x, y, g)


def multiplicity_coloring(x: Sequence) -> tuple[int, ...]:
    counts: dict = {}
    for c in x:
        counts[c] = counts.get(c, 0) + 1
    return tuple(counts[c] for c in x)


def encode_string(text: str) -> tuple[int, ...]:
    """Dense symbol ids in order of first appearance."""
    ids: dict = {}
    return tuple(ids.setdefault(ch, len(ids)) for ch in text)


def truncate(x: Sequence[int], window, glaucous: int | None = None) -> tuple[int, ...]:
    """Replace letters outside the window by a symbol outside the alphabet."""
    if glaucous is None:
        glaucous = max(x, default=-1) + 1
    window = set(window)
    return tuple(c if i in window else glaucous for i, c in enumerate(x))


def is_invariant(group: PermGroup, points) -> bool:
    points = set(points)
    return all(g[p] in points for g in group.generators for p in points)


def young_subgroup(parts: Sequence[Sequence[int]], n: int, even: bool = False) -> PermGroup:
    """Sym(part_1) x ... x Sym(part_r), optionally intersected with Alt(n)."""
    parts = [list(p) for p in parts]
    if not even:
        return PermGroup(n, [g for p in parts for g in symmetric_generators(p, n)])
    gens = [g for p in parts for g in alternating_generators(p, n)]
    swaps = [Permutation.from_cycles([p[:2]], n) for p in parts if len(p) >= 2]
    gens += [swaps[0] * s for s in swaps[1:]]
    return PermGroup(n, gens)


def letter_classes(x: Sequence) -> list[list[int]]:
    classes: dict = {}
    for i, c in enumerate(x):
        classes.setdefault(c, []).append(i)
    return [classes[c] for c in sorted(classes)]


def brute_force_iso(group: PermGroup, x, y) -> IsoCoset:
    """Enumerate the group; collect isomorphisms and build Aut from them."""
    rep = None
    rep_inv = None
    aut = PermGroup.trivial(group.degree)
    for g in group.elements():
        if not K.maps_string(x, y, g):
            continue
        if rep is None:
            rep, rep_inv = g, ~g
            continue
        a = g * rep_inv
        if not aut.contains(a):
            aut = PermGroup(group.degree, aut.generators + [a])
    if rep is None:
        return IsoCoset.empty()
    return IsoCoset(aut, rep)


def iso_cosets_union(cosets: Sequence[IsoCoset]) -> IsoCoset:
    """Union of cosets of a common group F: <F, tau_i tau_1^-1> tau_1."""
    live = [c for c in cosets if not c.is_empty()]
    if not live:
        return IsoCoset.empty()
    first = live[0]
    if len(live) == 1:
        return first
    order = first.group.order()
    if any(c.group.order() != order for c in live[1:]):
        raise ValueError("cosets of different groups cannot be merged")
    inv = ~first.rep
    extra = [c.rep * inv for c in live[1:]]
    gens = list(first.group.generators)
    group = first.group
    for e in extra:
        if not group.contains(e):
            gens.append(e)
            group = PermGroup(first.group.degree, gens)
    return IsoCoset(group, first.rep)


def giant_coset_iso(group: PermGroup, x, y, kind: Giant | None = None) -> IsoCoset:
    """Iso for Sym(Omega) or Alt(Omega): equal letter multiplicities, with parity fixed when needed."""
    n = group.degree
    kind = kind or giant_test(group)
    if kind is Giant.NEITHER:
        raise ValueError("group is not a giant")
    if sorted(x) != sorted(y):
        return IsoCoset.empty()
    xs = letter_classes(x)
    ys = {y[c[0]]: c for c in letter_classes(y)}
    img = [0] * n
    for cls in xs:
        target = ys[x[cls[0]]]
        for i, j in zip(cls, target):
            img[i] = j
    tau = Permutation(img)
    even = kind is Giant.ALTERNATING
    if even and not tau.is_even():
        pair = next((c for c in xs if len(c) >= 2), None)
        if pair is None:
            return IsoCoset.empty()
        tau = Permutation.from_cycles([pair[:2]], n) * tau
    return IsoCoset(young_subgroup(xs, n, even=even), tau)


def restricted_iso(group: PermGroup, points: Sequence[int], x, y, solve: Solve) -> IsoCoset:
    """Iso^B_A(x, y) for an A-invariant set B, solved on the restriction and lifted."""
    points = sorted(points)
    if len(points) == group.degree:
        return solve(group, x, y)
    hom = TrackedHom(group, len(points), [g.restrict(points) for g in group.generators])
    image = hom.image()
    xb = tuple(x[p] for p in points)
    yb = tuple(y[p] for p in points)
    res = solve(image, xb, yb)
    if res.is_empty():
        return res
    group_part = group if res.group.order() == image.order() else hom.preimage(res.group)
    return IsoCoset(group_part, hom.lift(res.rep))


def chain_rule(coset: IsoCoset, windows: Sequence[Sequence[int]], x, y, solve: Solve) -> IsoCoset:
    """Successively impose the windows: Iso^{W1 u W2} = Iso^{W2}_{A}(x, y^{rho^-1}) rho."""
    for w in windows:
        if coset.is_empty():
            return coset
        rho = coset.rep
        z = act(y, ~rho)
        coset = restricted_iso(coset.group, w, x, z, solve).shift(rho)
    return coset


def weak_luks(group: PermGroup, sub: PermGroup, x, y, window, solve: Solve, index_bound: int = 10**6) -> IsoCoset:
    """Iso over G assembled from Iso over the right cosets of a subgroup H."""
    _, reps = subgroup_with_cosets(group, sub.contains, index_bound)
    parts = []
    for sigma in reps:
        z = act(y, ~sigma)
        parts.append(solve(sub, x, z, window).shift(sigma))
    return iso_cosets_union(parts)


def strong_luks(group: PermGroup, window, blocks: Sequence[Sequence[int]], x, y, solve: Solve,
                on_coset: Callable[[], None] | None = None) -> IsoCoset:
    """Iso^window over an invariant partition of the window into blocks.

    The kernel N of the block action is treated coset by coset; inside each
    coset the blocks are imposed one at a time by restriction and the chain rule.
    """
    window = sorted(window)
    if not window:
        return IsoCoset.of_group(group)
    blocks = [sorted(b) for b in blocks]
    where = {}
    for i, b in enumerate(blocks):
        for p in b:
            where[p] = i
    if sorted(where) != window:
        raise ValueError("blocks must partition the window")

    def induced(g):
        return [where[g[b[0]]] for b in blocks]

    images = [induced(g) for g in group.generators]
    trivial_action = all(img == list(range(len(blocks))) for img in images)
    if trivial_action:
        kernel, reps = group, [group.identity()]
    else:
        hom = TrackedHom(group, len(blocks), images)
        kernel = hom.kernel()
        reps = [hom.lift(q) for q in hom.image().elements()]
    parts = []
    for sigma in reps:
        if on_coset is not None:
            on_coset()
        z = act(y, ~sigma)
        part = chain_rule(IsoCoset.of_group(kernel), blocks, x, z, solve)
        parts.append(part.shift(sigma))
    return iso_cosets_union(parts)


def orbit_recursion(group: PermGroup, x, y, solve: Solve) -> IsoCoset:
    """Chain rule over the orbits of an intransitive group."""
    return chain_rule(IsoCoset.of_group(group), group.orbit_list(), x, y, solve)
