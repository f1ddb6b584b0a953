"""Aggregating local certificates into canonical structures, and using them.

Every reduction here is exact. A canonical structure on Gamma for x, and the
same construction for y, restrict the isomorphisms to elements g whose image
phi(g) maps one structure onto the other. That set is G1 * sigma with
G1 = phi^-1(Aut(S_x) intersect Alt(Gamma)), so Iso_G(x, y) is obtained from
Iso_G1(x, y^(sigma^-1)) * sigma. Choices that are not canonical (individualized
tuples, a chosen constituent, the design-lemma tuple) are fixed on the x side
and enumerated on the y side; the pieces are cosets of one group and are
merged with the coset union.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import _kernels as K
from .certificates import (
    CertificateRun, FULL, aligning_even_set_map, compare_certificates, restrict_to_points,
)
from .configs import (
    CoherentConfiguration, _UnionFind, design_outcome_for, digraph_symmetry_defect_check, is_johnson,
    wl2_refine,
)
from .coset import IsoCoset
from .perm import Giant, PermGroup, Permutation, even_part, giant_test, symmetric_generators
from .strings import act, chain_rule, iso_cosets_union

REFUTED = "REFUTED"
COLORED_PARTITIONS = "COLORED_PARTITIONS"
REDUCED = "REDUCED"
BINARY_STRUCTURES = "BINARY_STRUCTURES"
KARY_STRUCTURES = "KARY_STRUCTURES"

GRAY = (-1,)
DESIGN_ALPHA = Fraction(3, 4)


class AggregationError(AssertionError):
    """A guarantee of the aggregation step failed at runtime."""


# Structures on Gamma

@dataclass(frozen=True)
class GammaPartition:
    """A coloring of Gamma with equal-size blocks inside each color class."""

    colors: tuple
    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def from_coloring(cls, colors: Sequence) -> "GammaPartition":
        classes: dict = {}
        for p, c in enumerate(colors):
            classes.setdefault(c, []).append(p)
        return cls(tuple(colors), tuple(sorted(tuple(v) for v in classes.values())))

    def by_color(self) -> dict:
        out: dict = {}
        for b in sorted(self.blocks):
            out.setdefault(self.colors[b[0]], []).append(b)
        return out


@dataclass(frozen=True)
class GammaJohnson:
    """A Johnson scheme J(m, t) on the points W, with the other points colored."""

    colors: tuple
    points: tuple[int, ...]
    config: CoherentConfiguration
    m: int
    t: int
    labelling: tuple[tuple[int, ...], ...]


def _color_classes(colors: Sequence, skip=()) -> dict:
    out: dict = {}
    for p, c in enumerate(colors):
        if p not in skip:
            out.setdefault(c, []).append(p)
    return out


def structure_aut(s) -> PermGroup:
    """The full automorphism group of a Gamma structure."""
    m = len(s.colors)
    gens = []
    if isinstance(s, GammaPartition):
        for blocks in s.by_color().values():
            gens += symmetric_generators(blocks[0], m)
            if len(blocks) >= 2:
                swap = list(range(m))
                for a, b in zip(blocks[0], blocks[1]):
                    swap[a], swap[b] = b, a
                gens.append(Permutation(swap))
                cyc = list(range(m))
                for i, blk in enumerate(blocks):
                    nxt = blocks[(i + 1) % len(blocks)]
                    for a, b in zip(blk, nxt):
                        cyc[a] = b
                gens.append(Permutation(cyc))
        return PermGroup(m, gens)
    index = {lab: i for i, lab in enumerate(s.labelling)}
    for g in symmetric_generators(range(s.m), s.m):
        img = list(range(m))
        for i, w in enumerate(s.points):
            img[w] = s.points[index[tuple(sorted(g[c] for c in s.labelling[i]))]]
        gens.append(Permutation(img))
    for members in _color_classes(s.colors, set(s.points)).values():
        gens += symmetric_generators(members, m)
    return PermGroup(m, gens)


def structure_iso(sx, sy) -> Permutation | None:
    """Some permutation of Gamma mapping sx onto sy, or None."""
    if type(sx) is not type(sy) or len(sx.colors) != len(sy.colors):
        return None
    m = len(sx.colors)
    img = [-1] * m
    if isinstance(sx, GammaPartition):
        bx, by = sx.by_color(), sy.by_color()
        if set(bx) != set(by):
            return None
        for c, blocks in bx.items():
            other = by[c]
            if len(blocks) != len(other) or len(blocks[0]) != len(other[0]):
                return None
            for b1, b2 in zip(blocks, other):
                for a, b in zip(b1, b2):
                    img[a] = b
        return Permutation(img)
    if (sx.m, sx.t, len(sx.points)) != (sy.m, sy.t, len(sy.points)):
        return None
    index_y = {lab: i for i, lab in enumerate(sy.labelling)}
    bridge = [index_y[lab] for lab in sx.labelling]
    n = len(sx.points)
    for i in range(n):
        for j in range(n):
            if sx.config.color(i, j) != sy.config.color(bridge[i], bridge[j]):
                return None
    for i, w in enumerate(sx.points):
        img[w] = sy.points[bridge[i]]
    cx = _color_classes(sx.colors, set(sx.points))
    cy = _color_classes(sy.colors, set(sy.points))
    if {c: len(v) for c, v in cx.items()} != {c: len(v) for c, v in cy.items()}:
        return None
    for c, members in cx.items():
        for a, b in zip(members, cy[c]):
            img[a] = b
    return Permutation(img)


def structure_progress(s) -> tuple:
    """Per-color block sizes: a labelling-invariant summary used in trace records."""
    if isinstance(s, GammaPartition):
        return tuple(sorted((c, len(b), len(bs)) for c, bs in s.by_color().items() for b in bs[:1]))
    return ("johnson", s.m, s.t, len(s.points))


# Design-lemma inputs and their consumable outcomes

@dataclass
class DesignInput:
    """A canonical k-ary coloring on the points P of Gamma, plus colors of the other points."""

    points: tuple[int, ...]
    arity: int
    color: Callable[[tuple], tuple]
    outside: dict
    m: int


def _components(n: int, arcs) -> list[list[int]]:
    uf = _UnionFind(n)
    for a, b in arcs:
        uf.union(a, b)
    return uf.classes()


def consumable_structure(inp: DesignInput, t: tuple):
    """The Gamma structure produced by the design tuple t, or None when t yields nothing usable."""
    n = len(inp.points)
    k = inp.arity
    outcome = design_outcome_for(n, k, inp.color, DESIGN_ALPHA, t)
    if outcome.kind == "NOT_FOUND":
        return None
    l = len(t)
    unary = [inp.color(t + (w,) * (k - l)) for w in range(n)]
    colors = [None] * inp.m
    for q, c in inp.outside.items():
        colors[q] = c
    for i, p in enumerate(inp.points):
        colors[p] = (0, unary[i])
    for j, i in enumerate(t):
        colors[inp.points[i]] = (-4, j)
    if outcome.kind == "PARTITION":
        return GammaPartition.from_coloring(colors)
    sub = outcome.sub
    w_points = [inp.points[i] for i in sub.points]
    cfg = wl2_refine(len(sub.points), sub.colors)
    if not cfg.is_homogeneous():
        for i, p in enumerate(w_points):
            colors[p] = (1, cfg.color(i, i))
        return GammaPartition.from_coloring(colors)
    found = is_johnson(cfg)
    if found is not None:
        jm, jt, labelling = found
        for p in w_points:
            colors[p] = (3,)
        if jm * jm > 4 * len(w_points):
            raise AggregationError("Johnson scheme does not shrink the ground set")
        return GammaJohnson(tuple(colors), tuple(w_points), cfg, jm, jt, labelling)
    size = len(w_points)
    diag = cfg.diagonal_colors()
    for c in sorted(set(cfg.colors) - diag):
        comps = _components(size, cfg.constituent(c))
        if len(comps) > 1:
            for p in w_points:
                colors[p] = (2, c)
            others = [b for b in GammaPartition.from_coloring(colors).blocks if colors[b[0]] != (2, c)]
            blocks = others + [tuple(sorted(w_points[i] for i in comp)) for comp in comps]
            return GammaPartition(tuple(colors), tuple(sorted(blocks)))
    return None


def first_consumable(inp: DesignInput):
    """(t, structure) for the first tuple in length-then-lexicographic order with a usable outcome."""
    n = len(inp.points)
    for l in range(inp.arity):
        for t in itertools.permutations(range(n), l):
            s = consumable_structure(inp, t)
            if s is not None:
                return t, s
    return None


# Pulling Gamma structures back to the group

def _pulled_back_classes(iota, colors) -> list[list[int]]:
    classes: dict = {}
    for w, sub in enumerate(iota):
        classes.setdefault(tuple(sorted(colors[c] for c in sub)), []).append(w)
    return sorted(classes.values(), key=lambda c: (-len(c), c))


@dataclass
class StructureReduction:
    """G1 = phi^-1(Aut(S_x) intersect Alt(Gamma)) with the data needed for each aligned piece."""

    sx: object
    aut: PermGroup
    odd: Permutation | None
    group: PermGroup
    classes: list

    @property
    def order(self) -> int:
        return self.group.order()


def structure_reduction(ctx, sx) -> StructureReduction:
    aut = structure_aut(sx)
    odd = next((g for g in aut.generators if not g.is_even()), None)
    g1 = ctx.phi.preimage(even_part(aut))
    return StructureReduction(sx, aut, odd, g1, _pulled_back_classes(ctx.iota, sx.colors))


def aligned_piece(solver, ctx, red: StructureReduction, sy, x, y) -> IsoCoset:
    """{g in Iso_G(x, y) : phi(g) maps S_x onto S_y}."""
    tau = structure_iso(red.sx, sy)
    if tau is None:
        return IsoCoset.empty()
    if not tau.is_even():
        if red.odd is None:
            return IsoCoset.empty()
        tau = red.odd * tau
    sigma = ctx.phi.lift(tau)
    z = act(y, ~sigma)
    return chain_rule(IsoCoset.of_group(red.group), red.classes, x, z, solver.iso).shift(sigma)


def effect_of_structures(sx, sy, solver, ctx, x, y) -> IsoCoset:
    """Iso_G(x, y) restricted to elements mapping S_x onto S_y (the full Iso when both are canonical)."""
    if type(sx) is not type(sy):
        return IsoCoset.empty()
    red = structure_reduction(ctx, sx)
    branch = "johnson" if isinstance(sx, GammaJohnson) else "partition"
    solver.record("effect_of_structures", branch=branch, structure=structure_progress(sx))
    if red.order == ctx.group.order():
        solver.record("escape", reason="structure does not reduce the group")
        return solver.enumerate_kernel_cosets(ctx.phi, x, y)
    return aligned_piece(solver, ctx, red, sy, x, y)


def finish_design(solver, ctx, x, y, x_input: DesignInput, y_inputs: Sequence[DesignInput]) -> IsoCoset:
    """Individualize the x-side design tuple, enumerate the y side, and merge the aligned pieces."""
    chosen = first_consumable(x_input)
    if chosen is None:
        solver.record("escape", reason="design tuple search found no usable outcome")
        return solver.enumerate_kernel_cosets(ctx.phi, x, y)
    t, sx = chosen
    red = structure_reduction(ctx, sx)
    branch = "johnson" if isinstance(sx, GammaJohnson) else "partition"
    solver.record("effect_of_structures", branch=branch, tuple=list(t), structure=structure_progress(sx))
    if red.order == ctx.group.order():
        solver.record("escape", reason="structure does not reduce the group")
        return solver.enumerate_kernel_cosets(ctx.phi, x, y)
    pieces = []
    for inp in y_inputs:
        for t2 in itertools.permutations(range(len(inp.points)), len(t)):
            solver.tick()
            sy = consumable_structure(inp, t2)
            if sy is not None:
                pieces.append(aligned_piece(solver, ctx, red, sy, x, y))
    return iso_cosets_union(pieces)


# Case analysis

@dataclass
class CaseOutcome:
    kind: str
    case: str = ""
    stats: tuple = ()
    partitions: tuple | None = None
    x_input: DesignInput | None = None
    y_inputs: list = field(default_factory=list)
    coset: IsoCoset | None = None


@dataclass
class StringSummary:
    """Fullness data for one string: F, the image phi(F), its support and orbits."""

    runs: dict
    full_group: PermGroup
    image: PermGroup
    support: tuple[int, ...]
    orbits: list
    full_count: int
    case: str = ""
    big_orbit: tuple[int, ...] = ()

    def stats(self) -> tuple:
        return (self.case, len(self.support), tuple(sorted(len(o) for o in self.orbits)), self.full_count)


def summarize(solver, ctx, x, k: int, glaucous: int) -> StringSummary:
    group, phi, m = ctx.group, ctx.phi, ctx.m
    runs = {}
    gens = []
    full = 0
    for T in itertools.combinations(range(m), k):
        run = CertificateRun(T, group, phi, tuple(x), solver.iso, solver.config.relax_k, glaucous)
        cert = run.run()
        runs[T] = run
        if solver.config.dump_certificates is not None:
            solver.config.dump_certificates(cert)
        if cert.kind == FULL:
            full += 1
            gens += cert.group.generators
    f = PermGroup(group.degree, gens)
    image = PermGroup(m, [phi.evaluate(g) for g in f.generators])
    support = tuple(image.moved_points())
    orbits = image.orbit_list()
    s = StringSummary(runs, f, image, support, orbits, full)
    if 2 * len(support) < m:
        s.case = "3"
    else:
        big = [o for o in orbits if 2 * len(o) > m]
        if not big:
            s.case = "1"
        else:
            s.big_orbit = tuple(big[0])
            restricted = PermGroup(len(big[0]), [restrict_to_points(g, big[0]) for g in image.generators])
            s.case = "2a" if giant_test(restricted) is not Giant.NEITHER else "2b"
    return s


def aggregate(solver, ctx, x, y, k: int) -> CaseOutcome:
    """Run all local certificates for both strings and classify into the four cases."""
    x, y = tuple(x), tuple(y)
    glaucous = max(max(x, default=-1), max(y, default=-1)) + 1
    sx = summarize(solver, ctx, x, k, glaucous)
    sy = summarize(solver, ctx, y, k, glaucous)
    stats = (sx.stats(), sy.stats())
    solver.record("aggregate", case_x=sx.case, case_y=sy.case, stats_x=list(map(str, sx.stats())),
                  stats_y=list(map(str, sy.stats())))
    if sx.stats() != sy.stats():
        return CaseOutcome(REFUTED, sx.case, stats)
    if sx.case == "1":
        parts = (orbit_length_partition(sx.orbits, ctx.m), orbit_length_partition(sy.orbits, ctx.m))
        return CaseOutcome(COLORED_PARTITIONS, "1", stats, partitions=parts)
    if sx.case == "2a":
        coset = case2a_reduce(solver, ctx, sx, sy, x, y)
        return CaseOutcome(REDUCED, "2a", stats, coset=coset)
    if sx.case == "2b":
        x_input, y_inputs = case2b_structures(ctx, sx, sy)
        return CaseOutcome(BINARY_STRUCTURES, "2b", stats, x_input=x_input, y_inputs=y_inputs)
    x_input, y_input = case3_structures(solver, ctx, sx, sy, x, y, k, glaucous)
    return CaseOutcome(KARY_STRUCTURES, "3", stats, x_input=x_input, y_inputs=[y_input])


def orbit_length_partition(orbits, m: int) -> GammaPartition:
    colors = [None] * m
    for o in orbits:
        for c in o:
            colors[c] = (len(o),)
    return GammaPartition(tuple(colors), tuple(sorted(tuple(o) for o in orbits)))


def case2a_reduce(solver, ctx, sx: StringSummary, sy: StringSummary, x, y) -> IsoCoset:
    """Iso over the setwise stabilizer H of Phi, as the union of Iso over F*K and F*K*sigma3."""
    m, phi = ctx.m, ctx.phi
    phi_set = sx.big_orbit
    tau = aligning_even_set_map(phi_set, sy.big_orbit, m)
    if tau is None:
        return IsoCoset.empty()
    sigma = phi.lift(tau)
    y1 = act(y, ~sigma)
    rest = [c for c in range(m) if c not in set(phi_set)]
    kernel = phi.preimage(PermGroup.alternating(m, rest) if len(rest) >= 3 else PermGroup.trivial(m))
    solver.record("case2a", phi=list(phi_set), align=str(tau))
    shifts = [kernel.identity()]
    if len(rest) >= 2:
        shifts.append(phi.lift(Permutation.from_cycles([phi_set[:2], rest[:2]], m)))
    pieces = []
    for s in shifts:
        part = solver.iso(kernel, x, act(y1, ~s))
        if part.is_empty():
            pieces.append(part)
            continue
        group = PermGroup(kernel.degree, list(sx.full_group.generators) + list(part.group.generators))
        pieces.append(IsoCoset(group, part.rep * s))
    return iso_cosets_union(pieces).shift(sigma)


def transitivity_degree(group: PermGroup, limit: int = 6) -> int:
    """Largest d <= limit such that the group is d-transitive."""
    n = group.degree
    d = 0
    for i in range(1, min(limit, n) + 1):
        stab = group.pointwise_stabilizer(range(i - 1))
        if len(stab.orbit(i - 1)) != n - (i - 1):
            break
        d = i
    return d


def _restricted(group: PermGroup, points: Sequence[int]) -> PermGroup:
    return PermGroup(len(points), [restrict_to_points(g, points) for g in group.generators])


def _digraph_input(m: int, points: Sequence[int], arcs: set, outside: dict) -> DesignInput:
    n = len(points)
    colors = tuple(0 if a == b else (1 if (a, b) in arcs else 2) for a in range(n) for b in range(n))
    cfg = wl2_refine(n, colors)
    return DesignInput(tuple(points), 2, lambda t, c=cfg: (c.color(t[0], t[1]),), outside, m)


def _branch_inputs(m: int, image: PermGroup, phi_set, tup, every_label: bool):
    """Design inputs for the orbital constituents of F_(T) on Phi minus T (one or all)."""
    stab = image.pointwise_stabilizer(tup)
    rest = [c for c in phi_set if c not in set(tup)]
    sub = _restricted(stab, rest)
    labels = K.pair_orbit_labels(sub.generators, len(rest))
    n = len(rest)
    off = sorted({labels[a * n + b] for a in range(n) for b in range(n) if a != b})
    chosen = off if every_label else off[:1]
    outside = {c: (-3,) for c in range(m) if c not in set(phi_set)}
    for i, c in enumerate(tup):
        outside[c] = (-2, i)
    inputs = []
    for lab in chosen:
        arcs = {(a, b) for a in range(n) for b in range(n) if a != b and labels[a * n + b] == lab}
        inputs.append((_digraph_input(m, rest, arcs, outside), arcs, n))
    return inputs


def case2b_structures(ctx, sx: StringSummary, sy: StringSummary):
    """Individualize d-1 points of Phi and one orbital constituent; y enumerates every choice."""
    m = ctx.m
    phi_x, phi_y = sx.big_orbit, sy.big_orbit
    d = transitivity_degree(_restricted(sx.image, phi_x))
    if d > 5:
        raise AggregationError(f"transitivity degree {d} exceeds 5")
    tx = tuple(phi_x[: d - 1])
    (x_input, arcs, n), = _branch_inputs(m, sx.image, phi_x, tx, False)
    if n >= 4 and not digraph_symmetry_defect_check(n, arcs):
        raise AggregationError("constituent digraph has symmetry defect below 1/2")
    y_inputs = []
    for ty in itertools.permutations(phi_y, d - 1):
        y_inputs += [inp for inp, _, _ in _branch_inputs(m, sy.image, phi_y, ty, True)]
    return x_input, y_inputs


def case3_structures(solver, ctx, sx: StringSummary, sy: StringSummary, x, y, k: int, glaucous: int):
    """k-ary colorings of Gamma minus S from the joint equivalence classes of certificate comparisons."""
    m, group, phi = ctx.m, ctx.group, ctx.phi
    strings = (tuple(x), tuple(y))
    summaries = (sx, sy)
    rest = [tuple(c for c in range(m) if c not in set(s.support)) for s in summaries]
    items = [(u, T) for u in (0, 1) for T in itertools.combinations(rest[u], k)]
    reps: list = []
    set_class = {}
    for u, T in items:
        run_v = summaries[u].runs[T]
        for ci, (u0, T0, _) in enumerate(reps):
            run_u = summaries[u0].runs[T0]
            if _signature(run_u) != _signature(run_v):
                continue
            res = compare_certificates(T0, T, group, phi, strings[u0], strings[u], solver.iso,
                                       solver.config.relax_k, run_u, run_v)
            if not res.iso_coset.is_empty():
                img = phi.evaluate(res.iso_coset.rep)
                set_class[(u, T)] = (ci, {img[a]: a for a in T0})
                break
        else:
            res = compare_certificates(T, T, group, phi, strings[u], strings[u], solver.iso,
                                       solver.config.relax_k, run_v, run_v)
            perms = _restricted_elements(phi, res.iso_coset.group, T)
            reps.append((u, T, perms))
            set_class[(u, T)] = (len(reps) - 1, {a: a for a in T})

    def ordering_label(ci, tup):
        u0, T0, perms = reps[ci]
        index = {a: i for i, a in enumerate(T0)}
        best = None
        for p in perms:
            cand = tuple(p[index[a]] for a in tup)
            if best is None or cand < best:
                best = cand
        return (ci,) + best

    colors = [dict(), dict()]
    labels = set()
    for u in (0, 1):
        for tup in itertools.permutations(rest[u], k):
            ci, back = set_class[(u, tuple(sorted(tup)))]
            label = ordering_label(ci, tuple(back[a] for a in tup))
            colors[u][tup] = label
            labels.add(label)

    inputs = []
    for u in (0, 1):
        pts = rest[u]
        table = colors[u]

        def color(t, pts=pts, table=table):
            tup = tuple(pts[i] for i in t)
            return table.get(tup, GRAY)

        outside = {c: (-5,) for c in summaries[u].support}
        inputs.append(DesignInput(tuple(pts), k, color, outside, m))
    twins = kary_twin_classes(len(rest[0]), k, inputs[0].color)
    if any(len(c) >= k for c in twins):
        raise AggregationError("case-3 structure has a twin class of size >= k")
    solver.record("case3", classes=len(labels), twin_sizes=sorted(len(c) for c in twins))
    return inputs[0], inputs[1]


def _signature(run: CertificateRun) -> tuple:
    cert = run.run()
    return (cert.kind, cert.fallback, len(run.steps), tuple(len(s.window) for s in run.steps))


def _restricted_elements(phi, group: PermGroup, T) -> set:
    img = PermGroup(len(T), [restrict_to_points(phi.evaluate(g), T) for g in group.generators])
    return {tuple(T[i] for i in p) for p in img.elements()}


def kary_twin_classes(n: int, k: int, color: Callable[[tuple], tuple]) -> list[list[int]]:
    """Twin classes of a k-ary coloring on range(n): (i j) is an automorphism iff colors are preserved."""
    tuples = list(itertools.product(range(n), repeat=k))
    uf = _UnionFind(n)
    for i in range(n):
        for j in range(i + 1, n):
            if uf.find(i) == uf.find(j):
                continue
            swap = {i: j, j: i}
            if all(color(t) == color(tuple(swap.get(a, a) for a in t)) for t in tuples):
                uf.union(i, j)
    return uf.classes()


# Entry points used by the solver

def aggregation_iso(solver, ctx, x, y, k: int) -> IsoCoset:
    outcome = aggregate(solver, ctx, x, y, k)
    return finish_outcome(solver, ctx, outcome, x, y)


def finish_outcome(solver, ctx, outcome: CaseOutcome, x, y) -> IsoCoset:
    if outcome.kind == REFUTED:
        return IsoCoset.empty()
    if outcome.kind == REDUCED:
        return outcome.coset
    if outcome.kind == COLORED_PARTITIONS:
        px, py = outcome.partitions
        return effect_of_structures(px, py, solver, ctx, x, y)
    return finish_design(solver, ctx, x, y, outcome.x_input, outcome.y_inputs)


def johnson_primitive_iso(solver, ctx, x, y) -> IsoCoset:
    """Alt(Gamma) acting faithfully on k-subsets: twin classes of the induced k-ary coloring."""
    m, k = ctx.m, ctx.k
    where = {frozenset(sub): w for w, sub in enumerate(ctx.iota)}

    def coloring(s):
        def color(t):
            if len(set(t)) < len(t):
                return GRAY
            return (s[where[frozenset(t)]],)
        return color

    cx, cy = coloring(tuple(x)), coloring(tuple(y))
    tx = _set_twin_classes(m, k, tuple(x), where)
    ty = _set_twin_classes(m, k, tuple(y), where)
    big_x = [c for c in tx if 2 * len(c) > m]
    big_y = [c for c in ty if 2 * len(c) > m]
    if len(big_x) != len(big_y):
        return IsoCoset.empty()
    if big_x:
        solver.record("large_symmetry", twin_class=big_x[0])
        sx = GammaPartition.from_coloring([(1,) if c in set(big_x[0]) else (0,) for c in range(m)])
        sy = GammaPartition.from_coloring([(1,) if c in set(big_y[0]) else (0,) for c in range(m)])
        return effect_of_structures(sx, sy, solver, ctx, x, y)
    solver.record("johnson_structure", m=m, k=k)
    pts = tuple(range(m))
    return finish_design(solver, ctx, x, y, DesignInput(pts, k, cx, {}, m), [DesignInput(pts, k, cy, {}, m)])


def _set_twin_classes(m: int, k: int, s, where) -> list[list[int]]:
    """Twin classes of Gamma for a string on k-subsets: (i j) is a twin move iff it preserves s."""
    subsets = [tuple(sorted(sub)) for sub in where]
    uf = _UnionFind(m)
    for i in range(m):
        for j in range(i + 1, m):
            if uf.find(i) == uf.find(j):
                continue
            swap = {i: j, j: i}
            if all(s[where[frozenset(sub)]] == s[where[frozenset(swap.get(a, a) for a in sub)]] for sub in subsets):
                uf.union(i, j)
    return uf.classes()
