"""The twelve acceptance criteria, each checked against an independent oracle.

Run with ``pytest tests/test_acceptance.py -v``; the terminal summary lists one
PASS/FAIL line per criterion.
"""
import itertools
import math
import random
from fractions import Fraction

from giso.action import block_action, minimal_block_system
from giso.aggregation import case3_structures, kary_twin_classes, summarize
from giso.certificates import FULL, NON_FULL, compare_certificates_tuples, local_certificate
from giso.configs import orbital_configuration, symmetry_defect, twin_classes, wl2_refine
from giso.coset import IsoCoset
from giso.graphs import Graph, solve_gi
from giso.johnson import binom_inequality_holds, identify_johnson_action, pullback_partition
from giso.perm import Giant, PermGroup, Permutation, TrackedHom, giant_test
from giso.solver import GiantContext, Solver, solve_iso
from giso.strings import chain_rule, encode_string, multiplicity_coloring, young_subgroup

from acceptance_report import criterion
from instances import (
    case_instances, clique_arcs, digraph_string, pair_action, paley_arcs, random_arcs, subset_action,
)
from oracles import (
    act, backtrack_isomorphisms, closure, coset_equals, graph_isomorphisms, iso_elements, random_generators,
    small_random_group,
)


def random_graph(rng, n, p, directed=False):
    pairs = itertools.permutations(range(n), 2) if directed else itertools.combinations(range(n), 2)
    return Graph.from_edges(n, [e for e in pairs if rng.random() < p], directed)


def random_group(rng, n):
    if n == 1:
        return PermGroup(1, []), {(0,)}
    gens, elems = small_random_group(rng, n)
    return PermGroup(n, [Permutation(g) for g in gens]), elems


def random_si_instance(rng, max_n=8, alphabet=4):
    n = rng.randint(1, max_n)
    group, elems = random_group(rng, n)
    x = tuple(rng.randrange(rng.randint(1, alphabet)) for _ in range(n))
    if rng.random() < 0.6:
        y = act(x, rng.choice(sorted(elems)))
    else:
        y = tuple(rng.sample(x, n))
    return group, elems, x, y


@criterion(1, "GI oracle exactness (all graphs n<=5, 500 random pairs n=6..7)", limit=300)
def test_gi_oracle_exactness():
    rng = random.Random(101)
    checked = 0
    for n in range(1, 6):
        all_pairs = list(itertools.combinations(range(n), 2))
        by_size = {}
        graphs = []
        for mask in range(1 << len(all_pairs)):
            g = Graph.from_edges(n, [e for i, e in enumerate(all_pairs) if mask >> i & 1])
            graphs.append(g)
            by_size.setdefault(len(g.edges), []).append(g)
        for g in graphs:
            pi = list(range(n))
            rng.shuffle(pi)
            for h in (g.permuted(pi), rng.choice(by_size[len(g.edges)])):
                expected = graph_isomorphisms(n, g.edges, h.edges)
                assert coset_equals(solve_gi(g, h), expected), (g, h)
                checked += 1
    for i in range(500):
        n = rng.randint(6, 7)
        directed = i % 5 == 4
        g = random_graph(rng, n, rng.choice([0.2, 0.5, 0.8]), directed)
        if rng.random() < 0.5:
            pi = list(range(n))
            rng.shuffle(pi)
            h = g.permuted(pi)
        else:
            h = random_graph(rng, n, len(g.edges) / (n * (n - 1) / (1 if directed else 2)), directed)
        expected = graph_isomorphisms(n, g.edges, h.edges, directed)
        assert coset_equals(solve_gi(g, h), expected), (g, h)
        checked += 1
    return f"{checked} pairs"


@criterion(2, "SI oracle exactness (1000 instances, |G|<=5040, alphabet<=4)", limit=300)
def test_si_oracle_exactness():
    rng = random.Random(202)
    for _ in range(1000):
        group, elems, x, y = random_si_instance(rng)
        assert coset_equals(solve_iso(group, x, y), iso_elements(elems, x, y)), (group.generators, x, y)
    return "1000 instances"


@criterion(3, "Schreier-Sims order and membership (200 generator sets x 100 probes)")
def test_schreier_sims():
    rng = random.Random(303)
    for _ in range(200):
        n = rng.randint(1, 8)
        gens = random_generators(rng, n, rng.randint(1, 3)) if rng.random() < 0.5 else small_random_group(rng, max(n, 2))[0]
        n = len(gens[0]) if gens else n
        elems = closure(gens, n)
        group = PermGroup(n, [Permutation(g) for g in gens])
        assert math.prod(len(t) for t in group.chain.transversals) == len(elems)
        members = sorted(elems)
        for j in range(100):
            if j % 2:
                probe = rng.choice(members)
            else:
                probe = tuple(rng.sample(range(n), n))
            assert group.contains(Permutation(probe)) == (probe in elems)
    return "200 groups"


@criterion(4, "shift identity and chain rule (500 instances)")
def test_shift_identity_and_chain_rule():
    rng = random.Random(404)
    solver = Solver()
    for _ in range(500):
        group, elems, x, y = random_si_instance(rng, max_n=7, alphabet=3)
        n = group.degree
        sigma = Permutation(rng.sample(range(n), n))
        shifted = solver.iso(group, x, y).shift(sigma)
        expected = iso_elements({tuple(Permutation(g) * sigma) for g in elems}, x, act(y, sigma))
        got = {tuple(g) for g in shifted.elements()} if not shifted.is_empty() else set()
        assert got == expected
        orbits = group.orbit_list()
        cut = rng.randint(1, len(orbits))
        windows = [[p for o in orbits[:cut] for p in o], [p for o in orbits[cut:] for p in o]]
        windows = [w for w in windows if w]
        got = chain_rule(IsoCoset.of_group(group), windows, x, y, solver.iso)
        assert coset_equals(got, iso_elements(elems, x, y))
    return "500 instances"


def gamma_counts_constant(cfg):
    n = cfg.n
    seen = {}
    for a in range(n):
        for b in range(n):
            counts = {}
            for z in range(n):
                key = (cfg.color(a, z), cfg.color(z, b))
                counts[key] = counts.get(key, 0) + 1
            if seen.setdefault(cfg.color(a, b), counts) != counts:
                return False
    return True


@criterion(5, "WL canonicity, idempotence, coherence (200 digraphs, n<=20)")
def test_wl():
    rng = random.Random(505)
    for _ in range(200):
        n = rng.randint(1, 20)
        p = rng.choice([0.1, 0.3, 0.5])
        arcs = {(a, b) for a in range(n) for b in range(n) if a != b and rng.random() < p}
        colors = tuple(2 if a == b else int((a, b) in arcs) for a in range(n) for b in range(n))
        base = wl2_refine(n, colors)
        sigma = list(range(n))
        rng.shuffle(sigma)
        moved = [0] * (n * n)
        for a in range(n):
            for b in range(n):
                moved[sigma[a] * n + sigma[b]] = colors[a * n + b]
        assert wl2_refine(n, moved).colors == base.permuted(sigma).colors
        assert wl2_refine(n, base.colors).colors == base.colors
        assert gamma_counts_constant(base)
    return "200 digraphs"


@criterion(6, "Johnson identification (8,2) (9,2) (10,2) (15,3)", limit=120)
def test_johnson_identification():
    rng = random.Random(606)
    for m, k in [(8, 2), (9, 2), (10, 2), (15, 3)]:
        group, _ = subset_action(m, k)
        n = group.degree
        sigma = list(range(n))
        rng.shuffle(sigma)
        group = group.conjugate(Permutation(sigma))
        action = identify_johnson_action(group, m, k)
        assert action.m == m and n == math.comb(m, k)
        assert sorted(action.iota) == sorted(itertools.combinations(range(m), k))
        for g in group.generators:
            img = action.phi.evaluate(g)
            for w in range(n):
                assert tuple(sorted(img[c] for c in action.iota[w])) == action.iota[g[w]]
    return "4 actions"


def set_partitions(items, max_parts):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest, max_parts):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        if len(part) < max_parts:
            yield [[first]] + part


@criterion(7, "pullback bound (all partitions of an 8-set into <=4 parts, k=2)")
def test_pullback_bound():
    m, k = 8, 2
    iota = list(itertools.combinations(range(m), k))
    omega = len(iota)
    count = 0
    for parts in set_partitions(list(range(m)), 4):
        count += 1
        classes = pullback_partition(iota, parts).classes()
        big = [v for v, members in classes.items() if Fraction(len(members)) > Fraction(2, 3) * omega]
        assert len(big) <= 1, parts
        for v in big:
            assert sorted(v) == [0] * (len(v) - 1) + [k], (parts, v)
    # S(8,1) + S(8,2) + S(8,3) + S(8,4)
    assert count == 1 + 127 + 966 + 1701
    return f"{count} partitions"


@criterion(8, "binomial inequality (m1,m2<=40, t1,t2>=1, t1+t2<=(m1+m2)/2)")
def test_binomial_inequality():
    checked = violations = 0
    for m1 in range(1, 41):
        for m2 in range(1, 41):
            for t1 in range(1, m1 + 1):
                for t2 in range(1, m2 + 1):
                    if 2 * (t1 + t2) > m1 + m2:
                        continue
                    checked += 1
                    exact = Fraction(math.comb(m1, t1) * math.comb(m2, t2)) <= Fraction(2, 3) * math.comb(m1 + m2, t1 + t2)
                    assert binom_inequality_holds(m1, t1, m2, t2) == exact
                    violations += not exact
    assert violations == 0
    return f"{checked} tuples, 0 violations"


def brute_restricted_image(elems, phi, x, T):
    """phi(g) restricted to T for every g in G fixing x whose image is even and fixes T setwise."""
    Tset = set(T)
    index = {p: i for i, p in enumerate(T)}
    out = set()
    for g in elems:
        img = phi.evaluate(Permutation(g))
        if img.is_even() and {img[c] for c in T} == Tset and act(x, g) == tuple(x):
            out.add(tuple(index[img[c]] for c in T))
    return out


def check_certificate(cert, group, phi, x, T, elems):
    k = len(T)
    index = {p: i for i, p in enumerate(T)}
    if cert.kind == FULL:
        for g in cert.group.generators:
            assert group.contains(g) and act(x, g) == tuple(x)
        image = PermGroup(k, [Permutation(index[phi.evaluate(g)[c]] for c in T) for g in cert.group.generators])
        assert image.order() == math.factorial(k) // 2
    else:
        assert cert.kind == NON_FULL
        assert giant_test(cert.group) is Giant.NEITHER
        for p in brute_restricted_image(elems, phi, x, T):
            assert cert.group.contains(Permutation(p))


@criterion(9, "certificate soundness (50 relaxed k=3..4, 5 strict k=9 on Alt9)", limit=600)
def test_certificate_soundness():
    rng = random.Random(909)
    solver = Solver(relax_k=True)
    worlds = {}
    for m, base in [(6, "sym"), (6, "alt"), (7, "sym")]:
        b = PermGroup.symmetric(m) if base == "sym" else PermGroup.alternating(m)
        group, phi, pairs = pair_action(m, b)
        worlds[m, base] = (group, phi, pairs, closure(group.generators, group.degree))
    kinds = {FULL: 0, NON_FULL: 0}
    keys = sorted(worlds)
    for i in range(50):
        group, phi, pairs, elems = worlds[keys[i % len(keys)]]
        m = phi.m
        k = 3 + i % 2
        arcs = [clique_arcs(range(rng.randint(3, m))), paley_arcs(7) if m == 7 else set(),
                random_arcs(rng, m, rng.choice([0.3, 0.5]))][i % 3]
        x = digraph_string(pairs, arcs)
        T = tuple(sorted(rng.sample(range(m), k)))
        cert = local_certificate(T, group, phi, x, solver.iso, relaxed=True)
        check_certificate(cert, group, phi, x, T, elems)
        kinds[cert.kind] += 1
    alt9 = PermGroup.alternating(9)
    phi9 = TrackedHom(alt9, 9, list(alt9.generators))
    elems9 = closure(alt9.generators, 9)
    strict = Solver()
    strings = [(0,) * 9, (0,) * 8 + (1,), (0,) * 7 + (1, 1), (0,) * 5 + (1,) * 4, (0, 0, 0, 1, 1, 1, 2, 2, 2)]
    for x in strings:
        x = act(x, rng.choice(sorted(elems9)))
        cert = local_certificate(tuple(range(9)), alt9, phi9, x, strict.iso, relaxed=False)
        check_certificate(cert, alt9, phi9, x, tuple(range(9)), elems9)
        kinds[cert.kind] += 1
    assert kinds[FULL] and kinds[NON_FULL]
    return f"{kinds[FULL]} FULL, {kinds[NON_FULL]} NON_FULL"


@criterion(10, "tuple relation is an equivalence; case-3 twin classes < k")
def test_tuple_relation_and_twins():
    m, k = 6, 3
    group, phi, pairs = pair_action(m)
    elems = closure(group.generators, group.degree)
    solver = Solver(brute_threshold=100, relax_k=True, cert_k=3)
    rng = random.Random(1010)
    grid = list(itertools.permutations(range(m), k))
    for arcs in (clique_arcs(range(4)), random_arcs(rng, m)):
        x = digraph_string(pairs, arcs)
        sigma = rng.choice(sorted(elems))
        y = act(x, sigma)
        nodes = [(x, t) for t in rng.sample(grid, 6)] + [(y, t) for t in rng.sample(grid, 6)]
        rel = {}
        for a, b in itertools.product(range(len(nodes)), repeat=2):
            (s1, t1), (s2, t2) = nodes[a], nodes[b]
            res = compare_certificates_tuples(t1, t2, group, phi, s1, s2, solver.iso, relaxed=True)
            rel[a, b] = not res.iso_coset.is_empty()
            # brute check: a genuine isomorphism with even image carrying t1 to t2 in order is always related
            genuine = any(act(s1, g) == s2 and phi.evaluate(Permutation(g)).is_even()
                          and all(phi.evaluate(Permutation(g))[c] == d for c, d in zip(t1, t2)) for g in elems)
            if genuine:
                assert rel[a, b]
        idx = range(len(nodes))
        assert all(rel[a, a] for a in idx)
        assert all(rel[a, b] == rel[b, a] for a in idx for b in idx)
        assert all(rel[a, c] for a in idx for b in idx for c in idx if rel[a, b] and rel[b, c])
    alt = PermGroup.alternating(7)
    group7, phi7, pairs7 = pair_action(7, alt)
    ctx = GiantContext(phi7, tuple((a,) for a, b in pairs7), 7, 1, False)
    agg = Solver(brute_threshold=100, relax_k=True, cert_k=3, prefer_giant=True)
    seen3 = 0
    for _ in range(6):
        x = digraph_string(pairs7, random_arcs(rng, 7))
        summary = summarize(agg, ctx, x, 3, 2)
        if summary.case != "3":
            continue
        seen3 += 1
        x_input, _ = case3_structures(agg, ctx, summary, summary, x, x, 3, 2)
        assert all(len(c) < 3 for c in kary_twin_classes(len(x_input.points), 3, x_input.color))
    assert seen3
    return f"{seen3} case-3 structures"


@criterion(11, "case coverage 1, 2a, 2b, 3 and both effect_of_structures branches")
def test_case_coverage():
    group, phi, pairs, strings = case_instances()
    elems = closure(group.generators, group.degree)
    rng = random.Random(1111)
    cases, branches = set(), set()
    for name, x in sorted(strings.items()):
        y = act(x, rng.choice(sorted(elems)))
        s = Solver(brute_threshold=100, relax_k=True, cert_k=3, prefer_giant=True)
        got = s.iso(group, x, y)
        assert coset_equals(got, iso_elements(elems, x, y)), name
        cases |= {r["case_x"] for r in s.records if r["event"] == "aggregate"}
        branches |= {r["branch"] for r in s.records if r["event"] == "effect_of_structures"}
    # Johnson branch: adjacency of the line graph of K5 on 2-subsets of a 10-set
    group10, subs = subset_action(10, 2)
    lines = list(itertools.combinations(range(5), 2))
    x = tuple(int(len(set(lines[a]) & set(lines[b])) == 1) for a, b in subs)
    pi = list(range(10))
    rng.shuffle(pi)
    index = {s: i for i, s in enumerate(subs)}
    lift = lambda p: tuple(index[tuple(sorted((p[a], p[b])))] for a, b in subs)
    y = act(x, lift(pi))
    s = Solver(brute_threshold=100, relax_k=True, cert_k=3, prefer_giant=True)
    got = s.iso(group10, x, y)
    branches |= {r["branch"] for r in s.records if r["event"] == "effect_of_structures"}
    edges_x = [subs[i] for i, c in enumerate(x) if c]
    edges_y = [subs[i] for i, c in enumerate(y) if c]
    assert coset_equals(got, {lift(p) for p in backtrack_isomorphisms(10, edges_x, edges_y)})
    assert cases >= {"1", "2a", "2b", "3"}, cases
    assert branches >= {"partition", "johnson"}, branches
    return f"cases {sorted(cases)}, branches {sorted(branches)}"


@criterion(12, "worked examples (banana, hippo table, D8 blocks, defect 1/3)")
def test_worked_examples():
    assert multiplicity_coloring("banana") == (1, 3, 2, 3, 2, 3)
    word = "hippopotomonstrosesquippedaliophobia"
    mult = dict(zip(word, multiplicity_coloring(word)))
    table = {}
    for c, v in mult.items():
        table.setdefault(v, set()).add(c)
    assert table == {7: {"o"}, 6: {"p"}, 4: {"i"}, 3: {"s"}, 2: set("aeht"), 1: set("bdlmnqru")}
    assert encode_string(word) and len(word) == 36
    d8 = PermGroup(4, [Permutation.from_cycles([(0, 1, 2, 3)], 4), Permutation.from_cycles([(1, 3)], 4)])
    system = minimal_block_system(d8)
    assert sorted(system.blocks) == [(0, 2), (1, 3)]
    assert orbital_configuration(d8).rank == 3
    assert block_action(d8, system).kernel().order() == 4
    group = young_subgroup([range(4), range(4, 12)], 12)
    assert symmetry_defect(twin_classes(group), 12) == Fraction(1, 3)
    return "4 examples"
