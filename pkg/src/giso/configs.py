"""Relational structures, coherent configurations and Weisfeiler-Leman refinement.

Binary structures are stored as flat ``n*n`` color tuples (row-major).
k-ary partition structures are stored as dicts from tuples to colors.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from . import _kernels as K
from .perm import PermGroup


@dataclass(frozen=True)
class RelationalStructure:
    n: int
    arity: int
    relations: tuple[frozenset, ...]

    def to_partition(self) -> "PartitionStructure":
        """Color of a tuple = the set of relations containing it."""
        colors = {}
        for t in itertools.product(range(self.n), repeat=self.arity):
            colors[t] = tuple(i for i, r in enumerate(self.relations) if t in r)
        names = {c: i for i, c in enumerate(sorted(set(colors.values())))}
        return PartitionStructure(self.n, self.arity, {t: names[c] for t, c in colors.items()})


@dataclass(frozen=True)
class PartitionStructure:
    n: int
    arity: int
    colors: dict = field(hash=False)

    def color(self, t) -> int:
        return self.colors[tuple(t)]


@dataclass(frozen=True)
class CoherentConfiguration:
    """A binary partition structure (coherent when produced by ``wl2_refine``)."""

    n: int
    colors: tuple

    def __post_init__(self):
        if len(self.colors) != self.n * self.n:
            raise ValueError("color matrix must be n*n")

    def color(self, a: int, b: int) -> int:
        return self.colors[a * self.n + b]

    @property
    def rank(self) -> int:
        return len(set(self.colors))

    def color_ids(self) -> list[int]:
        return sorted(set(self.colors))

    def diagonal_colors(self) -> set[int]:
        return {self.colors[a * self.n + a] for a in range(self.n)}

    def is_homogeneous(self) -> bool:
        return len(self.diagonal_colors()) == 1

    def constituent(self, color: int) -> list[tuple[int, int]]:
        n = self.n
        return [divmod(i, n) for i, c in enumerate(self.colors) if c == color]

    def class_sizes(self) -> dict[int, int]:
        sizes: dict[int, int] = {}
        for c in self.colors:
            sizes[c] = sizes.get(c, 0) + 1
        return sizes

    def permuted(self, sigma: Sequence[int]) -> "CoherentConfiguration":
        """The configuration with point a renamed sigma[a]."""
        n = self.n
        out = [0] * (n * n)
        for a in range(n):
            for b in range(n):
                out[sigma[a] * n + sigma[b]] = self.colors[a * n + b]
        return CoherentConfiguration(n, tuple(out))

    def induced(self, points: Sequence[int]) -> "CoherentConfiguration":
        n = self.n
        return CoherentConfiguration(len(points), tuple(self.colors[a * n + b] for a in points for b in points))


def same_partition(c1: Sequence[int], c2: Sequence[int]) -> bool:
    """True iff two colorings induce the same partition of positions."""
    fwd: dict = {}
    bwd: dict = {}
    for a, b in zip(c1, c2):
        if fwd.setdefault(a, b) != b or bwd.setdefault(b, a) != a:
            return False
    return len(c1) == len(c2)


def _rank(keys: Sequence) -> tuple[int, ...]:
    names = {k: i for i, k in enumerate(sorted(set(keys)))}
    return tuple(names[k] for k in keys)


def config_axioms_hold(cfg: CoherentConfiguration) -> bool:
    """Diagonal colors differ from off-diagonal ones and transposition maps colors to colors."""
    n = cfg.n
    diag = cfg.diagonal_colors()
    transpose: dict[int, int] = {}
    for a in range(n):
        for b in range(n):
            c = cfg.colors[a * n + b]
            if (a == b) != (c in diag):
                return False
            ct = cfg.colors[b * n + a]
            if transpose.setdefault(c, ct) != ct:
                return False
    return True


def structure_constants(cfg: CoherentConfiguration):
    """gamma[(i, j, l)] for every colour triple, or None if some count is not constant.

    gamma(i, j, l) counts z with c(a, z) = i and c(z, b) = j for an edge (a, b) of color l.
    """
    n = cfg.n
    col = cfg.colors
    per_color: dict = {}
    for a in range(n):
        for b in range(n):
            counts: dict = {}
            for z in range(n):
                key = (col[a * n + z], col[z * n + b])
                counts[key] = counts.get(key, 0) + 1
            l = col[a * n + b]
            if per_color.setdefault(l, counts) != counts:
                return None
    return {(i, j, l): v for l, counts in per_color.items() for (i, j), v in counts.items()}


def is_coherent(cfg: CoherentConfiguration) -> bool:
    return config_axioms_hold(cfg) and structure_constants(cfg) is not None


def wl2_refine(n: int, colors: Sequence[int]) -> CoherentConfiguration:
    """Two-dimensional Weisfeiler-Leman refinement to the coarsest coherent refinement.

    Color names are ranks of labelling-invariant signatures, so the output
    commutes with renaming the points.
    """
    col = list(colors)
    keys = [(col[a * n + b], a != b, col[b * n + a]) for a in range(n) for b in range(n)]
    col = list(_rank(keys))
    ncolors = len(set(col))
    while True:
        sigs = K.wl_signatures(col, n, ncolors)
        new = list(_rank(sigs))
        new_count = len(set(new))
        if new_count == ncolors:
            return CoherentConfiguration(n, tuple(new))
        col, ncolors = new, new_count


def orbital_configuration(group: PermGroup) -> CoherentConfiguration:
    """Colors are the orbits of the group on ordered pairs."""
    labels = K.pair_orbit_labels(group.generators, group.degree)
    return CoherentConfiguration(group.degree, tuple(labels))


def constituent_biregularity(cfg: CoherentConfiguration, color: int) -> int:
    """Common in- and out-degree of a constituent of a homogeneous configuration."""
    if not cfg.is_homogeneous():
        raise ValueError("configuration is not homogeneous")
    n = cfg.n
    out_deg = [0] * n
    in_deg = [0] * n
    for a, b in cfg.constituent(color):
        out_deg[a] += 1
        in_deg[b] += 1
    degrees = set(out_deg) | set(in_deg)
    if len(degrees) != 1:
        raise ValueError("constituent is not biregular")
    return degrees.pop()


# Johnson schemes

@dataclass(frozen=True)
class JohnsonScheme:
    m: int
    t: int
    subsets: tuple[tuple[int, ...], ...]
    config: CoherentConfiguration


def johnson_scheme(m: int, t: int) -> JohnsonScheme:
    """J(m, t): t-subsets of an m-set, pair colored by |T1 minus T2|."""
    if t < 2 or m < 2 * t + 1:
        raise ValueError("need t >= 2 and m >= 2t + 1")
    subsets = tuple(itertools.combinations(range(m), t))
    sets = [set(s) for s in subsets]
    colors = tuple(len(a - b) for a in sets for b in sets)
    return JohnsonScheme(m, t, subsets, CoherentConfiguration(len(subsets), colors))


def johnson_relation_sizes(m: int, t: int) -> list[int]:
    """|R_i| by direct counting: binom(m,t) * binom(t,i) * binom(m-t,i)."""
    n = math.comb(m, t)
    return [n * math.comb(t, i) * math.comb(m - t, i) for i in range(t + 1)]


def _johnson_candidates(n: int):
    out = []
    for t in range(2, n):
        m = 2 * t + 1
        if math.comb(m, t) > n:
            break
        while math.comb(m, t) < n:
            m += 1
        if math.comb(m, t) == n:
            out.append((m, t))
    return out


def is_johnson(cfg: CoherentConfiguration):
    """(m, t, labelling) if ``cfg`` is a Johnson scheme, else None.

    The labelling maps each point to a t-subset of range(m) so that each
    color is exactly one value of |T1 minus T2|.
    """
    if not cfg.is_homogeneous():
        return None
    sizes = cfg.class_sizes()
    diag = next(iter(cfg.diagonal_colors()))
    for m, t in _johnson_candidates(cfg.n):
        if len(sizes) != t + 1:
            continue
        expected = johnson_relation_sizes(m, t)
        if sorted(sizes.values()) != sorted(expected):
            continue
        for index_of in _distance_assignments(sizes, expected, diag):
            labelling = _johnson_labelling(cfg, m, t, index_of)
            if labelling is not None:
                return m, t, labelling
    return None


def _distance_assignments(sizes: dict, expected: list[int], diag: int):
    """Every map color -> |T1 minus T2| respecting relation sizes, with the diagonal at 0."""
    colors = sorted(sizes)

    def extend(i, taken, out):
        if i == len(colors):
            yield dict(out)
            return
        c = colors[i]
        for d, size in enumerate(expected):
            if d in taken or size != sizes[c] or (d == 0) != (c == diag):
                continue
            out[c] = d
            yield from extend(i + 1, taken | {d}, out)
            del out[c]

    yield from extend(0, frozenset(), {})


def _johnson_labelling(cfg, m, t, index_of):
    """Backtracking search for a t-subset labelling; the first point is fixed WLOG."""
    n = cfg.n
    rel = [[index_of[cfg.color(a, b)] for b in range(n)] for a in range(n)]
    all_sets = [frozenset(s) for s in itertools.combinations(range(m), t)]
    order = sorted(range(n), key=lambda p: (rel[0][p], p))
    label: dict[int, frozenset] = {}
    used: set = set()

    def extend(pos):
        if pos == n:
            return True
        p = order[pos]
        for s in all_sets:
            if s in used:
                continue
            if all(len(label[q] - s) == rel[q][p] for q in label):
                label[p] = s
                used.add(s)
                if extend(pos + 1):
                    return True
                del label[p]
                used.discard(s)
            if pos == 0:
                break
        return False

    # the label of the second point can also be fixed up to Sym(m) symmetry; plain search is fine at desk scale
    if not extend(0):
        return None
    return tuple(tuple(sorted(label[p])) for p in range(n))


# Twins and symmetry defect

class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, a):
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        if self.size[a] < self.size[b]:
            a, b = b, a
        self.parent[b] = a
        self.size[a] += self.size[b]
        return True

    def classes(self):
        out: dict[int, list[int]] = {}
        for p in range(len(self.parent)):
            out.setdefault(self.find(p), []).append(p)
        return sorted(out.values())


def twin_classes(source) -> list[list[int]]:
    """Twin classes of a group, a binary configuration, or a k-ary partition structure."""
    if isinstance(source, PermGroup):
        n = source.degree
        test = lambda i, j: source.contains(_transposition(n, i, j))
    elif isinstance(source, CoherentConfiguration):
        n = source.n
        test = lambda i, j: _binary_transposition_aut(source, i, j)
    elif isinstance(source, (PartitionStructure, RelationalStructure)):
        ps = source.to_partition() if isinstance(source, RelationalStructure) else source
        n = ps.n
        test = lambda i, j: _kary_transposition_aut(ps, i, j)
    else:
        raise TypeError("unsupported twin source")
    uf = _UnionFind(n)
    for i in range(n):
        for j in range(i + 1, n):
            if uf.find(i) != uf.find(j) and test(i, j):
                uf.union(i, j)
    return uf.classes()


def _transposition(n, i, j):
    img = list(range(n))
    img[i], img[j] = j, i
    return tuple(img)


def _binary_transposition_aut(cfg, i, j) -> bool:
    n = cfg.n
    swap = _transposition(n, i, j)
    for a in (i, j):
        for b in range(n):
            if cfg.color(a, b) != cfg.color(swap[a], swap[b]) or cfg.color(b, a) != cfg.color(swap[b], swap[a]):
                return False
    return True


def _kary_transposition_aut(ps, i, j) -> bool:
    swap = _transposition(ps.n, i, j)
    for t, c in ps.colors.items():
        if i in t or j in t:
            if ps.colors[tuple(swap[p] for p in t)] != c:
                return False
    return True


def symmetry_defect(classes: Sequence[Sequence[int]], n: int) -> Fraction:
    largest = max((len(c) for c in classes), default=0)
    return Fraction(n - largest, n)


def digraph_symmetry_defect_check(n: int, edges: Iterable[tuple[int, int]]) -> bool:
    """Check the corollary that a non-trivial biregular irreflexive digraph has defect >= 1/2."""
    edges = set(edges)
    if n < 4:
        raise ValueError("need at least 4 vertices")
    if any(a == b for a, b in edges):
        raise ValueError("digraph is not irreflexive")
    if not edges or len(edges) == n * (n - 1):
        raise ValueError("digraph is trivial")
    out_deg = [0] * n
    in_deg = [0] * n
    for a, b in edges:
        out_deg[a] += 1
        in_deg[b] += 1
    if len(set(out_deg)) != 1 or len(set(in_deg)) != 1:
        raise ValueError("digraph is not biregular")
    colors = tuple(1 if (a, b) in edges else (2 if a == b else 0) for a in range(n) for b in range(n))
    classes = twin_classes(CoherentConfiguration(n, colors))
    return symmetry_defect(classes, n) >= Fraction(1, 2)


# Colored partitions

@dataclass(frozen=True)
class ColoredPartition:
    """Point colors plus blocks; every block lies inside one color class."""

    colors: tuple
    blocks: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.colors)

    @classmethod
    def from_coloring(cls, colors: Sequence) -> "ColoredPartition":
        """One block per color class."""
        classes: dict = {}
        for p, c in enumerate(colors):
            classes.setdefault(c, []).append(p)
        return cls(tuple(colors), tuple(sorted(tuple(v) for v in classes.values())))

    def classes(self) -> dict:
        out: dict = {}
        for p, c in enumerate(self.colors):
            out.setdefault(c, []).append(p)
        return out

    def profile(self) -> tuple:
        """Labelling-invariant summary: per color, its block sizes."""
        per: dict = {}
        for b in self.blocks:
            per.setdefault(self.colors[b[0]], []).append(len(b))
        return tuple(sorted((c, tuple(sorted(v))) for c, v in per.items()))

    def refine_by_block_size(self) -> "ColoredPartition":
        size = {}
        for b in self.blocks:
            for p in b:
                size[p] = len(b)
        return ColoredPartition(tuple((c, size[p]) for p, c in enumerate(self.colors)), self.blocks)


def validate_colored_partition(p: ColoredPartition, alpha, refine: bool = False):
    """(ok, reason) for the three alpha-partition conditions."""
    if refine:
        p = p.refine_by_block_size()
    n = p.n
    covered = sorted(q for b in p.blocks for q in b)
    if covered != list(range(n)):
        return False, "blocks do not partition the ground set"
    for b in p.blocks:
        if len({p.colors[q] for q in b}) != 1:
            return False, "block spans several colors"
    classes = p.classes()
    per_color: dict = {}
    for b in p.blocks:
        per_color.setdefault(p.colors[b[0]], []).append(len(b))
    for c, members in classes.items():
        if len(members) >= 2 and any(s < 2 for s in per_color[c]):
            return False, "condition 1: a color class of size >= 2 has a singleton block"
    if any(Fraction(len(b)) > Fraction(alpha) * n for b in p.blocks):
        return False, "condition 2: a block exceeds alpha * n"
    for c, sizes in per_color.items():
        if len(set(sizes)) > 1:
            return False, "condition 3: blocks of one color differ in size"
    return True, "ok"


# Design-lemma tuple search

@dataclass(frozen=True)
class SubConfiguration:
    """Item 2 outcome: the binary structure induced on the dominant class."""

    tuple: tuple
    points: tuple[int, ...]
    colors: tuple

    def as_config(self) -> CoherentConfiguration:
        return CoherentConfiguration(len(self.points), self.colors)


@dataclass(frozen=True)
class DesignOutcome:
    kind: str  # "PARTITION", "SUBCONFIG" or "NOT_FOUND"
    tuple: tuple = ()
    partition: ColoredPartition | None = None
    sub: SubConfiguration | None = None


NOT_FOUND = DesignOutcome("NOT_FOUND")


def kary_color_function(structure) -> Callable[[tuple], int]:
    if isinstance(structure, CoherentConfiguration):
        n = structure.n
        return lambda t: structure.colors[t[0] * n + t[1]]
    if isinstance(structure, PartitionStructure):
        return lambda t: structure.colors[tuple(t)]
    raise TypeError("unsupported structure")


def design_candidates(n: int, k: int, color: Callable, alpha, max_len: int | None = None):
    """Yield the outcome of every tuple of length <= k-1, in lexicographic order."""
    alpha = Fraction(alpha)
    top = k - 1 if max_len is None else min(max_len, k - 1)
    for l in range(top + 1):
        for t in itertools.permutations(range(n), l):
            yield design_outcome_for(n, k, color, alpha, t)


def design_outcome_for(n: int, k: int, color: Callable, alpha, t: tuple) -> DesignOutcome:
    alpha = Fraction(alpha)
    l = len(t)
    unary = tuple(color(t + (w,) * (k - l)) for w in range(n))
    counts: dict = {}
    for c in unary:
        counts[c] = counts.get(c, 0) + 1
    dominant = [c for c, v in counts.items() if v >= alpha * n]
    if not dominant:
        return DesignOutcome("PARTITION", t, partition=ColoredPartition.from_coloring(unary))
    if l <= k - 2:
        c0 = dominant[0]
        points = tuple(w for w in range(n) if unary[w] == c0)
        colors = tuple(color(t + (a,) + (b,) * (k - l - 1)) for a in points for b in points)
        off = {colors[i * len(points) + j] for i in range(len(points)) for j in range(len(points)) if i != j}
        if len(off) > 1:
            return DesignOutcome("SUBCONFIG", t, sub=SubConfiguration(t, points, colors))
    return NOT_FOUND


def design_tuple_search(structure, alpha, k: int | None = None) -> DesignOutcome:
    """First tuple (length <= k-1, lexicographic) satisfying design item 1 or item 2."""
    alpha = Fraction(alpha)
    if not Fraction(3, 4) <= alpha < 1:
        raise ValueError("alpha must satisfy 3/4 <= alpha < 1")
    if isinstance(structure, CoherentConfiguration):
        n, k = structure.n, 2
    else:
        n, k = structure.n, structure.arity
    if not 2 <= k or 4 * k > n:
        raise ValueError("need 2 <= k <= n/4")
    color = kary_color_function(structure)
    for outcome in design_candidates(n, k, color, alpha):
        if outcome.kind != "NOT_FOUND":
            return outcome
    return NOT_FOUND


def format_config(cfg: CoherentConfiguration) -> str:
    n = cfg.n
    return "\n".join(" ".join(str(cfg.colors[a * n + b]) for b in range(n)) for a in range(n))


def parse_config(text: str) -> CoherentConfiguration:
    rows = [list(map(int, line.split())) for line in text.splitlines() if line.strip()]
    return CoherentConfiguration(len(rows), tuple(c for r in rows for c in r))


def format_structure(ps: PartitionStructure) -> str:
    return "\n".join(f"{' '.join(map(str, t))} : {c}" for t, c in sorted(ps.colors.items()))


def parse_structure(text: str, n: int) -> PartitionStructure:
    colors = {}
    arity = None
    for line in text.splitlines():
        if not line.strip():
            continue
        left, right = line.split(":")
        t = tuple(int(v) for v in left.split())
        arity = len(t)
        colors[t] = int(right)
    return PartitionStructure(n, arity or 0, colors)
