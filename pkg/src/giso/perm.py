"""Permutations, Schreier-Sims stabilizer chains, and tracked homomorphisms.

Permutations act on the right: ``p * q`` applies ``p`` first, so
``(p * q)[i] == q[p[i]]``. Points are ``0..n-1``.
"""
from __future__ import annotations

import enum
import math
import re
from typing import Callable, Iterable, Iterator, Sequence

from . import _kernels as K


class Permutation(tuple):
    """An immutable permutation stored as its image tuple."""

    __slots__ = ()

    def __new__(cls, images: Iterable[int] = ()):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        return tuple.__new__(cls, images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return _wrap(range(n))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int) -> "Permutation":
        images = list(range(n))
        seen = set()
        for cyc in cycles:
            for a in cyc:
                if a in seen or not 0 <= a < n:
                    raise ValueError(f"bad cycle entry {a} for degree {n}")
                seen.add(a)
            for a, b in zip(cyc, list(cyc[1:]) + list(cyc[:1])):
                images[a] = b
        return _wrap(images)

    @classmethod
    def parse(cls, text: str, n: int) -> "Permutation":
        return parse_permutation(text, n)

    @property
    def degree(self) -> int:
        return len(self)

    def __mul__(self, other):
        if not isinstance(other, tuple):
            return NotImplemented
        return _wrap(K.compose(self, other))

    def __invert__(self) -> "Permutation":
        return _wrap(K.invert(self))

    def __pow__(self, e: int) -> "Permutation":
        result = Permutation.identity(len(self))
        base = self if e >= 0 else ~self
        e = abs(e)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def image(self, point: int) -> int:
        return self[point]

    def is_identity(self) -> bool:
        return all(i == p for i, p in enumerate(self))

    def support(self) -> list[int]:
        return [i for i, p in enumerate(self) if i != p]

    def cycles(self) -> list[tuple[int, ...]]:
        """Non-trivial cycles, each starting at its smallest point."""
        seen = [False] * len(self)
        out = []
        for i in range(len(self)):
            if seen[i] or self[i] == i:
                continue
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = self[j]
            out.append(tuple(cyc))
        return out

    def is_even(self) -> bool:
        return sum(len(c) - 1 for c in self.cycles()) % 2 == 0

    def restrict(self, points: Sequence[int]) -> "Permutation":
        """Induced permutation on an invariant point list, relabelled 0..len-1."""
        index = {p: i for i, p in enumerate(points)}
        return _wrap(index[self[p]] for p in points)

    def __str__(self) -> str:
        return format_permutation(self)

    def __repr__(self) -> str:
        return f"Permutation.parse('{format_permutation(self)}', {len(self)})"


def _wrap(images) -> Permutation:
    return tuple.__new__(Permutation, tuple(images))


def format_permutation(p: Sequence[int]) -> str:
    cycles = Permutation.cycles(p)
    if not cycles:
        return "()"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_permutation(text: str, n: int) -> Permutation:
    """Parse disjoint-cycle notation such as ``(0 1 2)(3 4)``; ``()`` is the identity."""
    text = text.strip()
    if _CYCLE.sub("", text).strip():
        raise ValueError(f"malformed cycle notation: {text!r}")
    cycles = []
    for body in _CYCLE.findall(text):
        parts = [int(t) for t in re.split(r"[\s,]+", body.strip()) if t]
        if parts:
            cycles.append(parts)
    return Permutation.from_cycles(cycles, n)


def symmetric_generators(points: Sequence[int], n: int) -> list[Permutation]:
    """Generators of Sym(points): a full cycle and a transposition."""
    points = list(points)
    if len(points) < 2:
        return []
    gens = [Permutation.from_cycles([points[:2]], n)]
    if len(points) > 2:
        gens.insert(0, Permutation.from_cycles([points], n))
    return gens


def alternating_generators(points: Sequence[int], n: int) -> list[Permutation]:
    """Generators of Alt(points).

    Odd length: (p2 ... p_{r-1}) and (p0 p1 p2).
    Even length: (p0 p1)(p2 ... p_{r-1}) and (p0 p1 p2).
    """
    points = list(points)
    r = len(points)
    if r < 3:
        return []
    three = Permutation.from_cycles([points[:3]], n)
    if r == 3:
        return [three]
    if r % 2:
        other = Permutation.from_cycles([points[2:]], n)
    else:
        other = Permutation.from_cycles([points[:2], points[2:]], n)
    return [other, three]


class StabChain:
    """A base with transversals, built by deterministic Schreier-Sims.

    ``transversals[i]`` maps every point of the orbit of ``base[i]`` under the
    i-th stabilizer to a representative carrying ``base[i]`` there.
    ``strong[i]`` generates that stabilizer.
    """

    def __init__(self, degree: int, base, transversals, strong):
        self.degree = degree
        self.base = base
        self.transversals = transversals
        self.strong = strong
        self._inverses = [dict() for _ in base]

    def order(self) -> int:
        return math.prod(len(t) for t in self.transversals)

    def _inverse_rep(self, level: int, point: int) -> Permutation:
        inv = self._inverses[level]
        rep = inv.get(point)
        if rep is None:
            rep = inv[point] = ~self.transversals[level][point]
        return rep

    def sift(self, g: Sequence[int], start: int = 0):
        """Strip ``g`` through the chain; return (residue, level reached)."""
        compose = K.compose
        for level in range(start, len(self.base)):
            point = g[self.base[level]]
            trans = self.transversals[level]
            if point not in trans:
                return _wrap(g), level
            if point != self.base[level]:
                g = compose(g, self._inverse_rep(level, point))
        return _wrap(g), len(self.base)

    def contains(self, g: Sequence[int]) -> bool:
        if len(g) != self.degree:
            raise ValueError("degree mismatch")
        residue, level = self.sift(g)
        return level == len(self.base) and residue.is_identity()

    def factor(self, g: Sequence[int]):
        """Transversal representatives u_0..u_{l-1} with g = u_{l-1} ... u_0, or None."""
        reps = []
        for level in range(len(self.base)):
            point = g[self.base[level]]
            trans = self.transversals[level]
            if point not in trans:
                return None
            reps.append(trans[point])
            g = K.compose(g, self._inverse_rep(level, point))
        return reps if Permutation.is_identity(g) else None

    def elements(self, start: int = 0) -> Iterator[Permutation]:
        """All group elements (of the ``start``-th stabilizer)."""
        if start == len(self.base):
            yield Permutation.identity(self.degree)
            return
        reps = list(self.transversals[start].values())
        for h in self.elements(start + 1):
            for u in reps:
                yield _wrap(K.compose(h, u))

    def random_element(self, rng) -> Permutation:
        g = Permutation.identity(self.degree)
        for trans in reversed(self.transversals):
            g = g * rng.choice(list(trans.values()))
        return g

    def tail(self, start: int) -> "StabChain":
        """The chain of the stabilizer of the first ``start`` base points."""
        sub = StabChain(self.degree, self.base[start:], self.transversals[start:], self.strong[start:])
        sub._inverses = self._inverses[start:]
        return sub


def _orbit_transversal(degree, point, gens):
    trans = {point: Permutation.identity(degree)}
    _grow_transversal(trans, list(trans), gens)
    return trans


def _grow_transversal(trans, queue, gens):
    """Close ``trans`` under ``gens``, starting the search from ``queue``."""
    compose = K.compose
    for p in queue:
        u = trans[p]
        for s in gens:
            q = s[p]
            if q not in trans:
                trans[q] = _wrap(compose(u, s))
                queue.append(q)


def build_stab_chain(degree: int, generators: Iterable[Sequence[int]], base_prefix: Sequence[int] = ()) -> StabChain:
    """Deterministic incremental Schreier-Sims.

    The base starts with ``base_prefix`` and is extended by the smallest point
    moved by a new strong generator. Schreier generators already shown to
    sift are remembered per level, so a restart only checks new pairs.
    """
    ident = tuple(range(degree))
    gens = []
    for g in generators:
        if len(g) != degree:
            raise ValueError("generator degree mismatch")
        g = _wrap(g)
        if tuple(g) != ident and g not in gens:
            gens.append(g)
    base = list(base_prefix)
    for g in gens:
        if all(g[b] == b for b in base):
            base.append(next(i for i in range(degree) if g[i] != i))
    strong = [[g for g in gens if all(g[b] == b for b in base[:i])] for i in range(len(base))]
    trans = [_orbit_transversal(degree, base[i], strong[i]) for i in range(len(base))]
    chain = StabChain(degree, base, trans, strong)
    checked = [set() for _ in base]
    compose = K.compose

    def add_generator(h, first, last):
        for l in range(first, last + 1):
            chain.strong[l].append(h)
            t = chain.transversals[l]
            before = list(t)
            # new generator applied to the old orbit, then ordinary closure
            fresh = []
            for p in before:
                q = h[p]
                if q not in t:
                    t[q] = _wrap(compose(t[p], h))
                    fresh.append(q)
            _grow_transversal(t, fresh, chain.strong[l])

    i = len(base) - 1
    while i >= 0:
        restart = False
        done = checked[i]
        level_gens = chain.strong[i]
        trans_i = chain.transversals[i]
        for p in list(trans_i):
            u = trans_i[p]
            for si, s in enumerate(level_gens):
                if (p, si) in done:
                    continue
                us = compose(u, s)
                q = us[base[i]]
                schreier = compose(us, chain._inverse_rep(i, q))
                if schreier != ident:
                    h, j = chain.sift(schreier, i + 1)
                    if j < len(base) or not h.is_identity():
                        if j == len(base):
                            base.append(next(t for t in range(degree) if h[t] != t))
                            chain.strong.append([])
                            chain.transversals.append({base[-1]: Permutation.identity(degree)})
                            chain._inverses.append({})
                            checked.append(set())
                        add_generator(h, i + 1, j)
                        i = j
                        restart = True
                        break
                done.add((p, si))
            if restart:
                break
        if not restart:
            i -= 1
    return chain


class PermGroup:
    """A permutation group given by generators, with cached stabilizer chains."""

    def __init__(self, degree: int, generators: Iterable[Sequence[int]] = (), chain: StabChain | None = None):
        self.degree = degree
        ident = tuple(range(degree))
        gens = []
        seen = set()
        for g in generators:
            if len(g) != degree:
                raise ValueError("generator degree mismatch")
            g = _wrap(g)
            if tuple(g) != ident and g not in seen:
                seen.add(g)
                gens.append(g)
        self._chains: dict[tuple, StabChain] = {}
        if chain is not None:
            self._chains[()] = chain
        self.generators: list[Permutation] = gens
        if len(gens) > 2 * degree * degree:
            self.generators = _normalize(degree, gens, self.chain_for(()))

    @classmethod
    def trivial(cls, degree: int) -> "PermGroup":
        return cls(degree, [])

    @classmethod
    def symmetric(cls, degree: int, points: Sequence[int] | None = None) -> "PermGroup":
        points = range(degree) if points is None else points
        return cls(degree, symmetric_generators(points, degree))

    @classmethod
    def alternating(cls, degree: int, points: Sequence[int] | None = None) -> "PermGroup":
        points = range(degree) if points is None else points
        return cls(degree, alternating_generators(points, degree))

    def chain_for(self, base_prefix: Sequence[int] = ()) -> StabChain:
        key = tuple(base_prefix)
        chain = self._chains.get(key)
        if chain is None:
            chain = self._chains[key] = build_stab_chain(self.degree, self.generators, key)
        return chain

    @property
    def chain(self) -> StabChain:
        if self._chains:
            return next(iter(self._chains.values()))
        return self.chain_for(())

    def order(self) -> int:
        return self.chain.order()

    def __len__(self):
        raise TypeError("use order(); group orders may exceed sys.maxsize")

    def __bool__(self):
        return True

    def contains(self, g: Sequence[int]) -> bool:
        return self.chain.contains(g)

    __contains__ = contains

    def is_trivial(self) -> bool:
        return not self.generators

    def elements(self) -> Iterator[Permutation]:
        return self.chain.elements()

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def random_element(self, rng) -> Permutation:
        return self.chain.random_element(rng)

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return all(other.contains(g) for g in self.generators)

    def __eq__(self, other):
        if not isinstance(other, PermGroup):
            return NotImplemented
        return (self.degree == other.degree and self.order() == other.order()
                and self.is_subgroup_of(other))

    __hash__ = None

    def fixes(self, x: Sequence) -> bool:
        """True iff every generator fixes the string ``x``."""
        return all(K.maps_string(x, x, g) for g in self.generators)

    def orbit(self, point: int) -> list[int]:
        labels = K.orbit_labels(self.generators, self.degree)
        return [p for p in range(self.degree) if labels[p] == labels[point]]

    def orbit_list(self) -> list[list[int]]:
        labels = K.orbit_labels(self.generators, self.degree)
        classes: dict[int, list[int]] = {}
        for p, lab in enumerate(labels):
            classes.setdefault(lab, []).append(p)
        return [classes[k] for k in sorted(classes)]

    def is_transitive(self) -> bool:
        return self.degree <= 1 or len(self.orbit(0)) == self.degree

    def moved_points(self) -> list[int]:
        return sorted({p for g in self.generators for p in g.support()})

    def pointwise_stabilizer(self, points: Iterable[int]) -> "PermGroup":
        return pointwise_stabilizer(self, points)

    def stabilizer(self, point: int) -> "PermGroup":
        return pointwise_stabilizer(self, [point])

    def orbit_transversal(self, point: int) -> dict[int, Permutation]:
        """For each p in the orbit of ``point``, an element mapping ``point`` to p."""
        return _orbit_transversal(self.degree, point, self.generators)

    def conjugate(self, g: Permutation) -> "PermGroup":
        gi = ~g
        return PermGroup(self.degree, [gi * s * g for s in self.generators])

    def __repr__(self):
        gens = ", ".join(format_permutation(g) for g in self.generators)
        return f"PermGroup(degree={self.degree}, generators=[{gens}])"


def _normalize(degree, gens, chain) -> list[Permutation]:
    """Replace a long generator list by the strong generators (size O(n^2))."""
    strong = []
    for level in chain.strong:
        for g in level:
            if g not in strong:
                strong.append(g)
    return strong


def group_from_chain(degree: int, chain: StabChain) -> PermGroup:
    gens = chain.strong[0] if chain.strong else []
    group = PermGroup(degree, gens)
    group._chains[()] = chain
    return group


def pointwise_stabilizer(group: PermGroup, points: Iterable[int]) -> PermGroup:
    """{g in G : p^g = p for every p in points}."""
    prefix = sorted(set(points))
    if not prefix:
        return group
    chain = group.chain_for(prefix)
    sub = chain.tail(len(prefix))
    return group_from_chain(group.degree, sub)


def membership(chain: StabChain, g: Sequence[int]) -> bool:
    return chain.contains(g)


class IndexOverflow(Exception):
    """Raised when a subgroup turns out to have larger index than allowed."""


def subgroup_with_cosets(group: PermGroup, member_test: Callable[[Permutation], bool], index_bound: int):
    """Generators of H = {g : member_test(g)} and right coset reps of H in G.

    The cosets are discovered by closing ``{identity}`` under right
    multiplication by generators; Schreier generators of H fall out on the way.
    """
    ident = group.identity()
    reps = [ident]
    rep_inverses = [ident]
    h_gens = []
    idx = 0
    while idx < len(reps):
        r = reps[idx]
        for s in group.generators:
            t = r * s
            for r2, r2i in zip(reps, rep_inverses):
                cand = t * r2i
                if member_test(cand):
                    if not cand.is_identity():
                        h_gens.append(cand)
                    break
            else:
                reps.append(t)
                rep_inverses.append(~t)
                if len(reps) > index_bound:
                    raise IndexOverflow(f"index exceeds {index_bound}")
        idx += 1
    sub = PermGroup(group.degree, h_gens)
    if len(sub.generators) > 4 * group.degree:
        sub = group_from_chain(group.degree, sub.chain)
    return sub, reps


class Giant(enum.Enum):
    SYMMETRIC = "SYMMETRIC"
    ALTERNATING = "ALTERNATING"
    NEITHER = "NEITHER"


def giant_test(group: PermGroup) -> Giant:
    """Classify by comparing |G| with n! and n!/2."""
    n = group.degree
    order = group.order()
    full = math.factorial(n)
    if order == full:
        return Giant.SYMMETRIC
    if n >= 2 and 2 * order == full:
        return Giant.ALTERNATING
    return Giant.NEITHER


def contains_alternating(group: PermGroup) -> bool:
    return giant_test(group) is not Giant.NEITHER


def restriction_group(group: PermGroup, points: Sequence[int]) -> PermGroup:
    """The induced group on an invariant point list (relabelled)."""
    return PermGroup(len(points), [g.restrict(points) for g in group.generators])


class EmptyPreimage(Exception):
    """The requested permutation is not in the image of the homomorphism."""


class TrackedHom:
    """A homomorphism G -> Sym(Gamma) stored through the shadow domain.

    Every domain generator g is paired with its image and stored as one
    permutation on n + m points: g on 0..n-1 and the image shifted to n..n+m-1.
    The group generated by these pairs is the graph of the homomorphism, so
    evaluation, kernels and lifts are all sifts or pointwise stabilizers.
    """

    def __init__(self, domain: PermGroup, codomain_degree: int, images: Sequence[Sequence[int]] | None = None,
                 shadow: PermGroup | None = None):
        self.n = domain.degree
        self.m = codomain_degree
        self.domain = domain
        if shadow is None:
            if len(images) != len(domain.generators):
                raise ValueError("one image per generator required")
            shadow = PermGroup(self.n + self.m, [self.combine(g, im) for g, im in zip(domain.generators, images)])
        self.shadow = shadow

    @classmethod
    def from_shadow(cls, shadow: PermGroup, n: int, m: int) -> "TrackedHom":
        domain = PermGroup(n, [g[:n] for g in shadow.generators])
        return cls(domain, m, shadow=shadow)

    @classmethod
    def from_action(cls, group: PermGroup, m: int, action: Callable[[Permutation], Sequence[int]]) -> "TrackedHom":
        return cls(group, m, [action(g) for g in group.generators])

    def combine(self, g: Sequence[int], image: Sequence[int]) -> Permutation:
        n = self.n
        return _wrap(tuple(g) + tuple(n + i for i in image))

    def split(self, d: Sequence[int]) -> tuple[Permutation, Permutation]:
        n = self.n
        return _wrap(d[:n]), _wrap(i - n for i in d[n:])

    def gamma_part(self, d: Sequence[int]) -> Permutation:
        n = self.n
        return _wrap(i - n for i in d[n:])

    @property
    def pairs(self) -> list[tuple[Permutation, Permutation]]:
        return [self.split(d) for d in self.shadow.generators]

    def _factor_region(self, target: Sequence[int], region_start: int, region_len: int):
        """A shadow element agreeing with ``target`` on one region, or None."""
        total = self.n + self.m
        prefix = tuple(range(region_start, region_start + region_len))
        chain = self.shadow.chain_for(prefix)
        r = list(range(total))
        for i, t in enumerate(target):
            r[region_start + i] = region_start + t
        r = tuple(r)
        acc = tuple(range(total))
        for level in range(region_len):
            b = chain.base[level]
            p = r[b]
            u = chain.transversals[level].get(p)
            if u is None:
                return None
            if p != b:
                r = K.compose(r, chain._inverse_rep(level, p))
                acc = K.compose(u, acc)
        for i in range(region_start, region_start + region_len):
            if r[i] != i:
                return None
        return _wrap(acc)

    def shadow_of(self, g: Sequence[int]) -> Permutation:
        """The shadow element (g, phi(g)); raises if g is not in the domain."""
        d = self._factor_region(g, 0, self.n)
        if d is None:
            raise ValueError("element not in the domain group")
        chain = self.shadow.chain_for(tuple(range(self.n)))
        if len(chain.base) > self.n and any(len(t) > 1 for t in chain.transversals[self.n:]):
            raise ValueError("generator pairs do not define a homomorphism")
        return d

    def evaluate(self, g: Sequence[int]) -> Permutation:
        return self.gamma_part(self.shadow_of(g))

    def kernel_shadow(self) -> PermGroup:
        cached = self.__dict__.get("_kernel_shadow")
        if cached is None:
            cached = self._kernel_shadow = pointwise_stabilizer(self.shadow, range(self.n, self.n + self.m))
        return cached

    def kernel(self) -> PermGroup:
        cached = self.__dict__.get("_kernel")
        if cached is None:
            ker = self.kernel_shadow()
            cached = self._kernel = PermGroup(self.n, [g[:self.n] for g in ker.generators])
        return cached

    def image(self) -> PermGroup:
        cached = self.__dict__.get("_image")
        if cached is None:
            cached = self._image = PermGroup(self.m, [self.gamma_part(d) for d in self.shadow.generators])
        return cached

    def lift_shadow(self, tau: Sequence[int]) -> Permutation:
        d = self._factor_region(tau, self.n, self.m)
        if d is None:
            raise EmptyPreimage("permutation not in the image")
        return d

    def lift(self, tau: Sequence[int]) -> Permutation:
        return _wrap(self.lift_shadow(tau)[:self.n])

    def preimage_shadow(self, target: PermGroup, index_bound: int = 10**5) -> PermGroup:
        """Shadow group {d : phi-part of d lies in target}."""
        image = self.image()
        if target.is_subgroup_of(image):
            inside = target
        else:
            inside, _ = subgroup_with_cosets(target, image.contains, index_bound)
        gens = list(self.kernel_shadow().generators)
        gens += [self.lift_shadow(h) for h in inside.generators]
        return PermGroup(self.n + self.m, gens)

    def restrict_to(self, shadow_subgroup: PermGroup) -> "TrackedHom":
        return TrackedHom.from_shadow(shadow_subgroup, self.n, self.m)

    def preimage(self, target):
        """Preimage of a subgroup (PermGroup) or of one permutation (coset or EMPTY)."""
        from .coset import IsoCoset

        if isinstance(target, PermGroup):
            sh = self.preimage_shadow(target)
            return PermGroup(self.n, [g[:self.n] for g in sh.generators])
        try:
            lift = self.lift(target)
        except EmptyPreimage:
            return IsoCoset.empty()
        return IsoCoset(self.kernel(), lift)

    def compose(self, other: "TrackedHom") -> "TrackedHom":
        """phi followed by ``other`` (whose domain must contain the image)."""
        return TrackedHom(self.domain, other.m, [other.evaluate(self.evaluate(g)) for g in self.domain.generators])


def even_part(group: PermGroup) -> PermGroup:
    """G intersected with Alt(n), from Schreier generators of the index-2 subgroup."""
    odd = next((g for g in group.generators if not g.is_even()), None)
    if odd is None:
        return group
    inv = ~odd
    gens = []
    for s in group.generators:
        if s.is_even():
            gens += [s, odd * s * inv]
        else:
            gens += [s * inv, odd * s]
    return PermGroup(group.degree, gens)


def restrict_hom(hom: TrackedHom, subgroup: PermGroup) -> TrackedHom:
    """The homomorphism restricted to a subgroup of its domain."""
    if subgroup is hom.domain:
        return hom
    return TrackedHom(subgroup, hom.m, [hom.evaluate(g) for g in subgroup.generators])


def hom_evaluate(hom: TrackedHom, g) -> Permutation:
    return hom.evaluate(g)


def hom_kernel(hom: TrackedHom) -> PermGroup:
    return hom.kernel()


def hom_preimage(hom: TrackedHom, target):
    return hom.preimage(target)


def format_group(group: PermGroup) -> str:
    return "\n".join(format_permutation(g) for g in group.generators)


def parse_group(text: str, degree: int) -> PermGroup:
    return PermGroup(degree, [parse_permutation(line, degree) for line in text.splitlines() if line.strip()])
