"""Orbits, blocks, primitivity and block actions."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from . import _kernels as K
from .perm import PermGroup, Permutation, TrackedHom


class NotTransitive(ValueError):
    """Raised when a block operation receives an intransitive group."""


@dataclass(frozen=True)
class OrbitPartition:
    classes: tuple[tuple[int, ...], ...]

    def class_of(self) -> list[int]:
        out = [0] * sum(len(c) for c in self.classes)
        for i, c in enumerate(self.classes):
            for p in c:
                out[p] = i
        return out


@dataclass(frozen=True)
class BlockSystem:
    blocks: tuple[tuple[int, ...], ...]

    def block_of(self) -> list[int]:
        out = [0] * sum(len(b) for b in self.blocks)
        for i, b in enumerate(self.blocks):
            for p in b:
                out[p] = i
        return out

    def is_trivial(self) -> bool:
        return len(self.blocks) <= 1 or all(len(b) == 1 for b in self.blocks)


PRIMITIVE = "PRIMITIVE"


def orbits(group: PermGroup) -> OrbitPartition:
    return OrbitPartition(tuple(tuple(c) for c in group.orbit_list()))


def _require_transitive(group: PermGroup):
    if not group.is_transitive():
        raise NotTransitive("group is not transitive")


def _pair_orbit_edges(group: PermGroup, a: int, b: int):
    """Orbit of the unordered pair {a, b}."""
    seen = {(min(a, b), max(a, b))}
    queue = deque(seen)
    while queue:
        u, v = queue.popleft()
        for g in group.generators:
            e = (g[u], g[v])
            e = (min(e), max(e))
            if e not in seen:
                seen.add(e)
                queue.append(e)
    return seen


def smallest_block(group: PermGroup, a: int, b: int) -> frozenset[int]:
    """Connected component of a in the graph whose edges are the orbit of {a, b}."""
    _require_transitive(group)
    if a == b:
        raise ValueError("a and b must differ")
    adj: dict[int, list[int]] = {}
    for u, v in _pair_orbit_edges(group, a, b):
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    comp = {a}
    stack = [a]
    while stack:
        p = stack.pop()
        for q in adj.get(p, ()):
            if q not in comp:
                comp.add(q)
                stack.append(q)
    return frozenset(comp)


def block_system_from_block(group: PermGroup, block) -> BlockSystem:
    """All translates of one block."""
    block = frozenset(block)
    found = {block}
    queue = [block]
    for blk in queue:
        for g in group.generators:
            img = frozenset(g[p] for p in blk)
            if img not in found:
                found.add(img)
                queue.append(img)
    return BlockSystem(tuple(sorted(tuple(sorted(b)) for b in found)))


def is_primitive(group: PermGroup) -> bool:
    _require_transitive(group)
    n = group.degree
    return all(len(smallest_block(group, 0, b)) == n for b in range(1, n))


def _first_nontrivial_block(group: PermGroup):
    n = group.degree
    for b in range(1, n):
        blk = smallest_block(group, 0, b)
        if len(blk) < n:
            return blk
    return None


def minimal_block_system(group: PermGroup):
    """A block system with primitive induced action, or ``PRIMITIVE``.

    Seed a = 0, b ascending; the first proper block is taken, then the
    system is coarsened on the quotient until the quotient is primitive.
    """
    _require_transitive(group)
    if group.degree <= 2:
        return PRIMITIVE
    blk = _first_nontrivial_block(group)
    if blk is None:
        return PRIMITIVE
    system = block_system_from_block(group, blk)
    for _ in range(group.degree):
        if len(system.blocks) <= 2:
            break
        quotient = block_action(group, system).image()
        coarse = _first_nontrivial_block(quotient)
        if coarse is None:
            break
        merged = sorted(p for i in coarse for p in system.blocks[i])
        system = block_system_from_block(group, merged)
    return system


def block_action(group: PermGroup, system: BlockSystem) -> TrackedHom:
    """The induced action on the blocks, as a tracked homomorphism."""
    where = system.block_of()
    blocks = system.blocks

    def induced(g: Permutation):
        img = []
        for blk in blocks:
            target = where[g[blk[0]]]
            if any(where[g[p]] != target for p in blk):
                raise ValueError("partition is not invariant under the group")
            img.append(target)
        return img

    return TrackedHom.from_action(group, len(blocks), induced)


def setwise_action(group: PermGroup, sets: Sequence[frozenset]) -> TrackedHom:
    """Induced action on a G-invariant family of sets."""
    index = {frozenset(s): i for i, s in enumerate(sets)}

    def induced(g):
        return [index[frozenset(g[p] for p in s)] for s in sets]

    return TrackedHom.from_action(group, len(sets), induced)


def orbit_labels(group: PermGroup) -> list[int]:
    return K.orbit_labels(group.generators, group.degree)


def format_block_system(system: BlockSystem) -> str:
    return "\n".join(",".join(map(str, b)) for b in sorted(system.blocks, key=min))


def parse_block_system(text: str) -> BlockSystem:
    blocks = [tuple(sorted(int(t) for t in line.split(","))) for line in text.splitlines() if line.strip()]
    return BlockSystem(tuple(sorted(blocks)))
