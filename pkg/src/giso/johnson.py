"""Recognize Alt(m) acting on k-subsets, pull partitions back, lift permutations."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import _kernels as K
from .configs import ColoredPartition
from .perm import EmptyPreimage, PermGroup, Permutation, TrackedHom, format_permutation


class NotJohnson(ValueError):
    """The group does not look like a Johnson action with the given parameters."""


class JohnsonRegimeError(ValueError):
    """m <= k(k+1)+1: identification is refused and the caller must enumerate."""


@dataclass
class JohnsonAction:
    m: int
    k: int
    iota: tuple[tuple[int, ...], ...]
    phi: TrackedHom
    gamma_sets: tuple[frozenset, ...] = ()

    def equivariance_holds(self) -> bool:
        for g, img in self.phi.pairs:
            for w, sub in enumerate(self.iota):
                if tuple(sorted(img[c] for c in sub)) != self.iota[g[w]]:
                    return False
        return True


def _c_set(x, y, n, delta_adj, not_delta_of_x):
    """C(x, y): points outside the Delta-neighbourhoods of B(x, y)."""
    b_set = [z for z in range(n) if z in not_delta_of_x and z in delta_adj[y]]
    covered = set()
    for z in b_set:
        covered |= delta_adj[z]
    return frozenset(r for r in range(n) if r not in covered)


def identify_johnson_action(group: PermGroup, m: int, k: int) -> JohnsonAction:
    """Reconstruct the m-set and the bijection of the domain with its k-subsets."""
    n = group.degree
    if k == 1:
        if n != m:
            raise NotJohnson("degree differs from m")
        phi = TrackedHom(group, m, list(group.generators))
        return JohnsonAction(m, 1, tuple((w,) for w in range(n)), phi, tuple(frozenset([w]) for w in range(n)))
    if n != math.comb(m, k):
        raise NotJohnson("degree is not binom(m, k)")
    if m <= k * (k + 1) + 1:
        raise JohnsonRegimeError(f"m = {m} <= k(k+1)+1 = {k * (k + 1) + 1}")
    labels = K.pair_orbit_labels(group.generators, n)
    sizes: dict[int, int] = {}
    for lab in labels:
        sizes[lab] = sizes.get(lab, 0) + 1
    diag = labels[0]
    if any(labels[w * n + w] != diag for w in range(n)):
        raise NotJohnson("group is not transitive")
    off = {lab: s for lab, s in sizes.items() if lab != diag}
    if len(off) != k or len(set(off.values())) != k:
        raise NotJohnson("orbital count or sizes do not match a Johnson action")
    xi = min(off, key=off.get)
    delta = max(off, key=off.get)
    delta_adj = [set() for _ in range(n)]
    for i, lab in enumerate(labels):
        if lab == delta:
            a, b = divmod(i, n)
            delta_adj[a].add(b)
    x0 = 0
    y0 = next(y for y in range(n) if labels[x0 * n + y] == xi)
    not_delta_x0 = {z for z in range(n) if z not in delta_adj[x0]}
    c0 = _c_set(x0, y0, n, delta_adj, not_delta_x0)
    found = {c0}
    queue = [c0]
    for c in queue:
        for g in group.generators:
            img = frozenset(g[p] for p in c)
            if img not in found:
                found.add(img)
                queue.append(img)
                if len(found) > m:
                    raise NotJohnson("too many C-sets")
    if len(found) != m or any(len(c) != math.comb(m - 1, k - 1) for c in found):
        raise NotJohnson("C-sets do not form an m-set")
    gamma_sets = tuple(sorted(found, key=lambda c: tuple(sorted(c))))
    index = {c: i for i, c in enumerate(gamma_sets)}
    iota = []
    for w in range(n):
        sub = tuple(i for i, c in enumerate(gamma_sets) if w in c)
        if len(sub) != k:
            raise NotJohnson("point lies in the wrong number of C-sets")
        iota.append(sub)
    if len(set(iota)) != n:
        raise NotJohnson("iota is not injective")
    images = [[index[frozenset(g[p] for p in c)] for c in gamma_sets] for g in group.generators]
    action = JohnsonAction(m, k, tuple(iota), TrackedHom(group, m, images), gamma_sets)
    if not action.equivariance_holds():
        raise NotJohnson("equivariance fails")
    return action


def pullback_partition(iota: Sequence[Sequence[int]], parts: Sequence[Sequence[int]]) -> ColoredPartition:
    """Color each domain point by how many members of iota(w) fall in each part."""
    where = {}
    for i, part in enumerate(parts):
        for c in part:
            if c in where:
                raise ValueError("parts overlap")
            where[c] = i
    gamma = {c for sub in iota for c in sub}
    if not gamma <= set(where):
        raise ValueError("parts do not cover the ground set")
    colors = []
    for sub in iota:
        v = [0] * len(parts)
        for c in sub:
            v[where[c]] += 1
        colors.append(tuple(v))
    return ColoredPartition.from_coloring(colors)


def lift_permutation(phi: TrackedHom, tau: Sequence[int]) -> Permutation:
    """Some g in the domain with phi(g) = tau; EmptyPreimage if tau is not in the image."""
    return phi.lift(tau)


def binom_inequality_holds(m1: int, t1: int, m2: int, t2: int) -> bool:
    """binom(m1,t1)*binom(m2,t2) <= (2/3) binom(m1+m2, t1+t2), assuming t <= m/2 and t1, t2 >= 1."""
    lhs = math.comb(m1, t1) * math.comb(m2, t2)
    return Fraction(lhs) <= Fraction(2, 3) * math.comb(m1 + m2, t1 + t2)


def format_johnson_action(action: JohnsonAction) -> str:
    lines = [str(action.m), str(action.k)]
    lines += [" ".join(map(str, sub)) for sub in action.iota]
    for g, img in action.phi.pairs:
        lines.append(f"{format_permutation(g)} -> {format_permutation(img)}")
    return "\n".join(lines)


__all__ = [
    "EmptyPreimage", "JohnsonAction", "JohnsonRegimeError", "NotJohnson", "binom_inequality_holds",
    "format_johnson_action", "identify_johnson_action", "lift_permutation", "pullback_partition",
]
