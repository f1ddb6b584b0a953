"""The recursive string-isomorphism solver.

Dispatch for Iso_G(x, y), in order: multiset mismatch, G fixing x, brute
force for small groups, orbit recursion for intransitive groups, and for
transitive groups a minimal block system with quotient Q. A small Q goes
through strong Luks; a Q of order m!/2 or m! on binom(m, k) blocks goes to
the giant pipeline; anything else falls back to coset enumeration through
the block kernel, which is exact but may be slow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, getcontext
from typing import Callable, Sequence

from .action import PRIMITIVE, block_action, minimal_block_system
from .coset import IsoCoset
from .johnson import JohnsonRegimeError, NotJohnson, identify_johnson_action
from .perm import Giant, PermGroup, Permutation, TrackedHom, giant_test
from .strings import (
    act, brute_force_iso, giant_coset_iso, iso_cosets_union, orbit_recursion, strong_luks,
)


class BudgetExceeded(RuntimeError):
    """The node budget ran out before the answer was complete."""


@dataclass
class SolverConfig:
    brute_threshold: int = 10**4
    budget: int = 10**7
    relax_k: bool = False
    cert_k: int | None = None
    trace: Callable[[dict], None] | None = None
    dump_certificates: Callable[[object], None] | None = None
    prefer_giant: bool = False


@dataclass
class GiantContext:
    """A group M with a tracked epimorphism onto Alt(Gamma) and the map iota."""

    phi: TrackedHom
    iota: tuple[tuple[int, ...], ...]
    m: int
    k: int
    primitive: bool

    @property
    def group(self) -> PermGroup:
        return self.phi.domain


def quotient_is_small(order: int, blocks: int) -> bool:
    """|Q| <= b^(1 + log2 b), compared through logarithms at 60 significant digits."""
    if blocks <= 1:
        return True
    getcontext().prec = 60
    b = Decimal(blocks)
    log2b = b.ln() / Decimal(2).ln()
    bound = (Decimal(1) + log2b) * b.ln()
    return Decimal(order).ln() <= bound


def detect_johnson(order: int, blocks: int) -> tuple[int, int] | None:
    """(m, k) with binom(m, k) = blocks and order in {m!/2, m!}, smallest k first."""
    for k in range(1, blocks + 1):
        if math.comb(2 * k, k) > blocks and k > 1:
            break
        m = 2 * k if k > 1 else blocks
        while math.comb(m, k) < blocks:
            m += 1
        if math.comb(m, k) == blocks and m >= 2:
            f = math.factorial(m)
            if order in (f, f // 2) and (k == 1 or m > 2 * k):
                return m, k
    return None


class Solver:
    def __init__(self, config: SolverConfig | None = None, **overrides):
        self.config = config or SolverConfig()
        for key, value in overrides.items():
            setattr(self.config, key, value)
        self.nodes = 0
        self.records: list[dict] = []

    def tick(self):
        self.nodes += 1
        if self.nodes > self.config.budget:
            raise BudgetExceeded(f"node budget {self.config.budget} exhausted")

    def record(self, event: str, **info):
        entry = {"node": self.nodes, "event": event, **info}
        self.records.append(entry)
        if self.config.trace is not None:
            self.config.trace(entry)

    def iso(self, group: PermGroup, x: Sequence[int], y: Sequence[int], window=None) -> IsoCoset:
        """Iso_G(x, y); with a G-invariant window, Iso^window_G(x, y) by truncation."""
        x, y = tuple(x), tuple(y)
        n = group.degree
        if len(x) != n or len(y) != n:
            raise ValueError("string lengths must equal the group degree")
        if window is not None:
            from .strings import truncate

            glaucous = max(max(x, default=-1), max(y, default=-1)) + 1
            x, y = truncate(x, window, glaucous), truncate(y, window, glaucous)
        self.tick()
        if sorted(x) != sorted(y):
            return IsoCoset.empty()
        if group.fixes(x):
            return IsoCoset.of_group(group) if x == y else IsoCoset.empty()
        if group.order() <= self.config.brute_threshold:
            return brute_force_iso(group, x, y)
        if not group.is_transitive():
            return orbit_recursion(group, x, y, self.iso)
        return self._transitive(group, x, y)

    def aut(self, group: PermGroup, x: Sequence[int]) -> PermGroup:
        return self.iso(group, x, x).group

    def _transitive(self, group: PermGroup, x, y) -> IsoCoset:
        n = group.degree
        system = minimal_block_system(group)
        if system == PRIMITIVE:
            blocks = [(p,) for p in range(n)]
            hom = None
            quotient = group
        else:
            blocks = list(system.blocks)
            hom = block_action(group, system)
            quotient = hom.image()
        nb = len(blocks)
        q_order = quotient.order()
        found = detect_johnson(q_order, nb)
        small = quotient_is_small(q_order, nb)
        if small and not (self.config.prefer_giant and found is not None):
            self.record("strong_luks", blocks=nb, quotient_order=q_order)
            return self._enumerate_blocks(group, blocks, x, y)
        if found is not None:
            m, k = found
            try:
                ctx = self._giant_context(group, system, hom, quotient, m, k)
            except (JohnsonRegimeError, NotJohnson) as exc:
                self.record("escape", reason=str(exc), blocks=nb, quotient_order=q_order)
                return self._enumerate_blocks(group, blocks, x, y)
            return self._giant(ctx, x, y)
        self.record("escape", reason="quotient is neither small nor a Johnson group", blocks=nb,
                    quotient_order=q_order)
        return self._enumerate_blocks(group, blocks, x, y)

    def _enumerate_blocks(self, group, blocks, x, y) -> IsoCoset:
        if all(len(b) == 1 for b in blocks):
            return self._point_descent(group, x, y)
        return strong_luks(group, range(group.degree), blocks, x, y, self.iso, on_coset=self.tick)

    def _point_descent(self, group, x, y) -> IsoCoset:
        """Weak Luks over the stabilizer of a point whose letter is rarest in x."""
        counts: dict = {}
        for c in x:
            counts[c] = counts.get(c, 0) + 1
        point = min(range(group.degree), key=lambda p: (counts[x[p]], p))
        stab = group.stabilizer(point)
        target = x[point]
        parts = []
        for image, sigma in group.orbit_transversal(point).items():
            self.tick()
            if y[image] != target:
                continue
            parts.append(self.iso(stab, x, act(y, ~sigma)).shift(sigma))
        return iso_cosets_union(parts)

    def _giant_context(self, group, system, hom, quotient, m, k) -> GiantContext:
        n = group.degree
        primitive = system == PRIMITIVE
        where = list(range(n)) if primitive else system.block_of()
        if k == 1:
            phi = TrackedHom(group, n, list(group.generators)) if primitive else hom
            iota = tuple((where[w],) for w in range(n))
        else:
            action = identify_johnson_action(quotient, m, k)
            phi = action.phi if primitive else hom.compose(action.phi)
            iota = tuple(action.iota[where[w]] for w in range(n))
        self.record("johnson", m=m, k=k, primitive=primitive)
        return GiantContext(phi, iota, m, k, primitive)

    def _giant(self, ctx: GiantContext, x, y) -> IsoCoset:
        """Reduce to the preimage of Alt(Gamma) with two cosets, then solve there."""
        kind = giant_test(ctx.phi.image())
        if ctx.primitive and ctx.k == 1:
            self.record("giant", m=ctx.m, kind=kind.value)
            return giant_coset_iso(ctx.group, x, y, kind)
        if kind is Giant.SYMMETRIC and ctx.m >= 2:
            shadow = ctx.phi.preimage_shadow(PermGroup.alternating(ctx.m))
            phi_even = TrackedHom.from_shadow(shadow, ctx.phi.n, ctx.m)
            even = GiantContext(phi_even, ctx.iota, ctx.m, ctx.k, ctx.primitive)
            tau = ctx.phi.lift(Permutation.from_cycles([(0, 1)], ctx.m))
            parts = [self._giant_even(even, x, y), self._giant_even(even, x, act(y, ~tau)).shift(tau)]
            return iso_cosets_union(parts)
        return self._giant_even(ctx, x, y)

    def _giant_even(self, ctx: GiantContext, x, y) -> IsoCoset:
        from . import aggregation

        self.tick()
        group = ctx.group
        if ctx.primitive:
            return aggregation.johnson_primitive_iso(self, ctx, x, y)
        cert_k = self.certificate_k(group.degree, ctx.m)
        if cert_k is not None:
            return aggregation.aggregation_iso(self, ctx, x, y, cert_k)
        self.record("escape", reason="no admissible certificate size", m=ctx.m, degree=group.degree)
        return self.enumerate_kernel_cosets(ctx.phi, x, y)

    def certificate_k(self, n: int, m: int) -> int | None:
        """Test-set size for local certificates, or None when no admissible size exists."""
        if self.config.relax_k:
            k = self.config.cert_k or 3
            return k if 3 <= k and 2 * k < m else None
        lower = max(8.0, 2 + math.log2(max(n, 1)))
        k = self.config.cert_k or math.floor(lower) + 1
        return k if lower < k and 10 * k < m else None

    def enumerate_kernel_cosets(self, phi: TrackedHom, x, y) -> IsoCoset:
        """Exact escape hatch: Iso over each coset of ker(phi), one per image element."""
        kernel = phi.kernel()
        parts = []
        for q in phi.image().elements():
            self.tick()
            sigma = phi.lift(q)
            parts.append(self.iso(kernel, x, act(y, ~sigma)).shift(sigma))
        return iso_cosets_union(parts)


def solve_iso(group: PermGroup, x: Sequence[int], y: Sequence[int], config: SolverConfig | None = None,
              **overrides) -> IsoCoset:
    """Iso_G(x, y) = Aut_G(x) * sigma, or EMPTY."""
    return Solver(config, **overrides).iso(group, x, y)
