"""Graphs, the edge-list format, and the reduction from graph to string isomorphism.

A graph on V is encoded as a 0/1 string on Omega: ordered pairs V x V for
digraphs, 2-subsets of V for undirected graphs. The group is the image of
Sym(V) acting on Omega, and a tracked homomorphism from Sym(V) onto that image
turns pair-level cosets back into vertex bijections.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .coset import IsoCoset
from .perm import PermGroup, Permutation, TrackedHom
from .solver import SolverConfig, solve_iso


class GraphFormatError(ValueError):
    """Malformed edge-list input."""


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset
    directed: bool = False

    def __post_init__(self):
        if self.n < 0:
            raise GraphFormatError("vertex count must be non-negative")
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphFormatError(f"edge ({u}, {v}) has an endpoint out of range")
            if not self.directed and u >= v:
                raise GraphFormatError("undirected edges must be stored as (min, max) without loops")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], directed: bool = False) -> "Graph":
        out = set()
        for u, v in edges:
            e = (u, v) if directed else (min(u, v), max(u, v))
            if not directed and u == v:
                raise GraphFormatError(f"loop at vertex {u} in an undirected graph")
            if e in out:
                raise GraphFormatError(f"duplicate edge {e}")
            out.add(e)
        return cls(n, frozenset(out), directed)

    def permuted(self, pi) -> "Graph":
        """The image graph under the vertex bijection pi."""
        return Graph.from_edges(self.n, ((pi[u], pi[v]) for u, v in self.edges), self.directed)

    def degree_sequence(self) -> tuple:
        out = [0] * self.n
        inn = [0] * self.n
        for u, v in self.edges:
            out[u] += 1
            inn[v] += 1
        if not self.directed:
            return tuple(sorted(a + b for a, b in zip(out, inn)))
        return tuple(sorted(zip(out, inn)))


def parse_graph(text: str) -> Graph:
    """Read ``p <directed|undirected> <n> <m>`` followed by m lines ``e u v`` (0-based)."""
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("c "):
            continue
        parts = line.split()
        if parts[0] == "p":
            if header is not None or len(parts) != 4 or parts[1] not in ("directed", "undirected"):
                raise GraphFormatError(f"line {lineno}: bad header {raw!r}")
            try:
                header = (parts[1] == "directed", int(parts[2]), int(parts[3]))
            except ValueError:
                raise GraphFormatError(f"line {lineno}: bad header {raw!r}") from None
        elif parts[0] == "e":
            if header is None:
                raise GraphFormatError(f"line {lineno}: edge before header")
            if len(parts) != 3:
                raise GraphFormatError(f"line {lineno}: bad edge {raw!r}")
            try:
                edges.append((int(parts[1]), int(parts[2])))
            except ValueError:
                raise GraphFormatError(f"line {lineno}: bad edge {raw!r}") from None
        else:
            raise GraphFormatError(f"line {lineno}: unknown record {parts[0]!r}")
    if header is None:
        raise GraphFormatError("missing header line")
    directed, n, m = header
    if len(edges) != m:
        raise GraphFormatError(f"header announces {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges, directed)


def format_graph(g: Graph) -> str:
    kind = "directed" if g.directed else "undirected"
    lines = [f"p {kind} {g.n} {len(g.edges)}"] + [f"e {u} {v}" for u, v in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def pair_domain(n: int, directed: bool) -> list[tuple[int, int]]:
    if directed:
        return [(u, v) for u in range(n) for v in range(n)]
    return list(itertools.combinations(range(n), 2))


def pair_action(n: int, directed: bool) -> TrackedHom:
    """Sym(V) -> Sym(Omega), the induced action on pairs."""
    omega = pair_domain(n, directed)
    index = {p: i for i, p in enumerate(omega)}

    def induced(g):
        if directed:
            return Permutation(index[(g[u], g[v])] for u, v in omega)
        return Permutation(index[tuple(sorted((g[u], g[v])))] for u, v in omega)

    sym = PermGroup.symmetric(n)
    return TrackedHom(sym, len(omega), [induced(g) for g in sym.generators])


def adjacency_string(g: Graph) -> tuple[int, ...]:
    return tuple(int(p in g.edges) for p in pair_domain(g.n, g.directed))


@dataclass
class GIEncoding:
    group: PermGroup
    x: tuple
    y: tuple
    action: TrackedHom

    def decode(self, coset: IsoCoset) -> IsoCoset:
        """Pair-level coset to the vertex-level coset of all bijections inducing it."""
        if coset.is_empty():
            return coset
        return IsoCoset(self.action.preimage(coset.group), self.action.lift(coset.rep))

    def encode(self, pi) -> Permutation:
        return self.action.evaluate(pi)


def encode_gi_as_si(g1: Graph, g2: Graph) -> GIEncoding | None:
    """The string-isomorphism instance for g1, g2; None when the sizes or kinds differ."""
    if g1.n != g2.n or g1.directed != g2.directed:
        return None
    action = pair_action(g1.n, g1.directed)
    return GIEncoding(action.image(), adjacency_string(g1), adjacency_string(g2), action)


def solve_gi(g1: Graph, g2: Graph, config: SolverConfig | None = None, **overrides) -> IsoCoset:
    """Aut(g1) * sigma on vertices, or EMPTY."""
    enc = encode_gi_as_si(g1, g2)
    if enc is None or len(g1.edges) != len(g2.edges) or g1.degree_sequence() != g2.degree_sequence():
        return IsoCoset.empty()
    return enc.decode(solve_iso(enc.group, enc.x, enc.y, config, **overrides))
