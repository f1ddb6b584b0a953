"""The result type of every isomorphism query: ``Aut_G(x) * sigma`` or empty."""
from __future__ import annotations

from typing import Iterator

from .perm import PermGroup, Permutation


class IsoCoset:
    """A right coset ``group * rep``, or the empty set when ``group`` is None."""

    __slots__ = ("group", "rep")

    def __init__(self, group: PermGroup | None, rep: Permutation | None):
        if (group is None) != (rep is None):
            raise ValueError("group and representative must both be given or both be None")
        self.group = group
        self.rep = rep

    @classmethod
    def empty(cls) -> "IsoCoset":
        return cls(None, None)

    @classmethod
    def of_group(cls, group: PermGroup) -> "IsoCoset":
        return cls(group, group.identity())

    def is_empty(self) -> bool:
        return self.group is None

    def __bool__(self):
        return self.group is not None

    def order(self) -> int:
        return 0 if self.group is None else self.group.order()

    def contains(self, g) -> bool:
        if self.group is None:
            return False
        return self.group.contains(Permutation(g) * ~self.rep)

    __contains__ = contains

    def elements(self) -> Iterator[Permutation]:
        if self.group is None:
            return iter(())
        rep = self.rep
        return (g * rep for g in self.group.elements())

    def shift(self, sigma: Permutation) -> "IsoCoset":
        """The coset multiplied on the right by ``sigma``."""
        if self.group is None:
            return self
        return IsoCoset(self.group, self.rep * sigma)

    def restrict(self, n: int) -> "IsoCoset":
        """Drop shadow coordinates beyond the first ``n`` points."""
        if self.group is None:
            return self
        return IsoCoset(PermGroup(n, [g[:n] for g in self.group.generators]), Permutation(self.rep[:n]))

    def __eq__(self, other):
        if not isinstance(other, IsoCoset):
            return NotImplemented
        if self.group is None or other.group is None:
            return self.group is None and other.group is None
        return self.group == other.group and self.group.contains(self.rep * ~other.rep)

    __hash__ = None

    def __repr__(self):
        if self.group is None:
            return "IsoCoset(EMPTY)"
        return f"IsoCoset(order={self.group.order()}, rep={self.rep})"


def format_coset(coset: IsoCoset) -> str:
    """``EMPTY``, or the representative followed by group generators, one per line."""
    if coset.is_empty():
        return "EMPTY"
    lines = [str(coset.rep)] + [str(g) for g in coset.group.generators]
    return "\n".join(lines)
