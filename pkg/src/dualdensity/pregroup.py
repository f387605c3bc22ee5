"""Pregroup types and reductions.

Type syntax: simple types separated by whitespace, each a base name with an
optional adjoint suffix ``^l``, ``^ll``, ``^r``, ``^rr``, ...  ``n^r s n^l``
is a transitive verb.  An adjoint order ``z`` counts right adjoints
positively and left adjoints negatively.

A reduction is witnessed by a non-crossing matching over the flattened
simples.  A link ``(i, j)`` with ``i < j`` is a contraction ``x^(z) x^(z+1)
-> 1``, which covers both ``a^l a <= 1`` and ``a a^r <= 1``.  Unlinked
positions survive and, read left to right, must spell the target type.
A survivor may not sit under a link: its output wire would cross the cap.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import NotReducible, PregroupSyntaxError


@dataclass(frozen=True, order=True)
class SimpleType:
    base: str
    z: int = 0

    @property
    def l(self) -> "SimpleType":
        return SimpleType(self.base, self.z - 1)

    @property
    def r(self) -> "SimpleType":
        return SimpleType(self.base, self.z + 1)

    def __str__(self):
        if self.z == 0:
            return self.base
        return f"{self.base}^{('r' if self.z > 0 else 'l') * abs(self.z)}"


@dataclass(frozen=True)
class PregroupType:
    simples: tuple[SimpleType, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "simples", tuple(self.simples))

    def __iter__(self):
        return iter(self.simples)

    def __len__(self):
        return len(self.simples)

    def __getitem__(self, i):
        return self.simples[i]

    def __str__(self):
        return " ".join(str(s) for s in self.simples) if self.simples else "1"

    @property
    def bases(self) -> set[str]:
        return {s.base for s in self.simples}


_TOKEN = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^(l+|r+))?(?=\s|$)")


def parse_type(text: str, bases: Iterable[str] | None = None) -> PregroupType:
    """Parse ``"n^r s n^l"``; ``"1"`` or the empty string is the unit."""
    allowed = set(bases) if bases is not None else None
    simples = []
    pos = 0
    if text.strip() == "1":
        return PregroupType()
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise PregroupSyntaxError("malformed simple type", text, pos)
        base, adj = m.group(1), m.group(2) or ""
        if allowed is not None and base not in allowed:
            raise PregroupSyntaxError(f"undeclared basic type {base!r}", text, pos)
        z = len(adj) if adj.startswith("r") else -len(adj)
        simples.append(SimpleType(base, z))
        pos = m.end()
    return PregroupType(tuple(simples))


def parse_types(text: str, bases: Iterable[str] | None = None) -> list[PregroupType]:
    """Comma-separated word types, e.g. ``"n, n^r s n^l, n"``."""
    out = []
    offset = 0
    for chunk in text.split(","):
        try:
            out.append(parse_type(chunk, bases))
        except PregroupSyntaxError as e:
            raise PregroupSyntaxError("malformed simple type", text, offset + e.position) from None
        offset += len(chunk) + 1
    return out


@dataclass(frozen=True)
class Position:
    word: int
    offset: int
    simple: SimpleType


def flatten(seq: Sequence[PregroupType]) -> list[Position]:
    return [Position(w, k, s) for w, t in enumerate(seq) for k, s in enumerate(t)]


def can_contract(left: SimpleType, right: SimpleType) -> bool:
    return left.base == right.base and right.z == left.z + 1


@dataclass(frozen=True)
class ReductionDiagram:
    positions: tuple[Position, ...]
    links: tuple[tuple[int, int], ...]
    survivors: tuple[int, ...]
    target: PregroupType

    @property
    def word_types(self) -> list[PregroupType]:
        n = 1 + max((p.word for p in self.positions), default=-1)
        return [PregroupType(tuple(p.simple for p in self.positions if p.word == w))
                for w in range(n)]


def check_diagram(d: ReductionDiagram) -> bool:
    """Verify every invariant of a reduction diagram from scratch."""
    m = len(d.positions)
    used = set()
    for i, j in d.links:
        if not (0 <= i < j < m) or i in used or j in used:
            return False
        used.update((i, j))
        if not can_contract(d.positions[i].simple, d.positions[j].simple):
            return False
    for i, j in d.links:
        for k, l in d.links:
            if i < k < j < l:
                return False
    if sorted(d.survivors) != list(d.survivors):
        return False
    if set(d.survivors) != set(range(m)) - used:
        return False
    for s in d.survivors:
        if any(i < s < j for i, j in d.links):
            return False
    return tuple(d.positions[s].simple for s in d.survivors) == tuple(d.target.simples)


def reduce(seq: Sequence[PregroupType], target: PregroupType) -> ReductionDiagram:
    """Find a reduction of ``seq`` to ``target``.

    Interval dynamic programming.  Among several witnesses the choice is
    leftmost-innermost: scanning left to right, a position is linked to its
    nearest feasible partner before it is allowed to survive.
    """
    seq = list(seq)
    if not seq:
        raise ValueError("reduce needs at least one word")
    pos = flatten(seq)
    simples = tuple(p.simple for p in pos)
    goal = tuple(target.simples)
    m = len(simples)

    @lru_cache(maxsize=None)
    def empty(i: int, j: int):
        """Links reducing simples[i:j] to the unit, or None."""
        if i == j:
            return ()
        for k in range(i + 1, j, 2):
            if can_contract(simples[i], simples[k]):
                inner = empty(i + 1, k)
                if inner is None:
                    continue
                rest = empty(k + 1, j)
                if rest is not None:
                    return ((i, k),) + inner + rest
        return None

    @lru_cache(maxsize=None)
    def tail(p: int, q: int):
        """(links, survivors) reducing simples[p:] to goal[q:], or None."""
        if p == m:
            return ((), ()) if q == len(goal) else None
        for k in range(p + 1, m, 2):
            if can_contract(simples[p], simples[k]):
                inner = empty(p + 1, k)
                if inner is None:
                    continue
                rest = tail(k + 1, q)
                if rest is not None:
                    return ((p, k),) + inner + rest[0], rest[1]
        if q < len(goal) and simples[p] == goal[q]:
            rest = tail(p + 1, q + 1)
            if rest is not None:
                return rest[0], (p,) + rest[1]
        return None

    found = tail(0, 0)
    if found is None:
        raise NotReducible(f"{', '.join(map(str, seq))} does not reduce to {target}")
    links = tuple(sorted(found[0]))
    return ReductionDiagram(tuple(pos), links, found[1], target)
