"""From pregroup reductions to tensor contractions.

Each simple type ``x^(z)`` is sent to the wire ``Space(x)``, conjugate-flagged
when ``z`` is odd, so a grammatical link always joins opposite flags.  In
the lifted (doubled-doubled) semantics every such wire becomes the four
slots ``[w, w*, w, w*]`` and a link becomes four caps, slot ``t`` against
slot ``t``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from . import density as dn
from . import tensor as tc
from .errors import AssignmentGap, LayoutError
from .pregroup import PregroupType, ReductionDiagram, SimpleType, parse_type, reduce
from .tensor import ProductTensor, Space, Tensor, TensorLike, Wire


class TypeAssignment(dict):
    """Map from basic grammatical type to Space, e.g. ``{"n": N, "s": S}``."""

    def space(self, base: str) -> Space:
        try:
            return self[base]
        except KeyError:
            raise AssignmentGap(f"basic type {base!r} has no space assigned") from None

    def wire(self, simple: SimpleType) -> Wire:
        return Wire(self.space(simple.base), simple.z % 2 == 1)

    def wires(self, t: PregroupType, lifted: bool = True) -> tuple[Wire, ...]:
        base = tuple(self.wire(s) for s in t)
        return dn.lifted_wires(base) if lifted else base


@dataclass(frozen=True)
class LexiconEntry:
    word: str
    type: PregroupType
    meaning: TensorLike
    provenance: str = "raw"
    source: Any = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class ContractionPlan:
    layouts: tuple[tuple[Wire, ...], ...]
    caps: tuple[tuple[tuple[int, int], tuple[int, int]], ...]
    outputs: tuple[tuple[int, int], ...]
    group: int
    n_links: int

    @property
    def lifted(self) -> bool:
        return self.group == 4


def plan(d: ReductionDiagram, ta: TypeAssignment, lifted: bool = True) -> ContractionPlan:
    group = 4 if lifted else 1
    types = d.word_types
    layouts = tuple(ta.wires(t, lifted) for t in types)
    ports = [(p.word, p.offset * group) for p in d.positions]
    caps = []
    for i, j in d.links:
        (wi, oi), (wj, oj) = ports[i], ports[j]
        caps += [((wi, oi + t), (wj, oj + t)) for t in range(group)]
    outputs = tuple((ports[s][0], ports[s][1] + t) for s in d.survivors for t in range(group))
    return ContractionPlan(layouts, tuple(caps), outputs, group, len(d.links))


def network(p: ContractionPlan, meanings: Sequence[TensorLike]) -> tc.Network:
    if len(meanings) != len(p.layouts):
        raise LayoutError(f"plan expects {len(p.layouts)} meanings, got {len(meanings)}")
    for k, (m, layout) in enumerate(zip(meanings, p.layouts)):
        if tuple(m.wires) != layout:
            raise LayoutError(f"word {k}: meaning has wires [{tc.fmt_wires(m.wires)}], "
                              f"plan expects [{tc.fmt_wires(layout)}]")
    return tc.Network.build(meanings, p.caps, p.outputs)


def execute(p: ContractionPlan, meanings: Sequence[TensorLike]) -> Tensor:
    return tc.contract_network(network(p, meanings))


def execute_oracle(p: ContractionPlan, meanings: Sequence[TensorLike]) -> Tensor:
    return tc.brute_force_contract(network(p, meanings))


# --- relative pronouns --------------------------------------------------------

THAT_SUBJ_TYPE = parse_type("n^r n s^l n")
THAT_OBJ_TYPE = parse_type("n^r n n^ll s^l")


def _pronoun(ta: TypeAssignment, t: PregroupType, noun_legs: Sequence[int], s_leg: int,
             lifted: bool) -> TensorLike:
    N, S = ta.space("n"), ta.space("s")
    flags = [ta.wire(x).conjugate for x in t]
    # spider over the three noun legs; its own wire order is conj legs first
    conj_legs = [k for k in noun_legs if flags[k]]
    plain_legs = [k for k in noun_legs if not flags[k]]
    sp = tc.spider(len(conj_legs), len(plain_legs), N)
    unit = tc.spider(1, 0, S) if flags[s_leg] else tc.spider(0, 1, S)
    order = conj_legs + plain_legs + [s_leg]
    base = tc.permute(tc.tensor_product(sp, unit), tc.inverse_permutation(order))
    if not lifted:
        return base
    # lift each generator separately, then interleave: wire k of the word sits
    # at slots 4k..4k+3
    factors, where = [], {}
    for gen, legs in ((sp, conj_legs + plain_legs), (unit, [s_leg])):
        lifted_gen = dn.lift_pure(gen, factored=True)
        off = sum(f.rank for f in factors)
        factors.extend(lifted_gen.factors)
        for pos in range(lifted_gen.rank):
            leg, slot = legs[pos // 4], pos % 4
            where[4 * leg + slot] = off + lifted_gen.perm[pos]
    return ProductTensor(tuple(factors), tuple(where[k] for k in range(4 * len(t))))


def that_subj(ta: TypeAssignment, lifted: bool = True) -> TensorLike:
    """Subject relative pronoun on ``n^r n s^l n``: spider on the noun legs, unit on s."""
    return _pronoun(ta, THAT_SUBJ_TYPE, [0, 1, 3], 2, lifted)


def that_obj(ta: TypeAssignment, lifted: bool = True) -> TensorLike:
    """Object relative pronoun on ``n^r n n^ll s^l``."""
    return _pronoun(ta, THAT_OBJ_TYPE, [0, 1, 2], 3, lifted)


# --- phrases ------------------------------------------------------------------

@dataclass
class Diagnostics:
    diagram: ReductionDiagram
    trace: float | None = None
    entropy1: float | None = None
    entropy2: float | None = None

    def as_dict(self) -> dict:
        return {
            "links": [[i + 1, j + 1] for i, j in self.diagram.links],
            "survivors": [s + 1 for s in self.diagram.survivors],
            "trace": self.trace,
            "entropy1": self.entropy1,
            "entropy2": self.entropy2,
        }


def diagnose(result: Tensor, diagram: ReductionDiagram, base: float = 2) -> Diagnostics:
    diag = Diagnostics(diagram)
    try:
        d = dn.DualDensity(result)
    except LayoutError:
        return diag
    diag.trace = dn.discard1(d)
    if diag.trace > 1e-300:
        diag.entropy1, diag.entropy2 = dn.entropies(d, base)
    return diag


def compose_phrase(words: Sequence[LexiconEntry], target: PregroupType, ta: TypeAssignment,
                   base: float = 2) -> tuple[Tensor, Diagnostics]:
    diagram = reduce([w.type for w in words], target)
    p = plan(diagram, ta, lifted=True)
    result = execute(p, [w.meaning for w in words])
    return result, diagnose(result, diagram, base)
