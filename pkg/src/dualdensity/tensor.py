"""Dense real tensors with typed, conjugate-flagged wires.

A :class:`Tensor` is a numpy array plus one :class:`Wire` per axis.  Wires
carry the space they live in and a conjugate flag, so that a cap can only
join ``H`` with ``H*`` even though, over the reals, conjugation never
changes a number.  Conjugating a tensor flips every flag and reverses the
wire order.

Besides the single-tensor operations there is a small network layer:
:func:`contract_network` contracts pairwise with ``numpy.tensordot`` and
:func:`brute_force_contract` sums over every nonzero index assignment.  The
second is slow but shares no code path with the first and serves as the
test oracle.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import FlagMismatch, ShapeMismatch, SpaceMismatch, TensorError

DEFAULT_TOL = 1e-9
MAX_DIM = 64


@dataclass(frozen=True)
class Space:
    name: str
    basis: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        if not self.basis:
            raise TensorError(f"space {self.name!r} needs at least one basis label")
        if len(set(self.basis)) != len(self.basis):
            raise TensorError(f"space {self.name!r} has duplicate basis labels")
        if len(self.basis) > MAX_DIM:
            raise TensorError(f"space {self.name!r} exceeds dimension {MAX_DIM}")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, label: str) -> int:
        try:
            return self.basis.index(label)
        except ValueError:
            raise TensorError(f"unknown basis label {label!r} for space {self.name}") from None

    @classmethod
    def of_dim(cls, name: str, dim: int) -> "Space":
        return cls(name, tuple(f"{name.lower()}{i}" for i in range(dim)))

    def __repr__(self):
        return f"Space({self.name!r}, dim={self.dim})"


@dataclass(frozen=True)
class Wire:
    space: Space
    conjugate: bool = False

    @property
    def dim(self) -> int:
        return self.space.dim

    def conj(self) -> "Wire":
        return Wire(self.space, not self.conjugate)

    def __str__(self):
        return self.space.name + ("*" if self.conjugate else "")


class Tensor:
    """Immutable dense tensor; ``data.shape`` matches the wire dimensions."""

    __slots__ = ("wires", "data")

    def __init__(self, wires: Iterable[Wire], data):
        wires = tuple(wires)
        shape = tuple(w.dim for w in wires)
        arr = np.array(data, dtype=float)
        if arr.size != math.prod(shape):
            raise ShapeMismatch(
                f"data has {arr.size} entries but wires {fmt_wires(wires)} need {math.prod(shape)}")
        arr = arr.reshape(shape)
        if not np.all(np.isfinite(arr)):
            raise TensorError("tensor entries must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "wires", wires)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Tensor is immutable")

    @property
    def rank(self) -> int:
        return len(self.wires)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    def dense(self) -> "Tensor":
        return self

    def __add__(self, other: "Tensor") -> "Tensor":
        _require_same_wires(self, other)
        return Tensor(self.wires, self.data + other.data)

    def __sub__(self, other: "Tensor") -> "Tensor":
        _require_same_wires(self, other)
        return Tensor(self.wires, self.data - other.data)

    def __mul__(self, k: float) -> "Tensor":
        return Tensor(self.wires, self.data * float(k))

    __rmul__ = __mul__

    def __neg__(self) -> "Tensor":
        return self * -1.0

    def __float__(self):
        if self.wires:
            raise TensorError("only scalar tensors convert to float")
        return float(self.data)

    def nonzero(self) -> list[tuple[tuple[int, ...], float]]:
        idx = np.argwhere(self.data != 0)
        return [(tuple(int(i) for i in row), float(self.data[tuple(row)])) for row in idx]

    def __repr__(self):
        return f"Tensor([{fmt_wires(self.wires)}], nnz={int(np.count_nonzero(self.data))})"


@dataclass(frozen=True)
class ProductTensor:
    """An unevaluated outer product of factors, with a wire permutation.

    Position ``k`` of the represented tensor is wire ``perm[k]`` of the
    concatenated factor wires.  Lifted structural tensors are kept in this
    form because their dense size grows as dim**(4*legs).
    """

    factors: tuple[Tensor, ...]
    perm: tuple[int, ...] = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        n = sum(f.rank for f in self.factors)
        perm = tuple(range(n)) if self.perm is None else tuple(self.perm)
        if sorted(perm) != list(range(n)):
            raise ShapeMismatch(f"invalid permutation {perm} for {n} wires")
        object.__setattr__(self, "perm", perm)

    @property
    def _flat_wires(self) -> tuple[Wire, ...]:
        return tuple(w for f in self.factors for w in f.wires)

    @property
    def wires(self) -> tuple[Wire, ...]:
        flat = self._flat_wires
        return tuple(flat[p] for p in self.perm)

    @property
    def rank(self) -> int:
        return len(self.perm)

    def locate(self, k: int) -> tuple[int, int]:
        """(factor index, wire index within factor) of output wire ``k``."""
        p = self.perm[k]
        for fi, f in enumerate(self.factors):
            if p < f.rank:
                return fi, p
            p -= f.rank
        raise IndexError(k)

    def dense(self) -> Tensor:
        out = scalar(1.0)
        for f in self.factors:
            out = tensor_product(out, f)
        return permute(out, self.perm)


TensorLike = Union[Tensor, ProductTensor]


def fmt_wires(wires: Sequence[Wire]) -> str:
    return " ".join(str(w) for w in wires)


def _require_same_wires(a: Tensor, b: Tensor):
    if a.wires != b.wires:
        raise ShapeMismatch(f"wire lists differ: [{fmt_wires(a.wires)}] vs [{fmt_wires(b.wires)}]")


# --- constructors -------------------------------------------------------------

def scalar(x: float) -> Tensor:
    return Tensor((), x)


def zeros(wires: Sequence[Wire]) -> Tensor:
    wires = tuple(wires)
    return Tensor(wires, np.zeros(tuple(w.dim for w in wires)))


def basis_vector(space: Space, label: str, conjugate: bool = False) -> Tensor:
    data = np.zeros(space.dim)
    data[space.index(label)] = 1.0
    return Tensor((Wire(space, conjugate),), data)


def vector(wires: Sequence[Wire], terms: Mapping | Iterable) -> Tensor:
    """Sparse constructor: ``terms`` maps label tuples (or single labels) to weights."""
    wires = tuple(wires)
    data = np.zeros(tuple(w.dim for w in wires))
    items = terms.items() if isinstance(terms, Mapping) else terms
    for labels, weight in items:
        if isinstance(labels, str):
            labels = (labels,)
        if len(labels) != len(wires):
            raise ShapeMismatch(f"label tuple {labels} does not match {len(wires)} wires")
        data[tuple(w.space.index(l) for w, l in zip(wires, labels))] += weight
    return Tensor(wires, data)


def cap(s: Space) -> Tensor:
    """The effect sum_i <i i*| on [H, H*]."""
    return Tensor((Wire(s), Wire(s, True)), np.eye(s.dim))


def cup(s: Space) -> Tensor:
    """The state sum_i |i i*> on [H, H*]; same numbers as the cap over the reals."""
    return Tensor((Wire(s), Wire(s, True)), np.eye(s.dim))


def spider(m: int, n: int, s: Space) -> Tensor:
    """Generalised Kronecker delta with ``m`` conjugate legs followed by ``n`` plain legs."""
    if m < 0 or n < 0 or m + n < 1:
        raise TensorError("spider needs m, n >= 0 and at least one leg")
    k = m + n
    data = np.zeros((s.dim,) * k)
    for i in range(s.dim):
        data[(i,) * k] = 1.0
    wires = [Wire(s, True)] * m + [Wire(s, False)] * n
    return Tensor(wires, data)


# --- operations ---------------------------------------------------------------

def tensor_product(a: Tensor, b: Tensor) -> Tensor:
    return Tensor(a.wires + b.wires, np.multiply.outer(a.data, b.data))


def _check_pair(wa: Wire, wb: Wire):
    if wa.space != wb.space:
        raise SpaceMismatch(f"cannot contract {wa} with {wb}")
    if wa.conjugate == wb.conjugate:
        raise FlagMismatch(f"cannot contract {wa} with {wb}: conjugate flags must differ")


def contract(t: Tensor, i: int, j: int) -> Tensor:
    """Apply a cap to wires ``i`` and ``j`` of ``t`` (a partial trace)."""
    if i == j:
        raise TensorError("contract needs two distinct wires")
    _check_pair(t.wires[i], t.wires[j])
    data = np.trace(t.data, axis1=i, axis2=j)
    wires = tuple(w for k, w in enumerate(t.wires) if k not in (i, j))
    return Tensor(wires, data)


def contract_pair(a: Tensor, b: Tensor, pairs: Sequence[tuple[int, int]]) -> Tensor:
    """``a ⊗ b`` followed by caps on each (wire of a, wire of b) in ``pairs``.

    Result wires: the uncontracted wires of ``a`` then those of ``b``.
    """
    for i, j in pairs:
        _check_pair(a.wires[i], b.wires[j])
    ia = [i for i, _ in pairs]
    ib = [j for _, j in pairs]
    data = np.tensordot(a.data, b.data, axes=(ia, ib))
    wires = tuple(w for k, w in enumerate(a.wires) if k not in ia) + \
        tuple(w for k, w in enumerate(b.wires) if k not in ib)
    return Tensor(wires, data)


def conjugate(t: Tensor) -> Tensor:
    wires = tuple(w.conj() for w in reversed(t.wires))
    return Tensor(wires, np.transpose(t.data, tuple(reversed(range(t.rank)))))


def permute(t: Tensor, perm: Sequence[int]) -> Tensor:
    """New wire ``k`` is old wire ``perm[k]`` (numpy transpose convention)."""
    perm = tuple(perm)
    if sorted(perm) != list(range(t.rank)):
        raise ShapeMismatch(f"{perm} is not a permutation of {t.rank} wires")
    return Tensor(tuple(t.wires[p] for p in perm), np.transpose(t.data, perm))


def inverse_permutation(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for k, p in enumerate(perm):
        inv[p] = k
    return tuple(inv)


def equal_within(a: TensorLike, b: TensorLike, tol: float = DEFAULT_TOL) -> bool:
    a, b = a.dense(), b.dense()
    if a.wires != b.wires:
        return False
    return bool(np.max(np.abs(a.data - b.data), initial=0.0) <= tol)


def proportional_to(a: TensorLike, b: TensorLike, tol: float = DEFAULT_TOL) -> float | None:
    """Return ``lam > 0`` with ``a ≈ lam * b`` (max abs error <= tol), else None."""
    a, b = a.dense(), b.dense()
    _require_same_wires(a, b)
    bb = float(np.vdot(b.data, b.data))
    if bb == 0.0:
        raise TensorError("proportional_to needs a nonzero reference tensor")
    lam = float(np.vdot(a.data, b.data)) / bb
    if lam <= 0.0:
        return None
    if np.max(np.abs(a.data - lam * b.data), initial=0.0) > tol:
        return None
    return lam


# --- networks -----------------------------------------------------------------

Port = tuple[int, int]  # (node index, wire index)


@dataclass(frozen=True)
class Network:
    """Nodes, caps between ports, and the ordered list of open ports."""

    nodes: tuple[Tensor, ...]
    edges: tuple[tuple[Port, Port], ...]
    outputs: tuple[Port, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple((tuple(a), tuple(b)) for a, b in self.edges))
        object.__setattr__(self, "outputs", tuple(tuple(p) for p in self.outputs))
        seen = set()
        for a, b in self.edges:
            _check_pair(self.wire(a), self.wire(b))
            for p in (a, b):
                if p in seen:
                    raise ShapeMismatch(f"port {p} used twice")
                seen.add(p)
        for p in self.outputs:
            self.wire(p)
            if p in seen:
                raise ShapeMismatch(f"port {p} used twice")
            seen.add(p)
        total = sum(t.rank for t in self.nodes)
        if len(seen) != total:
            raise ShapeMismatch(f"network leaves {total - len(seen)} wires dangling")

    def wire(self, port: Port) -> Wire:
        n, w = port
        return self.nodes[n].wires[w]

    @classmethod
    def build(cls, nodes: Sequence[TensorLike], edges, outputs) -> "Network":
        """Like the constructor, but ProductTensor nodes are split into factor nodes."""
        flat: list[Tensor] = []
        where: list[list[Port]] = []
        for t in nodes:
            if isinstance(t, ProductTensor):
                base = len(flat)
                flat.extend(t.factors)
                where.append([(base + fi, wi) for fi, wi in (t.locate(k) for k in range(t.rank))])
            else:
                where.append([(len(flat), k) for k in range(t.rank)])
                flat.append(t)
        edges = [(where[a[0]][a[1]], where[b[0]][b[1]]) for a, b in edges]
        outputs = [where[n][w] for n, w in outputs]
        return cls(tuple(flat), tuple(edges), tuple(outputs))


def _output_wires(net: Network) -> tuple[Wire, ...]:
    return tuple(net.wire(p) for p in net.outputs)


def contract_network(net: Network) -> Tensor:
    """Pairwise contraction; at each step merges the pair with the smallest result."""
    bond = {}
    for b, (pa, pb) in enumerate(net.edges):
        bond[pa] = bond[pb] = ("b", b)
    for k, p in enumerate(net.outputs):
        bond[p] = ("o", k)

    live = [(t, [bond[(n, w)] for w in range(t.rank)]) for n, t in enumerate(net.nodes)]

    def trace_self(t: Tensor, labels: list):
        while True:
            for i, li in enumerate(labels):
                if li[0] == "b" and li in labels[i + 1:]:
                    j = labels.index(li, i + 1)
                    t = contract(t, i, j)
                    labels = [l for k, l in enumerate(labels) if k not in (i, j)]
                    break
            else:
                return t, labels

    live = [trace_self(t, l) for t, l in live]
    while len(live) > 1:
        best = None
        for x, y in itertools.combinations(range(len(live)), 2):
            lx, ly = live[x][1], live[y][1]
            shared = set(l for l in lx if l[0] == "b") & set(ly)
            size = math.prod(live[x][0].shape[k] for k, l in enumerate(lx) if l not in shared) * \
                math.prod(live[y][0].shape[k] for k, l in enumerate(ly) if l not in shared)
            key = (0 if shared else 1, size, x, y)
            if best is None or key < best:
                best = key
        _, _, x, y = best
        (tx, lx), (ty, ly) = live[x], live[y]
        pairs = [(i, ly.index(l)) for i, l in enumerate(lx) if l[0] == "b" and l in ly]
        merged = contract_pair(tx, ty, pairs)
        used_x = {i for i, _ in pairs}
        used_y = {j for _, j in pairs}
        labels = [l for i, l in enumerate(lx) if i not in used_x] + \
            [l for j, l in enumerate(ly) if j not in used_y]
        merged, labels = trace_self(merged, labels)
        live = [item for k, item in enumerate(live) if k not in (x, y)] + [(merged, labels)]

    if not live:
        return scalar(1.0)
    t, labels = live[0]
    order = [labels.index(("o", k)) for k in range(len(net.outputs))]
    return permute(t, order)


def brute_force_contract(net: Network) -> Tensor:
    """Sum of products over every consistent assignment of nonzero entries.

    Every bond and every open wire is an index variable; nodes are visited in
    order and each extends the partial assignment with those of its nonzero
    entries that agree on the variables already fixed.
    """
    var = {}
    for b, (pa, pb) in enumerate(net.edges):
        var[pa] = var[pb] = ("b", b)
    for k, p in enumerate(net.outputs):
        var[p] = ("o", k)

    bound: set = set()
    steps = []
    for n, t in enumerate(net.nodes):
        vs = [var[(n, w)] for w in range(t.rank)]
        old = [k for k, v in enumerate(vs) if v in bound]
        new = [k for k, v in enumerate(vs) if v not in bound]
        table = defaultdict(list)
        for idx, val in t.nonzero():
            if any(vs[a] == vs[b] and idx[a] != idx[b] for a in range(len(vs)) for b in range(a)):
                continue
            table[tuple(idx[k] for k in old)].append((tuple(idx[k] for k in new), val))
        new_vars = []
        for k in new:
            if vs[k] not in new_vars:
                new_vars.append(vs[k])
        first = {v: k for k, v in reversed(list(enumerate(vs)))}
        steps.append(([vs[k] for k in old], new_vars, [new.index(first[v]) for v in new_vars], table))
        bound.update(vs)

    out = defaultdict(float)
    out_vars = [("o", k) for k in range(len(net.outputs))]

    def walk(step: int, assign: dict, weight: float):
        if step == len(steps):
            out[tuple(assign[v] for v in out_vars)] += weight
            return
        old_vars, new_vars, pick, table = steps[step]
        for new_idx, val in table.get(tuple(assign[v] for v in old_vars), ()):
            for v, k in zip(new_vars, pick):
                assign[v] = new_idx[k]
            walk(step + 1, assign, weight * val)
        for v in new_vars:
            assign.pop(v, None)

    walk(0, {}, 1.0)
    wires = _output_wires(net)
    data = np.zeros(tuple(w.dim for w in wires))
    for idx, val in out.items():
        data[idx] += val
    return Tensor(wires, data)
