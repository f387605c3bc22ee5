"""Density vectors, dual density operators and their two operator views.

Layouts
-------
A density vector over a k-wire space ``H = w1 ⊗ ... ⊗ wk`` is
``|v> ⊗ conj|v>``, whose wires are ``[w1..wk, wk*..w1*]`` because
conjugation reverses order.

Dual densities are stored *slot-wise*: every base wire ``w`` becomes four
adjacent wires ``[w, w*, w, w*]`` (slots 0-3).  The doubled-doubled
construction naturally produces the *block* layout
``[slot0 (w1..wk), slot1 (wk*..w1*), slot2 (w1..wk), slot3 (wk*..w1*)]``;
:func:`block_to_slotwise` converts between the two.

Views (k = 1, wires h1 h2 h3 h4):

* ``phi1``: rows (h1, h2), columns (h4, h3).  Rows are the first density
  vector, columns the conjugate (hence reversed) second one.
* ``phi2``: swap the 2nd and 4th wire first, then read as above:
  rows (h1, h4), columns (h2, h3).

With this orientation both views of a normal-form state are Gram matrices:
``phi1`` is indexed through the two D-wires and ``phi2`` through the two
C-wires (see :func:`dual_density_from_normal_form`).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import tensor as tc
from .errors import (EmptySenseList, LayoutError, NegativeProbability, NonSymmetric,
                     NotNormalized, NotPSD, ZeroTrace)
from .tensor import Space, Tensor, TensorLike, Wire

EIG_CLIP = 1e-12
PSD_TOL = 1e-10


class Provenance(enum.Enum):
    FROM_MIXTURES = "mixtures"
    FROM_NORMAL_FORM = "normal_form"
    PURE = "pure"
    RAW = "raw"


# --- layout helpers -----------------------------------------------------------

def block_to_slotwise(k: int) -> tuple[int, ...]:
    """Permutation taking a block-layout tensor on ``4k`` wires to slot-wise layout."""
    perm = []
    for p in range(k):
        r = k - 1 - p
        perm += [p, k + r, 2 * k + p, 3 * k + r]
    return tuple(perm)


def _slot(p: int, t: int) -> int:
    return 4 * p + t


def check_lifted_layout(wires: Sequence[Wire]) -> int:
    """Number of base wires of a slot-wise lifted layout; raises LayoutError otherwise."""
    if len(wires) % 4:
        raise LayoutError(f"{len(wires)} wires is not a multiple of 4")
    for p in range(len(wires) // 4):
        w = wires[4 * p]
        expect = (w, w.conj(), w, w.conj())
        if tuple(wires[4 * p:4 * p + 4]) != expect:
            raise LayoutError(
                f"wires {4 * p}-{4 * p + 3} are [{tc.fmt_wires(wires[4 * p:4 * p + 4])}], "
                f"expected [{tc.fmt_wires(expect)}]")
    return len(wires) // 4


def lifted_wires(base: Sequence[Wire]) -> tuple[Wire, ...]:
    return tuple(x for w in base for x in (w, w.conj(), w, w.conj()))


# --- operators ----------------------------------------------------------------

@dataclass(frozen=True)
class Operator:
    """A tensor read as a matrix: the first ``n_rows`` wires index rows."""

    tensor: Tensor
    n_rows: int

    def __post_init__(self):
        rows = self.tensor.shape[:self.n_rows]
        cols = self.tensor.shape[self.n_rows:]
        if rows != cols:
            raise LayoutError(f"row dims {rows} differ from column dims {cols}")

    @property
    def dim(self) -> int:
        return int(np.prod(self.tensor.shape[:self.n_rows], dtype=int))

    @property
    def matrix(self) -> np.ndarray:
        return self.tensor.data.reshape(self.dim, self.dim)

    @classmethod
    def from_matrix(cls, m) -> "Operator":
        m = np.asarray(m, dtype=float)
        s = Space.of_dim("X", m.shape[0])
        return cls(Tensor((Wire(s), Wire(s, True)), m), 1)


def _matrix(op) -> np.ndarray:
    if isinstance(op, Operator):
        return op.matrix
    if isinstance(op, DensityVector):
        return op.matrix
    m = np.asarray(op, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise LayoutError(f"expected a square matrix, got shape {m.shape}")
    return m


def _symmetric(m: np.ndarray, tol: float = tc.DEFAULT_TOL) -> np.ndarray:
    scale = max(1.0, float(np.max(np.abs(m), initial=0.0)))
    if np.max(np.abs(m - m.T), initial=0.0) > tol * scale:
        raise NonSymmetric("operator is not symmetric")
    return (m + m.T) / 2


def eigenvalues(op) -> np.ndarray:
    return np.linalg.eigvalsh(_symmetric(_matrix(op)))


def trace(op) -> float:
    return float(np.trace(_matrix(op)))


def normalize(op):
    m = _matrix(op)
    tr = float(np.trace(m))
    if abs(tr) < 1e-300:
        raise ZeroTrace("cannot normalise an operator with zero trace")
    if isinstance(op, Operator):
        return Operator(op.tensor * (1.0 / tr), op.n_rows)
    return m / tr


def is_psd(op, tol: float = PSD_TOL) -> bool:
    return bool(eigenvalues(op).min() >= -tol)


def rank(op, cutoff: float = 1e-9) -> int:
    return int(np.sum(eigenvalues(op) > cutoff))


def entropy(op, base: float = 2, clip: float = EIG_CLIP) -> float:
    """Von Neumann entropy of the trace-normalised operator."""
    lam = eigenvalues(normalize(_matrix(op)))
    lam = lam[lam > clip]
    log = np.log2 if base == 2 else (np.log if base in ("e", np.e) else (lambda x: np.log(x) / np.log(base)))
    return float(max(0.0, -np.sum(lam * log(lam))))


def purity(op) -> float:
    lam = eigenvalues(normalize(_matrix(op)))
    return float(np.sum(lam ** 2))


def graded_entailment(rho, sigma, tol: float = PSD_TOL, iterations: int = 60) -> float:
    """Largest k in [0, 1] with ``sigma - k rho`` positive semidefinite.

    Both operators are trace-normalised first.  k = 1 means rho ⊑ sigma.
    """
    r = _symmetric(normalize(_matrix(rho)))
    s = _symmetric(normalize(_matrix(sigma)))
    if r.shape != s.shape:
        raise LayoutError(f"operators have shapes {r.shape} and {s.shape}")
    for name, m in (("rho", r), ("sigma", s)):
        if np.linalg.eigvalsh(m).min() < -tol:
            raise NotPSD(f"{name} is not positive semidefinite")

    def ok(k):
        return np.linalg.eigvalsh(s - k * r).min() >= -tol

    if ok(1.0):
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(iterations):
        mid = (lo + hi) / 2
        if ok(mid):
            lo = mid
        else:
            hi = mid
    # below the PSD tolerance k is indistinguishable from 0
    return 0.0 if lo <= tol else lo


# --- density vectors ----------------------------------------------------------

@dataclass(frozen=True)
class DensityVector:
    tensor: Tensor

    @property
    def n_sites(self) -> int:
        return self.tensor.rank // 2

    @property
    def matrix(self) -> np.ndarray:
        k = self.n_sites
        t = tc.permute(self.tensor, tuple(range(k)) + tuple(range(2 * k - 1, k - 1, -1)))
        return Operator(t, k).matrix


def _check_senses(senses, normalized: bool, tol: float):
    if not senses:
        raise EmptySenseList("sense list is empty")
    wires = None
    total = 0.0
    for prob, v in senses:
        if prob < 0:
            raise NegativeProbability(f"negative probability {prob}")
        total += prob
        if wires is None:
            wires = v.wires
        elif v.wires != wires:
            raise tc.ShapeMismatch("sense vectors live on different wires")
        if normalized and abs(float(np.linalg.norm(v.data)) - 1.0) > tol:
            raise NotNormalized(f"sense vector has norm {np.linalg.norm(v.data):.6g}")
    if normalized and abs(total - 1.0) > tol:
        raise NotNormalized(f"probabilities sum to {total:.6g}")


def density_vector(senses: Sequence[tuple[float, Tensor]], normalized: bool = True,
                   tol: float = tc.DEFAULT_TOL) -> DensityVector:
    """Σ_i p_i |φ_i> ⊗ conj|φ_i>, given ``senses`` as (p_i, φ_i) pairs.

    With ``normalized=False`` the p_i are free nonnegative weights and the
    vectors need not be unit length.
    """
    senses = list(senses)
    _check_senses(senses, normalized, tol)
    out = None
    for prob, v in senses:
        term = tc.tensor_product(v, tc.conjugate(v)) * prob
        out = term if out is None else out + term
    return DensityVector(out)


@dataclass(frozen=True)
class DualDensity:
    tensor: Tensor
    provenance: Provenance = Provenance.RAW
    source: Any = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        check_lifted_layout(self.tensor.wires)

    @property
    def n_sites(self) -> int:
        return self.tensor.rank // 4

    def is_well_formed(self, tol: float = PSD_TOL) -> bool:
        try:
            return is_psd(phi1(self), tol) and is_psd(phi2(self), tol)
        except NonSymmetric:
            return False


def as_dual(d) -> DualDensity:
    if isinstance(d, DualDensity):
        return d
    return DualDensity(d.dense())


def dual_density_from_density_vector(rho: DensityVector, weight: float = 1.0,
                                     provenance: Provenance = Provenance.FROM_MIXTURES) -> DualDensity:
    t = tc.tensor_product(rho.tensor, tc.conjugate(rho.tensor)) * weight
    return DualDensity(tc.permute(t, block_to_slotwise(rho.n_sites)), provenance)


def dual_density_from_mixtures(groups: Sequence[tuple[float, Sequence[tuple[float, Tensor]]]],
                               normalized: bool = True, tol: float = tc.DEFAULT_TOL) -> DualDensity:
    """Σ_k p'_k |ρ_k> ⊗ conj|ρ_k>, each ρ_k the density vector of group k.

    ``groups`` is a list of ``(p'_k, [(p_ik, φ_ik), ...])``.
    """
    groups = list(groups)
    if not groups:
        raise EmptySenseList("no sense groups")
    total = 0.0
    out = None
    for weight, senses in groups:
        if weight < 0:
            raise NegativeProbability(f"negative group probability {weight}")
        total += weight
        term = dual_density_from_density_vector(density_vector(senses, normalized, tol), weight)
        out = term.tensor if out is None else out + term.tensor
    if normalized and abs(total - 1.0) > tol:
        raise NotNormalized(f"group probabilities sum to {total:.6g}")
    return DualDensity(out, Provenance.FROM_MIXTURES, groups)


def dual_density_from_normal_form(box: np.ndarray, space: Space) -> DualDensity:
    """Doubled-doubled state of a pure box ``g: I -> H ⊗ C ⊗ D``.

    ``box`` has shape ``(dim H, |C|, |D|)``.  The first doubling caps the C
    wire of ``g`` against its conjugate, the second caps the (doubled) D
    wire of the result against its conjugate, leaving ``[H, H*, H, H*]``.
    Entry-wise the result is Σ g[h1,c,d] g[h2,c,e] g[h3,f,e] g[h4,f,d].
    """
    box = np.asarray(box, dtype=float)
    h, nc, nd = box.shape
    C, D = Space.of_dim("C", nc), Space.of_dim("D", nd)
    g = Tensor((Wire(space), Wire(C), Wire(D)), box)
    # [H C D] ⊗ [D* C* H*], cap C
    f = tc.contract_pair(g, tc.conjugate(g), [(1, 1)])           # [H D D* H*]
    # [H D D* H*] ⊗ [H D D* H*], cap D with D* crosswise
    phi = tc.contract_pair(f, tc.conjugate(f), [(1, 2), (2, 1)])  # [H H* H H*]
    return DualDensity(phi, Provenance.FROM_NORMAL_FORM, box)


def lift_pure(v: TensorLike, factored: bool = False) -> TensorLike:
    """``v ⊗ conj v ⊗ v ⊗ conj v`` rearranged slot-wise.

    With ``factored=True`` the four copies are kept as a ProductTensor.
    """
    if isinstance(v, tc.ProductTensor):
        v = v.dense()
    c = tc.conjugate(v)
    perm = block_to_slotwise(v.rank)
    if factored:
        return tc.ProductTensor((v, c, v, c), perm)
    t = tc.tensor_product(tc.tensor_product(v, c), tc.tensor_product(v, c))
    return tc.permute(t, perm)


def lift_pure_dual(v: Tensor) -> DualDensity:
    return DualDensity(lift_pure(v), Provenance.PURE, v)


# --- the two views ------------------------------------------------------------

def _view(d: DualDensity, rows: list[int], cols: list[int]) -> Operator:
    return Operator(tc.permute(d.tensor, rows + cols), len(rows))


def phi1(d) -> Operator:
    d = as_dual(d)
    k = d.n_sites
    rows = [_slot(p, 0) for p in range(k)] + [_slot(p, 1) for p in reversed(range(k))]
    cols = [_slot(p, 3) for p in range(k)] + [_slot(p, 2) for p in reversed(range(k))]
    return _view(d, rows, cols)


def phi2(d) -> Operator:
    d = as_dual(d)
    k = d.n_sites
    rows = [_slot(p, 0) for p in range(k)] + [_slot(p, 3) for p in reversed(range(k))]
    cols = [_slot(p, 1) for p in range(k)] + [_slot(p, 2) for p in reversed(range(k))]
    return _view(d, rows, cols)


def swap_sw_ne(d) -> DualDensity:
    """Exchange slots 1 and 3 at every site; ``phi1(swap_sw_ne(d)) == phi2(d)``."""
    d = as_dual(d)
    perm = []
    for p in range(d.n_sites):
        perm += [_slot(p, 0), _slot(p, 3), _slot(p, 2), _slot(p, 1)]
    return DualDensity(tc.permute(d.tensor, perm), d.provenance, d.source)


def entropies(d, base: float = 2) -> tuple[float, float]:
    return entropy(phi1(d), base), entropy(phi2(d), base)


# --- discarding ---------------------------------------------------------------

def discard1(d) -> float:
    return trace(phi1(d))


def discard2(d) -> float:
    return trace(phi2(d))


def _partial(d: DualDensity, traced: int, kept_rows: int, kept_cols: int) -> Operator:
    k = d.n_sites
    t = d.tensor
    labels = list(range(t.rank))
    for p in range(k):
        i, j = labels.index(_slot(p, traced)), labels.index(_slot(p, 2))
        t = tc.contract(t, i, j)
        labels = [l for n, l in enumerate(labels) if n not in (i, j)]
    order = [labels.index(_slot(p, kept_rows)) for p in range(k)] + \
        [labels.index(_slot(p, kept_cols)) for p in range(k)]
    return Operator(tc.permute(t, order), k)


def partial_discard1(d) -> Operator:
    """Trace out the second factor of the phi1 view (for mixtures: Σ p'_k ρ_k²)."""
    return _partial(as_dual(d), traced=1, kept_rows=0, kept_cols=3)


def partial_discard2(d) -> Operator:
    """Trace out the second factor of the phi2 view (for mixtures: Σ p'_k tr(ρ_k) ρ_k)."""
    return _partial(as_dual(d), traced=3, kept_rows=0, kept_cols=1)


def reduced_operator(d) -> Operator:
    """Density operator on H that a dual density entails; used for entailment."""
    return partial_discard2(d)


def preparation_sides(u, v, tol: float = tc.DEFAULT_TOL) -> tuple[bool, bool]:
    """(u u^T ≈ v v^T, u ≈ ±v) for two real vectors."""
    u = np.ravel(u.data if isinstance(u, Tensor) else u).astype(float)
    v = np.ravel(v.data if isinstance(v, Tensor) else v).astype(float)
    lhs = np.max(np.abs(np.outer(u, u) - np.outer(v, v)), initial=0.0) <= tol
    rhs = min(np.max(np.abs(u - v), initial=0.0), np.max(np.abs(u + v), initial=0.0)) <= tol
    return bool(lhs), bool(rhs)


def check_preparation_state_agreement(u, v, tol: float = tc.DEFAULT_TOL) -> bool:
    lhs, rhs = preparation_sides(u, v, tol)
    return lhs == rhs
