from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualdensity import density as dn
from dualdensity import tensor as tc
from dualdensity.errors import (EmptySenseList, LayoutError, NegativeProbability, NotNormalized,
                                NotPSD)
from dualdensity.tensor import Space, Tensor, Wire

from oracles import as_tensor_groups, expand_four_factor, random_mixture_groups, random_unit

N = Space("N", ("A", "M", "Z", "P"))
S = Space("S", ("bot", "top"))
seeds = st.integers(0, 2**32 - 1)


def ket(label, space=N):
    return tc.basis_vector(space, label)


def half_half():
    return dn.dual_density_from_mixtures([(1.0, [(0.5, ket("A")), (0.5, ket("M"))])])


# --- density vectors ----------------------------------------------------------

def test_density_vector_of_superposition():
    v = (ket("A") + ket("M")) * (1 / np.sqrt(2))
    rho = dn.density_vector([(1.0, v)])
    entries = rho.tensor.nonzero()
    assert [i for i, _ in entries] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert all(abs(x - 0.5) < 1e-15 for _, x in entries)
    assert rho.tensor.wires == (Wire(N), Wire(N, True))


def test_density_vector_rejects_bad_input():
    with pytest.raises(EmptySenseList):
        dn.density_vector([])
    with pytest.raises(NegativeProbability):
        dn.density_vector([(-0.1, ket("A")), (1.1, ket("M"))])
    with pytest.raises(NotNormalized):
        dn.density_vector([(0.5, ket("A"))])
    with pytest.raises(NotNormalized):
        dn.density_vector([(1.0, ket("A") * 2)])
    assert dn.density_vector([(3.0, ket("A") * 2)], normalized=False).tensor.nonzero() == [((0, 0), 12.0)]


def test_layout_checked():
    with pytest.raises(LayoutError):
        dn.DualDensity(tc.tensor_product(ket("A"), ket("A")))
    bad = Tensor((Wire(N), Wire(N, True), Wire(S), Wire(N, True)), np.zeros((4, 4, 2, 4)))
    with pytest.raises(LayoutError):
        dn.DualDensity(bad)


# --- lifting and views --------------------------------------------------------

def test_lift_pure_layout_and_entries():
    v = ket("A") + ket("Z")
    t = dn.lift_pure(v)
    assert t.wires == dn.lifted_wires(v.wires)
    assert len(t.nonzero()) == 16
    assert tc.equal_within(dn.lift_pure(v, factored=True).dense(), t, 0.0)


def test_two_site_lift_matches_einsum():
    rng = np.random.default_rng(3)
    v = Tensor((Wire(N), Wire(S)), rng.normal(size=(4, 2)))
    t = dn.lift_pure(v)
    assert t.wires == (Wire(N), Wire(N, True), Wire(N), Wire(N, True),
                       Wire(S), Wire(S, True), Wire(S), Wire(S, True))
    # copy k of v contributes the k-th wire of each site
    ref = np.einsum("ab,cd,ef,gh->acegbdfh", v.data, v.data, v.data, v.data)
    assert np.allclose(t.data, ref, atol=1e-15)


@given(st.integers(1, 6), seeds)
def test_trace_of_pure_lift_is_norm_to_fourth(dim, seed):
    rng = np.random.default_rng(seed)
    s = Space.of_dim("H", dim)
    v = Tensor((Wire(s),), random_unit(rng, dim) * rng.uniform(0.5, 2.0))
    d = dn.lift_pure_dual(v)
    n4 = float(np.linalg.norm(v.data)) ** 4
    assert abs(dn.discard1(d) - n4) <= 1e-9 * max(1.0, n4)
    assert abs(dn.discard2(d) - n4) <= 1e-9 * max(1.0, n4)
    assert dn.rank(dn.phi1(d)) == 1 and dn.rank(dn.phi2(d)) == 1


def test_views_for_one_site():
    rng = np.random.default_rng(0)
    data = rng.normal(size=(2, 2, 2, 2))
    d = dn.DualDensity(Tensor(dn.lifted_wires((Wire(S),)), data))
    m1 = dn.phi1(d).matrix.reshape(2, 2, 2, 2)
    m2 = dn.phi2(d).matrix.reshape(2, 2, 2, 2)
    assert np.array_equal(m1, data.transpose(0, 1, 3, 2))
    assert np.array_equal(m2, data.transpose(0, 3, 1, 2))


@settings(deadline=None)
@given(seeds, st.integers(1, 2))
def test_swap_exchanges_views(seed, sites):
    rng = np.random.default_rng(seed)
    base = [Wire(S)] + [Wire(Space.of_dim("X", 3), True)] * (sites - 1)
    wires = dn.lifted_wires(base)
    d = dn.DualDensity(Tensor(wires, rng.normal(size=tuple(w.dim for w in wires))))
    sw = dn.swap_sw_ne(d)
    assert np.array_equal(dn.phi1(sw).matrix, dn.phi2(d).matrix)
    assert np.array_equal(dn.phi2(sw).matrix, dn.phi1(d).matrix)
    assert tc.equal_within(dn.swap_sw_ne(sw).tensor, d.tensor, 0.0)


# --- mixtures -----------------------------------------------------------------

def test_mixture_views_match_closed_forms():
    rng = np.random.default_rng(11)
    groups = random_mixture_groups(rng, 3)
    d = dn.dual_density_from_mixtures(as_tensor_groups(groups, Space.of_dim("H", 3)))
    rhos = [sum(p * np.outer(v, v) for p, v in senses) for _, senses in groups]
    phi1 = sum(pk * np.outer(r.ravel(), r.ravel()) for (pk, _), r in zip(groups, rhos))
    phi2 = sum(pk * np.kron(r, r) for (pk, _), r in zip(groups, rhos))
    assert np.allclose(dn.phi1(d).matrix, phi1, atol=1e-12)
    assert np.allclose(dn.phi2(d).matrix, phi2, atol=1e-12)
    pd1 = sum(pk * r @ r for (pk, _), r in zip(groups, rhos))
    pd2 = sum(pk * np.trace(r) * r for (pk, _), r in zip(groups, rhos))
    assert np.allclose(dn.partial_discard1(d).matrix, pd1, atol=1e-12)
    assert np.allclose(dn.partial_discard2(d).matrix, pd2, atol=1e-12)
    assert abs(dn.discard1(d) - 1.0) < 1e-12 and abs(dn.discard2(d) - 1.0) < 1e-12


def test_four_factor_expansion_exact_on_rationals():
    half, third = Fraction(1, 2), Fraction(1, 3)
    groups = [(third, [(half, [1, 0, 0]), (half, [0, 1, 0])]),
              (1 - third, [(Fraction(1, 4), [0, 0, 1]), (Fraction(3, 4), [1, 1, 0])])]
    ref = expand_four_factor([(float(pk), [(float(p), np.array(v, dtype=float)) for p, v in s])
                              for pk, s in groups])
    # exact rational reference, entry by entry
    exact = {}
    for pk, senses in groups:
        for pi, fi in senses:
            for pj, fj in senses:
                for a in range(3):
                    for b in range(3):
                        for c in range(3):
                            for e in range(3):
                                x = pk * pi * pj * fi[a] * fi[b] * fj[c] * fj[e]
                                if x:
                                    exact[a, b, c, e] = exact.get((a, b, c, e), 0) + x
    for idx, x in exact.items():
        assert ref[idx] == float(x)
    d = dn.dual_density_from_mixtures(as_tensor_groups(
        [(float(pk), [(float(p), np.array(v, dtype=float)) for p, v in s]) for pk, s in groups],
        Space.of_dim("H", 3)), normalized=False)
    assert np.array_equal(d.tensor.data, ref)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 6))
def test_mixture_equals_four_factor_expansion(seed, dim):
    rng = np.random.default_rng(seed)
    groups = random_mixture_groups(rng, dim)
    d = dn.dual_density_from_mixtures(as_tensor_groups(groups, Space.of_dim("H", dim)))
    assert np.allclose(d.tensor.data, expand_four_factor(groups), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 6))
def test_mixtures_are_psd_and_rank_bounded(seed, dim):
    rng = np.random.default_rng(seed)
    groups = random_mixture_groups(rng, dim)
    d = dn.dual_density_from_mixtures(as_tensor_groups(groups, Space.of_dim("H", dim)))
    assert d.is_well_formed()
    assert dn.rank(dn.phi1(d)) <= len(groups)


# --- normal form --------------------------------------------------------------

def normal_form_reference(g):
    return np.einsum("acd,bce,gfe,hfd->abgh", g, g, g, g)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 3), st.integers(1, 3), st.integers(1, 4))
def test_normal_form_entries_and_gram_ranks(seed, nc, nd, h):
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(h, nc, nd))
    d = dn.dual_density_from_normal_form(g, Space.of_dim("H", h))
    assert np.allclose(d.tensor.data, normal_form_reference(g), atol=1e-12)
    assert d.is_well_formed()
    # Gram structure: phi1 is indexed by D-bond pairs, phi2 by C-bond pairs
    assert dn.rank(dn.phi1(d)) <= nd ** 2
    assert dn.rank(dn.phi2(d)) <= nc ** 2


def test_normal_form_with_trivial_bonds_is_pure():
    v = np.array([1.0, 2.0, 0.0])
    d = dn.dual_density_from_normal_form(v.reshape(3, 1, 1), Space.of_dim("H", 3))
    assert tc.equal_within(d.tensor, dn.lift_pure(Tensor((Wire(Space.of_dim("H", 3)),), v)), 1e-12)


# --- entropies ----------------------------------------------------------------

def test_two_entropies_witness():
    d = half_half()
    s1, s2 = dn.entropies(d)
    assert abs(s1) < 1e-9 and abs(s2 - 2.0) < 1e-9
    assert dn.entropies(dn.swap_sw_ne(d)) == pytest.approx((s2, s1), abs=1e-9)


def test_entropy_of_pure_lift_is_zero():
    assert dn.entropies(dn.lift_pure_dual(ket("A") + ket("M"))) == pytest.approx((0.0, 0.0), abs=1e-9)


def test_entropy_bases():
    m = np.diag([0.5, 0.5])
    assert dn.entropy(m) == pytest.approx(1.0)
    assert dn.entropy(m, base="e") == pytest.approx(np.log(2))


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(2, 5))
def test_entropy_against_matrix_log(seed, dim):
    scipy_linalg = pytest.importorskip("scipy.linalg")
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(dim, dim))
    m = a @ a.T + 1e-3 * np.eye(dim)
    m /= np.trace(m)
    ref = -np.trace(m @ scipy_linalg.logm(m)).real / np.log(2)
    assert abs(dn.entropy(m) - ref) < 1e-9


def test_purity():
    assert dn.purity(np.diag([0.5, 0.5])) == pytest.approx(0.5)
    assert dn.purity(dn.phi1(half_half())) == pytest.approx(1.0)


# --- entailment ---------------------------------------------------------------

def test_entailment_examples():
    a = np.diag([1.0, 0, 0, 0])
    city = np.diag([0.5, 0.5, 0, 0])
    assert dn.graded_entailment(a, city) == pytest.approx(0.5, abs=1e-6)
    assert dn.graded_entailment(city, city) == 1.0
    assert dn.graded_entailment(a, np.diag([0, 0, 1.0, 0])) == 0.0
    with pytest.raises(NotPSD):
        dn.graded_entailment(np.diag([1.0, -0.5]), np.eye(2))


def random_density(rng, dim, rk):
    a = rng.normal(size=(dim, rk))
    m = a @ a.T
    return m / np.trace(m)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 5))
def test_entailment_properties(seed, dim):
    rng = np.random.default_rng(seed)
    r = random_density(rng, dim, int(rng.integers(1, dim + 1)))
    s = random_density(rng, dim, int(rng.integers(1, dim + 1)))
    t = random_density(rng, dim, dim)
    assert dn.graded_entailment(r, r) == 1.0
    k_rs = dn.graded_entailment(r, s)
    k_sr = dn.graded_entailment(s, r)
    assert 0.0 <= k_rs <= 1.0
    # antisymmetry: mutual full entailment only for equal states
    if k_rs == 1.0 and k_sr == 1.0:
        assert np.allclose(r, s, atol=1e-6)
    # transitivity lower bound: k(r, t) >= k(r, s) k(s, t)
    assert dn.graded_entailment(r, t) >= k_rs * dn.graded_entailment(s, t) - 1e-6
    # a mixture always contains its parts with their weight
    w = float(rng.uniform(0.1, 0.9))
    assert dn.graded_entailment(r, w * r + (1 - w) * s) >= w - 1e-6


# --- preparation states -------------------------------------------------------

def test_preparation_sides():
    u = np.array([1.0, -2.0, 0.5])
    assert dn.preparation_sides(u, u) == (True, True)
    assert dn.preparation_sides(u, -u) == (True, True)
    assert dn.preparation_sides(u, u + [0, 0, 0.1]) == (False, False)


@given(seeds, st.integers(1, 5), st.sampled_from(["same", "neg", "random"]))
def test_lift_identifies_exactly_up_to_sign(seed, dim, kind):
    rng = np.random.default_rng(seed)
    s = Space.of_dim("H", dim)
    u = random_unit(rng, dim)
    v = {"same": u, "neg": -u, "random": random_unit(rng, dim)}[kind]
    same_lift = tc.equal_within(dn.lift_pure(Tensor((Wire(s),), u)),
                                dn.lift_pure(Tensor((Wire(s),), v)), 1e-9)
    lhs, rhs = dn.preparation_sides(u, v)
    assert dn.check_preparation_state_agreement(u, v)
    assert same_lift == lhs == rhs
