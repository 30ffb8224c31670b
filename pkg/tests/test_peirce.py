import numpy as np
import pytest
from hypothesis import given, strategies as st

from nonassoc.algebra import Algebra, principal_power_vec
from nonassoc.errors import DimensionMismatch, NotAnIdempotent, NotMedialIsospectral, NotSimpleSpectrum
from nonassoc.idempotents import enumerate_closed_form_Cn, enumerate_newton
from nonassoc.linalg import char_poly
from nonassoc.models import A3_GAMMA, build_A2, build_A3, build_Cn, build_T, perturb, sample_T_idempotents
from nonassoc.peirce import (
    are_isomorphic,
    canonical_form,
    canonical_pattern,
    cross_fusion_check,
    cyclotomic_eigenbasis,
    fusion_check,
    is_isospectral,
    peirce_decompose,
    principal_word,
    reconstruct_from_idempotents,
    spectrum_distance,
    tensor_in_basis,
    theta_projection,
    verify_weak_power_associativity,
)
from nonassoc.scalar import COMPLEX_FIELD, prime_field, root_powers


def unit(n):
    e = np.zeros(n, dtype=complex)
    e[0] = 1
    return e


@pytest.mark.parametrize("n", range(2, 7))
def test_Cn_unit_decomposition(n):
    pd = peirce_decompose(build_Cn(n), unit(n))
    assert spectrum_distance(pd.spectrum, root_powers(n)) < 1e-12
    assert pd.semisimple
    # eigenvectors are monomials, ordered by angle
    W = pd.eigenbasis / np.max(np.abs(pd.eigenbasis), axis=0)
    assert np.allclose(np.abs(W), np.eye(n))


def test_T_decomposition():
    T = build_T()
    c = np.array([1, 0, 0])
    pd = peirce_decompose(T, c)
    assert spectrum_distance(pd.spectrum, [1, -0.5, 0.5]) < 1e-12
    e = np.ones(3)
    for v, lam in [(c, 1), (e - c, -0.5), (np.cross(e, c), 0.5)]:
        assert np.allclose(T.mul(c, v), lam * v)


def test_A2_decomposition_over_both_fields():
    assert spectrum_distance(peirce_decompose(build_A2(), np.array([1, 0])).spectrum, [1, -1]) < 1e-12
    pd = peirce_decompose(build_A2(prime_field(7)), np.array([1, 0]))
    assert sorted(pd.spectrum) == [1, 6] and pd.semisimple


def test_decompose_rejects_non_idempotent():
    with pytest.raises(NotAnIdempotent):
        peirce_decompose(build_A2(), np.array([1, 1]))


@pytest.mark.parametrize("n", range(2, 7))
def test_Cn_isospectral(n):
    A = build_Cn(n)
    assert is_isospectral(A, enumerate_closed_form_Cn(n, A)) == (True, None)


def test_T_isospectral_on_samples():
    T = build_T()
    assert is_isospectral(T, sample_T_idempotents(40, seed=1))[0]


def test_perturbed_C3_not_isospectral():
    P = perturb(build_Cn(3), 0.1, seed=4)
    S = enumerate_newton(P)
    assert S.complete
    ok, witness = is_isospectral(P, S)
    assert not ok and witness is not None


@pytest.mark.parametrize("n", range(2, 7))
def test_Cn_fusion(n):
    A = build_Cn(n)
    for c in enumerate_closed_form_Cn(n, A).elements:
        assert fusion_check(A, c) < 1e-10


def test_A3_fusion_and_cross_fusion():
    A = build_A3()
    S = enumerate_newton(A)
    for c in S.elements:
        assert fusion_check(A, c) < 1e-8
    C3 = build_Cn(3)
    E = enumerate_closed_form_Cn(3, C3).elements
    assert cross_fusion_check(C3, E[0], E[3]) < 1e-8
    assert cross_fusion_check(A, S.elements[1], S.elements[1]) < 1e-8


def test_cross_fusion_spectrum_inclusion():
    A = build_A3()
    S = enumerate_newton(A).elements
    s12 = peirce_decompose(A, A.mul(S[0], S[4])).spectrum
    for s in (peirce_decompose(A, S[0]).spectrum, peirce_decompose(A, S[4]).spectrum):
        assert all(min(abs(a - b) for b in s12) < 1e-8 for a in s)


def test_fusion_needs_cyclotomic_spectrum():
    with pytest.raises(NotSimpleSpectrum):
        fusion_check(build_T(), np.array([1, 0, 0]))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_theta_on_eigenvectors(n):
    A = build_Cn(n)
    c = enumerate_closed_form_Cn(n, A).elements[2]
    W = cyclotomic_eigenbasis(A, c)
    for j in range(n):
        for k in range(n):
            theta, _ = theta_projection(A, c, k, W[:, j], eigenbasis=W)
            assert abs(theta - (n if j == k else 0)) < 1e-9


@pytest.mark.parametrize("n", [2, 3, 4])
@given(seed=st.integers(0, 10**6))
def test_reconstruction_from_idempotents(n, seed):
    A = build_Cn(n)
    rng = np.random.default_rng(seed)
    y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    rec = reconstruct_from_idempotents(A, enumerate_closed_form_Cn(n, A), y)
    assert np.linalg.norm(rec - y) < 1e-8 * np.linalg.norm(y)


def test_canonical_C2():
    cf = canonical_form(build_Cn(2), c=unit(2))
    assert abs(cf.mu - 1) < 1e-12
    assert np.allclose(cf.tensor[1, 1], [1, 0])


@pytest.mark.parametrize("n", range(2, 7))
def test_canonical_mu_for_Cn_unit(n):
    cf = canonical_form(build_Cn(n), c=unit(n))
    expected = root_powers(n)[((n - 1) * (n + 2) // 2) % n]
    assert abs(cf.mu - expected) < 1e-10
    assert cf.residual < 1e-9
    assert np.allclose(principal_power_vec(build_Cn(n), cf.w1, n), cf.idempotent, atol=1e-10)


@pytest.mark.parametrize("n", range(2, 6))
def test_canonical_tensor_independent_of_base_idempotent(n):
    A = build_Cn(n)
    ref = canonical_pattern(n)
    for c in enumerate_closed_form_Cn(n, A).elements:
        assert np.max(np.abs(canonical_form(A, c=c).tensor - ref)) < 1e-9


def test_canonical_form_root_choice_irrelevant():
    A = build_Cn(4)
    cf = canonical_form(A, c=unit(4))
    lam = root_powers(4)[1]
    B = np.column_stack([cf.idempotent] + [lam**m * cf.basis[:, m] for m in range(1, 4)])
    assert np.allclose(tensor_in_basis(A, B), cf.tensor)


def test_canonical_form_is_idempotent():
    cf = canonical_form(build_A3())
    C = Algebra(COMPLEX_FIELD, cf.tensor)
    again = canonical_form(C, c=unit(3))
    assert np.allclose(again.tensor, cf.tensor, atol=1e-9)


def test_canonical_form_rejects_T():
    with pytest.raises(NotMedialIsospectral):
        canonical_form(build_T(), c=np.array([1, 0, 0]))


def test_isomorphisms():
    for A, B in [(build_A2(), build_Cn(2)), (build_A3(), build_Cn(3)), (build_A3(np.conj(A3_GAMMA)), build_A3())]:
        M = are_isomorphic(A, B)
        assert M is not None
        for i in range(A.dim):
            for j in range(A.dim):
                assert np.allclose(M @ A.mul(A.basis(i), A.basis(j)), B.mul(M[:, i], M[:, j]), atol=1e-8)
    with pytest.raises(DimensionMismatch):
        are_isomorphic(build_Cn(3), build_Cn(4))


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_weak_power_associativity(n):
    A = build_Cn(n)
    cf = canonical_form(A, c=unit(n))
    eps = root_powers(n)
    b, _ = verify_weak_power_associativity(A, (("w", "w"), ("w", "w")), cf)
    assert abs(b - eps[-1 % n]) < 1e-9
    b, s = verify_weak_power_associativity(A, ("w", ("w", "w")), cf)
    assert abs(b - 1) < 1e-9 and s == 0
    for k in range(1, n):
        for m in range(1, n):
            b, _ = verify_weak_power_associativity(A, (principal_word(k), principal_word(m)), cf)
            assert abs(b - eps[(-(k - 1) * (m - 1)) % n]) < 1e-9


@pytest.mark.parametrize("A", [build_A3(), build_Cn(4), build_A2()], ids=["A3", "C4", "A2"])
def test_idempotents_share_char_poly_and_Lc_power(A):
    S = enumerate_newton(A)
    ref = char_poly(A.L(S.elements[0]), COMPLEX_FIELD)
    for c in S.elements:
        assert np.allclose(char_poly(A.L(c), COMPLEX_FIELD), ref, atol=1e-8)
        assert np.allclose(np.linalg.matrix_power(A.L(c), A.dim), np.eye(A.dim), atol=1e-8)
