import numpy as np
import pytest
from hypothesis import given, strategies as st

from nonassoc.algebra import Algebra, kernel, quotient
from nonassoc.errors import AssociativityFailed, NotIsospectral, SingularLc
from nonassoc.idempotents import enumerate_auto, enumerate_closed_form_Cn, enumerate_newton
from nonassoc.medial import (
    associativity_residual,
    conjugation_check,
    cyclotomic_norm,
    delta_three_way,
    det_homomorphism_check,
    determinant_polynomial,
    endomorphism_check,
    generic_determinant,
    idempotent_closure_residual,
    isotope_eigenbasis,
    is_medial_basis,
    kaplansky_isotope,
    squared_identity_check,
    squared_identity_verdict,
    sylvester_resultant,
    verify_Bn,
    verify_Lxn_identity,
    zero_eigenspace_ideal_check,
)
from nonassoc.models import (
    build_A2,
    build_A3,
    build_Cn,
    build_T,
    direct_product,
    field_algebra,
    perturb,
    random_symmetric,
    twisted_double,
    twisted_power,
)
from nonassoc.scalar import COMPLEX_FIELD, prime_field, root_powers


def unit(n):
    e = np.zeros(n, dtype=complex)
    e[0] = 1
    return e


MEDIAL_MODELS = {
    "A2": build_A2(),
    "A3": build_A3(),
    **{f"C{n}": build_Cn(n) for n in range(2, 7)},
    "A2xA2_-1": twisted_double(build_A2(), -1),
    "C2^3_eps": twisted_power(build_Cn(2), 3, root_powers(3)[1]),
    "A2xF": direct_product(build_A2(), field_algebra()),
    "A2(F7)": build_A2(prime_field(7)),
}


@pytest.mark.parametrize("name", MEDIAL_MODELS)
def test_models_are_medial(name):
    r = is_medial_basis(MEDIAL_MODELS[name])
    assert r.verdict and r.basis_quadruple_residual < 1e-10
    assert squared_identity_verdict(r.squared_identity_residual)


def test_A2_residual_exactly_zero():
    assert is_medial_basis(build_A2()).basis_quadruple_residual == 0.0


def test_squared_identity_examples():
    assert squared_identity_check(random_symmetric(3, 42)) > 0.01
    assert squared_identity_check(Algebra(COMPLEX_FIELD, np.zeros((3, 3, 3)))) == 0.0


@given(st.integers(0, 10**6))
def test_verdicts_agree_on_random_tensors(seed):
    r = is_medial_basis(random_symmetric(3, seed))
    assert r.verdict == squared_identity_verdict(r.squared_identity_residual)


def test_T_not_medial():
    r = is_medial_basis(build_T())
    assert not r.verdict and abs(r.basis_quadruple_residual - 0.75) < 1e-12
    assert not squared_identity_verdict(r.squared_identity_residual)


def test_endomorphism():
    for n in range(2, 6):
        assert endomorphism_check(build_Cn(n), unit(n)) < 1e-10
    A3 = build_A3()
    assert max(endomorphism_check(A3, c) for c in enumerate_newton(A3).elements) < 1e-9
    P = perturb(build_Cn(3), 0.1, seed=4)
    assert max(endomorphism_check(P, c) for c in enumerate_newton(P).elements) > 1e-9


def test_conjugation():
    A = build_A3()
    E = enumerate_newton(A).elements
    assert conjugation_check(A, E[0], E[0]) < 1e-12
    assert conjugation_check(A, E[0], E[5]) < 1e-9
    L1, L2 = A.L(E[0]), A.L(E[5])
    assert np.allclose(A.L(A.mul(E[0], E[5])), L1 @ L2 @ np.linalg.inv(L1))


@pytest.mark.parametrize("n", range(2, 7))
def test_isotope_of_Cn_is_group_ring(n):
    iso = kaplansky_isotope(build_Cn(n), unit(n))
    ring = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            ring[i, j, (i + j) % n] = 1
    assert np.max(np.abs(iso.gamma - ring)) < 1e-12


def invertible(A, c):
    if A.field.is_prime:
        from nonassoc.linalg import det
        return det(A.L(c), A.field) != 0
    return abs(np.linalg.det(A.L(c))) > 1e-9


@pytest.mark.parametrize("name", MEDIAL_MODELS)
def test_isotopes_unital_associative_medial(name):
    A = MEDIAL_MODELS[name]
    inv = [c for c in enumerate_auto(A).elements if invertible(A, c)]
    assert inv
    for c in inv:
        iso = kaplansky_isotope(A, c)
        assert iso.meta["associativity_residual"] < 1e-10 and iso.meta["unit_residual"] < 1e-10
        assert associativity_residual(iso) < 1e-10
        assert is_medial_basis(iso).verdict


def test_isotope_errors():
    P = direct_product(build_A2(), field_algebra())
    with pytest.raises(SingularLc):
        kaplansky_isotope(P, np.array([0, 0, 1]))
    Q = perturb(build_Cn(3), 0.1, seed=4)
    with pytest.raises(AssociativityFailed):
        kaplansky_isotope(Q, enumerate_newton(Q).elements[0])


def test_A2_determinant_polynomial():
    poly = determinant_polynomial(build_A2(), np.array([1, 0]))
    expected = {(2, 0): 1, (1, 1): -1, (0, 2): 1}
    assert set(poly) == set(expected)
    for k, v in expected.items():
        assert abs(poly[k] - v) < 1e-10


@pytest.mark.parametrize("A", [build_A2(), build_A3(), build_Cn(3), build_Cn(4)], ids=["A2", "A3", "C3", "C4"])
def test_det_homomorphism(A):
    S = enumerate_auto(A).elements
    assert det_homomorphism_check(A, S[0]) < 1e-8
    for c in S:
        assert abs(np.linalg.det(A.L(c)) / np.linalg.det(A.L(S[0])) - 1) < 1e-9


def test_det_homomorphism_prime():
    A = build_A2(prime_field(7))
    assert det_homomorphism_check(A, np.array([1, 0])) == 0.0


def test_det_homomorphism_fails_off_medial():
    Q = perturb(build_Cn(3), 0.1, seed=4)
    assert det_homomorphism_check(Q, enumerate_newton(Q).elements[0]) > 1e-3


@given(st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False), min_size=1, max_size=6),
       st.integers(2, 6))
def test_delta_three_way(p, n):
    p = p[:n]
    d, res, circ = delta_three_way(p, n)
    scale = max(1.0, abs(d))
    assert abs(d - res) < 1e-8 * scale and abs(d - circ) < 1e-8 * scale


def test_resultant_orientation():
    # Res(z^2 - 1, z - 2) = (1 - 2)(-1 - 2) = 3
    assert abs(sylvester_resultant([-1, 0, 1], [-2, 1]) - 3) < 1e-12


@pytest.mark.parametrize("n", range(2, 6))
@given(seed=st.integers(0, 10**6))
def test_generic_determinant_is_cyclotomic_norm(n, seed):
    A = build_Cn(n)
    rng = np.random.default_rng(seed)
    p = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    d = generic_determinant(A, unit(n), p)
    assert abs(d - cyclotomic_norm(p, n)) < 1e-10 * max(1, abs(d))


def test_generic_determinant_examples():
    A = build_A3()
    c = enumerate_newton(A).elements[2]
    assert abs(generic_determinant(A, c, c) - 1) < 1e-12
    assert generic_determinant(A, c, np.zeros(3)) == 0
    with pytest.raises(NotIsospectral):
        isotope_eigenbasis(build_T(), np.array([1, 0, 0]))


@pytest.mark.parametrize("n", range(2, 6))
def test_Lxn_identity_Cn(n):
    A = build_Cn(n)
    assert verify_Lxn_identity(A, unit(n)) < 1e-8
    c = enumerate_closed_form_Cn(n, A).elements[-1]
    assert np.allclose(np.linalg.matrix_power(A.L(c), n), np.eye(n))


@pytest.mark.parametrize("n", range(2, 6))
def test_Bn_Cn(n):
    r = verify_Bn(build_Cn(n), unit(n))
    assert r.power_residual < 1e-8 and r.multiplicativity_residual < 1e-8


def test_B2_matches_A2_formula():
    A = build_A2()
    c = np.array([1, 0])
    rng = np.random.default_rng(3)
    for _ in range(20):
        x = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        b = generic_determinant(A, c, x)
        assert abs(b - (x[0] ** 2 - x[0] * x[1] + x[1] ** 2)) < 1e-10 * max(1, abs(b))
        x3 = A.mul(x, A.mul(x, x))
        assert np.allclose(x3, b * x)


def test_B3_A3():
    r = verify_Bn(build_A3())
    assert r.power_residual < 1e-8 and r.multiplicativity_residual < 1e-8


def test_zero_eigenspace_ideal():
    A3 = build_A3()
    assert zero_eigenspace_ideal_check(A3, enumerate_newton(A3).elements[0]) == (True, 0.0)
    P = direct_product(build_A2(), field_algebra())
    c = np.array([0, 0, 1.0])
    ok, _ = zero_eigenspace_ideal_check(P, c)
    assert ok
    K = kernel(P.L(c))
    Q, proj = quotient(P, list(K.T))
    cbar = proj @ c
    assert kernel(Q.L(cbar)).shape[1] == 0


@pytest.mark.parametrize("name", MEDIAL_MODELS)
def test_idempotent_products_are_idempotent(name):
    A = MEDIAL_MODELS[name]
    assert idempotent_closure_residual(A, enumerate_auto(A).elements) < 1e-9
