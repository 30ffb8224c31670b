import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nonassoc.errors import EvenOrder, IncompleteSet, NotIMCQuasigroup
from nonassoc.idempotents import enumerate_closed_form_Cn, enumerate_newton
from nonassoc.medial import is_medial_basis
from nonassoc.models import build_A2, build_A3, build_Cn, medial_extension, reference_labels
from nonassoc.quasigroup import (
    QuasigroupTable,
    boxplus_group,
    build_ZN_quasigroup,
    circ_order,
    find_generator,
    find_relabel_permutation,
    half_rule_holds,
    idm_table,
    is_imc,
    is_latin,
    is_medial_table,
    isotopy_to_ZN,
    medial_violations,
    omega,
    orbits,
    p_set,
    period_set,
    relabel,
)

# multiplication of c_1..c_7 in A3, 1-indexed
TABLE_LEFT = np.array([
    [1, 5, 7, 3, 6, 2, 4],
    [5, 2, 6, 1, 4, 7, 3],
    [7, 6, 3, 2, 1, 4, 5],
    [3, 1, 2, 4, 7, 5, 6],
    [6, 4, 1, 7, 5, 3, 2],
    [2, 7, 4, 5, 3, 6, 1],
    [4, 3, 5, 6, 2, 1, 7],
]) - 1
TABLE_RIGHT = np.array([
    [1, 5, 2, 6, 3, 7, 4],
    [5, 2, 6, 3, 7, 4, 1],
    [2, 6, 3, 7, 4, 1, 5],
    [6, 3, 7, 4, 1, 5, 2],
    [3, 7, 4, 1, 5, 2, 6],
    [7, 4, 1, 5, 2, 6, 3],
    [4, 1, 5, 2, 6, 3, 7],
])
FANO = np.array([[0, 2, 1, 4, 3, 6, 5], [2, 1, 0, 5, 6, 3, 4], [1, 0, 2, 6, 5, 4, 3], [4, 5, 6, 3, 0, 1, 2],
                 [3, 6, 5, 0, 4, 2, 1], [6, 3, 4, 1, 2, 5, 0], [5, 4, 3, 2, 1, 0, 6]])


def in_reference_labels(A, S):
    T = idm_table(A, S).table
    order = [S.index_of(v) for v in reference_labels(A)]
    inv = {o: i for i, o in enumerate(order)}
    m = len(order)
    return np.array([[inv[T[order[i], order[j]]] for j in range(m)] for i in range(m)])


def test_A3_table_matches_reference():
    A = build_A3()
    assert np.array_equal(in_reference_labels(A, enumerate_newton(A)), TABLE_LEFT)


def test_A2_table_pattern():
    A = build_A2()
    t = in_reference_labels(A, enumerate_newton(A))
    for i, j in itertools.permutations(range(3), 2):
        assert t[i, j] == 3 - i - j


def test_C2_table_matches_A2_pattern():
    A = build_Cn(2)
    t = idm_table(A, enumerate_closed_form_Cn(2, A)).table
    for i, j in itertools.permutations(range(3), 2):
        assert t[i, j] == 3 - i - j


def test_idm_table_needs_complete_set():
    A = build_A3()
    S = enumerate_newton(A)
    S.complete = False
    with pytest.raises(IncompleteSet):
        idm_table(A, S)


def test_table_invariants_enforced():
    with pytest.raises(ValueError):
        QuasigroupTable(np.array([[0, 1], [0, 1]]))


def test_latin():
    assert is_latin(TABLE_LEFT)
    assert is_latin(build_ZN_quasigroup(7))
    bad = TABLE_LEFT.copy()
    bad[0, 1] = bad[0, 2]
    assert not is_latin(bad)


def test_medial_tables():
    assert is_medial_table(TABLE_LEFT)
    assert not is_medial_table(FANO)
    swapped = TABLE_LEFT.copy()
    swapped[0, 1], swapped[0, 2] = swapped[0, 2], swapped[0, 1]
    swapped[1, 0], swapped[2, 0] = swapped[0, 1], swapped[0, 2]
    assert medial_violations(swapped) > 0
    assert not is_medial_table(swapped)


def test_unordered_quadruple_count():
    # with commutativity the law reduces to pairs of distinct unordered pairs
    pairs = list(itertools.combinations(range(7), 2))
    assert len(pairs) * (len(pairs) - 1) // 2 == 210


@pytest.mark.parametrize("N", range(3, 33, 2))
def test_ZN_model_is_imc(N):
    Q = build_ZN_quasigroup(N)
    assert is_latin(Q) and is_medial_table(Q) and is_imc(Q)


def test_ZN_large_order_uses_certificate():
    assert is_medial_table(build_ZN_quasigroup(127), samples=10**4)


def test_ZN_examples():
    assert build_ZN_quasigroup(7).table[1, 2] == 5
    assert build_ZN_quasigroup(15).table[1, 2] == 9
    assert build_ZN_quasigroup(1).table.tolist() == [[0]]
    with pytest.raises(EvenOrder):
        build_ZN_quasigroup(8)


def test_boxplus_group_basics():
    A = build_Cn(2)
    G = boxplus_group(A, enumerate_closed_form_Cn(2, A), 0)
    assert np.array_equal(G[0], np.arange(3))
    assert find_generator(G, 0) is not None
    A3 = build_Cn(3)
    G3 = boxplus_group(A3, enumerate_closed_form_Cn(3, A3), 0)
    r = np.arange(7)
    assert np.array_equal(G3[G3[:, :, None], r[None, None, :]], G3[r[:, None, None], G3[None, :, :]])


def test_find_generator_klein_none():
    klein = np.array([[a ^ b for b in range(4)] for a in range(4)])
    assert find_generator(klein, 0) is None
    z3 = np.array([[(a + b) % 3 for b in range(3)] for a in range(3)])
    assert find_generator(z3, 0) in (1, 2)


@pytest.mark.parametrize("n", range(2, 6))
def test_Cn_groups_cyclic_and_relabelled(n):
    A = build_Cn(n)
    S = enumerate_closed_form_Cn(n, A)
    G = boxplus_group(A, S, 0)
    assert find_generator(G, 0) is not None
    r = isotopy_to_ZN(A, S)
    assert r.verified and r.N == 2**n - 1 and sorted(r.phi) == list(range(r.N))


@pytest.mark.parametrize("A", [build_A2(), build_A3()], ids=["A2", "A3"])
def test_isotopy_A2_A3(A):
    r = isotopy_to_ZN(A, enumerate_newton(A))
    assert r.verified


def test_relabel_reference_table():
    phi = find_relabel_permutation(TABLE_LEFT)
    assert phi is not None and half_rule_holds(TABLE_LEFT, phi, 7)
    rt = relabel(TABLE_LEFT, phi)
    assert np.array_equal(rt, build_ZN_quasigroup(7).table)
    # in the 1..7 display with 7 standing for 0
    shown = np.where(rt == 0, 7, rt)[np.ix_(np.roll(np.arange(7), -1), np.roll(np.arange(7), -1))]
    assert np.array_equal(shown, TABLE_RIGHT)


def brute_relabel_exists(t):
    N = t.shape[0]
    h = (N + 1) // 2
    return any(half_rule_holds(t, list(p), N) for p in itertools.permutations(range(N)))


@pytest.mark.parametrize("table", [TABLE_LEFT, FANO], ids=["table1", "fano"])
def test_relabel_agrees_with_brute_force(table):
    assert (find_relabel_permutation(table) is not None) == brute_relabel_exists(table)


def test_medial_extension_of_idempotent_table():
    A = build_A3()
    t = idm_table(A, enumerate_newton(A))
    E = medial_extension(t)
    assert E.dim % 2 == 1 and is_medial_basis(E).verdict
    with pytest.raises(NotIMCQuasigroup):
        medial_extension(FANO)


def test_circ_order_examples():
    assert circ_order(1, 2, 15) == 4
    assert circ_order(1, 6, 15) == 2
    assert circ_order(4, 4, 15) == 1


@given(st.sampled_from([3, 5, 7, 9, 15, 21, 31, 63]), st.integers(0, 10**4), st.integers(0, 10**4))
def test_circ_order_symmetry_and_translation(N, x, y):
    x, y = x % N, y % N
    assert circ_order(x, y, N) == circ_order(y, x, N) == omega(x - y, N)
    assert circ_order((x + 3) % N, (y + 3) % N, N) == circ_order(x, y, N)


@pytest.mark.parametrize("n", range(2, 9))
def test_max_order_is_n(n):
    N = 2**n - 1
    assert max(omega(m, N) for m in range(N)) == n


def direct_orders(n):
    """Minimal periods by iterating y -> (x + y)/2 from x = 0."""
    N = 2**n - 1
    h = (N + 1) // 2
    out = set()
    for y in range(1, N):
        v, k = (y * h) % N, 1
        while v != y:
            v, k = (v * h) % N, k + 1
        out.add(k)
    return out


@pytest.mark.parametrize("n", range(2, 11))
def test_p_set_is_divisors_of_n(n):
    assert p_set(n) == direct_orders(n) == {d for d in range(2, n + 1) if n % d == 0}


@pytest.mark.parametrize("n", range(2, 11))
def test_period_set_is_gcd_set(n):
    assert period_set(n) == {p for p in range(1, n + 1) if math.gcd(p, n) > 1}


def test_p_set_examples():
    assert p_set(4) == {2, 4}
    assert p_set(2) == {2}


def test_orbits_Z15():
    cyc = orbits(15, 1)
    assert sorted(len(c) for c in cyc) == [1, 2, 4, 4, 4]
    as_sets = {frozenset(c) for c in cyc}
    assert {frozenset({1}), frozenset({6, 11}), frozenset({2, 9, 5, 3}),
            frozenset({4, 10, 13, 7}), frozenset({8, 12, 14, 0})} == as_sets
    assert [2, 9, 5, 3] in cyc


@given(st.sampled_from([3, 5, 7, 9, 11, 13, 15]), st.integers(0, 100))
def test_orbits_match_simulation(N, x):
    x %= N
    cyc = orbits(N, x)
    assert sorted(v for c in cyc for v in c) == list(range(N))
    assert [x] in cyc
    for c in cyc:
        for a, b in zip(c, c[1:] + c[:1]):
            assert (x + a) * (N + 1) // 2 % N == b


def test_ascii_layout():
    text = QuasigroupTable(TABLE_LEFT).ascii().splitlines()
    assert text[0].split("|")[1].split() == [str(i) for i in range(1, 8)]
    assert text[2].split("|")[1].split() == ["1", "5", "7", "3", "6", "2", "4"]
