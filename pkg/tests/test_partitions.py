import pytest
from hypothesis import given
from hypothesis import strategies as st

from bkkernel.partitions import (
    GreenTable,
    class_size_sn,
    conjugate,
    gl_order,
    gl_order_p_prime,
    green_polynomial,
    kostka_foulkes,
    partitions,
    sign,
    sym_char,
    torus_order,
    unipotent_degree,
)
from math import factorial


def test_partition_examples():
    assert partitions(0) == [()]
    assert set(partitions(3)) == {(3,), (2, 1), (1, 1, 1)}
    assert len(partitions(5)) == 7


def test_sym_char_examples():
    for mu in partitions(4):
        assert sym_char((4,), mu) == 1
        assert sym_char((1, 1, 1, 1), mu) == sign(mu)
    assert sym_char((2, 1), (1, 1, 1)) == 2


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_sym_char_orthogonality(n):
    parts = partitions(n)
    for a in parts:
        for b in parts:
            s = sum(class_size_sn(mu) * sym_char(a, mu) * sym_char(b, mu) for mu in parts)
            assert s == (factorial(n) if a == b else 0)


@given(st.integers(1, 6), st.data())
def test_conjugate_is_involution(n, data):
    lam = data.draw(st.sampled_from(partitions(n)))
    assert conjugate(conjugate(lam)) == lam
    mu = data.draw(st.sampled_from(partitions(n)))
    assert sym_char(conjugate(lam), mu) == sign(mu) * sym_char(lam, mu)


def test_kostka_foulkes_at_one_counts_tableaux():
    # K_{lambda,(1^n)}(1) is the number of standard tableaux
    for lam in partitions(4):
        assert sum(kostka_foulkes(lam, (1, 1, 1, 1))) == sym_char(lam, (1, 1, 1, 1))


def test_green_examples():
    assert green_polynomial((1, 1), (1, 1), 3) == 4
    assert green_polynomial((2,), (1, 1), 3) == -2
    assert green_polynomial((1, 1), (2,), 3) == 1
    assert green_polynomial((2,), (2,), 3) == 1
    assert green_polynomial((1, 1, 1), (1, 1, 1), 2) == 21


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("q", [2, 3])
def test_green_degree_and_regular_columns(n, q):
    ones = (1,) * n
    for rho in partitions(n):
        eps = (-1) ** (n + len(rho))
        assert green_polynomial(rho, ones, q) == eps * gl_order_p_prime(n, q) // torus_order(rho, q)
        assert green_polynomial(rho, (n,), q) == 1


def test_unipotent_degrees():
    assert unipotent_degree((2,), 3) == 1
    assert unipotent_degree((1, 1), 3) == 3
    assert unipotent_degree((2, 1), 2) == 6
    q = 3
    # the degrees of 1_B^G constituents weighted by S_n degrees give |G/B|
    for n in (2, 3):
        total = sum(sym_char(lam, (1,) * n) * unipotent_degree(lam, q) for lam in partitions(n))
        assert total == gl_order(n, q) // ((q - 1) ** n * q ** (n * (n - 1) // 2))


def test_green_table_csv():
    tab = GreenTable.build(2, 3)
    lines = tab.to_csv().strip().splitlines()
    assert lines[0] == "rho\\mu,2,1-1"
    assert tab.value((2,), (1, 1)) == -2
