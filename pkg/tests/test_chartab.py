import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bkkernel.chartab import (
    ClassFunction,
    charpoly,
    choose_prime,
    decompose,
    dixon_table,
    inner_product,
    nullspace,
    numeric_central_characters,
    reconstruct,
)
from bkkernel.group import ClassTable, StandardGroupSpec, gl_block

from conftest import tables


def test_gl1_f3_table(gl1_3):
    _, X = gl1_3
    rows = sorted(tuple(np.round(r.real).astype(int).tolist()) for r in X.values)
    assert rows == [(1, -1), (1, 1)]
    assert np.allclose(X.values[X.trivial_index], 1)


@pytest.mark.parametrize(
    "n,q,degs", [(2, 3, [1, 1, 2, 2, 2, 3, 3, 4]), (2, 2, [1, 1, 2]), (3, 2, [1, 3, 3, 6, 7, 8])]
)
def test_degrees(n, q, degs):
    t, X = tables(n, q)
    assert sorted(int(round(d.real)) for d in X.degrees) == degs
    assert int(round(np.sum(X.degrees**2).real)) == t.order


@pytest.mark.parametrize("n,q", [(2, 3), (2, 5), (3, 2), (2, 4)])
def test_orthogonality(n, q):
    _, X = tables(n, q)
    assert X.row_orthogonality_error() < 1e-9
    assert X.column_orthogonality_error() < 1e-9


def test_product_group_table():
    t = ClassTable(StandardGroupSpec.parse("2,1", 3))
    X = dixon_table(t)
    assert X.nirr == t.nclasses
    assert X.row_orthogonality_error() < 1e-9


def test_values_bounded_by_degree(gl2_3):
    t, X = gl2_3
    deg = X.degrees.real[:, None]
    assert np.all(np.abs(X.values) <= deg + 1e-9)
    # central classes act by scalars
    for k in range(t.nclasses):
        if t.sizes[k] == 1:
            assert np.allclose(np.abs(X.values[:, k]), deg[:, 0])


def test_central_characters_are_algebraic_integers(gl2_3):
    t, X = gl2_3
    omega = X.values * t.sizes[None, :] / X.degrees[:, None]
    a = t.structure_constants
    # omega_i omega_j = sum_k a_ijk omega_k
    lhs = omega[:, :, None] * omega[:, None, :]
    rhs = np.einsum("ijk,xk->xij", a, omega)
    assert np.allclose(lhs, rhs)


def test_matches_float_oracle(gl2_3):
    t, X = gl2_3
    degs = numeric_central_characters(gl_block(3, 2))
    assert np.allclose(degs, np.sort(X.degrees.real))


def test_inner_product_examples(gl2_3):
    t, X = gl2_3
    for i in range(X.nirr):
        assert inner_product(X.character(i), X.character(i)) == pytest.approx(1)
    triv = X.character(X.trivial_index)
    assert inner_product(X.regular_character(), triv) == pytest.approx(1)
    assert inner_product(ClassFunction.indicator(t, t.identity), triv) == pytest.approx(1 / t.order)


def test_decompose_examples(gl2_3):
    t, X = gl2_3
    assert np.allclose(decompose(X.character(3), X), np.eye(X.nirr)[3])
    assert np.allclose(decompose(X.regular_character(), X), X.degrees)
    blk = t.blocks[0]
    upper = np.all(np.tril(blk.elements, -1) == 0, axis=(1, 2))
    cnt = np.bincount(blk.key_to_class[upper], minlength=t.nclasses)
    perm = ClassFunction(t, t.centralizers * cnt / upper.sum())
    m = np.round(decompose(perm, X).real).astype(int)
    assert sorted(m.tolist()) == [0] * 6 + [1, 1]
    assert sorted(int(round(X.degrees[i].real)) for i in np.nonzero(m)[0]) == [1, 3]


@given(st.lists(st.integers(-3, 3), min_size=8, max_size=8))
def test_decompose_reconstruct_round_trip(coeffs):
    t, X = tables(2, 3)
    f = reconstruct(np.array(coeffs, dtype=complex), X)
    assert np.allclose(decompose(f, X), coeffs)


def test_output_is_deterministic(gl2_3):
    t, X = gl2_3
    Y = dixon_table(t, seed=5)
    assert np.allclose(X.values, Y.values)


def test_choose_prime():
    P = choose_prime(24, 48)
    assert P % 24 == 1 and P > 2 * np.sqrt(48)


def test_modular_linear_algebra():
    P = 13
    A = np.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]]) % P
    N = nullspace(A, P)
    assert N.shape[1] == 1
    assert np.all((A @ N) % P == 0)
    c = charpoly(np.array([[2, 0], [0, 3]]), P)
    assert [x % P for x in c] == [6, (-5) % P, 1]


def test_class_function_algebra(gl2_3):
    t, X = gl2_3
    f, h = X.character(1), X.character(2)
    assert np.allclose((f + h - h).values, f.values)
    assert np.allclose((2 * f).values, 2 * f.values)
    assert np.allclose(f.dual().values, np.conj(f.values))
