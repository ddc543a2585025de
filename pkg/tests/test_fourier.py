import cmath
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bkkernel.chartab import ClassFunction
from bkkernel.dltheory import (
    TorusCharacter,
    TorusType,
    dl_character,
    dl_induce,
    dl_restrict,
    geometric_label,
    lusztig_series,
    torus_characters,
    torus_types,
)
from bkkernel.errors import BudgetError
from bkkernel.field import get_tower
from bkkernel.fourier import (
    GammaFunction,
    admissible_check,
    apply_fourier_operator,
    c_pair,
    gamma_from_kernel,
    gauss_gamma_torus,
    kernel_from_gamma,
    lie_fourier,
    lie_size,
    restricted_fourier,
    restricted_fourier_kernel,
    restricted_fourier_via_lie,
    torus_psi_trace,
)
from bkkernel.group import StandardGroupSpec

from conftest import tables

W3 = cmath.exp(2j * cmath.pi / 3)


def gl(n, q, d=1):
    return StandardGroupSpec.gl(n, q, d)


def test_lie_fourier_examples():
    spec = gl(2, 3)
    N = lie_size(spec)
    delta = np.zeros(N)
    delta[0] = 1
    assert np.allclose(lie_fourier(spec, delta), 1)
    out = lie_fourier(spec, np.ones(N))
    assert out[0] == pytest.approx(N) and np.allclose(out[1:], 0)
    psi = get_tower(3).psi_prime()
    assert np.allclose(lie_fourier(gl(1, 3), psi), [0, 0, 3])


def test_lie_fourier_inversion():
    # in characteristic 2, -x = x, so applying the transform twice multiplies by the size
    spec = gl(2, 2)
    rng = np.random.default_rng(0)
    f = rng.standard_normal(lie_size(spec))
    assert np.allclose(lie_fourier(spec, lie_fourier(spec, f)), lie_size(spec) * f)


def test_lie_budget():
    with pytest.raises(BudgetError):
        lie_fourier(gl(3, 2), np.zeros(2**9))
    with pytest.raises(BudgetError):
        lie_fourier(gl(2, 5), np.zeros(5**4), budget=100)


@pytest.mark.parametrize("n,q", [(2, 3), (1, 5), (2, 2)])
def test_group_transform_matches_lie_route(n, q):
    t, _ = tables(n, q)
    rng = np.random.default_rng(n * q)
    f = ClassFunction(t, rng.standard_normal(t.nclasses))
    assert np.allclose(restricted_fourier(f).values, restricted_fourier_via_lie(f).values)


def test_restricted_fourier_examples(gl1_3, gl2_3):
    t, _ = gl2_3
    delta = ClassFunction.indicator(t, t.identity)
    assert np.allclose(restricted_fourier(delta).values, t.psi_trace)
    t1, _ = gl1_3
    assert np.allclose(restricted_fourier(ClassFunction.constant(t1)).values, -1)
    T = torus_types(t1.spec)[0]
    th = TorusCharacter(T, (1,))
    g = gauss_gamma_torus(T, th)
    assert np.allclose(restricted_fourier(th.values()).values, g * np.conj(th.values().values))


def test_gamma_examples(gl1_3, gl2_3):
    t, X = gl2_3
    g = gamma_from_kernel(ClassFunction.indicator(t, t.identity), X)
    assert np.allclose(g.values, 1)
    t1, X1 = gl1_3
    psi = restricted_fourier_kernel(t1)
    g1 = gamma_from_kernel(psi, X1)
    triv = X1.trivial_index
    assert g1.values[triv] == pytest.approx(-1)
    assert g1.values[1 - triv] == pytest.approx(1j * np.sqrt(3))
    back = kernel_from_gamma(GammaFunction(X1, g1.values), X1)
    assert np.allclose(back.values, psi.values)


def test_kernel_of_constant_gamma_is_identity_delta(gl2_3):
    t, X = gl2_3
    phi = kernel_from_gamma(GammaFunction(X, np.ones(X.nirr)), X)
    assert np.allclose(phi.values, ClassFunction.indicator(t, t.identity).values)


@given(st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False), min_size=8, max_size=8))
def test_gamma_kernel_round_trip(vals):
    _, X = tables(2, 3)
    g = GammaFunction(X, np.array(vals))
    assert np.allclose(gamma_from_kernel(kernel_from_gamma(g, X), X).values, g.values, atol=1e-9)


def test_operator_examples(gl2_3):
    t, X = gl2_3
    rng = np.random.default_rng(3)
    f = ClassFunction(t, rng.standard_normal(t.nclasses))
    h = ClassFunction(t, rng.standard_normal(t.nclasses))
    delta = ClassFunction.indicator(t, t.identity)
    assert np.allclose(apply_fourier_operator(delta, f).values, f.dual().values)
    psi = restricted_fourier_kernel(t)
    lin = apply_fourier_operator(psi, 2 * f + h).values
    assert np.allclose(lin, 2 * apply_fourier_operator(psi, f).values + apply_fourier_operator(psi, h).values)
    g = gamma_from_kernel(psi, X)
    for i in range(X.nirr):
        ch = X.character(i)
        assert np.allclose(apply_fourier_operator(psi, ch).values, g.values[i] * ch.dual().values)


def test_c_pair_examples():
    G = gl(2, 3)
    assert c_pair(G, G) == 1
    assert c_pair(G, gl(3, 3)) == Fraction(-1, 9)
    T = TorusType(G, ((2,),))
    assert c_pair(T, G) == Fraction(-1, 3)
    assert c_pair(G, T) == -3


def test_gauss_examples():
    T = torus_types(gl(1, 3))[0]
    assert gauss_gamma_torus(T, TorusCharacter(T, (0,))) == pytest.approx(-1)
    g = gauss_gamma_torus(T, TorusCharacter(T, (1,)))
    assert g == pytest.approx(1j * np.sqrt(3))
    S = TorusType(gl(2, 3), ((1, 1),))
    for a in range(2):
        for b in range(2):
            lhs = gauss_gamma_torus(S, TorusCharacter(S, (a, b)))
            rhs = gauss_gamma_torus(T, TorusCharacter(T, (a,))) * gauss_gamma_torus(T, TorusCharacter(T, (b,)))
            assert lhs == pytest.approx(rhs)


@pytest.mark.parametrize("q,d", [(3, 1), (3, 2), (5, 1), (2, 3)])
def test_gauss_magnitudes(q, d):
    T = TorusType(gl(1, q), ((1,),)) if d == 1 else TorusType(StandardGroupSpec(q, ((d, 1),)), ((d,),))
    for th in torus_characters(T):
        g = gauss_gamma_torus(T, th)
        if th.is_trivial:
            assert g == pytest.approx(-1)
        else:
            assert abs(g) == pytest.approx(q ** (d / 2))


def test_admissibility(gl2_3):
    t, X = gl2_3
    series = lusztig_series(X)
    assert admissible_check(GammaFunction(X, np.full(X.nirr, 2.0)), series) == 0
    g = gamma_from_kernel(restricted_fourier_kernel(t), X)
    assert admissible_check(g, series) < 1e-8
    assert admissible_check(GammaFunction(X, X.degrees), series) > 1


@pytest.mark.parametrize("q", [3, 5])
def test_torus_restriction_of_psi_trace(q):
    t, _ = tables(2, q)
    for T in torus_types(t.spec):
        assert np.allclose(dl_restrict(restricted_fourier_kernel(t), T).values, torus_psi_trace(T).values)


def test_gamma_equals_scaled_gauss_sum(gl2_3):
    t, X = gl2_3
    g = gamma_from_kernel(restricted_fourier_kernel(t), X)
    by_label = {s.label: s for s in lusztig_series(X)}
    for T in torus_types(t.spec):
        for th in torus_characters(T):
            s = by_label[geometric_label(T, th)]
            assert g.values[s.members[0]] == pytest.approx(float(c_pair(t.spec, T)) * gauss_gamma_torus(T, th))


def test_transform_commutes_with_induction(gl2_3):
    t, _ = gl2_3
    for T in torus_types(t.spec):
        c = float(c_pair(t.spec, T))
        for th in torus_characters(T):
            lhs = restricted_fourier(dl_character(T, th, t)).values
            rhs = c * dl_induce(T, restricted_fourier(th.values()), t).values
            assert np.allclose(lhs, rhs, atol=1e-8)
