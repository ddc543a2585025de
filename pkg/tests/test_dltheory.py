from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bkkernel.chartab import ClassFunction, decompose, inner_product
from bkkernel.dltheory import (
    SemisimpleLabel,
    TorusCharacter,
    TorusType,
    dl_character,
    dl_induce,
    dl_restrict,
    dl_weights,
    geometric_label,
    lusztig_series,
    torus_characters,
    torus_table,
    torus_types,
    transporter_count,
)
from bkkernel.errors import SpecError
from bkkernel.group import StandardGroupSpec

from conftest import tables


def gl(n, q):
    return StandardGroupSpec.gl(n, q)


def test_torus_types_examples():
    assert {T.parts for T in torus_types(gl(2, 3))} == {((1, 1),), ((2,),)}
    assert len(torus_types(gl(3, 3))) == 3
    assert len(torus_types(StandardGroupSpec.parse("2,2", 3))) == 4
    with pytest.raises(SpecError):
        TorusType(gl(2, 3), ((3,),))


def test_torus_points_and_characters():
    T = TorusType(gl(2, 3), ((2,),))
    assert T.order == 8
    tab = torus_table(T)
    assert tab.nclasses == 8
    chars = torus_characters(T)
    M = np.array([c.values().values for c in chars])
    assert np.allclose(M @ M.conj().T, 8 * np.eye(8))


def test_geometric_label_examples():
    for T in torus_types(gl(3, 3)):
        triv = TorusCharacter(T, (0,) * len(T.levels))
        assert geometric_label(T, triv).blocks == (((Fraction(0), 1, 3),),)
    T = TorusType(gl(2, 3), ((2,),))
    lab = geometric_label(T, TorusCharacter(T, (1,)))
    assert lab.blocks == (((Fraction(1, 8), 2, 1),),)
    assert lab.weights() == (2,)
    T = TorusType(gl(2, 3), ((1, 1),))
    lab = geometric_label(T, TorusCharacter(T, (1, 0)))
    assert sorted(x for blk in lab.fractions() for x in blk) == [Fraction(0), Fraction(1, 2)]


def test_label_is_frobenius_invariant():
    T = TorusType(gl(3, 2), ((3,),))
    for th in torus_characters(T):
        twisted = TorusCharacter(T, tuple(2 * k for k in th.residues))
        assert geometric_label(T, th) == geometric_label(T, twisted)


def test_gl1_dl_is_identity(gl1_3):
    t, _ = gl1_3
    T = torus_types(t.spec)[0]
    for th in torus_characters(T):
        assert np.allclose(dl_character(T, th, t).values, th.values().values)


def test_dl_degree_examples(gl2_3):
    t, _ = gl2_3
    split = TorusType(t.spec, ((1, 1),))
    nonsplit = TorusType(t.spec, ((2,),))
    assert dl_character(split, TorusCharacter(split, (0, 0)), t).values[t.identity] == pytest.approx(4)
    assert dl_character(nonsplit, TorusCharacter(nonsplit, (0,)), t).values[t.identity] == pytest.approx(-2)


@pytest.mark.parametrize("n,q", [(2, 3), (2, 5), (3, 2)])
def test_degree_formula(n, q):
    t, _ = tables(n, q)
    for T in torus_types(t.spec):
        for th in torus_characters(T):
            R = dl_character(T, th, t)
            expect = t.spec.epsilon * T.epsilon * t.spec.p_prime_part // T.order
            assert R.values[t.identity] == pytest.approx(expect, abs=1e-9)


def test_orthogonality_against_transporter(gl2_3):
    t, _ = gl2_3
    pairs = [(T, th) for T in torus_types(t.spec) for th in torus_characters(T)]
    for T, th in pairs:
        R = dl_character(T, th, t)
        for T2, th2 in pairs:
            got = inner_product(R, dl_character(T2, th2, t))
            assert got == pytest.approx(transporter_count(T, th, T2, th2), abs=1e-9)


@pytest.mark.parametrize("n,q", [(2, 3), (3, 2), (2, 4)])
def test_element_and_combinatorial_weights_agree(n, q):
    t, _ = tables(n, q)
    for T in torus_types(t.spec):
        assert np.allclose(dl_weights(t, T, "element"), dl_weights(t, T, "combinatorial"))


def test_dl_induce_linear_and_zero(gl2_3):
    t, _ = gl2_3
    T = TorusType(t.spec, ((2,),))
    zero = ClassFunction.zero(torus_table(T))
    assert np.allclose(dl_induce(T, zero, t).values, 0)
    th = TorusCharacter(T, (3,))
    assert np.allclose(dl_induce(T, th.values(), t).values, dl_character(T, th, t).values)


def test_restrict_of_induced_nonsplit(gl2_3):
    t, _ = gl2_3
    T = TorusType(t.spec, ((2,),))
    th = TorusCharacter(T, (1,))
    thq = TorusCharacter(T, (3,))
    got = dl_restrict(dl_character(T, th, t), T)
    assert np.allclose(got.values, th.values().values + thq.values().values)
    assert np.allclose(dl_restrict(ClassFunction.zero(t), T).values, 0)


@given(st.data())
def test_adjunction(data):
    t, _ = tables(2, 3)
    T = data.draw(st.sampled_from(torus_types(t.spec)))
    tt = torus_table(T)
    fl = st.floats(-2, 2)
    f = ClassFunction(t, np.array(data.draw(st.lists(fl, min_size=t.nclasses, max_size=t.nclasses))))
    h = ClassFunction(tt, np.array(data.draw(st.lists(fl, min_size=tt.nclasses, max_size=tt.nclasses))))
    lhs = inner_product(dl_restrict(f, T), h)
    rhs = inner_product(f, dl_induce(T, h, t))
    assert lhs == pytest.approx(rhs, abs=1e-9)


def test_series_examples():
    _, X = tables(1, 3)
    assert sorted(len(s.members) for s in lusztig_series(X)) == [1, 1]
    _, X = tables(2, 3)
    assert sorted(len(s.members) for s in lusztig_series(X)) == [1, 1, 1, 1, 2, 2]
    _, X = tables(2, 2)
    assert sorted(len(s.members) for s in lusztig_series(X)) == [1, 2]


@pytest.mark.parametrize("n,q", [(2, 3), (2, 5), (3, 2)])
def test_series_partition_irreducibles(n, q):
    _, X = tables(n, q)
    series = lusztig_series(X)
    members = sorted(i for s in series for i in s.members)
    assert members == list(range(X.nirr))
    assert len({s.label for s in series}) == len(series)


def test_constituents_share_the_label(gl2_3):
    t, X = gl2_3
    owner = {i: s.label for s in lusztig_series(X) for i in s.members}
    for T in torus_types(t.spec):
        for th in torus_characters(T):
            m = decompose(dl_character(T, th, t), X)
            for i in np.nonzero(np.abs(m) > 0.5)[0]:
                assert owner[int(i)] == geometric_label(T, th)


def test_label_json_round_trip():
    lab = SemisimpleLabel.from_fractions(3, [[Fraction(1, 8), Fraction(3, 8)]], (1,))
    data = lab.to_json()
    assert data[0][0]["fraction"] == [1, 8] and data[0][0]["orbit_size"] == 2
    with pytest.raises(SpecError):
        SemisimpleLabel.from_fractions(3, [[Fraction(1, 8)]], (1,))
