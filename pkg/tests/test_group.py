import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bkkernel.dltheory import torus_types
from bkkernel.errors import BudgetError, SpecError
from bkkernel.field import get_tower
from bkkernel.group import (
    ClassTable,
    GroupElement,
    StandardGroupSpec,
    build_class_table,
    gl_block,
    jordan_decompose,
    matmul,
    semisimple_centralizer,
    trace_form,
)
from bkkernel.partitions import partitions


def elem(q, *mats, d=1):
    spec = StandardGroupSpec(q, tuple((len(m), d) for m in mats))
    return GroupElement(spec, tuple(np.array(m) for m in mats))


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_gl1_has_singleton_classes(q):
    t = build_class_table(StandardGroupSpec.gl(1, q))
    assert t.nclasses == q - 1
    assert np.all(t.sizes == 1)


@pytest.mark.parametrize("n,q,count,order", [(2, 3, 8, 48), (3, 2, 6, 168), (2, 2, 3, 6), (2, 4, 15, 180)])
def test_class_counts(n, q, count, order):
    t = ClassTable(StandardGroupSpec.gl(n, q))
    assert t.nclasses == count
    assert t.order == order
    assert int(t.sizes.sum()) == order


@pytest.mark.parametrize("n,q", [(2, 3), (3, 2), (2, 5), (2, 4)])
def test_classes_match_brute_force_orbits(n, q):
    blk = gl_block(q, n)
    counts = np.bincount(blk.key_to_class, minlength=blk.nclasses)
    assert np.array_equal(counts, blk.sizes)
    assert np.all(np.array(blk.centralizers) * np.array(blk.sizes) == blk.order)
    # representatives classify to themselves
    assert np.array_equal(blk.class_of_matrices(blk.reps), np.arange(blk.nclasses))


def test_gl2_over_f9_class_data():
    blk = gl_block(3, 2, 2)
    assert blk.nclasses == 9**2 - 1
    assert int(sum(blk.sizes)) == blk.order == 5760


def test_product_table_is_kronecker():
    spec = StandardGroupSpec.parse("2,1", 3)
    t = ClassTable(spec)
    a, b = gl_block(3, 2), gl_block(3, 1)
    assert t.nclasses == a.nclasses * b.nclasses
    assert np.array_equal(t.sizes, np.kron(a.sizes, b.sizes))
    k = t.flat((3, 1))
    assert t.labels[k] == (3, 1)


def test_structure_constants_brute_force():
    blk = gl_block(2, 2)
    E = blk.elements
    cls = blk.key_to_class
    r = blk.nclasses
    brute = np.zeros((r, r, r), dtype=np.int64)
    idx = blk.element_index(blk.reps)
    for i in range(len(E)):
        prods = matmul(blk.field, E[i], E)
        hit = blk.element_index(prods)
        for k in range(r):
            mask = hit == idx[k]
            for j in np.nonzero(mask)[0]:
                brute[cls[i], cls[j], k] += 1
    assert np.array_equal(brute, blk.structure_constants)


def test_jordan_decompose_example():
    g = elem(3, [[2, 2], [0, 2]])
    s, u = jordan_decompose(g)
    assert s == elem(3, [[2, 0], [0, 2]])
    assert u == elem(3, [[1, 1], [0, 1]])


def test_jordan_decompose_trivial_cases():
    u = elem(3, [[1, 1], [0, 1]])
    assert jordan_decompose(u) == (GroupElement.identity(u.spec), u)
    s = elem(3, [[1, 0], [0, 2]])
    assert jordan_decompose(s) == (s, GroupElement.identity(s.spec))


@pytest.mark.parametrize("n,q", [(2, 3), (3, 2)])
def test_jordan_decompose_all_classes(n, q):
    t = ClassTable(StandardGroupSpec.gl(n, q))
    p = q
    for k in range(t.nclasses):
        g = t.rep(k)
        s, u = jordan_decompose(g)
        assert s * u == g and u * s == g
        assert np.gcd(s.order(), u.order()) == 1
        assert u.order() % p == 0 or u.order() == 1
        assert t.classify(s) == t.semisimple_class(k)


def test_semisimple_centralizer_examples():
    spec, _ = semisimple_centralizer(elem(3, [[2, 0], [0, 2]]))
    assert spec == StandardGroupSpec.gl(2, 3)
    spec, _ = semisimple_centralizer(elem(3, [[1, 0], [0, 2]]))
    assert spec == StandardGroupSpec(3, ((1, 1), (1, 1)))
    spec, _ = semisimple_centralizer(elem(3, [[0, 1], [1, 1]]))
    assert spec == StandardGroupSpec(3, ((1, 2),))
    with pytest.raises(ValueError):
        semisimple_centralizer(elem(3, [[1, 1], [0, 1]]))


@pytest.mark.parametrize("n,q", [(2, 3), (3, 2)])
def test_semisimple_centralizer_orders(n, q):
    t = ClassTable(StandardGroupSpec.gl(n, q))
    for k in range(t.nclasses):
        if t.is_semisimple(k):
            spec, _ = semisimple_centralizer(t.rep(k))
            assert spec.order == t.centralizers[k]


def test_trace_form_examples():
    assert trace_form(GroupElement.identity(StandardGroupSpec.gl(2, 3))).log == get_tower(3).elem(1, 2).log
    tower = get_tower(3)
    lev = tower.level(2)
    for code in range(1, 9):
        x = elem(3, [[code]], d=2)
        expect = int(lev.add(code, lev.power(code, 3)))
        assert tower.code(trace_form(x)) == int(tower.descend_code(np.array([expect]), 2, 1)[0])
    g1, g2 = elem(3, [[1, 2], [0, 1]]), elem(3, [[2]])
    both = GroupElement(StandardGroupSpec(3, ((2, 1), (1, 1))), (g1.blocks[0], g2.blocks[0]))
    lev1 = tower.level(1)
    assert tower.code(trace_form(both)) == int(lev1.add(tower.code(trace_form(g1)), tower.code(trace_form(g2))))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_length_parity_matches_epsilons(n):
    spec = StandardGroupSpec.gl(n, 2)
    for T in torus_types(spec):
        ncycles = len(T.parts[0])
        assert (-1) ** (n - ncycles) == spec.epsilon * T.epsilon


def test_spec_properties():
    spec = StandardGroupSpec.parse("2:1,1:2", 3)
    assert spec.order == 48 * 8
    assert spec.split_rank == 3
    assert spec.dim_v == 1
    assert not spec.is_split
    assert spec.label == "2,1:2"
    with pytest.raises(SpecError):
        StandardGroupSpec.parse("2:x", 3)


def test_budget_is_enforced():
    with pytest.raises(BudgetError) as info:
        ClassTable(StandardGroupSpec.gl(3, 3), budget=1000)
    assert info.value.size == 11232


@given(st.data())
def test_group_axioms_on_random_elements(data):
    blk = gl_block(3, 2)
    E = blk.elements
    i, j, k = (data.draw(st.integers(0, len(E) - 1)) for _ in range(3))
    spec = StandardGroupSpec.gl(2, 3)
    a, b, c = (GroupElement(spec, (E[x],)) for x in (i, j, k))
    assert (a * b) * c == a * (b * c)
    assert (a * a.inverse()).is_identity()
    t = ClassTable(spec)
    assert t.classify(b.inverse() * a * b) == t.classify(a)
    assert a.power(a.order()).is_identity()


def test_power_and_inverse_maps():
    t = ClassTable(StandardGroupSpec.gl(2, 3))
    for k in range(t.nclasses):
        g = t.rep(k)
        assert t.power_map(2)[k] == t.classify(g.power(2))
        assert t.inverse_classes[k] == t.classify(g.inverse())
        assert t.class_orders[k] == g.order()
