import pytest

from obstruct import trees as T
from obstruct.bar import apply_linear, bar_basis, bar_basis_upto, bar_differential
from obstruct.operads import Ass, Com
from obstruct.trees import TreeCalculus
from oracles import nu2, nu2_compatible

ID2 = ((1, 2),)
E1 = ((1, 2), (2, 1))


@pytest.mark.parametrize("operad", [Com(), Ass()])
def test_square_zero_small(operad):
    calc = TreeCalculus(operad)
    for n in (1, 2, 3):
        for g in range(4):
            for t in bar_basis(calc, n, g):
                assert apply_linear(calc, bar_differential(calc, t)) == {}


@pytest.mark.parametrize("operad", [Com(), Ass()])
def test_grade_and_degree_drop_by_one(operad):
    calc = TreeCalculus(operad)
    for t in bar_basis(calc, 3, 3):
        for t2 in bar_differential(calc, t):
            assert T.grade(t2) == T.grade(t) - 1
            assert calc.degree(t2) == calc.degree(t) - 1
            assert calc.is_normal(t2)


def test_corolla_of_degree_zero_is_a_cycle():
    calc = TreeCalculus(Com())
    assert bar_differential(calc, ((2, ID2), (1, 2))) == {}


def test_internal_part_on_a_corolla():
    calc = TreeCalculus(Com())
    # d of the E-degree-1 label is (2 1) - (1 2); the vertex contributes -(label differential)
    assert bar_differential(calc, ((2, E1), (1, 2))) == {((2, ID2), (1, 2)): 1, ((2, ((2, 1),)), (1, 2)): -1}


def test_contraction_of_two_binary_vertices():
    calc = TreeCalculus(Com())
    t = ((2, ID2), (((2, ID2), (1, 2)), 3))
    assert bar_differential(calc, t) == {((3, ((1, 2, 3),)), (1, 2, 3)): 1}


def test_basis_upto_keys():
    calc = TreeCalculus(Com())
    b = bar_basis_upto(calc, 2, 2)
    assert sorted(b) == [(1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)]
    assert len(b[(2, 2)]) == 2


@pytest.mark.parametrize("operad", [Com(), Ass()])
def test_differential_is_a_coderivation_for_single_cuts(operad):
    calc = TreeCalculus(operad)
    for n in (1, 2, 3):
        for g in range(4):
            for t in bar_basis(calc, n, g):
                assert nu2_compatible(calc, t)


def test_single_cuts_of_a_two_vertex_tree():
    calc = TreeCalculus(Com())
    t = ((2, ID2), (((2, ID2), (1, 2)), 3))
    cuts = nu2(calc, t)
    # cut at the root gives (leaf, t); the inner vertex is written last, so its cut has no sign
    assert cuts == {(1, t, (1, 2, 3)): 1, (((2, ID2), (1, 2)), ((2, ID2), (1, 2)), (1, 2)): 1}
    u = ((2, ID2), (1, ((2, ID2), (2, 3))))
    # the leaf set of the cut subtree is recorded alongside the two parts
    assert nu2(calc, u)[(((2, ID2), (1, 2)), ((2, ID2), (1, 2)), (2, 3))] == 1
