from itertools import product

import pytest

from obstruct import barratt_eccles as E
from obstruct import perms
from obstruct import trees as T
from obstruct.coalgebra import check_morphism
from obstruct.cylinder import (EDGE, N_DEGREE, ONE, ZERO, Cylinder, DiagonalProvider, IntervalAction, ProviderRangeError,
                               TableDiagonal, TableIntervalAction, cylinder_algebra, homotopy, interval_boundary,
                               interval_differential)
from obstruct.linalg import InputError
from obstruct.operads import Ass, Com
from obstruct.selftest import diagonal_chain_map, sigma_chain_map
from obstruct.solver import morphism_from_f0
from obstruct.trees import TreeCalculus
from oracles import brute_force_homotopy_grade_one, problem

MU = (2, ((1, 2),))
E1 = ((1, 2), (2, 1))


def bullet(us):
    """The degree-0 rule for the identity permutation, written out case by case."""
    r = len(us)
    if us == (ZERO,) * r:
        return {ZERO: 1}
    if us == (ONE,) * r:
        return {ONE: 1}
    for k in range(r):
        if us == (ZERO,) * k + (EDGE,) + (ONE,) * (r - k - 1):
            return {EDGE: 1}
    return {}


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_identity_acts_by_the_four_rules(r):
    sigma = IntervalAction()
    for us in product((ZERO, ONE, EDGE), repeat=r):
        assert sigma.evaluate(E.unit(r), us) == bullet(us)


def test_other_permutations_by_equivariance():
    sigma = IntervalAction()
    # (2 1) reads the inputs in swapped order
    assert sigma.evaluate(((2, 1),), (ONE, EDGE)) == {EDGE: 1}
    assert sigma.evaluate(((2, 1),), (EDGE, ONE)) == {}
    assert sigma.evaluate(((2, 3, 1),), (ONE, ZERO, EDGE)) == {EDGE: 1}


def test_interval_differentials():
    assert interval_boundary(EDGE) == {ONE: 1, ZERO: -1}
    assert interval_boundary(ZERO) == interval_boundary(ONE) == {}
    assert interval_differential(ZERO) == {EDGE: -1}
    assert interval_differential(ONE) == {EDGE: 1}
    assert interval_differential(EDGE) == {}


def test_degree_one_values_in_arity_two():
    sigma = IntervalAction()
    assert sigma.evaluate(E1, (EDGE, EDGE)) == {EDGE: 1}
    capped = TableIntervalAction({}, 0)
    with pytest.raises(ProviderRangeError):
        capped.evaluate(E1, (EDGE, EDGE))
    assert capped.evaluate(E1, (ZERO, ZERO)) == {}
    assert sigma.evaluate(((2, 1), (1, 2)), (EDGE, EDGE)) == {EDGE: -1}
    # a vertex carries no 1-cochain
    assert sigma.evaluate(E1, (ZERO, EDGE)) == {}


def test_interval_action_is_a_chain_map():
    assert sigma_chain_map(IntervalAction(), 4, 1)


def test_interval_action_is_equivariant():
    sigma = IntervalAction()
    for r in (2, 3):
        for t in (0, 1):
            for e in E.basis(r, t):
                for g in perms.all_perms(r):
                    for us in product((ZERO, ONE, EDGE), repeat=r):
                        ys = tuple(us[g[j] - 1] for j in range(r))
                        s = perms.koszul_sign([N_DEGREE[u] for u in us], [x - 1 for x in g])
                        want = {k: s * v for k, v in sigma.evaluate(e, ys).items()}
                        assert sigma.evaluate(E.act(g, e), us) == want


def test_interval_action_range():
    sigma = IntervalAction()
    with pytest.raises(ProviderRangeError):
        sigma.evaluate(((1, 2), (2, 1), (1, 2)), (EDGE, EDGE))
    # the output degree rules out a nonzero value here
    assert sigma.evaluate(((1, 2), (2, 1), (1, 2)), (ZERO, ZERO)) == {}


@pytest.mark.parametrize("operad", [Com(), Ass()])
def test_diagonal_is_a_chain_map(operad):
    calc = TreeCalculus(operad)
    assert diagonal_chain_map(calc, DiagonalProvider(calc), 3, 3)


def test_diagonal_values():
    calc = TreeCalculus(Com())
    diag = DiagonalProvider(calc)
    assert diag.rho(1) == {(1, ((1,),)): 1}
    # a degree-0 corolla goes to itself tensor its permutation
    assert diag.rho(((2, ((2, 1),)), (1, 2))) == {(((2, ((2, 1),)), (1, 2)), ((2, 1),)): 1}
    assert diag.rho(((2, E1), (1, 2))) == {
        ((MU, (1, 2)), E1): 1,
        (((2, E1), (1, 2)), ((2, 1),)): 1,
    }
    t = (MU, ((MU, (1, 2)), 3))
    assert diag.rho(t) == {(t, ((1, 2, 3),)): 1}
    with pytest.raises(ProviderRangeError):
        diag.rho((MU, ((MU, ((MU, (1, 2)), 3)), 4)))


def test_table_providers():
    calc = TreeCalculus(Com())
    t3 = (MU, ((MU, ((MU, (1, 2)), 3)), 4))
    diag = TableDiagonal(calc, {}, 3)
    assert diag.rho(t3) == {}
    assert diag.rho((MU, (1, 2))) == DiagonalProvider(calc).rho((MU, (1, 2)))
    with pytest.raises(ProviderRangeError):
        TableDiagonal(calc, {}, 0).rho((MU, (1, 2)))
    assert TableDiagonal(calc, {}, 0).rho(1) == {(1, ((1,),)): 1}
    sigma = TableIntervalAction({(((1, 2), (2, 1), (1, 2)), (EDGE, EDGE)): {EDGE: 1}}, 2)
    assert sigma.evaluate(((1, 2), (2, 1), (1, 2)), (EDGE, EDGE)) == {EDGE: 1}
    assert sigma.evaluate(((2, 1), (1, 2), (2, 1)), (EDGE, EDGE)) == {}
    assert sigma.evaluate(E1, (EDGE, EDGE)) == {EDGE: 1}
    capped = TableIntervalAction({}, 0)
    with pytest.raises(ProviderRangeError):
        capped.evaluate(E1, (EDGE, EDGE))
    assert capped.evaluate(E1, (ZERO, ZERO)) == {}


def test_cylinder_algebra_differential():
    p = problem("homotopy-coboundary")
    cyl = cylinder_algebra(p.B.algebra)
    assert cyl.names[:3] == ["1|0#", "1|1#", "1|01#"]
    assert cyl.degrees == [0, 0, -1, 2, 2, 1]
    assert cyl.d(0) == {2: -1}
    assert cyl.d(1) == {2: 1}
    assert cyl.d(2) == {}


def test_structure_on_constant_slots():
    p = problem("homotopy-coboundary")
    cyl = Cylinder(p.A, p.B, p.beta, p.sigma, p.diag)
    t = (MU, (1, 2))
    for a, b in product(range(2), repeat=2):
        want = p.beta.evaluate(t, (a, b))
        for u in (ZERO, ONE):
            got = cyl.gamma.evaluate(t, (3 * a + u, 3 * b + u))
            assert got == {3 * k + u: v for k, v in want.items()}


def test_structure_is_equivariant():
    p = problem("homotopy-coboundary")
    cyl = Cylinder(p.A, p.B, p.beta, p.sigma, p.diag)
    CC = cyl.CC
    for t in [(MU, (1, 2)), ((2, E1), (1, 2)), (MU, ((MU, (1, 2)), 3))]:
        for ins in product(range(CC.algebra.dim), repeat=T.arity(t)):
            res = CC.canon.canonical(t, ins)
            if res is None:
                continue
            s, key = res
            got = cyl.gamma.evaluate(t, ins)
            want = {b: s * c for b, c in cyl.gamma.evaluate(*key).items()}
            assert {b: c for b, c in got.items() if c} == {b: c for b, c in want.items() if c}


def test_equal_maps_are_homotopic():
    p = problem("homotopy-equal")
    res = homotopy(p.A, p.B, p.alpha, p.beta, p.lower, p.upper, 3, 3, p.sigma, p.diag)
    assert res.verdict == "HOMOTOPIC"
    assert res.f01 == {}


def test_coboundary_difference_is_homotopic():
    p = problem("homotopy-coboundary")
    res = homotopy(p.A, p.B, p.alpha, p.beta, p.lower, p.upper, 3, 3, p.sigma, p.diag)
    assert res.verdict == "HOMOTOPIC"
    assert res.f01
    cyl = Cylinder(p.A, p.B, p.beta, p.sigma, p.diag)
    f = cyl.combine(p.lower, p.upper, res.f01)
    assert check_morphism(p.A, cyl.CC, p.alpha, cyl.gamma, f, 3, 3) == []


def test_nontrivial_class_is_obstructed():
    p = problem("homotopy-gf2")
    res = homotopy(p.A, p.B, p.alpha, p.beta, p.lower, p.upper, 3, 3, p.sigma, p.diag)
    assert res.verdict == "OBSTRUCTED"
    assert res.obstruction.grade == 1
    assert res.obstruction.verify(res.matrix, res.rhs)
    cells, found = brute_force_homotopy_grade_one(p)
    assert cells and found == []


def test_brute_force_accepts_the_zero_homotopy():
    # the oracle itself must see that equal maps need no correction
    p = problem("homotopy-equal")
    cells, found = brute_force_homotopy_grade_one(p)
    assert (0,) * len(cells) in found


def test_small_diagonal_reports_missing_capability():
    p = problem("homotopy-coboundary")
    res = homotopy(p.A, p.B, p.alpha, p.beta, p.lower, p.upper, 3, 3, p.sigma,
                   DiagonalProvider(p.calc, max_weight=0))
    assert res.verdict == "INSUFFICIENT_PROVIDER"
    assert "weight 1" in res.missing


def test_different_grade_zero_maps_rejected():
    p = problem("homotopy-coboundary")
    with pytest.raises(InputError):
        homotopy(p.A, p.B, p.alpha, p.beta, p.lower, morphism_from_f0(p.A, {0: {0: 1}}), 3, 3)
