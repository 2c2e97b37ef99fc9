"""A quick invariant suite behind the ``selftest`` command."""

from __future__ import annotations

from itertools import product
from typing import Callable, Dict, List, Tuple

from . import barratt_eccles as E
from . import fixtures
from .bar import apply_linear, bar_basis, bar_differential
from .cylinder import (DiagonalProvider, IntervalAction, N_DEGREE, ProviderRangeError, cup_identity,
                       homotopy, interval_differential)
from .io import build_problem
from .operads import Ass, Com
from .solver import DerivationComplex, realize
from .trees import TreeCalculus


def _clean(d: Dict) -> Dict:
    return {k: v for k, v in d.items() if v}


def e_square_zero(max_arity: int, max_degree: int) -> bool:
    for r in range(1, max_arity + 1):
        for t in range(max_degree + 1):
            for w in E.basis(r, t):
                out: Dict = {}
                for f, c in E.e_differential(w).items():
                    for g, c2 in E.e_differential(f).items():
                        out[g] = out.get(g, 0) + c * c2
                if _clean(out):
                    return False
    return True


def bar_square_zero(operad, max_arity: int, max_grade: int) -> bool:
    calc = TreeCalculus(operad)
    for n in range(1, max_arity + 1):
        for g in range(max_grade + 1):
            for t in bar_basis(calc, n, g):
                if apply_linear(calc, bar_differential(calc, t)):
                    return False
    return True


def sigma_chain_map(sigma, max_arity: int, max_degree: int) -> bool:
    """``d sigma(e; u) = sigma(de; u) + (-1)^{|e|} sum_i +- sigma(e; .., du_i, ..)``."""
    for r in range(1, max_arity + 1):
        for t in range(max_degree + 1):
            for e in E.basis(r, t):
                for us in product(range(3), repeat=r):
                    lhs: Dict[int, int] = {}
                    for u, c in sigma.evaluate(e, us).items():
                        for u2, c2 in interval_differential(u).items():
                            lhs[u2] = lhs.get(u2, 0) + c * c2
                    rhs: Dict[int, int] = {}
                    for f, c in E.e_differential(e).items():
                        for u, c2 in sigma.evaluate(f, us).items():
                            rhs[u] = rhs.get(u, 0) + c * c2
                    passed = 0
                    for m in range(r):
                        for u2, c2 in interval_differential(us[m]).items():
                            us2 = us[:m] + (u2,) + us[m + 1:]
                            s = (-1) ** (t + passed)
                            for u, c in sigma.evaluate(e, us2).items():
                                rhs[u] = rhs.get(u, 0) + s * c2 * c
                        passed += N_DEGREE[us[m]]
                    if _clean(lhs) != _clean(rhs):
                        return False
    return True


def diagonal_chain_map(calc: TreeCalculus, diag, max_arity: int, max_grade: int) -> bool:
    """``d(rho(x)) = rho(dx)`` with ``d(T, pi) = (dT, pi) + (-1)^{|T|} (T, d pi)``."""
    for n in range(1, max_arity + 1):
        for g in range(max_grade + 1):
            for t in bar_basis(calc, n, g):
                try:
                    lhs: Dict = {}
                    for (t2, pi), c in diag.rho(t).items():
                        for t3, c3 in bar_differential(calc, t2).items():
                            lhs[(t3, pi)] = lhs.get((t3, pi), 0) + c * c3
                        s = -1 if calc.degree(t2) % 2 else 1
                        for pi2, c4 in E.e_differential(pi).items():
                            lhs[(t2, pi2)] = lhs.get((t2, pi2), 0) + s * c * c4
                    rhs: Dict = {}
                    for t3, c3 in bar_differential(calc, t).items():
                        for k, c in diag.rho(t3).items():
                            rhs[k] = rhs.get(k, 0) + c * c3
                except ProviderRangeError:
                    continue
                if _clean(lhs) != _clean(rhs):
                    return False
    return True


def interval_bullets(max_len: int) -> bool:
    """The identity permutation on interval cochains, checked against its description."""
    sigma = IntervalAction()
    for r in range(1, max_len + 1):
        e = E.unit(r)
        for us in product(range(3), repeat=r):
            if all(u == 0 for u in us):
                want = {0: 1}
            elif all(u == 1 for u in us):
                want = {1: 1}
            elif us.count(2) == 1 and list(us) == sorted(us, key=lambda u: (0, 2, 1).index(u)):
                want = {2: 1}
            else:
                want = {}
            if sigma.evaluate(e, us) != want or cup_identity(us) != want:
                return False
    return True


def delta_square_zero(name: str) -> bool:
    prob = build_problem(fixtures.load(name))
    dc = DerivationComplex(prob.A, prob.B, prob.alpha, prob.beta, prob.f0)
    R = prob.arity_cutoff
    for k in (1, 0, -1):
        m1, _, _ = dc.matrix(prob.A.basis_grade(1, R), prob.A.basis_grade(2, R), k)
        m2, _, _ = dc.matrix(prob.A.basis_grade(2, R), prob.A.basis_grade(3, R), k - 1)
        if not m2.matmul(m1).is_zero():
            return False
    return True


def fixture_verdict(name: str, kind: str) -> str:
    prob = build_problem(fixtures.load(name))
    if kind == "realize":
        return realize(prob.A, prob.B, prob.alpha, prob.beta, prob.f0, prob.grade_cutoff, prob.arity_cutoff).verdict
    return homotopy(prob.A, prob.B, prob.alpha, prob.beta, prob.lower, prob.upper,
                    prob.grade_cutoff, prob.arity_cutoff, prob.sigma, prob.diag).verdict


def run() -> List[Tuple[str, bool]]:
    checks: List[Tuple[str, Callable[[], bool]]] = [
        ("e_differential squares to zero", lambda: e_square_zero(3, 3)),
        ("bar differential squares to zero (Com)", lambda: bar_square_zero(Com(), 3, 3)),
        ("bar differential squares to zero (Ass)", lambda: bar_square_zero(Ass(), 3, 2)),
        ("interval action in degree 0", lambda: interval_bullets(4)),
        ("interval action is a chain map", lambda: sigma_chain_map(IntervalAction(), 3, 1)),
        ("diagonal is a chain map", lambda: diagonal_chain_map(TreeCalculus(Com()), DiagonalProvider(TreeCalculus(Com())), 3, 3)),
        ("derivation differential squares to zero", lambda: delta_square_zero("com-strict")),
        ("com-strict realizes", lambda: fixture_verdict("com-strict", "realize") == "REALIZED"),
        ("massey-gf2 is obstructed", lambda: fixture_verdict("massey-gf2", "realize") == "OBSTRUCTED"),
        ("homotopy-coboundary is homotopic", lambda: fixture_verdict("homotopy-coboundary", "homotopy") == "HOMOTOPIC"),
        ("homotopy-gf2 is obstructed", lambda: fixture_verdict("homotopy-gf2", "homotopy") == "OBSTRUCTED"),
    ]
    return [(name, bool(fn())) for name, fn in checks]
