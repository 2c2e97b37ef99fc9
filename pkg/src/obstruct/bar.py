"""The bar cooperad ``D = B(P (x) E)``: truncated bases and the bar differential.

A bar element is a normal-form tree (see :mod:`obstruct.trees`).  Its weight
is the number of vertices, its grade the weight plus the total
Barratt-Eccles degree, and its homological degree the weight plus the sum of
label degrees.
"""

from __future__ import annotations

from typing import Dict, List, Tuple

from . import trees as T
from .trees import TreeCalculus


def bar_basis(calc: TreeCalculus, arity: int, grade: int) -> List[object]:
    """Normal-form basis trees of ``D(arity)`` in exactly the given grade."""
    if arity < 1 or grade < 0:
        return []
    return list(calc.trees(tuple(range(1, arity + 1)), grade))


def bar_basis_upto(calc: TreeCalculus, arity_cutoff: int, grade_cutoff: int) -> Dict[Tuple[int, int], List[object]]:
    return {(n, g): bar_basis(calc, n, g)
            for n in range(1, arity_cutoff + 1) for g in range(grade_cutoff + 1)}


def _replace(t, path, new):
    if not path:
        return new
    lab, kids = t
    k = path[0]
    return (lab, kids[:k] + (_replace(kids[k], path[1:], new),) + kids[k + 1:])


def _node(t, path):
    for k in path:
        t = t[1][k]
    return t


def bar_differential(calc: TreeCalculus, t) -> Dict[object, int]:
    """Internal part plus edge contractions, with integer coefficients.

    The internal part applies ``-(label differential)`` at each vertex; the
    edge part composes a vertex with one of its vertex children through
    ``o_i`` with the factor ``(-1)^{|q_v|}``.  Koszul signs come from the
    pre-order reading.
    """
    out: Dict[object, int] = {}
    if T.is_leaf(t):
        return out

    def add(tree, c):
        s, nt = calc.normalize(tree)
        v = out.get(nt, 0) + s * c
        if v:
            out[nt] = v
        else:
            out.pop(nt, None)

    before = 0
    for path, sdeg in calc.symbols(t):
        node = _node(t, path)
        lab, kids = node
        pre = -1 if before % 2 else 1
        # internal differential of the label
        for lab2, c in calc.label_differential(lab).items():
            add(_replace(t, path, (lab2, kids)), -pre * c)
        # contraction of each edge to a vertex child
        passed = 0
        qv = calc.label_degree(lab)
        for i, u in enumerate(kids, 1):
            if not T.is_leaf(u):
                su = calc.symbol_degree(u[0])
                s = pre * (-1 if (su * passed) % 2 else 1) * (-1 if qv % 2 else 1)
                newkids = kids[: i - 1] + u[1] + kids[i:]
                for lab2, c in calc.label_compose(lab, i, u[0]).items():
                    add(_replace(t, path, (lab2, newkids)), s * c)
            passed += calc.degree(u)
        before += sdeg
    return out


def apply_linear(calc: TreeCalculus, chain: Dict[object, int]) -> Dict[object, int]:
    """Extend :func:`bar_differential` linearly to a chain."""
    out: Dict[object, int] = {}
    for t, c in chain.items():
        for t2, c2 in bar_differential(calc, t).items():
            v = out.get(t2, 0) + c * c2
            if v:
                out[t2] = v
            else:
                out.pop(t2, None)
    return out
