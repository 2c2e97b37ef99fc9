"""Labeled rooted trees, normal forms and orbit representatives.

Trees are nested tuples.  A leaf is an ``int`` (its leaf number); a vertex is
``(label, children)`` with ``label = (p, e)``, ``p`` an operation of the
operad P and ``e`` a Barratt-Eccles tuple of the same arity.  A tree is in
*normal form* when the children of every vertex are sorted by their smallest
leaf; with distinct leaf numbers that picks one planar representative.

Signs follow the Koszul rule for the pre-order reading of a tree: each vertex
contributes a symbol of degree ``|p| + |e| + 1`` (one suspension per vertex),
leaves contribute nothing.  An element of ``D(n) (x) A^n`` is read as the tree
symbols followed by the inputs ``a_1 .. a_n`` in leaf order.
"""

from __future__ import annotations

from itertools import combinations
from typing import Dict, Iterator, List, Optional, Tuple

from . import barratt_eccles as E
from . import perms
from .linalg import InputError
from .operads import Operad

Tree = object  # int | (label, tuple-of-trees)
UNIT: Tree = 1


def is_leaf(t) -> bool:
    return isinstance(t, int)


def leaves(t) -> Tuple[int, ...]:
    if is_leaf(t):
        return (t,)
    out: List[int] = []
    for c in t[1]:
        out.extend(leaves(c))
    return tuple(out)


def min_leaf(t) -> int:
    if is_leaf(t):
        return t
    return min(min_leaf(c) for c in t[1])


def arity(t) -> int:
    return len(leaves(t))


def weight(t) -> int:
    if is_leaf(t):
        return 0
    return 1 + sum(weight(c) for c in t[1])


def grade(t) -> int:
    """Bar weight plus total Barratt-Eccles degree: the sum of tuple lengths."""
    if is_leaf(t):
        return 0
    return len(t[0][1]) + sum(grade(c) for c in t[1])


def e_degree(t) -> int:
    return grade(t) - weight(t)


def relabel(t, mapping) -> Tree:
    """Apply ``leaf -> mapping[leaf]`` without re-normalizing."""
    if is_leaf(t):
        return mapping[t]
    return (t[0], tuple(relabel(c, mapping) for c in t[1]))


def shape(t):
    """The tree with labels forgotten (vertices become ``None``)."""
    if is_leaf(t):
        return t
    return (None, tuple(shape(c) for c in t[1]))


def encode(t, operad: Operad):
    """JSON form: ``[label, child, ...]`` with leaves as integers."""
    if is_leaf(t):
        return t
    p, e = t[0]
    return [[operad.encode(p), [list(w) for w in e]]] + [encode(c, operad) for c in t[1]]


def decode(obj, operad: Operad):
    if isinstance(obj, int):
        return obj
    if not isinstance(obj, list) or len(obj) < 3:
        raise InputError(f"malformed tree expression {obj!r}")
    lab = obj[0]
    if not isinstance(lab, list) or len(lab) != 2:
        raise InputError(f"malformed vertex label {lab!r}")
    p = operad.decode(lab[0])
    e = tuple(tuple(w) for w in lab[1])
    kids = tuple(decode(c, operad) for c in obj[1:])
    if operad.arity(p) != len(kids) or any(len(w) != len(kids) for w in e):
        raise InputError(f"label arity does not match {len(kids)} children in {obj!r}")
    if not E.is_normalized(e) or any(sorted(w) != list(range(1, len(kids) + 1)) for w in e):
        raise InputError(f"invalid Barratt-Eccles tuple {lab[1]!r}")
    return (p, e), kids


class TreeCalculus:
    """Label arithmetic of ``P (x) E`` and tree operations built on it."""

    def __init__(self, operad: Operad):
        self.P = operad
        self._norm_cache: Dict[object, Tuple[int, object]] = {}

    # -- labels ---------------------------------------------------------
    def label_degree(self, lab) -> int:
        """Degree of the unsuspended label ``p (x) e``."""
        return self.P.degree(lab[0]) + len(lab[1]) - 1

    def symbol_degree(self, lab) -> int:
        return self.label_degree(lab) + 1

    def label_reslot(self, lab, tau) -> Tuple[int, tuple]:
        s, p = self.P.reslot(lab[0], tau)
        return s, (p, E.reslot(lab[1], tau))

    def label_compose(self, a, i, b) -> Dict[tuple, int]:
        """``(p (x) e) o_i (p' (x) e')`` with the sign of passing ``e`` over ``p'``."""
        pc = self.P.compose(a[0], i, b[0])
        if not pc:
            return {}
        ec = E.e_compose(a[1], i, b[1])
        s = -1 if (len(a[1]) - 1) * self.P.degree(b[0]) % 2 else 1
        out: Dict[tuple, int] = {}
        for p, c in pc.items():
            for e, d in ec.items():
                out[(p, e)] = out.get((p, e), 0) + s * c * d
        return {k: v for k, v in out.items() if v}

    def label_differential(self, lab) -> Dict[tuple, int]:
        s = -1 if self.P.degree(lab[0]) % 2 else 1
        return {(lab[0], e): s * c for e, c in E.e_differential(lab[1]).items()}

    # -- tree degrees -----------------------------------------------------
    def degree(self, t) -> int:
        if is_leaf(t):
            return 0
        return self.symbol_degree(t[0]) + sum(self.degree(c) for c in t[1])

    def symbols(self, t) -> List[Tuple[tuple, int]]:
        """Pre-order list of ``(path, symbol degree)`` for the vertices of ``t``."""
        out: List[Tuple[tuple, int]] = []

        def walk(x, path):
            if is_leaf(x):
                return
            out.append((path, self.symbol_degree(x[0])))
            for k, c in enumerate(x[1]):
                walk(c, path + (k,))

        walk(t, ())
        return out

    # -- normal form ------------------------------------------------------
    def normalize(self, t) -> Tuple[int, Tree]:
        """Sort children by smallest leaf everywhere; returns ``(sign, tree)``."""
        if is_leaf(t):
            return 1, t
        hit = self._norm_cache.get(t)
        if hit is not None:
            return hit
        lab, kids = t
        sgn = 1
        nk = []
        for c in kids:
            s, c2 = self.normalize(c)
            sgn *= s
            nk.append(c2)
        mins = [min_leaf(c) for c in nk]
        order = sorted(range(len(nk)), key=mins.__getitem__)
        if order != list(range(len(nk))):
            tau = tuple(k + 1 for k in order)
            s, lab = self.label_reslot(lab, tau)
            sgn *= s
            sgn *= perms.koszul_sign([self.degree(c) for c in nk], order)
            nk = [nk[k] for k in order]
        res = (sgn, (lab, tuple(nk)))
        self._norm_cache[t] = res
        return res

    def is_normal(self, t) -> bool:
        if is_leaf(t):
            return True
        mins = [min_leaf(c) for c in t[1]]
        return mins == sorted(mins) and all(self.is_normal(c) for c in t[1])

    # -- grafting ---------------------------------------------------------
    def graft(self, outer, leaf_index: int, inner) -> Tuple[int, Tree]:
        """Graft ``inner`` onto leaf ``leaf_index`` of ``outer``.

        Leaves are renumbered order-preservingly; the sign is the Koszul sign of
        moving the inner symbols into the pre-order position of the leaf.
        """
        n_out = arity(outer)
        if not 1 <= leaf_index <= n_out:
            raise InputError(f"leaf index {leaf_index} out of range 1..{n_out}")
        s_in = arity(inner)
        shift_inner = {j: j + leaf_index - 1 for j in leaves(inner)}
        inner2 = relabel(inner, shift_inner)
        after = 0  # degree of outer symbols after the grafting leaf in pre-order
        seen = [False]

        def walk(x):
            nonlocal after
            if is_leaf(x):
                if x == leaf_index:
                    seen[0] = True
                    return inner2
                return x + (s_in - 1 if x > leaf_index else 0)
            if seen[0]:
                after += self.symbol_degree(x[0])
            return (x[0], tuple(walk(c) for c in x[1]))

        res = walk(outer)
        sgn = -1 if (after * self.degree(inner)) % 2 else 1
        s2, res = self.normalize(res)
        return sgn * s2, res

    # -- enumeration -------------------------------------------------------
    def trees(self, leafset: Tuple[int, ...], grade_: int) -> Iterator[Tree]:
        """All normal-form trees on ``leafset`` of exactly the given grade."""
        if len(leafset) == 1:
            if grade_ == 0:
                yield leafset[0]
            return
        if grade_ <= 0:
            return
        n = len(leafset)
        for r in range(2, n + 1):
            for blocks in _ordered_partitions(leafset, r):
                for t_root in range(0, grade_):
                    rest = grade_ - 1 - t_root
                    for kid_grades in _compositions(rest, blocks):
                        kid_lists = [list(self.trees(b, g)) for b, g in zip(blocks, kid_grades)]
                        if any(not k for k in kid_lists):
                            continue
                        for p in self.P.basis(r):
                            for e in E.basis(r, t_root):
                                for kids in _product(kid_lists):
                                    yield ((p, e), tuple(kids))


def _ordered_partitions(items: Tuple[int, ...], r: int):
    """Set partitions into ``r`` blocks, blocks sorted by their minimum."""
    items = tuple(items)
    if r == 1:
        yield [items]
        return
    first, rest = items[0], items[1:]
    # the block containing the first element
    for k in range(0, len(rest) + 1):
        for comb in combinations(rest, k):
            block = (first,) + comb
            remaining = tuple(x for x in rest if x not in comb)
            if len(remaining) < r - 1:
                continue
            for tail in _ordered_partitions(remaining, r - 1):
                yield [block] + tail


def _compositions(total: int, blocks) -> Iterator[Tuple[int, ...]]:
    """Grade assignments to blocks: singletons get 0, larger blocks at least 1."""
    mins = [0 if len(b) == 1 else 1 for b in blocks]
    free = [len(b) > 1 for b in blocks]

    def rec(k, left):
        if k == len(blocks):
            if left == 0:
                yield ()
            return
        if not free[k]:
            for t in rec(k + 1, left):
                yield (0,) + t
            return
        for g in range(mins[k], left + 1):
            for t in rec(k + 1, left - g):
                yield (g,) + t

    yield from rec(0, total)


def _product(lists):
    if not lists:
        yield []
        return
    for x in lists[0]:
        for rest in _product(lists[1:]):
            yield [x] + rest


# -- D(A) elements: trees with inputs ------------------------------------------

class OrbitCanonicalizer:
    """Orbit representatives of ``D(n) (x) A^n`` under the diagonal Sigma_n action.

    ``input_degrees`` maps algebra basis ids to degrees.  ``char2`` disables the
    zero test for orbits that contain an element together with its negative.
    """

    def __init__(self, calc: TreeCalculus, input_degrees: Dict[int, int], char2: bool):
        self.calc = calc
        self.deg = input_degrees
        self.char2 = char2
        self._cache: Dict[tuple, Optional[Tuple[int, tuple]]] = {}

    def act(self, sigma: perms.Perm, t, inputs: Tuple[int, ...]) -> Tuple[int, tuple]:
        """``sigma . (t (x) a)``: leaf ``i`` becomes leaf ``sigma(i)``."""
        n = len(inputs)
        mapping = {i: sigma[i - 1] for i in range(1, n + 1)}
        sinv = perms.inverse(sigma)
        new_inputs = tuple(inputs[sinv[k] - 1] for k in range(n))
        s = perms.koszul_sign([self.deg[a] for a in inputs], [sinv[k] - 1 for k in range(n)])
        s2, t2 = self.calc.normalize(relabel(t, mapping))
        return s * s2, (t2, new_inputs)

    def canonical(self, t, inputs: Tuple[int, ...]) -> Optional[Tuple[int, tuple]]:
        """``(sign, key)`` with ``t (x) a = sign * key`` in coinvariants, or None if zero."""
        key0 = (t, inputs)
        hit = self._cache.get(key0, False)
        if hit is not False:
            return hit
        n = len(inputs)
        s0, t0 = self.calc.normalize(t)
        signs: Dict[tuple, int] = {}
        zero = False
        for sigma in perms.all_perms(n):
            s, key = self.act(sigma, t0, inputs)
            prev = signs.get(key)
            if prev is None:
                signs[key] = s
            elif prev != s and not self.char2:
                zero = True
                break
        if zero:
            res = None
        else:
            best = min(signs, key=repr)
            # t0 (x) a = s * best  when  best = s * sigma.(t0 (x) a) ... signs[best] = s
            res = (s0 * signs[best], best)
        # an orbit element and its representative share the sign bookkeeping
        self._cache[key0] = res
        return res

    def degree(self, key) -> int:
        t, inputs = key
        return self.calc.degree(t) + sum(self.deg[a] for a in inputs)
