"""The cofree coalgebra ``D(A)``, coderivations and coalgebra morphisms.

Elements of ``D(A)`` are chains over canonical keys ``(tree, inputs)`` where
``inputs`` are algebra basis indices placed on leaves ``1..n``.  A homotopy
algebra structure is a degree ``-1`` map ``alpha: D(A) -> A`` stored on
canonical keys (see :class:`Cochain`); the coderivation it determines is
computed from cuts of the tree below one vertex, and coalgebra morphisms from
cuts along arbitrary lower subtrees.
"""

from __future__ import annotations

from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import perms
from . import trees as T
from .bar import bar_basis, bar_differential
from .linalg import Field, InputError, vec_add
from .trees import OrbitCanonicalizer, TreeCalculus

Vector = Dict[int, object]
Chain = Dict[tuple, object]


class Algebra:
    """A finite graded vector space with optional differential (degree -1)."""

    def __init__(self, field: Field, degrees: Sequence[int], names: Optional[Sequence[str]] = None,
                 differential: Optional[Dict[int, Vector]] = None):
        self.field = field
        self.degrees = [int(d) for d in degrees]
        self.names = list(names) if names is not None else [f"e{i}" for i in range(len(self.degrees))]
        if len(self.names) != len(self.degrees) or len(set(self.names)) != len(self.names):
            raise InputError("algebra basis names must be unique and match the degrees")
        self.differential = {}
        for i, v in (differential or {}).items():
            clean = {j: field.reduce(c) for j, c in v.items() if field.reduce(c) != 0}
            for j in clean:
                if self.degrees[j] != self.degrees[i] - 1:
                    raise InputError(f"differential of {self.names[i]} is not of degree -1")
            if clean:
                self.differential[i] = clean

    @property
    def dim(self) -> int:
        return len(self.degrees)

    def degree_map(self) -> Dict[int, int]:
        return dict(enumerate(self.degrees))

    def d(self, i: int) -> Vector:
        return self.differential.get(i, {})

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InputError(f"unknown basis element {name!r}") from None


class Cochain:
    """A homogeneous map ``D(A) -> target`` stored on canonical keys.

    ``degree`` is the homological degree of the map.  Keys that are absent
    evaluate to zero.  ``grades`` records which grades the map is defined on;
    evaluating elsewhere raises an error when ``strict_grades`` is set.
    """

    def __init__(self, source: "CofreeCoalgebra", degree: int, values: Optional[Dict[tuple, Vector]] = None,
                 grades: Optional[set] = None, strict_grades: bool = False):
        self.source = source
        self.degree = degree
        self.values: Dict[tuple, Vector] = {}
        self.grades = set(grades) if grades is not None else None
        self.strict_grades = strict_grades
        for key, vec in (values or {}).items():
            self.set(key, vec)

    def set(self, key, vec: Vector) -> None:
        f = self.source.field
        res = self.source.canon.canonical(*key)
        if res is None:
            return
        s, ck = res
        clean = {b: f.reduce(s * c) for b, c in vec.items()}
        clean = {b: c for b, c in clean.items() if c != 0}
        if clean:
            self.values[ck] = clean
        else:
            self.values.pop(ck, None)

    def evaluate(self, t, inputs: Tuple[int, ...]) -> Vector:
        if self.strict_grades and self.grades is not None:
            g = T.grade(t)
            if g not in self.grades:
                raise InputError(f"map component in grade {g} is missing")
        res = self.source.canon.canonical(t, inputs)
        if res is None:
            return {}
        s, key = res
        vec = self.values.get(key)
        if not vec:
            return {}
        if s == 1:
            return vec
        f = self.source.field
        return {b: f.reduce(-c) for b, c in vec.items()}

    def max_grade(self) -> int:
        return max((T.grade(k[0]) for k in self.values), default=0)

    def restricted(self, pred) -> "Cochain":
        out = Cochain(self.source, self.degree, grades=self.grades)
        out.values = {k: v for k, v in self.values.items() if pred(k)}
        return out


# -- cuts -----------------------------------------------------------------------

def vertex_paths(t) -> List[tuple]:
    out: List[tuple] = []

    def walk(x, path):
        if T.is_leaf(x):
            return
        out.append(path)
        for k, c in enumerate(x[1]):
            walk(c, path + (k,))

    walk(t, ())
    return out


def lower_sets(t) -> List[frozenset]:
    """All ancestor-closed vertex sets, the empty set first."""
    def sub(x, path) -> List[frozenset]:
        if T.is_leaf(x):
            return [frozenset()]
        opts = [frozenset()]
        kid_opts = [sub(c, path + (k,)) for k, c in enumerate(x[1])]
        for combo in product(*kid_opts):
            s = {path}
            for c in combo:
                s |= c
            opts.append(frozenset(s))
        return opts

    return sub(t, ())


def quadratic_lowers(t) -> List[Tuple[tuple, frozenset]]:
    """For each vertex ``u``: the lower set of vertices outside the subtree at ``u``."""
    paths = vertex_paths(t)
    return [(u, frozenset(p for p in paths if p[: len(u)] != u)) for u in paths]


class Split:
    """A tree with inputs cut along a lower vertex set.

    ``lower`` is the tree ``T'`` with leaves numbered by component; ``groups``
    lists ``(U, inputs, input_degree)`` for each upper component in the order
    of smallest leaves; ``sign`` rearranges ``T (x) a`` into
    ``T' (x) (U_1 (x) a_{L_1}) (x) (U_2 (x) a_{L_2}) ...``.
    """

    __slots__ = ("lower", "groups", "sign", "lower_degree")

    def __init__(self, lower, groups, sign, lower_degree):
        self.lower = lower
        self.groups = groups
        self.sign = sign
        self.lower_degree = lower_degree


def split(calc: TreeCalculus, degs: Dict[int, int], t, inputs: Tuple[int, ...], lower: frozenset) -> Split:
    atoms_deg: List[int] = []
    lower_atoms: List[int] = []
    comps: List[Tuple[object, int]] = []  # (subtree, atom index)

    def walk(x, path, parent_in_lower):
        if parent_in_lower and (T.is_leaf(x) or path not in lower):
            comps.append((x, len(atoms_deg)))
            atoms_deg.append(calc.degree(x))
            return
        lab, kids = x
        lower_atoms.append(len(atoms_deg))
        atoms_deg.append(calc.symbol_degree(lab))
        for k, c in enumerate(kids):
            walk(c, path + (k,), True)

    if not lower:
        comps.append((t, 0))
        atoms_deg.append(calc.degree(t))
    else:
        walk(t, (), True)
    n_atoms = len(atoms_deg)
    atoms_deg.extend(degs[a] for a in inputs)
    comp_leaves = [T.leaves(c) for c, _ in comps]
    order_c = sorted(range(len(comps)), key=lambda j: min(comp_leaves[j]))
    target: List[int] = list(lower_atoms)
    groups = []
    rank_of: Dict[int, int] = {}
    for r, j in enumerate(order_c, 1):
        sub, ai = comps[j]
        target.append(ai)
        ls = sorted(comp_leaves[j])
        target.extend(n_atoms + l - 1 for l in ls)
        renum = {l: k for k, l in enumerate(ls, 1)}
        ins = tuple(inputs[l - 1] for l in ls)
        groups.append((T.relabel(sub, renum), ins, atoms_deg[ai] + sum(degs[a] for a in ins)))
        rank_of[id(sub)] = r
    sign = perms.koszul_sign(atoms_deg, target)

    def rebuild(x, path):
        if T.is_leaf(x) or path not in lower:
            return rank_of[id(x)]
        return (x[0], tuple(rebuild(c, path + (k,)) for k, c in enumerate(x[1])))

    low = rebuild(t, ()) if lower else 1
    low_deg = sum(atoms_deg[i] for i in lower_atoms)
    return Split(low, groups, sign, low_deg)


class CofreeCoalgebra:
    """``D(A)`` for a fixed operad and graded algebra ``A``."""

    def __init__(self, calc: TreeCalculus, algebra: Algebra):
        self.calc = calc
        self.algebra = algebra
        self.field = algebra.field
        self.degs = algebra.degree_map()
        self.canon = OrbitCanonicalizer(calc, self.degs, algebra.field.characteristic == 2)
        self._basis: Dict[Tuple[int, int], List[tuple]] = {}
        self._split_cache: Dict[tuple, object] = {}
        # optional ``(arity, grade) -> trees`` hook, used by the on-disk basis cache
        self.tree_source: Optional[Callable[[int, int], List[object]]] = None

    # -- basis ------------------------------------------------------------
    def basis(self, arity: int, grade: int, trees: Optional[List[object]] = None) -> List[tuple]:
        """Canonical orbit representatives of nonzero elements."""
        key = (arity, grade)
        if key in self._basis:
            return self._basis[key]
        if trees is None:
            if self.tree_source is not None:
                trees = self.tree_source(arity, grade)
            else:
                trees = bar_basis(self.calc, arity, grade)
        seen = set()
        out = []
        for t in trees:
            for ins in product(range(self.algebra.dim), repeat=arity):
                res = self.canon.canonical(t, ins)
                if res is None or res[1] in seen:
                    continue
                seen.add(res[1])
                out.append(res[1])
        self._basis[key] = out
        return out

    def basis_grade(self, grade: int, arity_cutoff: int) -> List[tuple]:
        out = []
        for n in range(1, arity_cutoff + 1):
            out.extend(self.basis(n, grade))
        return out

    def key_degree(self, key) -> int:
        return self.canon.degree(key)

    # -- chains -------------------------------------------------------------
    def add_term(self, chain: Chain, t, inputs, coeff) -> None:
        res = self.canon.canonical(t, inputs)
        if res is None:
            return
        s, key = res
        vec_add(chain, key, s * coeff, self.field)

    def d0(self, t, inputs) -> Chain:
        """Bar differential plus the differential of ``A`` on the inputs."""
        out: Chain = {}
        for t2, c in bar_differential(self.calc, t).items():
            self.add_term(out, t2, inputs, c)
        if self.algebra.differential:
            s = -1 if self.calc.degree(t) % 2 else 1
            passed = 0
            for i, a in enumerate(inputs):
                for b, c in self.algebra.d(a).items():
                    sg = s * (-1 if passed % 2 else 1)
                    self.add_term(out, t, inputs[:i] + (b,) + inputs[i + 1:], sg * c)
                passed += self.degs[a]
        return out

    def quadratic_splits(self, t, inputs) -> List[Tuple[tuple, Split]]:
        key = ("q", t, inputs)
        hit = self._split_cache.get(key)
        if hit is None:
            hit = [(u, split(self.calc, self.degs, t, inputs, low)) for u, low in quadratic_lowers(t)]
            self._split_cache[key] = hit
        return hit

    def total_splits(self, t, inputs) -> List[Split]:
        key = ("t", t, inputs)
        hit = self._split_cache.get(key)
        if hit is None:
            hit = [split(self.calc, self.degs, t, inputs, low) for low in lower_sets(t)]
            self._split_cache[key] = hit
        return hit

    def coderivation(self, alpha: "Cochain", t, inputs) -> Chain:
        """``partial_alpha``: apply ``alpha`` to the subtree above each vertex."""
        out: Chain = {}
        for _, sp in self.quadratic_splits(t, inputs):
            for j, (U, ins, xdeg) in enumerate(sp.groups):
                if T.is_leaf(U):
                    continue
                before = sp.lower_degree + sum(g[2] for g in sp.groups[:j])
                sg = sp.sign * (-1 if (alpha.degree * before) % 2 else 1)
                val = alpha.evaluate(U, ins)
                if not val:
                    continue
                base = [g[1][0] for g in sp.groups]
                for b, c in val.items():
                    new = tuple(base[:j]) + (b,) + tuple(base[j + 1:])
                    self.add_term(out, sp.lower, new, sg * c)
        return out

    def differential(self, alpha: Optional["Cochain"], t, inputs) -> Chain:
        out = self.d0(t, inputs)
        if alpha is not None:
            for k, c in self.coderivation(alpha, t, inputs).items():
                vec_add(out, k, c, self.field)
        return out

    def apply_chain(self, func: Callable[[object, tuple], Chain], chain: Chain) -> Chain:
        out: Chain = {}
        for (t, ins), c in chain.items():
            for k, c2 in func(t, ins).items():
                vec_add(out, k, c * c2, self.field)
        return out

    def evaluate_chain(self, m: "Cochain", chain: Chain) -> Vector:
        out: Vector = {}
        for (t, ins), c in chain.items():
            for b, c2 in m.evaluate(t, ins).items():
                vec_add(out, b, c * c2, self.field)
        return out


def morphism_image(src: CofreeCoalgebra, tgt: CofreeCoalgebra, f: Cochain, t, inputs) -> Chain:
    """``phi_f``: cut along every lower subtree and apply ``f`` to each upper part."""
    out: Chain = {}
    for sp in src.total_splits(t, inputs):
        vals = []
        for U, ins, _ in sp.groups:
            v = f.evaluate(U, ins)
            if not v:
                break
            vals.append(list(v.items()))
        else:
            for combo in product(*vals):
                c = sp.sign
                bs = []
                for b, cb in combo:
                    c *= cb
                    bs.append(b)
                tgt.add_term(out, sp.lower, tuple(bs), c)
    return out


# -- structure and morphism checks ---------------------------------------------

def structure_residual(C: CofreeCoalgebra, alpha: Cochain, t, inputs) -> Vector:
    """Corestriction of the square of ``partial_D + d_A + partial_alpha``."""
    f = C.field
    out: Vector = {}
    for b, c in alpha.evaluate(t, inputs).items():
        for b2, c2 in C.algebra.d(b).items():
            vec_add(out, b2, c * c2, f)
    chain = C.differential(alpha, t, inputs)
    for b, c in C.evaluate_chain(alpha, chain).items():
        vec_add(out, b, c, f)
    return out


def validate_structure(C: CofreeCoalgebra, alpha: Cochain, grade_cutoff: int, arity_cutoff: int) -> List[Tuple[tuple, Vector]]:
    """Nonzero residuals of the structure equation on all basis terms."""
    for (t, ins) in alpha.values:
        if T.is_leaf(t):
            raise InputError("structure map must vanish on A")
    report = []
    for g in range(1, grade_cutoff + 1):
        for key in C.basis_grade(g, arity_cutoff):
            r = structure_residual(C, alpha, *key)
            if r:
                report.append((key, r))
    return report


def square_residual(C: CofreeCoalgebra, alpha: Cochain, grade_cutoff: int, arity_cutoff: int) -> List[Tuple[tuple, Chain]]:
    """Terms on which the full square ``(partial_D + partial_alpha)^2`` is nonzero."""
    report = []
    for g in range(0, grade_cutoff + 1):
        for key in C.basis_grade(g, arity_cutoff):
            once = C.differential(alpha, *key)
            twice = C.apply_chain(lambda t, i: C.differential(alpha, t, i), once)
            if twice:
                report.append((key, twice))
    return report


def morphism_residual(A: CofreeCoalgebra, B: CofreeCoalgebra, alpha: Cochain, beta: Cochain,
                      f: Cochain, t, inputs) -> Vector:
    """``f o partial_A - beta o phi_f - d_B o f`` at one element."""
    fld = A.field
    out: Vector = dict(A.evaluate_chain(f, A.differential(alpha, t, inputs)))
    img = morphism_image(A, B, f, t, inputs)
    for b, c in B.evaluate_chain(beta, img).items():
        vec_add(out, b, -c, fld)
    for b, c in f.evaluate(t, inputs).items():
        for b2, c2 in B.algebra.d(b).items():
            vec_add(out, b2, -c * c2, fld)
    return out


def check_morphism(A: CofreeCoalgebra, B: CofreeCoalgebra, alpha: Cochain, beta: Cochain, f: Cochain,
                   grade_cutoff: int, arity_cutoff: int) -> List[Tuple[tuple, Vector]]:
    report = []
    for g in range(0, grade_cutoff + 1):
        for key in A.basis_grade(g, arity_cutoff):
            r = morphism_residual(A, B, alpha, beta, f, *key)
            if r:
                report.append((key, r))
    return report


# -- strict structures -----------------------------------------------------------

def corolla(label, r: int):
    return (label, tuple(range(1, r + 1)))


def strict_structure(C: CofreeCoalgebra, action: Callable[[object, Tuple[int, ...]], Vector],
                     arity_cutoff: int) -> Cochain:
    """The structure map of a strict P-algebra.

    ``action(p, inputs)`` evaluates the operation ``p`` on basis inputs.  The
    structure map is supported on corollas labeled ``(p, (w,))`` with a single
    permutation and sends them to ``action(p, inputs)``: the augmentation of
    the Barratt-Eccles operad identifies all permutations of degree zero.
    """
    alpha = Cochain(C, -1)
    P = C.calc.P
    for r in range(2, arity_cutoff + 1):
        for p in P.basis(r):
            lab = (p, (perms.identity(r),))
            t = corolla(lab, r)
            for ins in product(range(C.algebra.dim), repeat=r):
                res = C.canon.canonical(t, ins)
                if res is None:
                    continue
                s, key = res
                if key in alpha.values:
                    continue
                val = action(p, ins)
                if val:
                    alpha.values[key] = {b: C.field.reduce(s * c) for b, c in val.items() if C.field.reduce(c)}
    return alpha
