"""Induced homology actions, the derivation complex and the realization solver.

Notation: ``A`` and ``B`` are :class:`~obstruct.coalgebra.CofreeCoalgebra`
instances, ``alpha`` and ``beta`` structure maps, ``f0`` a linear map
``A -> B`` given as ``{a: vector}``.  A map ``g: D(A) -> B`` of degree ``k``
that lives on one grade has derivation differential

    delta(g) = g o (partial_D + partial_alpha1) - (-1)^k (d_B o g + beta1 o Psi_g)

where ``Psi_g`` cuts one upper part off a grade-one root, applies ``g`` to it
and ``f0`` to the remaining inputs.  For ``k = 0`` this is exactly the part of
the morphism equation that is linear in the unknown top component.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import trees as T
from .coalgebra import (Algebra, Cochain, CofreeCoalgebra, Vector, check_morphism,
                        morphism_residual, validate_structure)
from .linalg import (ComplexConsistencyError, InputError, NO_SOLUTION, SparseMatrix,
                     left_kernel_witness, rank, solve_linear, subquotient_dims, vec_add)


# -- homology --------------------------------------------------------------------

@dataclass
class HomologyData:
    homology: Algebra
    section: List[Vector]          # cycle representative in A for each homology basis vector
    action: Dict[tuple, Vector]    # (p, inputs) -> vector in H


def _homology_projector(A: Algebra, section: List[Vector]):
    """Coordinates of a cycle of ``A`` in the basis given by ``section``."""
    f = A.field
    n = A.dim
    boundaries = [A.d(i) for i in range(n) if A.d(i)]
    cols = list(section) + boundaries
    m = SparseMatrix.from_columns(cols, n, f)

    def project(z: Vector) -> Vector:
        x, _ = solve_linear(m, z)
        if x is NO_SOLUTION:
            raise InputError("vector is not a cycle in the span of the section plus boundaries")
        return {k: v for k, v in x.items() if k < len(section)}

    return project


def _is_cycle(A: Algebra, v: Vector) -> bool:
    out: Vector = {}
    for i, c in v.items():
        for j, c2 in A.d(i).items():
            vec_add(out, j, c * c2, A.field)
    return not out


def default_section(A: Algebra) -> List[Vector]:
    """Cycle representatives completing a basis of the boundaries."""
    f = A.field
    dmat = SparseMatrix(A.dim, A.dim, f)
    for i in range(A.dim):
        for j, c in A.d(i).items():
            dmat.add_entry(j, i, c)
    sq = subquotient_dims(dmat, dmat)
    return [dict(v) for v in sq.representatives]


def induce_homology_action(P, A: Algebra, action: Callable[[object, tuple], Vector], arity_cutoff: int,
                           section: Optional[List[Vector]] = None) -> HomologyData:
    """Transfer a weight-one action on a dg-module to its homology.

    ``action(p, inputs)`` is the action of ``p (x) id`` on basis inputs.  The
    homology operation is ``h -> [action(p, s h_1, ..., s h_r)]``.
    """
    f = A.field
    if section is None:
        section = default_section(A)
    for v in section:
        if not _is_cycle(A, v):
            raise InputError("section vector is not a cycle")
    dmat = SparseMatrix(A.dim, A.dim, f)
    for i in range(A.dim):
        for j, c in A.d(i).items():
            dmat.add_entry(j, i, c)
    sq = subquotient_dims(dmat, dmat)
    if len(section) != sq.dim_quotient:
        raise InputError(f"section has {len(section)} vectors, homology has dimension {sq.dim_quotient}")
    degs = []
    for v in section:
        ds = {A.degrees[i] for i in v}
        if len(ds) != 1:
            raise InputError("section vectors must be homogeneous and nonzero")
        degs.append(ds.pop())
    boundaries = [A.d(i) for i in range(A.dim) if A.d(i)]
    if rank(SparseMatrix.from_columns(list(section) + boundaries, A.dim, f)) != len(section) + sq.dim_image:
        raise InputError("section vectors are not independent modulo boundaries")
    project = _homology_projector(A, section)
    H = Algebra(f, degs, [f"h{k}" for k in range(len(section))])
    table: Dict[tuple, Vector] = {}
    for r in range(2, arity_cutoff + 1):
        for p in P.basis(r):
            for hs in product(range(H.dim), repeat=r):
                out: Vector = {}
                for combo in product(*[list(section[h].items()) for h in hs]):
                    c = 1
                    ins = []
                    for a, ca in combo:
                        c *= ca
                        ins.append(a)
                    for b, cb in action(p, tuple(ins)).items():
                        vec_add(out, b, c * cb, f)
                if not _is_cycle(A, out):
                    raise InputError(f"operation {p!r} does not send cycles to cycles")
                val = project(out) if out else {}
                if val:
                    table[(p, hs)] = val
    return HomologyData(H, section, table)


# -- derivation complex ------------------------------------------------------------

def grade_one(alpha: Cochain) -> Cochain:
    return alpha.restricted(lambda k: T.grade(k[0]) == 1)


class DerivationComplex:
    """The derivation differential for strict structures ``alpha1``, ``beta1``."""

    def __init__(self, A: CofreeCoalgebra, B: CofreeCoalgebra, alpha: Cochain, beta: Cochain,
                 f0: Dict[int, Vector]):
        self.A, self.B = A, B
        self.alpha1 = grade_one(alpha)
        self.beta1 = grade_one(beta)
        self.f0 = f0
        self.field = A.field
        self._terms: Dict[tuple, list] = {}

    def terms(self, key, k: int):
        """``delta(g)(key) = sum coeff * op(g(key'))`` as ``(coeff, key', op)``.

        ``op`` is None for the identity or a dict ``b -> vector``.
        """
        ck = (key, k % 2)
        if ck in self._terms:
            return self._terms[ck]
        A, B, f = self.A, self.B, self.field
        t, ins = key
        out = []
        chain = A.d0(t, ins)
        for k2, c in A.coderivation(self.alpha1, t, ins).items():
            vec_add(chain, k2, c, f)
        for k2, c in chain.items():
            out.append((c, k2, None))
        eps = -1 if k % 2 else 1
        if B.algebra.differential:
            op = {b: B.algebra.d(b) for b in range(B.algebra.dim) if B.algebra.d(b)}
            out.append((-eps, key, op))
        for u, sp in A.quadratic_splits(t, ins):
            low = sp.lower
            if T.is_leaf(low) or len(low[0][1]) != 1:
                continue
            if any(not T.is_leaf(c) for c in low[1]):
                continue
            for j, (U, gins, _) in enumerate(sp.groups):
                if T.is_leaf(U):
                    continue
                res = A.canon.canonical(U, gins)
                if res is None:
                    continue
                s_can, ukey = res
                before = sp.lower_degree + sum(g[2] for g in sp.groups[:j])
                sg = sp.sign * s_can * (-1 if (k * before) % 2 else 1)
                others = []
                for jj, (U2, ins2, _) in enumerate(sp.groups):
                    if jj != j:
                        others.append(list(self.f0.get(ins2[0], {}).items()))
                if any(not o for o in others):
                    continue
                op: Dict[int, Vector] = {}
                for b in range(B.algebra.dim):
                    vec: Vector = {}
                    for combo in product(*others):
                        c = 1
                        bs = []
                        for bb, cb in combo:
                            c *= cb
                            bs.append(bb)
                        bs.insert(j, b)
                        for b2, c2 in self.beta1.evaluate(low, tuple(bs)).items():
                            vec_add(vec, b2, c * c2, f)
                    if vec:
                        op[b] = vec
                if op:
                    out.append((-eps * sg, ukey, op))
        self._terms[ck] = out
        return out

    def apply(self, g: Dict[tuple, Vector], k: int, key) -> Vector:
        """``delta(g)`` at a canonical key; ``g`` maps canonical keys to vectors."""
        f = self.field
        out: Vector = {}
        for c, k2, op in self.terms(key, k):
            val = g.get(k2)
            if not val:
                continue
            if op is None:
                for b, cb in val.items():
                    vec_add(out, b, c * cb, f)
            else:
                for b, cb in val.items():
                    for b2, c2 in op.get(b, {}).items():
                        vec_add(out, b2, c * cb * c2, f)
        return out

    # -- matrices ------------------------------------------------------------
    def cells(self, keys: Sequence[tuple], k: int) -> List[Tuple[tuple, int]]:
        """Coordinates ``(key, b)`` of maps of degree ``k`` on the given keys."""
        out = []
        Bd = self.B.algebra.degrees
        for key in keys:
            dk = self.A.key_degree(key)
            for b in range(len(Bd)):
                if Bd[b] == dk + k:
                    out.append((key, b))
        return out

    def matrix(self, src_keys, tgt_keys, k: int):
        """Matrix of ``delta`` from degree-``k`` maps on ``src_keys`` to ``tgt_keys``."""
        cols = self.cells(src_keys, k)
        rows = self.cells(tgt_keys, k - 1)
        cidx = {c: i for i, c in enumerate(cols)}
        ridx = {r: i for i, r in enumerate(rows)}
        m = SparseMatrix(len(rows), len(cols), self.field)
        for x in tgt_keys:
            for c, k2, op in self.terms(x, k):
                for b in range(self.B.algebra.dim):
                    col = cidx.get((k2, b))
                    if col is None:
                        continue
                    img = {b: 1} if op is None else op.get(b, {})
                    for b2, c2 in img.items():
                        row = ridx.get((x, b2))
                        if row is None:
                            if c * c2 and self.field.reduce(c * c2):
                                raise ComplexConsistencyError("derivation term leaves the expected degree")
                            continue
                        m.add_entry(row, col, c * c2)
        return m, rows, cols


# -- realization -----------------------------------------------------------------

@dataclass
class ObstructionClass:
    grade: int
    cocycle: Dict[tuple, Vector]
    witness: Dict[Tuple[tuple, int], object]
    rows: List[Tuple[tuple, int]]
    h1_dims: Optional[dict] = None

    def verify(self, matrix: SparseMatrix, rhs: Dict[int, object]) -> bool:
        f = matrix.field
        ridx = {r: i for i, r in enumerate(self.rows)}
        y = {ridx[r]: v for r, v in self.witness.items()}
        prod_: Dict[int, object] = {}
        for i, v in y.items():
            for j, c in matrix.data.get(i, {}).items():
                vec_add(prod_, j, v * c, f)
        pairing = f.reduce(sum(v * rhs.get(i, 0) for i, v in y.items()))
        return not prod_ and pairing != 0


@dataclass
class StageRecord:
    grade: int
    unknowns: int
    equations: int
    rank_kernel: int
    cocycle_checked: bool
    full_tree_term: bool


@dataclass
class RealizeResult:
    verdict: str                      # "REALIZED" or "OBSTRUCTED"
    f: Cochain
    stages: List[StageRecord] = dc_field(default_factory=list)
    obstruction: Optional[ObstructionClass] = None
    matrix: Optional[SparseMatrix] = None
    rhs: Optional[Dict[int, object]] = None


def morphism_from_f0(A: CofreeCoalgebra, f0: Dict[int, Vector]) -> Cochain:
    f = Cochain(A, 0, grades={0})
    for a, v in f0.items():
        if v:
            f.set((1, (a,)), v)
    return f


def vector_rhs(values: Dict[tuple, Vector], rows: List[Tuple[tuple, int]]) -> Dict[int, object]:
    out = {}
    for i, (key, b) in enumerate(rows):
        v = values.get(key, {}).get(b)
        if v:
            out[i] = v
    return out


def check_cocycle(dc: DerivationComplex, cochain: Dict[tuple, Vector], k: int, keys: Sequence[tuple]) -> None:
    for y in keys:
        if dc.apply(cochain, k, y):
            raise ComplexConsistencyError(f"known side is not a cocycle at {y!r}")


def check_f0(A, B, alpha, beta, f0, arity_cutoff) -> None:
    for a, v in f0.items():
        for b in v:
            if B.algebra.degrees[b] != A.algebra.degrees[a]:
                raise InputError("f0 does not preserve degrees")
    f = morphism_from_f0(A, f0)
    if check_morphism(A, B, grade_one(alpha), grade_one(beta), f, 1, arity_cutoff):
        raise InputError("f0 is not a morphism for the strict structures")


def realize(A: CofreeCoalgebra, B: CofreeCoalgebra, alpha: Cochain, beta: Cochain, f0: Dict[int, Vector],
            grade_cutoff: int, arity_cutoff: int, validate: bool = True, kernel_shift: bool = False) -> RealizeResult:
    """Build ``f_[1], ..., f_[G-1]`` so the morphism equation holds up to grade ``G``.

    At stage ``d`` the known side ``R_d = -F(f_{<d})`` on grade ``d+1`` is
    checked to be a derivation cocycle and ``delta(f_[d]) = R_d`` is solved.
    With ``kernel_shift`` each stage adds the kernel basis to the chosen
    solution (another valid choice), used to test independence of choices.
    """
    if validate:
        for name, C, m in (("alpha", A, alpha), ("beta", B, beta)):
            if validate_structure(C, m, grade_cutoff, arity_cutoff):
                raise InputError(f"{name} does not satisfy the structure equation")
        check_f0(A, B, alpha, beta, f0, arity_cutoff)
    dc = DerivationComplex(A, B, alpha, beta, f0)
    f = morphism_from_f0(A, f0)
    result = RealizeResult("REALIZED", f)
    for d in range(1, grade_cutoff):
        f.grades.add(d)
        eq_keys = A.basis_grade(d + 1, arity_cutoff)
        R: Dict[tuple, Vector] = {}
        full_tree = False
        for x in eq_keys:
            r = morphism_residual(A, B, alpha, beta, f, *x)
            if r:
                R[x] = {b: A.field.reduce(-c) for b, c in r.items()}
            if alpha.evaluate(*x) or beta.values and _top_beta(B, beta, f0, x):
                full_tree = True
        check_cocycle(dc, R, -1, A.basis_grade(d + 2, arity_cutoff))
        M, rows, cols = dc.matrix(A.basis_grade(d, arity_cutoff), eq_keys, 0)
        rhs = vector_rhs(R, rows)
        rowset = set(rows)
        if any((key, b) not in rowset for key in R for b in R[key]):
            raise ComplexConsistencyError("known side has components outside the equation space")
        x, kern = solve_linear(M, rhs)
        result.stages.append(StageRecord(d, len(cols), len(rows), len(kern), True, full_tree))
        if x is NO_SOLUTION:
            y = left_kernel_witness(M, rhs)
            witness = {rows[i]: v for i, v in y.items()}
            result.verdict = "OBSTRUCTED"
            result.obstruction = ObstructionClass(d, R, witness, rows)
            result.matrix, result.rhs = M, rhs
            return result
        if kernel_shift:
            for v in kern:
                for i, c in v.items():
                    x[i] = A.field.reduce(x.get(i, 0) + c)
        comp: Dict[tuple, Vector] = {}
        for i, c in x.items():
            if c:
                key, b = cols[i]
                comp.setdefault(key, {})[b] = c
        for key, v in comp.items():
            f.values[key] = v
    if check_morphism(A, B, alpha, beta, f, grade_cutoff, arity_cutoff):
        raise ComplexConsistencyError("solved components fail the morphism identity")
    return result


def _top_beta(B, beta, f0, x) -> bool:
    t, ins = x
    for combo in product(*[list(f0.get(a, {}).items()) for a in ins]):
        if beta.evaluate(t, tuple(b for b, _ in combo)):
            return True
    return False


# -- Gamma cohomology ---------------------------------------------------------------

@dataclass
class GammaBlock:
    grade: int
    degree: int          # cohomological degree: 1 for realization, 0 for homotopy
    dim_kernel: int
    dim_image: int
    dim_quotient: int
    representatives: list


def gamma_cohomology(A: CofreeCoalgebra, B: CofreeCoalgebra, alpha: Cochain, beta: Cochain,
                     f0: Dict[int, Vector], grade_cutoff: int, arity_cutoff: int,
                     degrees: Sequence[int] = (1, 0)) -> List[GammaBlock]:
    """Truncated derivation cohomology blocks for ``d = 1 .. G-1``.

    The degree-``c`` block at grade ``d`` is the cohomology at maps of
    homological degree ``-c`` on grade ``d+1``, between maps of degree
    ``1-c`` on grade ``d`` and maps of degree ``-1-c`` on grade ``d+2``.
    """
    dc = DerivationComplex(A, B, alpha, beta, f0)
    out = []
    for d in range(1, grade_cutoff):
        kd = A.basis_grade(d, arity_cutoff)
        k1 = A.basis_grade(d + 1, arity_cutoff)
        k2 = A.basis_grade(d + 2, arity_cutoff)
        for c in degrees:
            d_in, _, _ = dc.matrix(kd, k1, 1 - c)
            d_out, rows_mid, _ = dc.matrix(k1, k2, -c)
            sq = subquotient_dims(d_out, d_in)
            cells = dc.cells(k1, -c)
            reps = [{cells[i]: v for i, v in r.items()} for r in sq.representatives]
            out.append(GammaBlock(d, c, sq.dim_kernel, sq.dim_image, sq.dim_quotient, reps))
    return out
