"""Cylinder objects ``B (x) N*(Delta^1)`` and the homotopy solver.

The interval cochains have basis ``0#, 1#, 01#`` (indices 0, 1, 2) in
homological degrees ``0, 0, -1``.  The boundary of the 1-simplex dualizes to
``dN(01#) = 1# - 0#``; as a differential of degree ``-1`` on cochains this
is the coboundary ``0# -> -01#``, ``1# -> 01#``, ``01# -> 0``, which is what
the cylinder algebra uses.

Two providers feed the cylinder structure ``(beta (x) sigma) o rho``:

* :class:`IntervalAction` evaluates the Barratt-Eccles action on interval
  cochains.  Degree 0 follows the cup-product rule; in degree 1 the values on
  two ``01#`` inputs are solved from the chain-map identity, and values landing
  in degree 0 vanish because a vertex carries no 1-cochain.
* :class:`DiagonalProvider` sends a bar tree to pairs ``(tree', pi)``: each
  vertex label is split by the Alexander-Whitney diagonal, the fronts stay on
  the tree and the backs are composed along it.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from . import barratt_eccles as E
from . import perms
from . import trees as T
from .coalgebra import Algebra, Cochain, CofreeCoalgebra, Vector, check_morphism, morphism_residual
from .linalg import (ComplexConsistencyError, Field, InputError, NO_SOLUTION, SparseMatrix,
                     left_kernel_witness, solve_linear, vec_add)
from .solver import DerivationComplex, ObstructionClass, StageRecord, check_cocycle, vector_rhs

ZERO, ONE, EDGE = 0, 1, 2
NAMES = ("0#", "1#", "01#")
N_DEGREE = (0, 0, -1)


class ProviderRangeError(Exception):
    """A provider was asked for a value outside its declared range."""

    def __init__(self, what: str):
        super().__init__(what)
        self.what = what


def interval_boundary(u: int) -> Dict[int, int]:
    """The dual boundary ``dN``: ``01# -> 1# - 0#``."""
    return {ONE: 1, ZERO: -1} if u == EDGE else {}


def interval_differential(u: int) -> Dict[int, int]:
    """Coboundary of degree ``-1``: ``0# -> -01#``, ``1# -> 01#``."""
    if u == ZERO:
        return {EDGE: -1}
    if u == ONE:
        return {EDGE: 1}
    return {}


def cup_identity(us: Sequence[int]) -> Dict[int, int]:
    """The identity permutation acting on interval cochains (degree 0 rule)."""
    if all(u == ZERO for u in us):
        return {ZERO: 1}
    if all(u == ONE for u in us):
        return {ONE: 1}
    if us.count(EDGE) == 1:
        k = us.index(EDGE)
        if all(u == ZERO for u in us[:k]) and all(u == ONE for u in us[k + 1:]):
            return {EDGE: 1}
    return {}


def _permuted(w: perms.Perm, us: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    """Inputs read through the word ``w`` with the Koszul sign of reordering."""
    order = [w[j] - 1 for j in range(len(w))]
    degs = [N_DEGREE[u] for u in us]
    return perms.koszul_sign(degs, order), tuple(us[k] for k in order)


class IntervalAction:
    """The default interval action provider, valid for E-degree at most 1."""

    max_degree = 1

    def __init__(self):
        self._deg1: Dict[int, Dict[tuple, Dict[int, int]]] = {}

    def evaluate(self, e, us: Sequence[int]) -> Dict[int, int]:
        t = len(e) - 1
        out_deg = t + sum(N_DEGREE[u] for u in us)
        if out_deg not in (0, -1):
            return {}
        if t == 0:
            s, ys = _permuted(e[0], us)
            return {k: s * v for k, v in cup_identity(ys).items()}
        if t == 1:
            if out_deg == 0:
                return {}
            # transport from the orbit representative whose first entry is the identity
            g = e[0]
            sg, ys = _permuted(g, us)
            v = self._degree_one(len(us)).get((E.act(perms.inverse(g), e), ys), 0)
            return {EDGE: sg * v} if v else {}
        raise ProviderRangeError(f"interval action in E-degree {t}, arity {len(us)}")

    def _degree_one(self, r: int) -> Dict[tuple, int]:
        """Solve the chain-map identity for values on two ``01#`` inputs.

        Values are solved on orbit representatives ``e`` with first entry the
        identity and transported to the other tuples by equivariance.  The
        equations for different ``e`` share no unknowns, so each ``e`` is
        solved on its own; when a block has several solutions the solver's
        particular solution is kept.
        """
        if r in self._deg1:
            return self._deg1[r]
        F = Field(0)
        table: Dict[tuple, int] = {}
        pairs = [(i, j) for i in range(r) for j in range(i + 1, r)]
        ident = perms.identity(r)
        for e in E.basis(r, 1):
            if e[0] != ident:
                continue
            unknowns = []
            for i, j in pairs:
                for rest in product((ZERO, ONE), repeat=r - 2):
                    it = iter(rest)
                    unknowns.append(tuple(EDGE if k in (i, j) else next(it) for k in range(r)))
            idx = {u: k for k, u in enumerate(unknowns)}
            rows: List[Dict[int, int]] = []
            rhs: Dict[int, int] = {}
            faces = E.e_differential(e)
            # delta(sigma(e; u)) = sigma(de; u) - sum_i +- sigma(e; .., du_i, ..) with one 01# in u;
            # the left side vanishes since sigma(e; u) has degree 0 and is zero on vertices.
            for k in range(r):
                for rest in product((ZERO, ONE), repeat=r - 1):
                    it = iter(rest)
                    us = tuple(EDGE if m == k else next(it) for m in range(r))
                    row: Dict[int, int] = {}
                    const = 0
                    for face, c in faces.items():
                        const += c * self.evaluate(face, us).get(EDGE, 0)
                    passed = 0
                    for m in range(r):
                        for u2, c2 in interval_differential(us[m]).items():
                            us2 = us[:m] + (u2,) + us[m + 1:]
                            s = -1 * (-1 if passed % 2 else 1)  # (-1)^{|e|} with |e| = 1
                            col = idx[us2]
                            row[col] = row.get(col, 0) + s * c2
                        passed += N_DEGREE[us[m]]
                    row = {c: v for c, v in row.items() if v}
                    rows.append(row)
                    if const:
                        rhs[len(rows) - 1] = -const
            m = SparseMatrix(len(rows), len(unknowns), F, {i: r_ for i, r_ in enumerate(rows) if r_})
            x, _ = solve_linear(m, rhs)
            if x is NO_SOLUTION:
                raise ComplexConsistencyError("no degree-one interval action satisfies the chain-map identity")
            for k, v in x.items():
                if v:
                    table[(e, unknowns[k])] = int(v)
        self._deg1[r] = table
        return table


class DiagonalProvider:
    """Alexander-Whitney splitting of vertex labels, valid up to bar weight ``max_weight``."""

    def __init__(self, calc, max_weight: int = 2):
        self.calc = calc
        self.max_weight = max_weight
        self._cache: Dict[object, Dict[tuple, int]] = {}

    def rho(self, t) -> Dict[tuple, int]:
        """``{(tree', pi): coeff}`` with ``pi`` a Barratt-Eccles tuple of the tree's arity."""
        if t in self._cache:
            return self._cache[t]
        if T.is_leaf(t):
            return {(t, E.unit(1)): 1}
        w = T.weight(t)
        if w > self.max_weight:
            raise ProviderRangeError(f"diagonal on bar weight {w}")
        calc = self.calc
        verts: List[Tuple[tuple, object]] = []

        def walk(x, path):
            if T.is_leaf(x):
                return
            verts.append((path, x))
            for k, c in enumerate(x[1]):
                walk(c, path + (k,))

        walk(t, ())
        out: Dict[tuple, int] = {}
        choices = [range(len(x[0][1])) for _, x in verts]
        for ks in product(*choices):
            fronts = {}
            backs = {}
            sym_deg = []
            back_deg = []
            for (path, x), k in zip(verts, ks):
                p, e = x[0]
                fronts[path] = (p, e[: k + 1])
                backs[path] = e[k:]
                sym_deg.append(calc.symbol_degree((p, e[: k + 1])))
                back_deg.append(len(e) - 1 - k)
            # move each back to the right of all later symbols, keeping the backs in order
            odd = 0
            for a in range(len(verts)):
                if back_deg[a] % 2:
                    odd += sum(sym_deg[a + 1:])
            sign = -1 if odd % 2 else 1

            def rebuild(x, path):
                if T.is_leaf(x):
                    return x
                return (fronts[path], tuple(rebuild(c, path + (j,)) for j, c in enumerate(x[1])))

            new_t = rebuild(t, ())
            for pi, c in self._composite(t, (), backs).items():
                planar = T.leaves(t)
                pi2 = E.reslot(pi, perms.inverse(planar))
                key = (new_t, pi2)
                out[key] = out.get(key, 0) + sign * c
        out = {k: v for k, v in out.items() if v}
        self._cache[t] = out
        return out

    def _composite(self, x, path, backs) -> Dict[tuple, int]:
        """Compose the back labels along the subtree at ``path`` (planar leaf order)."""
        if T.is_leaf(x):
            return {E.unit(1): 1}
        e = backs[path]
        kids = [self._composite(c, path + (j,), backs) for j, c in enumerate(x[1])]
        cur: Dict[tuple, int] = {e: 1}
        r = len(kids)
        # e(x_1..x_r) = (..((e o_r x_r) o_{r-1} x_{r-1}) ..) o_1 x_1, sign sum_{i<j} |x_i||x_j|
        for i in range(r, 0, -1):
            nxt: Dict[tuple, int] = {}
            for a, ca in cur.items():
                for b, cb in kids[i - 1].items():
                    for c, cc in E.e_compose(a, i, b).items():
                        nxt[c] = nxt.get(c, 0) + ca * cb * cc
            cur = {k: v for k, v in nxt.items() if v}
        # Koszul sign depends on the degrees of the kid composites; they are homogeneous
        degs = [len(next(iter(k))) - 1 if k else 0 for k in kids]
        odd = sum(degs[i] * degs[j] for i in range(r) for j in range(i + 1, r))
        s = -1 if odd % 2 else 1
        return {k: s * v for k, v in cur.items()}


class TableIntervalAction:
    """Interval action read from a value table on top of the default provider.

    ``values`` maps ``(e, inputs)`` to output vectors.  The declared range is
    E-degree at most ``max_degree``.  Inside it, arguments missing from the
    table come from the default provider where that one is defined and are
    zero elsewhere.  Outside it, any argument that could be nonzero raises.
    """

    def __init__(self, values: Dict[tuple, Dict[int, int]], max_degree: int,
                 fallback: Optional[IntervalAction] = None):
        self.values = values
        self.max_degree = max_degree
        self.fallback = fallback if fallback is not None else IntervalAction()

    def evaluate(self, e, us):
        key = (e, tuple(us))
        if key in self.values:
            return dict(self.values[key])
        t = len(e) - 1
        out_deg = t + sum(N_DEGREE[u] for u in us)
        if t > self.max_degree:
            if out_deg not in (0, -1):
                return {}
            raise ProviderRangeError(f"interval action in E-degree {t}, arity {len(us)}")
        if t <= self.fallback.max_degree:
            return self.fallback.evaluate(e, us)
        return {}


class TableDiagonal:
    """Diagonal read from a value table on top of the default provider.

    The declared range is bar weight at most ``max_weight``; trees missing
    from the table come from the default provider where that one is defined
    and are zero elsewhere in the range.
    """

    def __init__(self, calc, values: Dict[object, Dict[tuple, int]], max_weight: int,
                 fallback: Optional[DiagonalProvider] = None):
        self.values = values
        self.max_weight = max_weight
        self.fallback = fallback if fallback is not None else DiagonalProvider(calc)

    def rho(self, t):
        if t in self.values:
            return self.values[t]
        if T.is_leaf(t):
            return self.fallback.rho(t)
        w = T.weight(t)
        if w > self.max_weight:
            raise ProviderRangeError(f"diagonal on bar weight {w}")
        if w <= self.fallback.max_weight:
            return self.fallback.rho(t)
        return {}


# -- the cylinder algebra ---------------------------------------------------------

def cylinder_algebra(B: Algebra) -> Algebra:
    degs, names, diff = [], [], {}
    for b in range(B.dim):
        for u in (ZERO, ONE, EDGE):
            degs.append(B.degrees[b] + N_DEGREE[u])
            names.append(f"{B.names[b]}|{NAMES[u]}")
    for b in range(B.dim):
        for u in (ZERO, ONE, EDGE):
            v: Vector = {}
            for b2, c in B.d(b).items():
                v[3 * b2 + u] = v.get(3 * b2 + u, 0) + c
            s = -1 if B.degrees[b] % 2 else 1
            for u2, c in interval_differential(u).items():
                v[3 * b + u2] = v.get(3 * b + u2, 0) + s * c
            v = {k: c for k, c in v.items() if c}
            if v:
                diff[3 * b + u] = v
    return Algebra(B.field, degs, names, diff)


class CylinderStructure(Cochain):
    """``(beta (x) sigma) o rho`` on ``D(B (x) N)``, evaluated on demand."""

    def __init__(self, CC: CofreeCoalgebra, B: CofreeCoalgebra, beta: Cochain,
                 sigma: IntervalAction, diag: DiagonalProvider):
        super().__init__(CC, -1)
        self.Bc = B
        self.beta = beta
        self.sigma = sigma
        self.diag = diag
        self._weights = {T.weight(k[0]) for k in beta.values}
        self._memo: Dict[tuple, Vector] = {}

    def evaluate(self, t, inputs):
        key = (t, inputs)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        out = self._compute(t, inputs)
        self._memo[key] = out
        return out

    def restricted(self, pred) -> "Cochain":
        return _Filtered(self, pred)

    def _compute(self, t, inputs) -> Vector:
        if T.is_leaf(t) or T.weight(t) not in self._weights:
            return {}
        f = self.source.field
        Bdeg = self.Bc.algebra.degrees
        bs = tuple(c // 3 for c in inputs)
        us = tuple(c % 3 for c in inputs)
        # T (x) (b1 u1) ... (bn un) -> T (x) b1..bn (x) u1..un
        odd = 0
        for i in range(len(inputs)):
            if N_DEGREE[us[i]] % 2:
                odd += sum(Bdeg[bs[j]] for j in range(i + 1, len(inputs)))
        s0 = -1 if odd % 2 else 1
        bsum = sum(Bdeg[b] for b in bs)
        out: Vector = {}
        for (t2, pi), c in self.diag.rho(t).items():
            sv = self.sigma.evaluate(pi, us)
            if not sv:
                continue
            bv = self.beta.evaluate(t2, bs)
            if not bv:
                continue
            s1 = -1 if ((len(pi) - 1) * bsum) % 2 else 1
            for b, cb in bv.items():
                for u, cu in sv.items():
                    vec_add(out, 3 * b + u, s0 * s1 * c * cb * cu, f)
        return out


class _Filtered(Cochain):
    """A computed structure seen only on the keys accepted by ``pred``."""

    def __init__(self, inner: Cochain, pred):
        super().__init__(inner.source, inner.degree)
        self.inner = inner
        self.pred = pred

    def evaluate(self, t, inputs):
        return self.inner.evaluate(t, inputs) if self.pred((t, inputs)) else {}


# -- homotopy solver ------------------------------------------------------------------

@dataclass
class HomotopyResult:
    verdict: str                 # HOMOTOPIC | OBSTRUCTED | INSUFFICIENT_PROVIDER
    f01: Dict[tuple, Vector] = dc_field(default_factory=dict)
    stages: List[StageRecord] = dc_field(default_factory=list)
    obstruction: Optional[ObstructionClass] = None
    missing: Optional[str] = None
    matrix: Optional[SparseMatrix] = None
    rhs: Optional[Dict[int, object]] = None


class Cylinder:
    """Bundles the cylinder algebra of ``B`` with its structure and providers."""

    def __init__(self, A: CofreeCoalgebra, B: CofreeCoalgebra, beta: Cochain,
                 sigma: Optional[IntervalAction] = None, diag: Optional[DiagonalProvider] = None):
        self.A, self.B = A, B
        self.algebra = cylinder_algebra(B.algebra)
        self.CC = CofreeCoalgebra(A.calc, self.algebra)
        self.sigma = sigma or IntervalAction()
        self.diag = diag or DiagonalProvider(A.calc)
        self.gamma = CylinderStructure(self.CC, B, beta, self.sigma, self.diag)

    def combine(self, f0: Cochain, f1: Cochain, f01: Dict[tuple, Vector]) -> Cochain:
        """``f0 (x) 0# + f1 (x) 1# + f01 (x) 01#`` as a map into the cylinder."""
        out = Cochain(self.A, 0)
        vals: Dict[tuple, Vector] = {}
        for src, u in ((f0.values, ZERO), (f1.values, ONE), (f01, EDGE)):
            for key, vec in src.items():
                d = vals.setdefault(key, {})
                for b, c in vec.items():
                    d[3 * b + u] = c
        out.values = vals
        return out

    def psi(self, f0: Cochain) -> Dict[int, Vector]:
        out = {}
        for a in range(self.A.algebra.dim):
            v = f0.evaluate(1, (a,))
            w: Vector = {}
            for b, c in v.items():
                w[3 * b + ZERO] = c
                w[3 * b + ONE] = c
            if w:
                out[a] = w
        return out


def homotopy(A: CofreeCoalgebra, B: CofreeCoalgebra, alpha: Cochain, beta: Cochain,
             f0: Cochain, f1: Cochain, grade_cutoff: int, arity_cutoff: int,
             sigma: Optional[IntervalAction] = None, diag: Optional[DiagonalProvider] = None,
             validate: bool = True) -> HomotopyResult:
    """Build ``f01_[1], ..., f01_[G-1]`` so the cylinder morphism equation holds up to grade ``G``."""
    fld = A.field
    if validate:
        for name, f in (("f0", f0), ("f1", f1)):
            if check_morphism(A, B, alpha, beta, f, grade_cutoff, arity_cutoff):
                raise InputError(f"{name} is not a morphism within the cutoffs")
        for a in range(A.algebra.dim):
            if f0.evaluate(1, (a,)) != f1.evaluate(1, (a,)):
                raise InputError("f0 and f1 differ on grade 0")
    cyl = Cylinder(A, B, beta, sigma, diag)
    CC = cyl.CC
    result = HomotopyResult("HOMOTOPIC")
    f01: Dict[tuple, Vector] = {}
    try:
        dc = DerivationComplex(A, CC, alpha, cyl.gamma, cyl.psi(f0))
        for d in range(1, grade_cutoff):
            f = cyl.combine(f0, f1, f01)
            eq_keys = A.basis_grade(d + 1, arity_cutoff)
            R: Dict[tuple, Vector] = {}
            for x in eq_keys:
                r = morphism_residual(A, CC, alpha, cyl.gamma, f, *x)
                if any(c % 3 != EDGE for c in r):
                    raise ComplexConsistencyError("cylinder residual has a 0#/1# component")
                if r:
                    R[x] = {c: fld.reduce(-v) for c, v in r.items()}
            check_cocycle(dc, R, -1, A.basis_grade(d + 2, arity_cutoff))
            M, rows, cols = dc.matrix(A.basis_grade(d, arity_cutoff), eq_keys, 0)
            keep = [i for i, (_, c) in enumerate(cols) if c % 3 == EDGE]
            cols = [cols[i] for i in keep]
            sub = SparseMatrix(M.rows, len(keep), fld)
            pos = {i: k for k, i in enumerate(keep)}
            for i, row in M.data.items():
                for j, v in row.items():
                    if j in pos:
                        sub.add_entry(i, pos[j], v)
            rhs = vector_rhs(R, rows)
            x, kern = solve_linear(sub, rhs)
            result.stages.append(StageRecord(d, len(cols), len(rows), len(kern), True, False))
            if x is NO_SOLUTION:
                y = left_kernel_witness(sub, rhs)
                result.verdict = "OBSTRUCTED"
                result.obstruction = ObstructionClass(d, R, {rows[i]: v for i, v in y.items()}, rows)
                result.matrix, result.rhs = sub, rhs
                result.f01 = f01
                return result
            for i, c in x.items():
                key, cc = cols[i]
                f01.setdefault(key, {})[cc // 3] = c
        f = cyl.combine(f0, f1, f01)
        if check_morphism(A, CC, alpha, cyl.gamma, f, grade_cutoff, arity_cutoff):
            raise ComplexConsistencyError("homotopy components fail the cylinder identity")
    except ProviderRangeError as exc:
        return HomotopyResult("INSUFFICIENT_PROVIDER", f01, result.stages, missing=exc.what)
    result.f01 = f01
    return result
