"""Graded spaces with symmetric group actions.

Actions are given on the adjacent transpositions ``s_1 .. s_{r-1}`` and
extended to all of Sigma_r by composition.  Matrices act on column vectors:
``action(s_k) @ e_j`` is the image of basis vector ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, Hashable, List, Tuple

from . import perms
from .linalg import Field, InputError, SparseMatrix, kernel_basis


@dataclass(frozen=True)
class GradedSpace:
    basis: Tuple[Tuple[Hashable, int], ...]

    def __post_init__(self):
        ids = [b for b, _ in self.basis]
        if len(set(ids)) != len(ids):
            raise InputError("graded space basis ids must be unique")

    @classmethod
    def of(cls, pairs) -> "GradedSpace":
        return cls(tuple((b, int(d)) for b, d in pairs))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def ids(self) -> List[Hashable]:
        return [b for b, _ in self.basis]

    def degree(self, b) -> int:
        return dict(self.basis)[b]

    def degrees(self) -> Dict[Hashable, int]:
        return dict(self.basis)

    def index(self, b) -> int:
        return self.ids().index(b)

    def in_degree(self, d: int) -> List[Hashable]:
        return [b for b, k in self.basis if k == d]


@dataclass
class SigmaComponent:
    space: GradedSpace
    generators: Dict[int, SparseMatrix]  # k -> matrix of s_k

    def action(self, sigma: perms.Perm, field: Field) -> SparseMatrix:
        """Matrix of ``sigma`` acting on the left."""
        out = SparseMatrix.identity(self.space.dim, field)
        for k in perms.adjacent_word(sigma):
            out = out.matmul(self.generators.get(k, SparseMatrix.identity(self.space.dim, field)))
        return out


@dataclass
class SigmaModule:
    field: Field
    components: Dict[int, SigmaComponent] = dc_field(default_factory=dict)

    def dims(self, max_arity: int) -> List[int]:
        return [self.components[r].space.dim if r in self.components else 0
                for r in range(max_arity + 1)]

    def check_axioms(self, r: int) -> bool:
        """Identity, involutive generators and the braid relations."""
        comp = self.components.get(r)
        if comp is None:
            return True
        n = comp.space.dim
        one = SparseMatrix.identity(n, self.field)
        g = {k: comp.generators.get(k, one) for k in range(1, r)}

        def eq(a, b):
            return a.to_dense() == b.to_dense()

        for k in range(1, r):
            if not eq(g[k].matmul(g[k]), one):
                return False
            if k + 1 < r:
                lhs = g[k].matmul(g[k + 1]).matmul(g[k])
                rhs = g[k + 1].matmul(g[k]).matmul(g[k + 1])
                if not eq(lhs, rhs):
                    return False
            for j in range(k + 2, r):
                if not eq(g[k].matmul(g[j]), g[j].matmul(g[k])):
                    return False
        return True

    def is_connected(self) -> bool:
        if 0 in self.components and self.components[0].space.dim:
            return False
        c1 = self.components.get(1)
        return c1 is not None and [d for _, d in c1.space.basis] == [0]


def kron(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    out = SparseMatrix(a.rows * b.rows, a.cols * b.cols, a.field)
    for (i, j), x in a.entries().items():
        for (k, l), y in b.entries().items():
            out.add_entry(i * b.rows + k, j * b.cols + l, x * y)
    return out


def boxtimes(m: SigmaModule, n: SigmaModule) -> SigmaModule:
    """Arity-wise tensor product with the diagonal action.

    Basis ids of ``(M box N)(r)`` are pairs ``(m_id, n_id)`` in lexicographic
    order and degrees add.  Permutations have degree 0, so the diagonal action
    is the plain Kronecker product of the two actions.
    """
    if m.field != n.field:
        raise InputError("boxtimes of modules over different fields")
    out = SigmaModule(m.field)
    for r in sorted(set(m.components) & set(n.components)):
        cm, cn = m.components[r], n.components[r]
        space = GradedSpace(tuple(((a, b), da + db) for a, da in cm.space.basis for b, db in cn.space.basis))
        one_m = SparseMatrix.identity(cm.space.dim, m.field)
        one_n = SparseMatrix.identity(cn.space.dim, n.field)
        gens = {k: kron(cm.generators.get(k, one_m), cn.generators.get(k, one_n)) for k in range(1, r)}
        out.components[r] = SigmaComponent(space, gens)
    return out


def equivariant_map_basis(component: SigmaComponent, degree: int, target: GradedSpace,
                          field: Field, shift: int = 0) -> List[SparseMatrix]:
    """Basis of the Sigma_r-equivariant maps from a degree slice to ``target``.

    The target carries the trivial action.  Maps send the degree-``degree``
    part of ``component`` to the degree ``degree + shift`` part of ``target``;
    each map is a ``target.dim x slice`` matrix indexed by the slice order.
    """
    src = [i for i, (_, d) in enumerate(component.space.basis) if d == degree]
    tgt = [i for i, (_, d) in enumerate(target.basis) if d == degree + shift]
    ns, nt = len(src), len(tgt)
    if ns == 0 or nt == 0:
        return []
    pos = {i: k for k, i in enumerate(src)}
    # unknown (t, s) at column t * ns + s; equations F . g_k - F = 0
    system = SparseMatrix(0, nt * ns, field)
    row = 0
    r = max(component.generators) + 1 if component.generators else 1
    for k in range(1, r):
        g = component.generators.get(k)
        if g is None:
            continue
        ge = g.entries()
        for t in range(nt):
            for s in range(ns):
                # (F g)[t, s] = sum_j F[t, j] g[j, s]
                eq: Dict[int, object] = {}
                for (j, s2), v in ge.items():
                    if s2 == src[s] and j in pos:
                        eq[t * ns + pos[j]] = field.reduce(eq.get(t * ns + pos[j], 0) + v)
                eq[t * ns + s] = field.reduce(eq.get(t * ns + s, 0) - 1)
                eq = {c: v for c, v in eq.items() if v != 0}
                system.rows += 1
                if eq:
                    system.data[row] = eq
                row += 1
    out = []
    for vec in kernel_basis(system):
        mat = SparseMatrix(target.dim, len(src), field)
        for col, v in vec.items():
            t, s = divmod(col, ns)
            mat.add_entry(tgt[t], s, v)
        out.append(mat)
    return out


def trivial_module(field: Field, dims: Dict[int, int]) -> SigmaModule:
    out = SigmaModule(field)
    for r, d in dims.items():
        out.components[r] = SigmaComponent(GradedSpace(tuple((i, 0) for i in range(d))), {})
    return out


def regular_module(field: Field, r: int) -> SigmaModule:
    """The regular representation of Sigma_r on the basis ``all_perms(r)``."""
    ps = perms.all_perms(r)
    idx = {p: i for i, p in enumerate(ps)}
    gens = {}
    for k in range(1, r):
        s = perms.adjacent(r, k)
        m = SparseMatrix(len(ps), len(ps), field)
        for p in ps:
            m.add_entry(idx[perms.compose(s, p)], idx[p], 1)
        gens[k] = m
    return SigmaModule(field, {r: SigmaComponent(GradedSpace(tuple((p, 0) for p in ps)), gens)})
