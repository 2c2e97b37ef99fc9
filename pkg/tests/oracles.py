"""Independent brute-force helpers shared by the test modules."""

from itertools import product

from obstruct import barratt_eccles as E
from obstruct import perms
from obstruct.io import build_problem
from obstruct import fixtures


def lin(d):
    return {k: v for k, v in d.items() if v}


def com_table(max_arity=4):
    """The commutative operad written out as a table operad."""
    ops = [{"id": str(r), "arity": r} for r in range(1, max_arity + 1)]
    comps = []
    for r in range(2, max_arity + 1):
        for s in range(2, max_arity + 2 - r):
            for i in range(1, r + 1):
                comps.append({"outer": str(r), "slot": i, "inner": str(s), "result": {str(r + s - 1): 1}})
    return {"name": "com-table", "operations": ops, "compositions": comps}


def orbit_reps(r, t):
    """Normalized tuples whose first entry is the identity.

    Every normalized tuple is ``act(sigma, w)`` for exactly one such ``w``.
    """
    ps = perms.all_perms(r)

    def ext(prefix):
        if len(prefix) == t + 1:
            yield tuple(prefix)
            return
        for p in ps:
            if p != prefix[-1]:
                yield from ext(prefix + [p])

    yield from ext([perms.identity(r)])


def e_square(w):
    out = {}
    for f, c in E.e_differential(w).items():
        for g, c2 in E.e_differential(f).items():
            out[g] = out.get(g, 0) + c * c2
    return lin(out)


def problem(name, **kw):
    return build_problem(fixtures.load(name), **kw)


def all_vectors(dim, p):
    """Every vector of ``GF(p)^dim`` as a tuple."""
    return product(range(p), repeat=dim)


def grade_one_cells(prob, shift):
    """``(key, b)`` pairs for equivariant grade-1 maps raising degree by ``shift``."""
    A, B = prob.A, prob.B.algebra
    return [(k, b) for k in A.basis_grade(1, prob.arity_cutoff) for b in range(B.dim)
            if B.degrees[b] == A.key_degree(k) + shift]


def brute_force_grade_one(prob):
    """All grade-1 components over GF(2) that make ``f`` a morphism on grade 2.

    Works directly from the morphism residual, without the derivation complex.
    """
    from obstruct.coalgebra import morphism_residual
    from obstruct.solver import morphism_from_f0

    cells = grade_one_cells(prob, 0)
    keys = prob.A.basis_grade(2, prob.arity_cutoff)
    found = []
    for bits in product(range(2), repeat=len(cells)):
        f = morphism_from_f0(prob.A, prob.f0)
        for (k, b), c in zip(cells, bits):
            if c:
                f.values.setdefault(k, {})[b] = 1
        if not any(morphism_residual(prob.A, prob.B, prob.alpha, prob.beta, f, *x) for x in keys):
            found.append(bits)
    return cells, found


def brute_force_homotopy_grade_one(prob):
    """All grade-1 homotopy components over GF(2) satisfying the cylinder identity on grade 2."""
    from obstruct.coalgebra import morphism_residual
    from obstruct.cylinder import Cylinder

    cyl = Cylinder(prob.A, prob.B, prob.beta, prob.sigma, prob.diag)
    cells = grade_one_cells(prob, 1)
    keys = prob.A.basis_grade(2, prob.arity_cutoff)
    found = []
    for bits in product(range(2), repeat=len(cells)):
        f01 = {}
        for (k, b), c in zip(cells, bits):
            if c:
                f01.setdefault(k, {})[b] = 1
        f = cyl.combine(prob.lower, prob.upper, f01)
        if not any(morphism_residual(prob.A, cyl.CC, prob.alpha, cyl.gamma, f, *x) for x in keys):
            found.append(bits)
    return cells, found


def _subtree_cuts(t, path=()):
    """``(path, subtree)`` for every vertex in pre-order."""
    from obstruct import trees as T
    if T.is_leaf(t):
        return []
    out = [(path, t)]
    for k, c in enumerate(t[1]):
        out.extend(_subtree_cuts(c, path + (k,)))
    return out


def _replace(t, path, new):
    if not path:
        return new
    lab, kids = t
    k = path[0]
    return (lab, kids[:k] + (_replace(kids[k], path[1:], new),) + kids[k + 1:])


def nu2(calc, t):
    """Infinitesimal decomposition: one term ``(L, U, leaves of U)`` per vertex.

    ``L`` has the subtree ``U`` replaced by a leaf numbered like the smallest
    leaf of ``U``; both parts are normalized.  The sign moves the symbols of
    ``U`` past the symbols written after them.
    """
    from obstruct import trees as T
    out = {}
    syms = [calc.symbol_degree(x[0]) for _, x in _subtree_cuts(t)]
    for pos, (path, U) in enumerate(_subtree_cuts(t)):
        size = T.weight(U)
        deg_u = sum(syms[pos:pos + size])
        after = sum(syms[pos + size:])
        s = -1 if (deg_u * after) % 2 else 1
        uleaves = tuple(sorted(T.leaves(U)))
        rest = sorted(set(T.leaves(t)) - set(uleaves)) + [uleaves[0]]
        rank = {x: k for k, x in enumerate(sorted(rest), 1)}
        L = _relabel_with_placeholder(_replace(t, path, "*"), rank, rank[uleaves[0]])
        U2 = T.relabel(U, {x: k for k, x in enumerate(uleaves, 1)})
        sl, nl = calc.normalize(L)
        su, nu = calc.normalize(U2)
        key = (nl, nu, uleaves)
        out[key] = out.get(key, 0) + s * sl * su
    return lin(out)


def _relabel_with_placeholder(t, rank, slot):
    from obstruct import trees as T
    if t == "*":
        return slot
    if T.is_leaf(t):
        return rank[t]
    return (t[0], tuple(_relabel_with_placeholder(c, rank, slot) for c in t[1]))


def nu2_compatible(calc, t):
    """``nu2(dt) == (d (x) 1 + 1 (x) d) nu2(t)`` with the Koszul sign on the second part."""
    from obstruct.bar import bar_differential
    lhs = {}
    for t2, c in bar_differential(calc, t).items():
        for k, c2 in nu2(calc, t2).items():
            lhs[k] = lhs.get(k, 0) + c * c2
    rhs = {}
    for (L, U, S), c in nu2(calc, t).items():
        for L2, c2 in bar_differential(calc, L).items():
            rhs[(L2, U, S)] = rhs.get((L2, U, S), 0) + c * c2
        s = -1 if calc.degree(L) % 2 else 1
        for U2, c3 in bar_differential(calc, U).items():
            rhs[(L, U2, S)] = rhs.get((L, U2, S), 0) + s * c * c3
    return lin(lhs) == lin(rhs)
