"""The Barratt-Eccles chain operad.

A basis element of arity ``r`` and degree ``t`` is a normalized tuple
``(w_0, ..., w_t)`` of permutations of ``{1..r}`` with no two adjacent entries
equal.  Chains are dicts ``{tuple: coefficient}`` with integer coefficients.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterator, Tuple

from . import perms
from .linalg import InputError

ETuple = Tuple[perms.Perm, ...]


def degree(w: ETuple) -> int:
    return len(w) - 1


def arity(w: ETuple) -> int:
    return len(w[0])


def is_normalized(w: ETuple) -> bool:
    return all(w[k] != w[k + 1] for k in range(len(w) - 1))


def basis(r: int, t: int) -> Iterator[ETuple]:
    """All normalized tuples of arity ``r`` and degree ``t``, lexicographic."""
    ps = perms.all_perms(r)

    def extend(prefix):
        if len(prefix) == t + 1:
            yield tuple(prefix)
            return
        for p in ps:
            if prefix and p == prefix[-1]:
                continue
            prefix.append(p)
            yield from extend(prefix)
            prefix.pop()

    yield from extend([])


def count(r: int, t: int) -> int:
    f = 1
    for k in range(2, r + 1):
        f *= k
    return f * (f - 1) ** t


def unit(r: int = 1) -> ETuple:
    return (perms.identity(r),)


def e_differential(w: ETuple) -> Dict[ETuple, int]:
    """Alternating sum of faces; degenerate faces vanish."""
    out: Dict[ETuple, int] = {}
    n = len(w)
    if n == 1:
        return out
    normal = is_normalized(w)
    for i in range(n):
        # deleting an entry of a normalized tuple only creates a repeat at the junction
        if normal:
            if 0 < i < n - 1 and w[i - 1] == w[i + 1]:
                continue
            face = w[:i] + w[i + 1:]
        else:
            face = w[:i] + w[i + 1:]
            if not is_normalized(face):
                continue
        c = out.get(face, 0) + (-1 if i % 2 else 1)
        if c:
            out[face] = c
        else:
            out.pop(face, None)
    return out


@lru_cache(maxsize=None)
def _paths(m: int, n: int):
    """Monotone lattice paths (0,0)->(m,n) with their shuffle signs."""
    out = []
    for ys in combinations(range(m + n), n):
        yset = set(ys)
        x = y = 0
        pts = [(0, 0)]
        inv = 0
        xs_seen = 0
        for step in range(m + n):
            if step in yset:
                y += 1
                inv += m - xs_seen  # x-steps still to come after this y-step
            else:
                x += 1
                xs_seen += 1
            pts.append((x, y))
        out.append((tuple(pts), -1 if inv % 2 else 1))
    return tuple(out)


def e_compose(w: ETuple, i: int, v: ETuple) -> Dict[ETuple, int]:
    """Partial composite ``w o_i v``: a signed sum over monotone lattice paths."""
    r = arity(w)
    if not 1 <= i <= r:
        raise InputError(f"slot {i} out of range for arity {r}")
    m, n = len(w) - 1, len(v) - 1
    out: Dict[ETuple, int] = {}
    for pts, sgn in _paths(m, n):
        t = tuple(perms.block_insert(w[a], i, v[b]) for a, b in pts)
        if not is_normalized(t):
            continue
        c = out.get(t, 0) + sgn
        if c:
            out[t] = c
        else:
            out.pop(t, None)
    return out


def reslot(w: ETuple, tau: perms.Perm) -> ETuple:
    return tuple(perms.reslot(x, tau) for x in w)


def act(sigma: perms.Perm, w: ETuple) -> ETuple:
    """Left action of ``sigma`` on entries (``w_k -> sigma o w_k``)."""
    return tuple(perms.compose(sigma, x) for x in w)


def aw_diagonal(w: ETuple):
    """Alexander-Whitney diagonal: ``(front, back)`` pairs sharing one entry."""
    return [(w[: k + 1], w[k:]) for k in range(len(w))]
