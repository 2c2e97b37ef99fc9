"""Permutations as tuples of images, ``w = (w(1), ..., w(r))``.

A permutation doubles as an associative word: ``w`` is the operation
``x_1 ... x_r -> x_{w(1)} ... x_{w(r)}``.  Block insertion is substitution of
words, and :func:`reslot` is the change of labels induced by reordering the
inputs of an operation.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from typing import List, Sequence, Tuple

Perm = Tuple[int, ...]


def identity(r: int) -> Perm:
    return tuple(range(1, r + 1))


@lru_cache(maxsize=None)
def all_perms(r: int) -> Tuple[Perm, ...]:
    return tuple(permutations(range(1, r + 1)))


def compose(a: Perm, b: Perm) -> Perm:
    """``(a o b)(k) = a(b(k))``."""
    return tuple(a[x - 1] for x in b)


def inverse(a: Perm) -> Perm:
    out = [0] * len(a)
    for k, x in enumerate(a, 1):
        out[x - 1] = k
    return tuple(out)


def adjacent(r: int, k: int) -> Perm:
    """The transposition exchanging ``k`` and ``k+1``."""
    w = list(range(1, r + 1))
    w[k - 1], w[k] = w[k], w[k - 1]
    return tuple(w)


def sign(a: Perm) -> int:
    inv = sum(1 for i in range(len(a)) for j in range(i + 1, len(a)) if a[i] > a[j])
    return -1 if inv % 2 else 1


def block_insert(w: Perm, i: int, v: Perm) -> Perm:
    """Substitute the word ``v`` for the letter ``i`` of ``w``."""
    s = len(v)
    out: List[int] = []
    for x in w:
        if x < i:
            out.append(x)
        elif x == i:
            out.extend(y + i - 1 for y in v)
        else:
            out.append(x + s - 1)
    return tuple(out)


def reslot(w: Perm, tau: Perm) -> Perm:
    """Relabel ``w`` after the inputs are reordered so slot ``j`` gets old ``tau(j)``."""
    tinv = inverse(tau)
    return tuple(tinv[x - 1] for x in w)


def adjacent_word(tau: Perm) -> List[int]:
    """Indices ``k_1..k_m`` with ``tau = s_{k_1} o ... o s_{k_m}``."""
    work = list(tau)
    steps: List[int] = []
    n = len(work)
    changed = True
    while changed:
        changed = False
        for k in range(n - 1):
            if work[k] > work[k + 1]:
                work[k], work[k + 1] = work[k + 1], work[k]
                steps.append(k + 1)
                changed = True
    # tau o s_{steps[0]} o ... = id  =>  tau = s_{steps[-1]} o ... o s_{steps[0]}
    return steps[::-1]


def koszul_sign(degrees: Sequence[int], order: Sequence[int]) -> int:
    """Sign of moving items with ``degrees`` into the sequence ``order``.

    ``order[k]`` is the original index of the item that ends in position ``k``.
    Each transposed pair of odd items contributes a factor ``-1``.
    """
    odd = 0
    n = len(order)
    for a in range(n):
        da = degrees[order[a]]
        if not da & 1:
            continue
        oa = order[a]
        for b in range(a + 1, n):
            if order[b] < oa and degrees[order[b]] & 1:
                odd ^= 1
    return -1 if odd else 1
