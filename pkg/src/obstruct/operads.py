"""Connected operads with monomial symmetric actions.

An operad exposes its basis per arity, degrees, the relabeling ``reslot`` and
partial compositions.  ``reslot(p, tau)`` returns ``(sign, p')`` where ``p'``
is the label of the same operation once its inputs are reordered so that slot
``j`` receives the old input ``tau(j)``.  Only signed-permutation actions are
supported; this keeps orbit representatives of trees well defined.
"""

from __future__ import annotations

import hashlib
import json
from typing import Dict, Hashable, List, Tuple

from . import perms
from .linalg import InputError


class Operad:
    name = "operad"

    def basis(self, r: int) -> List[Hashable]:
        raise NotImplementedError

    def degree(self, p) -> int:
        return 0

    def reslot(self, p, tau: perms.Perm) -> Tuple[int, Hashable]:
        raise NotImplementedError

    def compose(self, p, i: int, q) -> Dict[Hashable, int]:
        raise NotImplementedError

    def arity(self, p) -> int:
        raise NotImplementedError

    def unit(self):
        return self.basis(1)[0]

    def content_hash(self, max_arity: int) -> str:
        return hashlib.sha256(json.dumps(self.describe(max_arity), sort_keys=True).encode()).hexdigest()[:16]

    def describe(self, max_arity: int):
        return {"name": self.name}

    def encode(self, p):
        return p

    def decode(self, obj):
        return obj


class Com(Operad):
    """Commutative operad: one operation ``r`` in each arity ``r >= 1``."""

    name = "Com"

    def basis(self, r):
        return [r] if r >= 1 else []

    def arity(self, p):
        return p

    def reslot(self, p, tau):
        return 1, p

    def compose(self, p, i, q):
        if not 1 <= i <= p:
            raise InputError(f"slot {i} out of range for arity {p}")
        return {p + q - 1: 1}


class Ass(Operad):
    """Associative operad: words ``x_{w(1)}...x_{w(r)}`` for ``w`` in Sigma_r."""

    name = "Ass"

    def basis(self, r):
        return list(perms.all_perms(r)) if r >= 1 else []

    def arity(self, p):
        return len(p)

    def reslot(self, p, tau):
        return 1, perms.reslot(p, tau)

    def compose(self, p, i, q):
        if not 1 <= i <= len(p):
            raise InputError(f"slot {i} out of range for arity {len(p)}")
        return {perms.block_insert(p, i, q): 1}

    def encode(self, p):
        return list(p)

    def decode(self, obj):
        return tuple(obj)


class TableOperad(Operad):
    """Operad given by explicit tables.

    ``table`` has ``name``, ``operations`` (list of ``{"id", "arity", "degree"}``),
    ``actions`` (``{id: {k: [sign, id']}}`` giving ``reslot`` by the adjacent
    transposition ``s_k``) and ``compositions`` (list of
    ``{"outer", "slot", "inner", "result": {id: coeff}}``).  Missing actions
    default to the trivial action; missing compositions are zero.
    """

    def __init__(self, table: dict):
        self.table = table
        self.name = table.get("name", "table")
        self._arity: Dict[str, int] = {}
        self._degree: Dict[str, int] = {}
        self._by_arity: Dict[int, List[str]] = {}
        for op in table["operations"]:
            pid = str(op["id"])
            if pid in self._arity:
                raise InputError(f"duplicate operation id {pid!r}")
            r = int(op["arity"])
            if r < 1:
                raise InputError("operads must be connected: no arity-0 operations")
            self._arity[pid] = r
            self._degree[pid] = int(op.get("degree", 0))
            self._by_arity.setdefault(r, []).append(pid)
        if len(self._by_arity.get(1, [])) != 1 or self._degree[self._by_arity[1][0]] != 0:
            raise InputError("operads must be connected: exactly one arity-1 operation of degree 0")
        self._act: Dict[Tuple[str, int], Tuple[int, str]] = {}
        for pid, gens in table.get("actions", {}).items():
            for k, (sgn, target) in gens.items():
                if pid not in self._arity or str(target) not in self._arity:
                    raise InputError(f"action references unknown operation {pid!r}/{target!r}")
                self._act[(pid, int(k))] = (int(sgn), str(target))
        self._comp: Dict[Tuple[str, int, str], Dict[str, int]] = {}
        for c in table.get("compositions", []):
            key = (str(c["outer"]), int(c["slot"]), str(c["inner"]))
            for x in (key[0], key[2]):
                if x not in self._arity:
                    raise InputError(f"composition references unknown operation {x!r}")
            self._comp[key] = {str(k): v for k, v in c["result"].items()}

    def basis(self, r):
        return list(self._by_arity.get(r, []))

    def degree(self, p):
        return self._degree[p]

    def arity(self, p):
        return self._arity[p]

    def reslot(self, p, tau):
        sgn = 1
        for k in perms.adjacent_word(tau):
            s, p = self._act.get((p, k), (1, p))
            sgn *= s
        return sgn, p

    def compose(self, p, i, q):
        if not 1 <= i <= self._arity[p]:
            raise InputError(f"slot {i} out of range for arity {self._arity[p]}")
        u = self.unit()
        if p == u:
            return {q: 1}
        if q == u:
            return {p: 1}
        return dict(self._comp.get((p, i, q), {}))

    def describe(self, max_arity):
        return self.table


def builtin(name: str) -> Operad:
    if name == "Com":
        return Com()
    if name == "Ass":
        return Ass()
    raise InputError(f"unknown builtin operad {name!r}")
