"""Manifests, reports and the on-disk basis cache.

A manifest is a JSON document::

    {
      "schema": 1,
      "name": "com-strict",
      "field": "Q",
      "operad": "Com",
      "cutoffs": {"grade": 3, "arity": 3},
      "algebras": {"A": {"basis": [["1", 0], ["x", 0]], "differential": []}},
      "alpha": {"product": [["1", "1", {"1": 1}], ...], "terms": []},
      "f0": {"1": {"1": 1}, "x": {"x": 1}}
    }

``algebras.B`` and ``beta`` default to ``A`` and ``alpha``.  Structure maps
combine a strict part (``product``: an associative binary table, or
``action``: explicit values ``[p, inputs, vector]`` on operations) with
extra ``terms`` ``[tree, inputs, vector]``.  Tree expressions are nested
arrays ``[label, child, ...]`` with integer leaves and labels
``[operation, [permutation, ...]]``.  Vectors map basis names to scalars
(integers or ``"a/b"`` strings).  The optional ``homotopy`` section holds
the higher components of the two maps as ``{"f0": [...], "f1": [...]}``
term lists, and ``providers`` holds interval-action and diagonal tables.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Tuple

from . import __version__
from . import barratt_eccles as E
from . import perms
from . import trees as T
from .bar import bar_basis
from .coalgebra import Algebra, Cochain, CofreeCoalgebra, Vector, strict_structure
from .cylinder import DiagonalProvider, IntervalAction, NAMES, TableDiagonal, TableIntervalAction
from .linalg import Field, InputError
from .operads import Operad, TableOperad, builtin
from .solver import morphism_from_f0
from .trees import TreeCalculus

SCHEMA = 1


class ManifestError(InputError):
    """A schema error with the JSON path where it occurred."""

    def __init__(self, where: str, msg: str):
        super().__init__(f"{where}: {msg}")
        self.where = where


def read_json(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read manifest {path!r}: {exc.strerror}") from None
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        where = f"line {exc.lineno} column {exc.colno}" if isinstance(exc, json.JSONDecodeError) else "encoding"
        raise ManifestError(f"{path}: {where}", "not valid JSON") from None
    if not isinstance(doc, dict):
        raise ManifestError("$", "manifest must be a JSON object")
    return doc


def content_hash(doc) -> str:
    return hashlib.sha256(canonical_json(doc).encode()).hexdigest()


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


# -- problems ---------------------------------------------------------------------

@dataclass
class Problem:
    name: str
    field: Field
    operad: Operad
    calc: TreeCalculus
    A: CofreeCoalgebra
    B: CofreeCoalgebra
    alpha: Cochain
    beta: Cochain
    f0: Dict[int, Vector]
    grade_cutoff: int
    arity_cutoff: int
    lower: Optional[Cochain] = None
    upper: Optional[Cochain] = None
    sigma: object = None
    diag: object = None
    doc: dict = dc_field(default_factory=dict)


def _need(obj, key, where, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise ManifestError(where, f"missing required field {key!r}")
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise ManifestError(f"{where}.{key}", f"expected {kind.__name__ if isinstance(kind, type) else kind}")
    return val


def _algebra(obj, fld: Field, where: str) -> Algebra:
    basis = _need(obj, "basis", where, list)
    names, degs = [], []
    for i, item in enumerate(basis):
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], str) and isinstance(item[1], int)):
            raise ManifestError(f"{where}.basis[{i}]", "expected [name, degree]")
        names.append(item[0])
        degs.append(item[1])
    if len(set(names)) != len(names):
        raise ManifestError(f"{where}.basis", "basis names must be unique")
    alg = Algebra(fld, degs, names)
    diff: Dict[int, Vector] = {}
    for i, item in enumerate(obj.get("differential", [])):
        w = f"{where}.differential[{i}]"
        if not (isinstance(item, list) and len(item) == 3):
            raise ManifestError(w, "expected [source, target, coefficient]")
        a, b = _name(alg, item[0], w), _name(alg, item[1], w)
        if degs[b] != degs[a] - 1:
            raise ManifestError(w, "differential must lower degree by one")
        c = _scalar(fld, item[2], w)
        if c:
            diff.setdefault(a, {})[b] = c
    return Algebra(fld, degs, names, diff)


def _name(alg: Algebra, name, where) -> int:
    if name not in alg.names:
        raise ManifestError(where, f"unknown basis element {name!r}")
    return alg.names.index(name)


def _scalar(fld: Field, value, where):
    try:
        return fld.coerce(value)
    except (ValueError, ZeroDivisionError, TypeError, InputError):
        raise ManifestError(where, f"bad coefficient {value!r}") from None


def _vector(alg: Algebra, obj, where) -> Vector:
    if not isinstance(obj, dict):
        raise ManifestError(where, "expected a vector {name: coefficient}")
    out: Vector = {}
    for k, v in obj.items():
        c = _scalar(alg.field, v, f"{where}.{k}")
        if c:
            out[_name(alg, k, where)] = c
    return out


def _tree(obj, operad: Operad, where):
    try:
        t = T.decode(obj, operad)
    except (InputError, KeyError, TypeError, ValueError) as exc:
        raise ManifestError(where, f"bad tree expression: {exc}") from None
    return t


def _inputs(alg: Algebra, obj, where) -> Tuple[int, ...]:
    if not isinstance(obj, list):
        raise ManifestError(where, "expected a list of basis names")
    return tuple(_name(alg, x, where) for x in obj)


def product_action(operad: Operad, table: Dict[Tuple[int, int], Vector], degrees, fld: Field):
    """Strict action from an associative binary product.

    ``Com`` evaluates the iterated product in input order; ``Ass`` reads the
    inputs through the word ``p`` with the Koszul sign of reordering.
    """
    def mult(ins):
        v = {ins[0]: 1}
        for a in ins[1:]:
            nv: Vector = {}
            for u, c in v.items():
                for w, c2 in table.get((u, a), {}).items():
                    nv[w] = fld.reduce(nv.get(w, 0) + c * c2)
            v = {k: c for k, c in nv.items() if c}
        return v

    if operad.name == "Ass":
        def act(p, ins):
            order = [k - 1 for k in p]
            s = perms.koszul_sign([degrees[a] for a in ins], order)
            return {b: s * c for b, c in mult(tuple(ins[k] for k in order)).items()}
        return act
    if operad.name == "Com":
        return lambda p, ins: mult(ins)
    raise InputError("a product table needs a builtin operad; use explicit action values")


def _structure(obj, C: CofreeCoalgebra, operad: Operad, arity_cutoff: int, where) -> Cochain:
    alg = C.algebra
    fld = alg.field
    if obj is None:
        return Cochain(C, -1)
    if not isinstance(obj, dict):
        raise ManifestError(where, "expected an object")
    strict = None
    if "product" in obj:
        table: Dict[Tuple[int, int], Vector] = {}
        for i, item in enumerate(obj["product"]):
            w = f"{where}.product[{i}]"
            if not (isinstance(item, list) and len(item) == 3):
                raise ManifestError(w, "expected [left, right, vector]")
            table[(_name(alg, item[0], w), _name(alg, item[1], w))] = _vector(alg, item[2], w)
        try:
            strict = product_action(operad, table, alg.degrees, fld)
        except InputError as exc:
            raise ManifestError(f"{where}.product", str(exc)) from None
    if "action" in obj:
        values = {}
        for i, item in enumerate(obj["action"]):
            w = f"{where}.action[{i}]"
            if not (isinstance(item, list) and len(item) == 3):
                raise ManifestError(w, "expected [operation, inputs, vector]")
            ins = _inputs(alg, item[1], w)
            try:
                p = operad.decode(item[0])
                known = p in operad.basis(len(ins))
            except (InputError, KeyError, TypeError):
                known = False
            if not known:
                raise ManifestError(w, f"unknown operation {item[0]!r} in arity {len(ins)}")
            values[(p, ins)] = _vector(alg, item[2], w)
        base = strict
        strict = (lambda p, ins: values[(p, ins)] if (p, ins) in values else (base(p, ins) if base else {}))
    alpha = strict_structure(C, strict, arity_cutoff) if strict else Cochain(C, -1)
    for i, item in enumerate(obj.get("terms", [])):
        w = f"{where}.terms[{i}]"
        _term(alpha, item, operad, w)
    return alpha


def _term(m: Cochain, item, operad: Operad, where, target: Optional[Algebra] = None) -> None:
    if not (isinstance(item, list) and len(item) == 3):
        raise ManifestError(where, "expected [tree, inputs, vector]")
    C = m.source
    t = _tree(item[0], operad, f"{where}[0]")
    ins = _inputs(C.algebra, item[1], f"{where}[1]")
    if T.arity(t) != len(ins):
        raise ManifestError(where, "tree arity and number of inputs differ")
    s, nt = C.calc.normalize(t)
    vec = _vector(target or C.algebra, item[2], f"{where}[2]")
    res = C.canon.canonical(nt, ins)
    if res is None:
        return
    old = m.evaluate(nt, ins)
    new = dict(old)
    for b, c in vec.items():
        new[b] = C.field.reduce(new.get(b, 0) + s * c)
    m.set((nt, ins), new)


def _map_components(items, A: CofreeCoalgebra, B: Algebra, operad: Operad, f0: Dict[int, Vector], where) -> Cochain:
    f = morphism_from_f0(A, f0)
    f.grades = None
    for i, item in enumerate(items):
        _term(f, item, operad, f"{where}[{i}]", B)
    return f


def _e_tuple(obj, where):
    try:
        e = tuple(tuple(w) for w in obj)
    except TypeError:
        raise ManifestError(where, "expected a list of permutations") from None
    if not e or not E.is_normalized(e) or any(sorted(w) != list(range(1, len(e[0]) + 1)) for w in e):
        raise ManifestError(where, "invalid Barratt-Eccles tuple")
    return e


def _providers(obj, calc: TreeCalculus, where):
    sigma, diag = IntervalAction(), DiagonalProvider(calc)
    if not obj:
        return sigma, diag
    if not isinstance(obj, dict):
        raise ManifestError(where, "expected an object")
    if "sigma" in obj:
        s = obj["sigma"]
        vals = {}
        for i, item in enumerate(_need(s, "values", f"{where}.sigma", list)):
            w = f"{where}.sigma.values[{i}]"
            if not (isinstance(item, list) and len(item) == 3 and isinstance(item[1], list)
                    and isinstance(item[2], dict)):
                raise ManifestError(w, "expected [tuple, [cochain, ...], {cochain: coefficient}]")
            e = _e_tuple(item[0], w)
            if len(item[1]) != len(e[0]):
                raise ManifestError(w, "number of cochains differs from the arity")
            for u in list(item[1]) + list(item[2]):
                if u not in NAMES:
                    raise ManifestError(w, f"unknown interval cochain {u!r}")
            us = [NAMES.index(u) for u in item[1]]
            vals[(e, tuple(us))] = {NAMES.index(k): _int(v, w) for k, v in item[2].items() if _int(v, w)}
        sigma = TableIntervalAction(vals, _int(s.get("max_degree", 1), f"{where}.sigma.max_degree"), sigma)
    if "rho" in obj:
        r = obj["rho"]
        vals = {}
        for i, item in enumerate(_need(r, "values", f"{where}.rho", list)):
            w = f"{where}.rho.values[{i}]"
            if not (isinstance(item, list) and len(item) == 2 and isinstance(item[1], list)):
                raise ManifestError(w, "expected [tree, [[tree, tuple, coefficient], ...]]")
            _, t = calc.normalize(_tree(item[0], calc.P, w))
            out = {}
            for j, entry in enumerate(item[1]):
                if not (isinstance(entry, list) and len(entry) == 3):
                    raise ManifestError(f"{w}[{j}]", "expected [tree, tuple, coefficient]")
                _, nt2 = calc.normalize(_tree(entry[0], calc.P, f"{w}[{j}]"))
                out[(nt2, _e_tuple(entry[1], f"{w}[{j}]"))] = _int(entry[2], f"{w}[{j}]")
            vals[t] = out
        diag = TableDiagonal(calc, vals, _int(r.get("max_weight", 2), f"{where}.rho.max_weight"), diag)
    return sigma, diag


def _int(value, where) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ManifestError(where, f"expected an integer, got {value!r}")
    return value


def build_problem(doc: dict, grade_cutoff: Optional[int] = None, arity_cutoff: Optional[int] = None) -> Problem:
    if doc.get("schema") != SCHEMA:
        raise ManifestError("$.schema", f"expected schema {SCHEMA}")
    try:
        fld = Field.parse(_need(doc, "field", "$"))
    except InputError as exc:
        raise ManifestError("$.field", str(exc)) from None
    op = _need(doc, "operad", "$")
    try:
        operad = builtin(op) if isinstance(op, str) else TableOperad(op)
    except (InputError, KeyError, TypeError, ValueError) as exc:
        raise ManifestError("$.operad", f"bad operad: {exc}") from None
    cut = doc.get("cutoffs", {})
    if not isinstance(cut, dict):
        raise ManifestError("$.cutoffs", "expected an object")
    G = grade_cutoff if grade_cutoff is not None else _int(cut.get("grade", 3), "$.cutoffs.grade")
    R = arity_cutoff if arity_cutoff is not None else _int(cut.get("arity", 3), "$.cutoffs.arity")
    if G < 1 or R < 1:
        raise ManifestError("$.cutoffs", "cutoffs must be positive")
    algs = _need(doc, "algebras", "$", dict)
    A = _algebra(_need(algs, "A", "$.algebras"), fld, "$.algebras.A")
    B = _algebra(algs["B"], fld, "$.algebras.B") if "B" in algs else A
    calc = TreeCalculus(operad)
    CA = CofreeCoalgebra(calc, A)
    CB = CofreeCoalgebra(calc, B) if B is not A else CA
    alpha = _structure(doc.get("alpha"), CA, operad, R, "$.alpha")
    if "beta" in doc or B is not A:
        beta = _structure(doc.get("beta"), CB, operad, R, "$.beta")
    else:
        beta = alpha
    f0: Dict[int, Vector] = {}
    for k, v in doc.get("f0", {}).items():
        a = _name(A, k, "$.f0")
        vec = _vector(B, v, f"$.f0.{k}")
        if vec:
            f0[a] = vec
    prob = Problem(doc.get("name", "manifest"), fld, operad, calc, CA, CB, alpha, beta, f0, G, R, doc=doc)
    hom = doc.get("homotopy")
    if hom is not None:
        prob.lower = _map_components(hom.get("f0", []), CA, B, operad, f0, "$.homotopy.f0")
        prob.upper = _map_components(hom.get("f1", []), CA, B, operad, f0, "$.homotopy.f1")
    prob.sigma, prob.diag = _providers(doc.get("providers"), calc, "$.providers")
    return prob


# -- basis cache ----------------------------------------------------------------------

class BasisCache:
    """One JSON file per ``(operad hash, arity, grade)`` cell, written atomically."""

    def __init__(self, root: str, calc: TreeCalculus, arity_cutoff: int):
        self.root = root
        self.calc = calc
        self.key = calc.P.content_hash(arity_cutoff + 1)
        self.hits = 0
        self.misses = 0

    def path(self, arity: int, grade: int) -> str:
        return os.path.join(self.root, self.key, f"a{arity}_g{grade}.json")

    def trees(self, arity: int, grade: int) -> List[object]:
        p = self.path(arity, grade)
        P = self.calc.P
        try:
            with open(p, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
            if doc.get("operad") == self.key and doc.get("arity") == arity and doc.get("grade") == grade:
                self.hits += 1
                return [T.decode(x, P) for x in doc["trees"]]
        except (OSError, ValueError, KeyError, InputError):
            pass
        self.misses += 1
        ts = bar_basis(self.calc, arity, grade)
        doc = {"operad": self.key, "arity": arity, "grade": grade, "trees": [T.encode(t, P) for t in ts]}
        os.makedirs(os.path.dirname(p), exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(p), suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, separators=(",", ":"))
        os.replace(tmp, p)
        return ts

    def attach(self, *coalgebras: CofreeCoalgebra) -> None:
        for C in coalgebras:
            C.tree_source = self.trees


# -- report encoding --------------------------------------------------------------------

def encode_key(C: CofreeCoalgebra, key) -> dict:
    t, ins = key
    return {"tree": T.encode(t, C.calc.P), "inputs": [C.algebra.names[a] for a in ins]}


def encode_vector(alg: Algebra, vec: Vector) -> Dict[str, object]:
    return {alg.names[b]: alg.field.encode(c) for b, c in sorted(vec.items())}


def encode_values(C: CofreeCoalgebra, target: Algebra, values: Dict[tuple, Vector]) -> List[dict]:
    out = []
    for key, vec in values.items():
        if vec:
            d = encode_key(C, key)
            d["value"] = encode_vector(target, vec)
            out.append(d)
    out.sort(key=canonical_json)
    return out


def dump_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def new_report(command: str, prob: Optional[Problem], input_hash: str) -> dict:
    rep = {"command": command, "engine_version": __version__, "input_hash": input_hash, "schema": SCHEMA}
    if prob is not None:
        rep.update({"name": prob.name, "field": prob.field.name, "operad": prob.operad.name,
                    "cutoffs": {"grade": prob.grade_cutoff, "arity": prob.arity_cutoff}})
    return rep


def strip_timestamp(text: str) -> str:
    doc = json.loads(text)
    doc.pop("timestamp", None)
    return dump_report(doc)

