"""Bundled manifests.

Each fixture is a manifest document (schema 1) built in code so that the
tree expressions stay readable.
"""

from __future__ import annotations

import copy
from typing import Dict, List

# the E-degree 1 binary corolla label of Com: operation 2 with (id, transposition)
E1_COM = [2, [[1, 2], [2, 1]]]

UNIT_X = {
    "basis": [["1", 0], ["x", 0]],
}
UNIT_X_PRODUCT = [["1", "1", {"1": 1}], ["1", "x", {"x": 1}], ["x", "1", {"x": 1}]]


def _strict(operad: str) -> dict:
    return {
        "schema": 1,
        "name": f"{operad.lower()}-strict",
        "field": "Q",
        "operad": operad,
        "cutoffs": {"grade": 3, "arity": 3},
        "algebras": {"A": UNIT_X},
        "alpha": {"product": UNIT_X_PRODUCT},
        "f0": {"1": {"1": 1}, "x": {"x": 1}},
    }


def _graded_com() -> dict:
    return {
        "schema": 1,
        "name": "graded-com",
        "field": "Q",
        "operad": "Com",
        "cutoffs": {"grade": 3, "arity": 3},
        "algebras": {"A": {"basis": [["u", 1], ["v", 1], ["w", 2]]}},
        "alpha": {"product": [["u", "v", {"w": 1}], ["v", "u", {"w": -1}]]},
        "f0": {"u": {"u": 1}, "v": {"v": 1}, "w": {"w": 1}},
    }


def _massey(field: str) -> dict:
    # a single grade-2 component on the source, trivial products on the target
    return {
        "schema": 1,
        "name": "massey-gf2" if field == "GF(2)" else "massey-q",
        "field": field,
        "operad": "Com",
        "cutoffs": {"grade": 3, "arity": 3},
        "algebras": {"A": {"basis": [["x", 0], ["y", 1]]},
                     "B": {"basis": [["x", 0], ["y", 1]]}},
        "alpha": {"terms": [[[E1_COM, 1, 2], ["x", "x"], {"y": 1}]]},
        "beta": {},
        "f0": {"x": {"x": 1}, "y": {"y": 1}},
    }


def _homotopy_equal() -> dict:
    doc = _strict("Com")
    doc["name"] = "homotopy-equal"
    doc["homotopy"] = {"f0": [], "f1": []}
    return doc


def _homotopy_coboundary() -> dict:
    # f1 = f0 + delta(g) where g sends the grade-1 corollas on (1, 1) and (1, 1, 1) to y
    mu = [2, [[1, 2]]]
    return {
        "schema": 1,
        "name": "homotopy-coboundary",
        "field": "Q",
        "operad": "Com",
        "cutoffs": {"grade": 3, "arity": 3},
        "algebras": {"A": {"basis": [["1", 0], ["y", 2]]}},
        "alpha": {"product": [["1", "1", {"1": 1}], ["1", "y", {"y": 1}], ["y", "1", {"y": 1}]]},
        "f0": {"1": {"1": 1}, "y": {"y": 1}},
        "homotopy": {
            "f0": [],
            "f1": [
                [[mu, 1, [mu, 2, 3]], ["1", "1", "1"], {"y": -1}],
                [[mu, [mu, 1, 2], 3], ["1", "1", "1"], {"y": -1}],
            ],
        },
    }


def _homotopy_gf2() -> dict:
    # f1 - f0 is a cocycle that is not a coboundary: E1(x, x) -> z
    return {
        "schema": 1,
        "name": "homotopy-gf2",
        "field": "GF(2)",
        "operad": "Com",
        "cutoffs": {"grade": 3, "arity": 3},
        "algebras": {"A": {"basis": [["x", 0], ["z", 2]]}},
        "alpha": {},
        "f0": {"x": {"x": 1}, "z": {"z": 1}},
        "homotopy": {"f0": [], "f1": [[[E1_COM, 1, 2], ["x", "x"], {"z": 1}]]},
    }


_BUILDERS = {
    "com-strict": lambda: _strict("Com"),
    "ass-strict": lambda: _strict("Ass"),
    "graded-com": _graded_com,
    "massey-gf2": lambda: _massey("GF(2)"),
    "massey-q": lambda: _massey("Q"),
    "homotopy-equal": _homotopy_equal,
    "homotopy-coboundary": _homotopy_coboundary,
    "homotopy-gf2": _homotopy_gf2,
}

# structure fixtures used for comparing the two validity checks; massey-q is invalid
ALPHA_FIXTURES = ["com-strict", "ass-strict", "graded-com", "massey-gf2", "massey-q"]
HOMOTOPY_FIXTURES = ["homotopy-equal", "homotopy-coboundary", "homotopy-gf2"]


def names() -> List[str]:
    return sorted(_BUILDERS)


def load(name: str) -> Dict:
    if name not in _BUILDERS:
        raise KeyError(name)
    return copy.deepcopy(_BUILDERS[name]())
