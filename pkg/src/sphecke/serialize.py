"""JSON forms for graded elements and reports.

Serialization is canonical: grades ascending, support vectors
reverse-lexicographically descending, monomials sorted.  Round trips
are bit-exact (integer coefficients of any size survive).
"""

from __future__ import annotations

import json

from .laurent import Laurent
from .rootdata import RootDatum
from .satake import CELLS, GradedElement, Window


def element_to_obj(e: GradedElement) -> dict:
    key = "mu" if e.basis == CELLS else "lambda"
    grades = []
    for k in sorted(e.grades):
        terms = [
            {key: list(vec), "coeff": e.grades[k][vec].to_json()}
            for vec in sorted(e.grades[k], reverse=True)
        ]
        grades.append({"k": k, "terms": terms})
    return {"basis": e.basis, "window": e.window.to_json(), "grades": grades}


def element_from_obj(rd: RootDatum, obj: dict) -> GradedElement:
    basis = obj["basis"]
    key = "mu" if basis == CELLS else "lambda"
    grades = {}
    for g in obj["grades"]:
        grades[int(g["k"])] = {
            tuple(int(x) for x in t[key]): Laurent.from_json(t["coeff"])
            for t in g["terms"]
        }
    lo, hi = obj["window"]
    return GradedElement(rd, basis, grades, Window(lo, hi))


def element_to_json(e: GradedElement) -> str:
    return json.dumps(element_to_obj(e), sort_keys=True)


def element_from_json(rd: RootDatum, text: str) -> GradedElement:
    return element_from_obj(rd, json.loads(text))
