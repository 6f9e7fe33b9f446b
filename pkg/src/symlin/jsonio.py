"""JSON encodings, their schemas, and decoding with path-bearing errors."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import jsonschema

from .combinat import adjacent_transposition
from .polyfun import Monomial, PolyFunSeq, PolyMultiFun
from .sphere import INF, SimplexPoint, fraction_str
from .symseq import BASEPOINT, OperadData, PointedSigmaSet, SymSeq, render

__all__ = [
    "DataError",
    "SCHEMAS",
    "validate",
    "emit_schemas",
    "symseq_to_json",
    "symseq_from_json",
    "operad_to_json",
    "operad_from_json",
    "funseq_to_json",
    "funseq_from_json",
    "sphere_point_to_json",
    "sphere_point_from_json",
    "dumps",
]

_DRAFT = "https://json-schema.org/draft/2020-12/schema"
_FRACTION = r"^[0-9]+(/[1-9][0-9]*)?$"
_GENERATOR_KEY = {"pattern": "^[1-9][0-9]*$"}


class DataError(ValueError):
    """Input that is well-formed JSON but not a valid object; ``path`` locates the problem."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


_SYMSEQ_LEVEL = {
    "type": "object",
    "required": ["n", "elements"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "elements": {"type": "array", "items": {"type": "string"}, "uniqueItems": True},
        "action": {
            "type": "object",
            "propertyNames": _GENERATOR_KEY,
            "additionalProperties": {"type": "object", "additionalProperties": {"type": "string"}},
        },
    },
    "additionalProperties": False,
}

_POINT = {"type": "array", "prefixItems": [{"type": "integer", "minimum": 0}, {"type": "string"}], "items": False, "minItems": 2}

SCHEMAS = {
    "symseq": {
        "$schema": _DRAFT,
        "title": "SymSeq",
        "type": "object",
        "required": ["levels"],
        "properties": {"levels": {"type": "array", "items": _SYMSEQ_LEVEL}},
        "additionalProperties": False,
    },
    "operad": {
        "$schema": _DRAFT,
        "title": "OperadData",
        "type": "object",
        "required": ["levels", "unit", "gamma"],
        "properties": {
            "levels": {"type": "array", "items": _SYMSEQ_LEVEL},
            "unit": {"type": "string"},
            "gamma": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["k", "parts", "table"],
                    "properties": {
                        "k": {"type": "integer", "minimum": 1},
                        "parts": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
                        "table": {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "required": ["in", "out"],
                                "properties": {
                                    "in": {"type": "array", "items": {"type": "string"}, "minItems": 2},
                                    "out": {"type": ["string", "null"]},
                                },
                                "additionalProperties": False,
                            },
                        },
                    },
                    "additionalProperties": False,
                },
            },
        },
        "additionalProperties": False,
    },
    "funseq": {
        "$schema": _DRAFT,
        "title": "PolyFunSeq",
        "type": "object",
        "required": ["levels"],
        "properties": {
            "levels": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["n", "terms"],
                    "properties": {
                        "n": {"type": "integer", "minimum": 1},
                        "terms": {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "required": ["coeff", "exp"],
                                "properties": {
                                    "coeff": {"type": "array", "items": {"type": "string"}, "uniqueItems": True},
                                    "exp": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                                },
                                "additionalProperties": False,
                            },
                        },
                        "action": {
                            "type": "object",
                            "propertyNames": _GENERATOR_KEY,
                            "additionalProperties": {
                                "type": "array",
                                "items": {
                                    "type": "object",
                                    "required": ["from", "to"],
                                    "properties": {"from": _POINT, "to": _POINT},
                                    "additionalProperties": False,
                                },
                            },
                        },
                    },
                    "additionalProperties": False,
                },
            }
        },
        "additionalProperties": False,
    },
    "sphere-point": {
        "$schema": _DRAFT,
        "title": "SpherePoint",
        "oneOf": [
            {"const": "inf"},
            {"type": "array", "minItems": 1, "items": {"type": "string", "pattern": _FRACTION}},
        ],
    },
    "report": {
        "$schema": _DRAFT,
        "title": "Report",
        "type": "object",
        "required": ["status"],
        "properties": {"status": {"enum": ["pass", "fail", "not-established"]}},
        "if": {"properties": {"status": {"const": "fail"}}},
        "then": {
            "anyOf": [
                {"required": ["witness"], "properties": {"witness": {"not": {"type": "null"}}}},
                {"required": ["counterexample"], "properties": {"counterexample": {"not": {"type": "null"}}}},
            ]
        },
    },
}


def _path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def validate(kind: str, data) -> None:
    validator = jsonschema.Draft202012Validator(SCHEMAS[kind])
    error = jsonschema.exceptions.best_match(validator.iter_errors(data))
    if error is not None:
        raise DataError(error.message, _path(error.absolute_path))


def emit_schemas(directory) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for kind, schema in SCHEMAS.items():
        path = directory / f"{kind}.schema.json"
        path.write_text(dumps(schema))
        written.append(path)
    return written


def dumps(data) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def _check_levels(levels) -> None:
    for i, lvl in enumerate(levels):
        if lvl["n"] != i + 1:
            raise DataError(f"expected level {i + 1}, found {lvl['n']}", f"$.levels[{i}].n")


def _generator_keys(action: dict, n: int, where: str) -> dict[int, dict]:
    out = {}
    for key, table in action.items():
        i = int(key)
        if not 1 <= i < n:
            raise DataError(f"no adjacent transposition s_{i} at arity {n}", f"{where}.action.{key}")
        out[i] = table
    return out


def _symseq_levels(levels) -> SymSeq:
    _check_levels(levels)
    out = []
    for i, lvl in enumerate(levels):
        n, elements = lvl["n"], tuple(lvl["elements"])
        where = f"$.levels[{i}]"
        gens = _generator_keys(lvl.get("action", {}), n, where)
        for g, table in gens.items():
            for x, y in table.items():
                if x not in elements or y not in elements:
                    raise DataError(f"action moves {x!r} to {y!r} outside the level", f"{where}.action.{g}")
        try:
            out.append(PointedSigmaSet.from_generators(n, elements, gens) if gens else PointedSigmaSet(n, elements))
        except ValueError as exc:
            raise DataError(str(exc), f"{where}.action") from None
    return SymSeq(tuple(out))


def symseq_from_json(data) -> SymSeq:
    validate("symseq", data)
    return _symseq_levels(data["levels"])


def _symseq_levels_json(A: SymSeq) -> list[dict]:
    out = []
    for lvl in A.levels:
        entry = {"n": lvl.arity, "elements": [render(x) for x in lvl.elements]}
        tables = lvl.generator_tables()
        if tables:
            entry["action"] = {str(i): {render(x): render(y) for x, y in t.items()} for i, t in tables.items()}
        out.append(entry)
    return out


def symseq_to_json(A: SymSeq) -> dict:
    return {"levels": _symseq_levels_json(A)}


def operad_from_json(data) -> OperadData:
    validate("operad", data)
    seq = _symseq_levels(data["levels"])
    gamma = {}
    for i, block in enumerate(data["gamma"]):
        k, parts = block["k"], tuple(block["parts"])
        if len(parts) != k:
            raise DataError(f"{len(parts)} parts for k={k}", f"$.gamma[{i}].parts")
        table = gamma.setdefault((k, parts), {})
        for r, row in enumerate(block["table"]):
            if len(row["in"]) != k + 1:
                raise DataError(f"expected {k + 1} inputs", f"$.gamma[{i}].table[{r}].in")
            table[tuple(row["in"])] = BASEPOINT if row["out"] is None else row["out"]
    return OperadData(seq, data["unit"], gamma)


def operad_to_json(O: OperadData) -> dict:
    gamma = []
    for (k, parts), table in sorted(O.gamma.items()):
        rows = [{"in": list(inputs), "out": None if out is BASEPOINT else out} for inputs, out in table.items()]
        gamma.append({"k": k, "parts": list(parts), "table": rows})
    return {"levels": _symseq_levels_json(O.seq), "unit": O.unit, "gamma": gamma}


def funseq_from_json(data) -> PolyFunSeq:
    validate("funseq", data)
    _check_levels(data["levels"])
    levels = []
    for i, lvl in enumerate(data["levels"]):
        n, where = lvl["n"], f"$.levels[{i}]"
        terms = []
        for t, term in enumerate(lvl["terms"]):
            if len(term["exp"]) != n:
                raise DataError(f"exponent vector of length {len(term['exp'])} at level {n}", f"{where}.terms[{t}].exp")
            terms.append(Monomial(tuple(term["coeff"]), tuple(term["exp"])))
        gens = _generator_keys(lvl.get("action", {}), n, where)
        try:
            if gens:
                tables = {g: {tuple(m["from"]): tuple(m["to"]) for m in moves} for g, moves in gens.items()}
                levels.append(PolyMultiFun.from_generators(n, terms, tables))
            else:
                levels.append(PolyMultiFun(n, tuple(terms)))
        except ValueError as exc:
            raise DataError(str(exc), where) from None
    return PolyFunSeq(tuple(levels))


def funseq_to_json(F: PolyFunSeq) -> dict:
    """Labels are rendered to strings; the action lists only points that leave the default action."""
    levels = []
    for lvl in F.levels:
        entry = {
            "n": lvl.arity,
            "terms": [{"coeff": [render(c) for c in term.coeff], "exp": list(term.exponents)} for term in lvl.terms],
        }
        default = PolyMultiFun(lvl.arity, lvl.terms).symmetry
        action = {}
        for i in range(1, lvl.arity):
            s = adjacent_transposition(lvl.arity, i)
            moves = []
            for p in lvl.symmetry.elements:
                q = lvl.symmetry.act(s, p)
                if q != default.act(s, p):
                    moves.append({"from": [p[0], render(p[1])], "to": [q[0], render(q[1])]})
            if moves:
                action[str(i)] = moves
        if action:
            entry["action"] = action
        levels.append(entry)
    return {"levels": levels}


def sphere_point_to_json(p):
    return "inf" if p is INF else [fraction_str(c) for c in p.coords]


def sphere_point_from_json(data):
    validate("sphere-point", data)
    if data == "inf":
        return INF
    try:
        return SimplexPoint(tuple(Fraction(c) for c in data))
    except (ValueError, ZeroDivisionError) as exc:
        raise DataError(str(exc)) from None
