"""Case files: strict validation with line numbers, and conversion to ForcingData."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import jsonschema

from .membership import ForcingData
from .poly import is_prime
from .ring import GradedRing


class CaseFileError(ValueError):
    pass


def load_schema(name: str) -> dict:
    return json.loads(resources.files("forcing").joinpath("schemas", name).read_text())


_decoder = json.JSONDecoder()
_WS = " \t\n\r"


def _skip(text: str, i: int) -> int:
    while i < len(text) and text[i] in _WS:
        i += 1
    return i


def line_map(text: str) -> dict[tuple, int]:
    """Map each JSON path (tuple of keys and indices) to the line where its value starts."""
    out: dict[tuple, int] = {}

    def line(i: int) -> int:
        return text.count("\n", 0, i) + 1

    def value(i: int, path: tuple) -> int:
        i = _skip(text, i)
        out[path] = line(i)
        if text[i] == "{":
            i = _skip(text, i + 1)
            if text[i] == "}":
                return i + 1
            while True:
                key, i = _decoder.raw_decode(text, _skip(text, i))
                i = _skip(text, i) + 1  # colon
                i = _skip(text, value(i, path + (key,)))
                if text[i] == "}":
                    return i + 1
                i += 1
        if text[i] == "[":
            i = _skip(text, i + 1)
            if text[i] == "]":
                return i + 1
            k = 0
            while True:
                i = _skip(text, value(i, path + (k,)))
                k += 1
                if text[i] == "]":
                    return i + 1
                i += 1
        _, end = _decoder.raw_decode(text, i)
        return end

    value(0, ())
    return out


def format_path(path) -> str:
    s = "$"
    for p in path:
        s += f"[{p}]" if isinstance(p, int) else f".{p}"
    return s


def _locate(lines: dict, path: tuple) -> int:
    path = tuple(path)
    while path not in lines and path:
        path = path[:-1]
    return lines.get(path, 1)


def parse_casefile(text: str, source: str = "<cases>") -> dict:
    """Decode and strictly validate a case file; errors name the path and line."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CaseFileError(f"{source}: line {exc.lineno}: invalid JSON: {exc.msg}") from None
    lines = line_map(text)
    validator = jsonschema.Draft202012Validator(load_schema("casefile.schema.json"))
    errors = sorted(validator.iter_errors(doc), key=lambda e: (_locate(lines, e.absolute_path), list(e.absolute_path)))
    if errors:
        msgs = [f"{source}: line {_locate(lines, e.absolute_path)}: {format_path(e.absolute_path)}: {e.message}"
                for e in errors]
        raise CaseFileError("\n".join(msgs))
    if not is_prime(doc["p"]):
        raise CaseFileError(f"{source}: line {_locate(lines, ('p',))}: $.p: characteristic must be prime")
    doc["_lines"] = lines
    return doc


DEFAULT_OPTIONS = {"e_max": 2, "budget": 1000, "seed": 0, "degree_cap": 20000}


@dataclass
class Case:
    name: str
    data: ForcingData | None
    options: dict
    error: str | None = None
    raw: dict = field(default_factory=dict)


def _ring_for(doc: dict, case: dict, cache: dict) -> GradedRing:
    ring_opts = case.get("ring") or {}
    p = ring_opts.get("p", doc["p"])
    if not is_prime(p):
        raise CaseFileError("characteristic must be prime")
    variables = tuple(ring_opts.get("variables", doc.get("variables", ["x", "y", "z"])))
    relation = ring_opts["relation"] if "relation" in ring_opts else doc.get("relation")
    key = (p, variables, relation)
    if key not in cache:
        cache[key] = GradedRing.parse(p, relation or None, variables)
    return cache[key]


def build_cases(doc: dict, overrides: dict | None = None) -> list[Case]:
    """One Case per entry; a malformed entry carries its error instead of data."""
    lines = doc.get("_lines", {})
    rings: dict = {}
    out = []
    for i, c in enumerate(doc.get("cases", [])):
        name = c.get("name", f"case{i + 1}")
        opts = dict(DEFAULT_OPTIONS)
        opts.update(doc.get("options", {}))
        opts.update(c.get("options", {}))
        opts.update({k: v for k, v in (overrides or {}).items() if v is not None})
        try:
            ring = _ring_for(doc, c, rings)
            gens = tuple(ring.poly(g) for g in c["generators"])
            cand = ring.poly(c["candidate"])
            data = ForcingData(ring, gens, cand, c.get("twist"), c.get("candidate_degree"))
            if "test_element" in opts and isinstance(opts["test_element"], str):
                opts["test_element"] = ring.poly(opts["test_element"])
            out.append(Case(name, data, opts, None, c))
        except (ValueError, KeyError) as exc:
            where = _locate(lines, ("cases", i))
            out.append(Case(name, None, opts, f"line {where}: {format_path(('cases', i))}: {exc}", c))
    return out
