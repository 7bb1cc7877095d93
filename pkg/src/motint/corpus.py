"""Bundled example documents: typed parsing, canonical serialization, lookup by id.

Every document is a JSON object with ``"schema": "1"``, an ``"id"``, a
``"kind"`` and a kind-specific payload:

``snc``        an SNC model to integrate, plus an optional polynomial
               presentation of its divisor in ``A^n`` for the jet oracle
``transform``  an SNC model on ``A^d``, a blow-up center and the claimed
               total transform on the blow-up
``kequiv``     a K-equivalence pair, plus optional chart presentations of
               both sides for point counting
``scheme``     an affine scheme together with its declared stratification
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .counting_oracle import AffineSchemeSpec, Polynomial
from .errors import InputError
from .geometry import (
    Center,
    KEquivalencePairSpec,
    SNCModel,
    StratifiedVariety,
    center_from_json,
    center_to_json,
    kequiv_from_json,
    kequiv_to_json,
    snc_from_json,
    snc_to_json,
    variety_from_json,
    variety_to_json,
)

__all__ = [
    "SCHEMA",
    "SNCExample",
    "TransformExample",
    "KEquivExample",
    "SchemeExample",
    "canonical_dumps",
    "parse_document",
    "load_document",
    "example_ids",
    "load_example",
    "example_text",
]

SCHEMA = "1"
_DATA = "data"


def canonical_dumps(doc) -> str:
    """Sorted keys, no insignificant whitespace, UTF-8 text, one trailing LF."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def _header(doc, path):
    for key in ("schema", "id", "kind", "description"):
        if key not in doc:
            raise InputError(f"missing field {key!r}", path)
        if not isinstance(doc[key], str):
            raise InputError(f"field {key!r} must be a string", f"{path}.{key}")
    if doc["schema"] != SCHEMA:
        raise InputError(f"unsupported schema {doc['schema']!r}", f"{path}.schema")
    return doc["id"], doc["description"]


def _check_keys(doc, allowed, path):
    extra = set(doc) - set(allowed) - {"schema", "id", "kind", "description"}
    if extra:
        raise InputError(f"unexpected fields {sorted(extra)}", path)


@dataclass(frozen=True)
class SNCExample:
    id: str
    description: str
    snc: SNCModel
    oracle_vars: int | None = None
    oracle_divisor: tuple = ()  # ((Polynomial, mult), ...) aligned with snc.components

    kind = "snc"

    def to_json(self) -> dict:
        doc = {"schema": SCHEMA, "id": self.id, "kind": self.kind, "description": self.description,
               "snc": snc_to_json(self.snc)}
        if self.oracle_vars is not None:
            doc["oracle"] = {
                "vars": self.oracle_vars,
                "divisor": [{"poly": g.to_json(), "mult": a} for g, a in self.oracle_divisor],
            }
        return doc

    @classmethod
    def from_json(cls, doc, path="$"):
        ident, desc = _header(doc, path)
        _check_keys(doc, {"snc", "oracle"}, path)
        snc = snc_from_json(doc.get("snc"), f"{path}.snc")
        if "oracle" not in doc:
            return cls(ident, desc, snc)
        o = doc["oracle"]
        where = f"{path}.oracle"
        if not isinstance(o, dict) or set(o) != {"vars", "divisor"} or not isinstance(o["divisor"], list):
            raise InputError("oracle must be an object with 'vars' and 'divisor'", where)
        divisor = []
        for i, entry in enumerate(o["divisor"]):
            w = f"{where}.divisor[{i}]"
            if not isinstance(entry, dict) or set(entry) != {"poly", "mult"}:
                raise InputError("divisor entry must have 'poly' and 'mult'", w)
            g = Polynomial.from_json(entry["poly"], f"{w}.poly")
            if g.n_vars != o["vars"]:
                raise InputError(f"polynomial has {g.n_vars} variables, expected {o['vars']}", f"{w}.poly")
            divisor.append((g, entry["mult"]))
        if [a for _, a in divisor] != list(snc.multiplicities):
            raise InputError("oracle multiplicities must match the SNC components", where)
        return cls(ident, desc, snc, o["vars"], tuple(divisor))


@dataclass(frozen=True)
class TransformExample:
    id: str
    description: str
    lhs: SNCModel
    center: Center
    rhs: SNCModel
    pullback_mult: int = 0

    kind = "transform"

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "id": self.id, "kind": self.kind, "description": self.description,
                "lhs": snc_to_json(self.lhs), "center": center_to_json(self.center),
                "rhs": snc_to_json(self.rhs), "pullback_mult": self.pullback_mult}

    @classmethod
    def from_json(cls, doc, path="$"):
        ident, desc = _header(doc, path)
        _check_keys(doc, {"lhs", "center", "rhs", "pullback_mult"}, path)
        pb = doc.get("pullback_mult")
        if not isinstance(pb, int) or isinstance(pb, bool) or pb < 0:
            raise InputError("pullback_mult must be an integer >= 0", f"{path}.pullback_mult")
        return cls(ident, desc, snc_from_json(doc.get("lhs"), f"{path}.lhs"),
                   center_from_json(doc.get("center"), f"{path}.center"),
                   snc_from_json(doc.get("rhs"), f"{path}.rhs"), pb)


def _charts_from_json(raw, path):
    if not isinstance(raw, list):
        raise InputError("charts must be a list of schemes", path)
    return tuple(AffineSchemeSpec.from_json(s, f"{path}[{i}]") for i, s in enumerate(raw))


@dataclass(frozen=True)
class KEquivExample:
    id: str
    description: str
    pair: KEquivalencePairSpec
    left_charts: tuple = ()
    right_charts: tuple = ()

    kind = "kequiv"

    def to_json(self) -> dict:
        doc = {"schema": SCHEMA, "id": self.id, "kind": self.kind, "description": self.description,
               "pair": kequiv_to_json(self.pair)}
        if self.left_charts or self.right_charts:
            doc["oracle"] = {"left_charts": [s.to_json() for s in self.left_charts],
                             "right_charts": [s.to_json() for s in self.right_charts]}
        return doc

    @classmethod
    def from_json(cls, doc, path="$"):
        ident, desc = _header(doc, path)
        _check_keys(doc, {"pair", "oracle"}, path)
        pair = kequiv_from_json(doc.get("pair"), f"{path}.pair")
        if "oracle" not in doc:
            return cls(ident, desc, pair)
        o = doc["oracle"]
        if not isinstance(o, dict) or set(o) != {"left_charts", "right_charts"}:
            raise InputError("oracle must have 'left_charts' and 'right_charts'", f"{path}.oracle")
        return cls(ident, desc, pair, _charts_from_json(o["left_charts"], f"{path}.oracle.left_charts"),
                   _charts_from_json(o["right_charts"], f"{path}.oracle.right_charts"))


@dataclass(frozen=True)
class SchemeExample:
    id: str
    description: str
    scheme: AffineSchemeSpec
    variety: StratifiedVariety

    kind = "scheme"

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "id": self.id, "kind": self.kind, "description": self.description,
                "scheme": self.scheme.to_json(), "variety": variety_to_json(self.variety)}

    @classmethod
    def from_json(cls, doc, path="$"):
        ident, desc = _header(doc, path)
        _check_keys(doc, {"scheme", "variety"}, path)
        return cls(ident, desc, AffineSchemeSpec.from_json(doc.get("scheme"), f"{path}.scheme"),
                   variety_from_json(doc.get("variety"), f"{path}.variety"))


_KINDS = {c.kind: c for c in (SNCExample, TransformExample, KEquivExample, SchemeExample)}


def parse_document(doc, path: str = "$"):
    if not isinstance(doc, dict):
        raise InputError("document must be a JSON object", path)
    kind = doc.get("kind")
    if kind not in _KINDS:
        raise InputError(f"kind must be one of {sorted(_KINDS)}, got {kind!r}", f"{path}.kind")
    return _KINDS[kind].from_json(doc, path)


def load_document(path: str | Path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg} at line {exc.lineno}") from None
    return parse_document(doc)


def _data_dir():
    return resources.files(__package__).joinpath(_DATA)


def example_ids() -> list[str]:
    return sorted(p.name[:-5] for p in _data_dir().iterdir() if p.name.endswith(".json"))


def example_text(example_id: str) -> str:
    if example_id not in example_ids():
        raise InputError(f"unknown example {example_id!r}; known: {', '.join(example_ids())}")
    return _data_dir().joinpath(f"{example_id}.json").read_text(encoding="utf-8")


def load_example(example_id: str):
    return parse_document(json.loads(example_text(example_id)))
