import json

import pytest

from motint.corpus import (
    SCHEMA,
    canonical_dumps,
    example_ids,
    example_text,
    load_document,
    load_example,
    parse_document,
)
from motint.errors import InputError
from motint.geometry import validate_snc

REQUIRED = {
    "a1-divisor-a1", "a1-divisor-a2", "a1-divisor-a3", "a2-axes", "bl-a2-origin", "bl-a3-origin",
    "bl-a3-line", "bl-a2-wrong-discrepancy", "atiyah-flop", "node-threefold", "hyperbola-jets",
}


def test_required_ids_present():
    assert REQUIRED <= set(example_ids())


@pytest.mark.parametrize("ident", example_ids())
def test_byte_identical_roundtrip(ident):
    text = example_text(ident)
    ex = parse_document(json.loads(text))
    assert ex.id == ident
    assert canonical_dumps(ex.to_json()) == text
    assert text.endswith("\n") and not text.endswith("\n\n") and "\r" not in text


@pytest.mark.parametrize("ident", example_ids())
def test_examples_validate(ident):
    ex = load_example(ident)
    if ex.kind == "snc":
        assert validate_snc(ex.snc).passed
    elif ex.kind == "transform":
        assert validate_snc(ex.lhs).passed and validate_snc(ex.rhs).passed
    elif ex.kind == "kequiv":
        assert ex.pair.issues() == []
    else:
        assert ex.variety.issues() == []


def test_canonical_form():
    assert canonical_dumps({"b": 1, "a": ["∅"]}) == '{"a":["∅"],"b":1}\n'


def test_unknown_id():
    with pytest.raises(InputError):
        example_text("no-such-example")


def test_load_document(tmp_path):
    p = tmp_path / "x.json"
    p.write_text(example_text("a2-axes"), encoding="utf-8")
    assert load_document(p) == load_example("a2-axes")


@pytest.mark.parametrize("mutate,path", [
    (lambda d: d.update(schema="2"), "$.schema"),
    (lambda d: d.update(kind="widget"), "$.kind"),
    (lambda d: d.update(extra=1), "$"),
    (lambda d: d["snc"]["components"][0].update(mult=0), "$.snc"),
    (lambda d: d["oracle"]["divisor"][0]["poly"].update(vars=3), "$.oracle.divisor[0].poly"),
])
def test_errors_name_the_path(mutate, path):
    doc = json.loads(example_text("a2-axes"))
    mutate(doc)
    with pytest.raises(InputError) as info:
        parse_document(doc)
    assert info.value.path.startswith(path)


def test_schema_constant():
    assert SCHEMA == "1"
