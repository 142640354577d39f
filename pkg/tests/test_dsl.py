from pathlib import Path

import pytest

from bspec.dsl import (
    SyntaxErrorDsl,
    TypeMismatch,
    UnresolvedReference,
    documents_equal,
    elaborate,
    parse,
    print_document,
)
from bspec.spectra import validate_spectrum

FIXTURES = sorted(Path(__file__).resolve().parent.parent.glob("fixtures/*.bsp"))


def test_fixture_corpus_exists():
    assert len(FIXTURES) >= 4


@pytest.mark.parametrize("path", FIXTURES, ids=lambda p: p.stem)
def test_round_trip(path):
    doc = parse(path.read_text())
    text = print_document(doc)
    again = parse(text)
    assert documents_equal(doc, again)
    assert print_document(again) == text


def test_empty_document():
    doc = parse("")
    assert doc.blocks == []
    assert print_document(doc) == ""


def test_cspec_document_shape():
    doc = parse((FIXTURES[0].parent / "cspec.bsp").read_text())
    assert len(doc.of_kind("directed")) == 1
    assert len(doc.of_kind("family")) == 1
    assert len(doc.of_kind("subbase")) == 4
    assert len(doc.of_kind("spectrum")) == 1


def test_elaborate_cspec():
    doc = parse((FIXTURES[0].parent / "cspec.bsp").read_text())
    env = elaborate(doc)
    s = env.spectrum("CSPEC")
    assert validate_spectrum(s) == []
    assert s.fam.carrier("0").elements == ("a", "b")


def test_syntax_error_locations():
    with pytest.raises(SyntaxErrorDsl) as err:
        parse("setoid A {\n  elements a, b\n}\n")
    assert err.value.line == 2
    with pytest.raises(SyntaxErrorDsl) as err:
        parse("setoid A {\n  elements: a\n")
    assert err.value.line == 1
    with pytest.raises(SyntaxErrorDsl):
        parse("blob A {\n}\n")


def test_unresolved_reference():
    text = """\
directed D {
  elements: 0
}
family F {
  index: D
  carrier 0: Missing
}
"""
    with pytest.raises(UnresolvedReference) as err:
        elaborate(parse(text))
    assert err.value.line == 6


def test_dangling_spectrum_family():
    text = """\
spectrum S {
  family: Missing
}
"""
    with pytest.raises(UnresolvedReference):
        elaborate(parse(text))


def test_type_mismatch_on_bad_rational():
    text = """\
setoid A {
  elements: x
}
subbase F {
  carrier: A
  gen f: x => one
}
"""
    with pytest.raises(TypeMismatch):
        elaborate(parse(text))


def test_certificate_block_and_auto_witness():
    text = """\
setoid X {
  elements: p, q
}
directed D {
  elements: 0, 1
  order: 0 <= 1
}
family SWAPF {
  index: D
  direction: covariant
  carrier 0: X
  carrier 1: X
  map 0 -> 1: p => q, q => p
}
subbase FX {
  carrier: X
  gen f: p => 0, q => 1
}
certificate ONE_MINUS {
  over: FX
  expr: (bic (add (const 1) (neg id)) (gen f))
}
spectrum SWAP {
  family: SWAPF
  space 0: FX
  space 1: FX
  pool: 0, 1
  witness 0 -> 1: auto
}
"""
    env = elaborate(parse(text))
    from bspec.topology import CBic

    assert isinstance(env.certificates["ONE_MINUS"], CBic)
    s = env.spectrum("SWAP")
    assert validate_spectrum(s) == []


def test_explicit_eq_and_ulim_certificates():
    text = """\
setoid X {
  elements: p, q
}
subbase FX {
  carrier: X
  gen f: p => 0, q => 1
}
certificate VIA_EQ {
  over: FX
  expr: (eq (gen f) (table p => 0, q => 1))
}
certificate VIA_ULIM {
  over: FX
  expr: (ulim (table p => 0, q => 1) (w 1 (gen f)) (w 2 (gen f)))
}
"""
    env = elaborate(parse(text))
    from bspec.topology import BSpace, RFun, validate_certificate

    sub = env.subbases["FX"]
    sp = BSpace(sub.carrier, sub)
    f = RFun(sub.carrier, {"p": 0, "q": 1})
    assert validate_certificate(sp, f, env.certificates["VIA_EQ"]).ok
    rep = validate_certificate(sp, f, env.certificates["VIA_ULIM"])
    assert rep.ok and rep.witnessed
