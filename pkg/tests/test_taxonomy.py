import json

import pytest

from veriforge.errors import CorpusInvalid
from veriforge.taxonomy import (
    Category,
    HallucinationLabel,
    SUBTYPE_CATEGORY,
    Subtype,
    load_corpus,
    save_corpus,
    validate_corpus,
)


def test_subtype_category_mapping_total():
    assert set(SUBTYPE_CATEGORY) == set(Subtype)
    by_category = {}
    for subtype, category in SUBTYPE_CATEGORY.items():
        by_category.setdefault(category, []).append(subtype)
    assert len(by_category[Category.SYMBOLIC]) == 3
    assert len(by_category[Category.KNOWLEDGE]) == 3
    assert len(by_category[Category.LOGICAL]) == 3


def test_label_rejects_mismatched_category():
    with pytest.raises(ValueError):
        HallucinationLabel(Category.SYMBOLIC, Subtype.VERILOG_SYNTAX_MISAPPLICATION)


def test_label_serialization_round_trip():
    for subtype in Subtype:
        label = HallucinationLabel.for_subtype(subtype)
        assert HallucinationLabel.from_json(label.to_json()) == label


def test_bundled_corpus_loads_with_full_coverage():
    cases = load_corpus()
    assert len(cases) >= 9
    assert {c.label.subtype for c in cases} == set(Subtype)


def test_corpus_save_load_round_trip(tmp_path):
    cases = load_corpus()
    out = tmp_path / "corpus.jsonl"
    save_corpus(cases, out, meta={"note": "copy"})
    assert load_corpus(out) == cases


def test_missing_subtype_rejected(tmp_path):
    cases = [c for c in load_corpus() if c.label.subtype is not Subtype.VERILOG_SYNTAX_MISAPPLICATION]
    out = tmp_path / "partial.jsonl"
    save_corpus(cases, out)
    with pytest.raises(CorpusInvalid) as exc:
        load_corpus(out)
    assert "VerilogSyntaxMisapplication" in str(exc.value)


def test_corpus_self_check_passes(compiler, simulator):
    validate_corpus(load_corpus(), compiler, simulator)


def test_self_check_catches_passing_case(compiler, simulator):
    cases = load_corpus()
    # replace the OR-for-AND truth-table case's code with a correct AND gate
    fixed = []
    for case in cases:
        if case.label.subtype is Subtype.TRUTH_TABLE_MISINTERPRETATION:
            case = type(case)(
                label=case.label,
                prompt=case.prompt,
                incorrect_code=case.incorrect_code.replace("a | b", "a & b"),
                analysis=case.analysis,
                check=case.check,
            )
        fixed.append(case)
    with pytest.raises(CorpusInvalid) as exc:
        validate_corpus(fixed, compiler, simulator)
    assert "TruthTableMisinterpretation" in str(exc.value)


def test_malformed_record_rejected(tmp_path):
    out = tmp_path / "bad.jsonl"
    record = {"category": "Symbolic", "subtype": "VerilogSyntaxMisapplication",
              "prompt": "p", "incorrect_code": "c", "analysis": "a"}
    out.write_text(json.dumps(record) + "\n")
    with pytest.raises(CorpusInvalid):
        load_corpus(out)
