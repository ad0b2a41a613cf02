import pytest

from conftest import load_topic_corpus
from veriforge.errors import CorpusInvalid, TokenizeError
from veriforge.topics import (
    Attribute,
    Exemplar,
    Topic,
    TopicProfile,
    analyze,
    load_exemplar_store,
    match_exemplars,
)


def test_sync_reset_counter_profile():
    profile = analyze(
        "module m(input clk, input rst_n, output reg [3:0] q);\n"
        "always @(posedge clk) begin if (!rst_n) q<=0; else q<=q+1; end\nendmodule"
    )
    assert profile.topics == frozenset({Topic.COUNTER})
    assert Attribute.SYNC_RESET in profile.attributes
    assert Attribute.POS_EDGE in profile.attributes


def test_async_reset_attribute():
    profile = analyze(
        "module m(input clk, input rst, input d, output reg q);\n"
        "always @(posedge clk or posedge rst) begin if (rst) q<=0; else q<=d; end\nendmodule"
    )
    assert Attribute.ASYNC_RESET in profile.attributes


def test_empty_module_is_other():
    profile = analyze("module empty(input a, output b);\nendmodule")
    assert profile.topics == frozenset({Topic.OTHER})
    assert profile.attributes == frozenset()


def test_every_detection_has_evidence_in_range():
    source = (
        "module m(input clk, input rst, output reg clk_out);\n"
        "reg [3:0] cnt;\n"
        "always @(posedge clk) begin\n"
        "  if (rst) begin cnt <= 0; clk_out <= 0; end\n"
        "  else if (cnt == 4'd9) begin cnt <= 0; clk_out <= ~clk_out; end\n"
        "  else cnt <= cnt + 1;\n"
        "end\nendmodule\n"
    )
    profile = analyze(source)
    n_lines = source.count("\n") + 1
    assert profile.evidence
    for ev in profile.evidence:
        assert 1 <= ev.line <= n_lines
    for member in (*profile.topics, *profile.attributes):
        assert profile.evidence_for(member.value)


def test_deterministic():
    src = "module m(input clk, output reg [7:0] q);\nalways @(posedge clk) q <= q + 1;\nendmodule"
    assert analyze(src) == analyze(src)


def test_unparseable_but_tokenizable_is_other():
    profile = analyze("module m; this is ( not : valid verilog\nendmodule")
    assert profile.topics == frozenset({Topic.OTHER})


def test_tokenize_error_propagates():
    with pytest.raises(TokenizeError):
        analyze("module m(); /* unterminated\nendmodule")


def test_profile_requires_evidence():
    with pytest.raises(ValueError):
        TopicProfile(frozenset({Topic.FSM}), frozenset(), ())


def test_sync_and_async_reset_cite_distinct_blocks():
    source = (
        "module m(input clk, input arst, input srst, input d, output reg q1, output reg q2);\n"
        "always @(posedge clk or posedge arst) begin\n"
        "  if (arst) q1 <= 0; else q1 <= d;\n"
        "end\n"
        "always @(posedge clk) begin\n"
        "  if (srst) q2 <= 0; else q2 <= d;\n"
        "end\nendmodule\n"
    )
    profile = analyze(source)
    assert Attribute.ASYNC_RESET in profile.attributes
    assert Attribute.SYNC_RESET in profile.attributes
    async_lines = {e.line for e in profile.evidence_for(Attribute.ASYNC_RESET.value)}
    sync_lines = {e.line for e in profile.evidence_for(Attribute.SYNC_RESET.value)}
    assert async_lines.isdisjoint(sync_lines)


def test_corpus_labels_match_detector():
    # spot-check a handful of corpus snippets end to end
    corpus = load_topic_corpus()
    by_id = {rec["id"]: rec for rec in corpus}
    for key in ("cnt-basic", "shift-lfsr", "div-cnt", "fsm-onehot", "alu-ifchain", "oth-mux4"):
        rec = by_id[key]
        detected = {t.value for t in analyze(rec["code"]).topics}
        assert detected == set(rec["topics"]), key


def _ex(id_, topic):
    return Exemplar(
        id=id_,
        topic=topic,
        instruction=f"Implement it.\nmodule m(input a, output b);",
        code="module m(input a, output b);\nassign b = a;\nendmodule\n",
    )


def _profile(topics=(), attributes=()):
    evidence = tuple(
        __import__("veriforge.topics", fromlist=["Evidence"]).Evidence(m.value, "test", 1)
        for m in (*topics, *attributes)
    )
    return TopicProfile(frozenset(topics), frozenset(attributes), evidence)


def test_match_exemplars_by_topic():
    store = [_ex("f2", "fsm"), _ex("f1", "fsm"), _ex("c1", "counter")]
    matched = match_exemplars(_profile(topics={Topic.FSM}), store)
    assert [e.id for e in matched] == ["f1", "f2"]


def test_match_exemplars_other_matches_nothing():
    store = [_ex("f1", "fsm"), _ex("c1", "counter")]
    assert match_exemplars(_profile(topics={Topic.OTHER}), store) == []


def test_match_exemplars_attributes_match_like_topics():
    store = [_ex("sr1", "sync_reset")]
    matched = match_exemplars(
        _profile(topics={Topic.COUNTER}, attributes={Attribute.SYNC_RESET}), store
    )
    assert [e.id for e in matched] == ["sr1"]


def test_bundled_store_loads_and_validates(exemplar_dir):
    store = load_exemplar_store(exemplar_dir)
    tags = {e.topic for e in store}
    for topic in Topic:
        if topic is not Topic.OTHER:
            assert topic.value in tags
    for attribute in Attribute:
        assert attribute.value in tags
    # at least two exemplars per tag
    for tag in tags:
        assert sum(e.topic == tag for e in store) >= 2


def test_store_rejects_headerless_instruction(tmp_path):
    (tmp_path / "fsm.jsonl").write_text(
        '{"id": "x", "topic": "fsm", "instruction": "no header here", "code": "module m(); endmodule", "source": "manual"}\n'
    )
    with pytest.raises(CorpusInvalid):
        load_exemplar_store(tmp_path)


def test_store_verify_hook(tmp_path, exemplar_dir):
    calls = []

    def verify(code: str) -> bool:
        calls.append(code)
        return True

    store = load_exemplar_store(exemplar_dir, verify=verify)
    assert len(calls) == len(store)

    with pytest.raises(CorpusInvalid):
        load_exemplar_store(exemplar_dir, verify=lambda code: False)
