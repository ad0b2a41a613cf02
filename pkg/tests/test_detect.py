from veriforge.symbolic import detect_modality, parse_state_diagram, parse_truth_table, parse_waveform
from veriforge.symbolic.detect import PARSERS
from veriforge.symbolic.types import Modality

TABLE = "a | b | out\n0 | 0 | 0\n0 | 1 | 0\n1 | 0 | 0\n1 | 1 | 1"
WAVE = "a: 0 1 1 0\nb: 1 0 1 0\nout: 1 0 0 1\ntime(ns): 0 10 20 30"
DIAGRAM = "A[out=0]--[x=0]->B\nA[out=0]--[x=1]->A\nB[out=1]--[x=0]->A\nB[out=1]--[x=1]->B"


def test_natural_language_only():
    det = detect_modality("Implement a 4-bit adder with carry out.")
    assert det.kind is Modality.NATURAL_LANGUAGE_ONLY
    assert det.spans == ()


def test_truth_table_detected_with_span():
    prompt = f"Implement the truth table below...\n{TABLE}\nUse combinational logic."
    det = detect_modality(prompt)
    assert det.kind is Modality.TRUTH_TABLE
    assert len(det.spans) == 1
    block = prompt[det.spans[0].start : det.spans[0].end]
    assert parse_truth_table(block).rows[-1] == (("1", "1"), ("1",))


def test_fsm_prompt_detected():
    prompt = f"Implement this FSM...\n{DIAGRAM}"
    det = detect_modality(prompt)
    assert det.kind is Modality.STATE_DIAGRAM
    assert len(det.spans) == 1


def test_truncated_diagram_detected_leniently():
    # elided edges leave B undeclared, so strict validation drops the span
    prompt = "Implement this FSM...\nA[out=0]--[in==0]->B...\nA[out=0]--[in==1]->A..."
    assert detect_modality(prompt).kind is Modality.NATURAL_LANGUAGE_ONLY
    det = detect_modality(prompt, validate=False)
    assert det.kind is Modality.STATE_DIAGRAM


def test_waveform_detected():
    prompt = f"Implement the waveforms below...\n{WAVE}"
    det = detect_modality(prompt)
    assert det.kind is Modality.WAVEFORM
    parse_waveform(prompt[det.spans[0].start : det.spans[0].end])


def test_mixed_prompt():
    prompt = f"Part one:\n{TABLE}\n\nPart two:\n{DIAGRAM}\nDone."
    det = detect_modality(prompt)
    assert det.kind is Modality.MIXED
    assert [s.kind for s in det.spans] == [Modality.TRUTH_TABLE, Modality.STATE_DIAGRAM]


def test_spans_sorted_and_disjoint():
    prompt = f"{TABLE}\n\nmore text\n\n{WAVE}\n"
    det = detect_modality(prompt)
    spans = det.spans
    assert all(spans[i].end <= spans[i + 1].start for i in range(len(spans) - 1))


def test_single_wave_like_line_is_prose():
    det = detect_modality("note: 1\nThis is just prose.")
    assert det.kind is Modality.NATURAL_LANGUAGE_ONLY


def test_span_soundness_on_detected_blocks():
    prompt = f"intro\n{TABLE}\n\nmiddle\n{WAVE}\n\nend\n{DIAGRAM}\n"
    det = detect_modality(prompt)
    for span in det.spans:
        PARSERS[span.kind](prompt[span.start : span.end])


def test_header_only_table_not_detected():
    det = detect_modality("a | b | out\nThat header has no rows.")
    assert det.kind is Modality.NATURAL_LANGUAGE_ONLY


def test_diagram_parsers_registry_complete():
    assert set(PARSERS) == {Modality.TRUTH_TABLE, Modality.WAVEFORM, Modality.STATE_DIAGRAM}
    parse_state_diagram(DIAGRAM)
