import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import callable_client
from veriforge.errors import IncompatibleTemplate, LlmError
from veriforge.kdataset import Stage, VerifyState
from veriforge.ldataset import (
    DEFAULT_TEMPLATE_CYCLE,
    Flavor,
    TEMPLATES,
    check_word_delta,
    evolve_instruction,
    gen_random_truth_table,
    gen_testbench,
    generate_l_records,
    instantiate_templates,
    make_problem,
    validate_pair,
)
from veriforge.logic import eval_expression


def test_gen_table_full_coverage_no_x():
    table = gen_random_truth_table(2, 0.0, seed=9)
    assert len(table.rows) == 4
    assert all(out[0] in "01" for _, out in table.rows)


def test_gen_table_deterministic():
    assert gen_random_truth_table(3, 0.3, seed=5) == gen_random_truth_table(3, 0.3, seed=5)
    assert gen_random_truth_table(3, 0.3, seed=5) != gen_random_truth_table(3, 0.3, seed=6)


def test_gen_table_high_dc_fraction_keeps_structure():
    table = gen_random_truth_table(2, 0.999, seed=1)
    assert len(table.rows) == 4
    assert all(len(in_bits) == 2 for in_bits, _ in table.rows)


def test_gen_table_param_validation():
    with pytest.raises(ValueError):
        gen_random_truth_table(1, 0.0, seed=0)
    with pytest.raises(ValueError):
        gen_random_truth_table(7, 0.0, seed=0)
    with pytest.raises(ValueError):
        gen_random_truth_table(3, 1.0, seed=0)


def test_concise_problem_minimal_matches_table():
    problem = make_problem(3, 0.2, seed=11, flavor=Flavor.CONCISE_EXPRESSION)
    for in_bits, out_bits in problem.table.rows:
        if out_bits[0] == "x":
            continue
        asg = {name: int(b) for name, b in zip(problem.inputs, in_bits)}
        assert eval_expression(problem.minimal, asg) == int(out_bits[0])


def test_instantiate_concise_assign_embeds_expression_and_rules():
    problem = make_problem(2, 0.0, seed=2, flavor=Flavor.CONCISE_EXPRESSION)
    pair = instantiate_templates(problem, "concise-assign")
    assert pair.stage is Stage.LOGIC
    assert "assign out = " in pair.code
    assert "Rules:" in pair.instruction
    assert "module top_module(input a, input b, output out);" in pair.instruction


def test_instantiate_faithful_case_has_default_arm():
    problem = make_problem(2, 0.0, seed=3, flavor=Flavor.FAITHFUL_IMPLEMENTATION)
    pair = instantiate_templates(problem, "faithful-case")
    assert "case ({a, b})" in pair.code
    assert "default:" in pair.code


def test_instantiate_faithful_ifchain_has_final_else():
    problem = make_problem(2, 0.0, seed=4, flavor=Flavor.FAITHFUL_IMPLEMENTATION)
    pair = instantiate_templates(problem, "faithful-ifchain")
    assert "else out = 1'b0;" in pair.code


def test_flavor_mismatch_rejected():
    problem = make_problem(2, 0.0, seed=5, flavor=Flavor.FAITHFUL_IMPLEMENTATION)
    with pytest.raises(IncompatibleTemplate):
        instantiate_templates(problem, "concise-assign")


def test_kmap_template_input_limit():
    problem = make_problem(5, 0.0, seed=6, flavor=Flavor.CONCISE_EXPRESSION)
    with pytest.raises(IncompatibleTemplate):
        instantiate_templates(problem, "concise-kmap-assign")


def test_kmap_template_renders_grid():
    problem = make_problem(3, 0.2, seed=7, flavor=Flavor.CONCISE_EXPRESSION)
    pair = instantiate_templates(problem, "concise-kmap-assign")
    assert "K-map" in pair.instruction


def test_unknown_template_rejected():
    problem = make_problem(2, 0.0, seed=8, flavor=Flavor.CONCISE_EXPRESSION)
    with pytest.raises(IncompatibleTemplate):
        instantiate_templates(problem, "no-such-template")


def test_testbench_skips_dont_care_rows():
    problem = make_problem(2, 0.5, seed=12, flavor=Flavor.FAITHFUL_IMPLEMENTATION)
    tb, scenario = gen_testbench(problem)
    defined = sum(1 for _, out in problem.table.rows if out[0] != "x")
    assert len(scenario["steps"]) == defined
    assert tb.count("MISMATCH") == defined


def test_validate_pair_catches_wrong_code(compiler, simulator):
    problem = make_problem(2, 0.0, seed=13, flavor=Flavor.CONCISE_EXPRESSION)
    pair = instantiate_templates(problem, "concise-assign")
    result, mismatches = validate_pair(pair, problem, compiler, simulator)
    assert result.ok and mismatches == []

    sabotaged = pair.code.replace("assign out = ", "assign out = 1'b1 ^ ")
    bad_pair = type(pair)(id="bad", instruction=pair.instruction, code=sabotaged, stage=pair.stage)
    result2, mismatches2 = validate_pair(bad_pair, problem, compiler, simulator)
    assert result2.ok  # still compiles
    assert mismatches2  # but simulates wrong


# -- word delta ----------------------------------------------------------------


def test_word_delta_examples():
    assert check_word_delta("a b c", "a b c") == 0
    assert check_word_delta("a b c", "a b c d e") == 2
    assert check_word_delta("a b c", "a x c") == 2


@settings(max_examples=80, deadline=None)
@given(
    st.lists(st.sampled_from("abcd"), max_size=8),
    st.lists(st.sampled_from("abcd"), max_size=8),
)
def test_word_delta_symmetric(a, b):
    sa, sb = " ".join(a), " ".join(b)
    assert check_word_delta(sa, sb) == check_word_delta(sb, sa)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.sampled_from("abc"), max_size=6),
    st.lists(st.sampled_from("abc"), max_size=6),
    st.lists(st.sampled_from("abc"), max_size=6),
)
def test_word_delta_triangle_inequality(a, b, c):
    sa, sb, sc = " ".join(a), " ".join(b), " ".join(c)
    assert check_word_delta(sa, sc) <= check_word_delta(sa, sb) + check_word_delta(sb, sc)


def make_evolver(transform):
    return callable_client(lambda template_id, subs: transform(subs["instruction"]))


def test_evolve_accepts_identity():
    client = make_evolver(lambda text: text)
    assert evolve_instruction("keep this intact", client) == "keep this intact"


def test_evolve_accepts_exactly_ten_added_words():
    client = make_evolver(lambda text: text + " " + " ".join(f"w{i}" for i in range(10)))
    out = evolve_instruction("base words here", client)
    assert out.startswith("base words here")
    assert check_word_delta("base words here", out) == 10


def test_evolve_rejects_eleven_added_words():
    client = make_evolver(lambda text: text + " " + " ".join(f"w{i}" for i in range(11)))
    original = "base words here"
    assert evolve_instruction(original, client, max_retries=0) == original


def test_evolve_returns_original_after_llm_failures():
    def dead(template_id, subs):
        raise LlmError("down")

    client = callable_client(dead)
    assert evolve_instruction("original text", client, max_retries=1) == "original text"


def test_generate_l_records_deterministic(compiler):
    a, _, sidecar_a = generate_l_records(6, 3, 0.2, seed=42, compiler=compiler)
    b, _, sidecar_b = generate_l_records(6, 3, 0.2, seed=42, compiler=compiler)
    assert [r.to_json() for r in a] == [r.to_json() for r in b]
    assert sidecar_a == sidecar_b
    assert all(r.verify is VerifyState.COMPILE_OK for r in a)
    flavors = [s["flavor"] for s in sidecar_a]
    assert flavors.count("concise_expression") == 3  # 50/50 default mix


def test_default_cycle_templates_registered():
    for template_id in DEFAULT_TEMPLATE_CYCLE:
        assert template_id in TEMPLATES
