from pathlib import Path

import pytest

from veriforge.errors import TokenizeError
from veriforge.verilog.lexer import parse_sized_number, tokenize
from veriforge.verilog.lint import main as lint_main
from veriforge.verilog.lint import syntax_check


def test_clean_module_passes():
    source = """
module counter(input clk, input rst_n, output reg [3:0] q);
  always @(posedge clk) begin
    if (!rst_n) q <= 4'b0000;
    else q <= q + 1'b1;
  end
endmodule
"""
    assert syntax_check(source) == []


def test_python_def_rejected():
    issues = syntax_check("def adder_4bit()\n    return a + b\n")
    assert issues and "def" in issues[0]


def test_unbalanced_module_rejected():
    assert syntax_check("module m(input a, output b);\n assign b = a;\n")


def test_missing_semicolon_rejected():
    assert syntax_check("module m(input a, output b);\n assign b = a\nendmodule\n")


def test_duplicate_module_names_rejected():
    src = "module m(input a, output b);\nassign b = a;\nendmodule\nmodule m(input c, output d);\nassign d = c;\nendmodule\n"
    issues = syntax_check(src)
    assert any("duplicate module name" in i for i in issues)


def test_testbench_constructs_accepted():
    source = """
module tb;
  reg a, b;
  wire out;
  top_module dut(.a(a), .b(b), .out(out));
  integer i;
  initial begin
    for (i = 0; i < 4; i = i + 1) begin
      {a, b} = i;
      #1;
      if (out !== (a & b)) $display("MISMATCH at %0d", i);
    end
    $finish;
  end
endmodule
"""
    assert syntax_check(source) == []


def test_parameters_and_case_accepted():
    source = """
module fsm(input clk, input rst, output reg out);
  localparam A = 1'b0, B = 1'b1;
  parameter WIDTH = 4;
  reg state, next_state;
  always @(posedge clk) state <= rst ? A : next_state;
  always @(*) begin
    case (state)
      A: next_state = B;
      B: next_state = A;
      default: next_state = A;
    endcase
  end
  always @(*) out = (state == B);
endmodule
"""
    assert syntax_check(source) == []


def test_comments_and_directives_stripped():
    source = "`timescale 1ns/1ps\n// comment\nmodule m(input a, output b); /* block\ncomment */ assign b = a;\nendmodule\n"
    assert syntax_check(source) == []


def test_unterminated_comment_is_tokenize_error():
    with pytest.raises(TokenizeError):
        tokenize("module m(); /* never closed\nendmodule")


def test_sized_number_decoding():
    assert parse_sized_number("4'b0101") == (5, 4)
    assert parse_sized_number("8'hFF") == (255, 8)
    assert parse_sized_number("3'd7") == (7, 3)
    assert parse_sized_number("42") == (42, None)
    assert parse_sized_number("2'b1x") == (None, 2)


def test_cli_exit_codes(tmp_path: Path):
    good = tmp_path / "good.v"
    good.write_text("module m(input a, output b);\nassign b = a;\nendmodule\n")
    bad = tmp_path / "bad.v"
    bad.write_text("def nope()\n")
    assert lint_main([str(good)]) == 0
    assert lint_main([str(bad)]) == 1
    assert lint_main([str(good), str(bad)]) == 1
