"""Bundled Verilog tooling: lexer, structural parser, syntax checker, and
scenario-driven subset simulator."""
