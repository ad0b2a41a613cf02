"""veriforge: symbolic HDL prompt interpretation, instruction-code dataset
synthesis with compile verification, and pass@k evaluation for Verilog
code generation."""

__version__ = "0.1.0"
