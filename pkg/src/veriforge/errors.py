"""Exception hierarchy shared across the toolkit."""


class VeriforgeError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(VeriforgeError):
    pass


# -- symbolic parsing ---------------------------------------------------------

class ParseError(VeriforgeError):
    """Base class for symbolic-block parsing failures."""


class MalformedTable(ParseError):
    pass


class EmptyTable(ParseError):
    pass


class MalformedWaveform(ParseError):
    pass


class EmptyWaveform(ParseError):
    pass


class MalformedDiagram(ParseError):
    pass


class InconsistentOutputs(MalformedDiagram):
    """Same state declared with conflicting output assignments."""


class DanglingState(MalformedDiagram):
    """A transition targets a state that was never declared with outputs."""


class MissingSignature(VeriforgeError):
    """No module header present, none supplied, and none inferable."""


class InterpretationFailed(VeriforgeError):
    """A symbolic block could not be interpreted and no fallback route exists."""


# -- Verilog analysis ---------------------------------------------------------

class TokenizeError(VeriforgeError):
    pass


class VerilogSyntaxError(VeriforgeError):
    """Raised by the bundled structural parser on unparseable source."""

    def __init__(self, message: str, line: int = 0):
        super().__init__(message if not line else f"line {line}: {message}")
        self.line = line


class SimulationError(VeriforgeError):
    """The bundled simulator cannot execute a construct or did not converge."""


# -- LLM client ---------------------------------------------------------------

class LlmError(VeriforgeError):
    pass


class AuthError(LlmError):
    pass


class RateLimited(LlmError):
    pass


class NetworkError(LlmError):
    pass


class TemplateError(LlmError):
    pass


# -- dataset generation -------------------------------------------------------

class CompilerNotFound(VeriforgeError):
    pass


class SimulatorNotFound(VeriforgeError):
    pass


class LogicError(VeriforgeError):
    """Base class for logic-expression and minimization failures."""


class MultiOutputUnsupported(LogicError):
    pass


class UnboundVariable(LogicError):
    pass


class IncompatibleTemplate(VeriforgeError):
    pass


# -- evaluation ---------------------------------------------------------------

class InvalidCounts(VeriforgeError):
    pass


class MixedN(VeriforgeError):
    """Aggregation over tasks whose trial counts differ (or an empty task list)."""


class CorpusInvalid(VeriforgeError):
    pass
