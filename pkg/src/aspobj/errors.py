"""Exception hierarchy for the engine.

Every error carries the pipeline stage it originated from so callers (and
the CLI) can report which phase failed without string matching.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all engine failures."""

    stage = "engine"


class LexicalError(EngineError):
    stage = "parse"

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class SpecSyntaxError(EngineError):
    stage = "parse"

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        loc = f"{line}:{col}: " if line is not None else ""
        super().__init__(f"{loc}{message}")
        self.line = line
        self.col = col


class SpecValidationError(EngineError):
    """Raised when a spec with non-empty diagnostics is pushed downstream."""

    stage = "validate"

    def __init__(self, diagnostics):
        super().__init__("; ".join(str(d) for d in diagnostics))
        self.diagnostics = list(diagnostics)


class BindError(EngineError):
    stage = "bind"


class GroundingError(EngineError):
    stage = "ground"


class SolveError(EngineError):
    stage = "solve"


class PlanError(EngineError):
    """A stable model that cannot be turned into a construction plan."""

    stage = "plan"

    def __init__(self, message: str, answer_set=None):
        super().__init__(message)
        self.answer_set = answer_set


class RegistryError(EngineError):
    stage = "execute"


class ExecutionError(EngineError):
    """A host constructor or method raised during plan execution."""

    stage = "execute"

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class CoreTextError(EngineError):
    stage = "backend"
