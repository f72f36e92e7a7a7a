"""Exception types shared across the evaluation engine."""


class MalformedTable(ValueError):
    """Table markup that cannot be turned into a valid grid.

    Raised by the format parsers; callers score the affected pair as zero
    instead of aborting a run.
    """


class DegenerateInput(ValueError):
    """A statistic is undefined for this input (e.g. zero variance)."""


class JoinEmpty(ValueError):
    """Two datasets that should share identifiers have none in common."""


class EndpointError(RuntimeError):
    """The LLM endpoint failed (network, auth, HTTP) after retries."""


class ProtocolError(RuntimeError):
    """The LLM responded, but the response does not follow the expected shape."""


class CleanFailure(ValueError):
    """Removing non-content commands left the LaTeX source unbalanced."""


class CompileError(RuntimeError):
    """A LaTeX compilation that must succeed did not."""


class ToolMissing(RuntimeError):
    """A required external tool (e.g. pdflatex) is not installed."""
