"""Exception hierarchy shared by all xbn modules.

The split matters for the front ends: usage errors (bad names, malformed
input, overlapping sets) map to CLI exit code 1 / HTTP 422, while
computation errors (impossible evidence, search-space guards) map to CLI
exit code 2 / HTTP 409 and 413.
"""

from __future__ import annotations


class XbnError(Exception):
    """Base class for every error raised by this package."""


class NetworkValidationError(XbnError):
    """A network failed structural validation.

    ``variable`` names the offending variable when one can be identified.
    """

    def __init__(self, message: str, variable: str | None = None):
        super().__init__(message)
        self.variable = variable


class CycleError(NetworkValidationError):
    """The parent structure contains a directed cycle."""


class QueryError(XbnError):
    """A query was malformed: unknown names, overlapping variable sets,
    missing preconditions."""


class UnknownVariableError(QueryError):
    def __init__(self, name: str):
        super().__init__(f"unknown variable '{name}'")
        self.name = name


class UnknownStateError(QueryError):
    def __init__(self, variable: str, state: str, valid: tuple[str, ...]):
        super().__init__(
            f"unknown state '{state}' for variable '{variable}' "
            f"(valid states: {', '.join(valid)})"
        )
        self.variable = variable
        self.state = state


class ImpossibleEvidenceError(XbnError):
    """The evidence has probability zero under the network."""


class ImpossibleExplanationError(XbnError):
    """A candidate explanation has prior probability zero."""


class VacuousExplanationError(XbnError):
    """A candidate explanation has prior probability one, so its complement
    is impossible and the Bayes factor is undefined."""


class SearchSpaceError(XbnError):
    """An enumeration guard was exceeded."""


class BifParseError(XbnError):
    """Lexical or syntactic failure while reading BIF text.

    Carries the list of error diagnostics; the message is the first one.
    """

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0]
        super().__init__(f"{first.line}:{first.column}: {first.message}")


class JsonSchemaError(XbnError):
    """A native JSON document violates the network schema.

    ``path`` locates the violation, e.g. ``$.cpts[2].rows``.
    """

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path
