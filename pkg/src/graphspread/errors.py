"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: InputError and subclasses exit with 2,
MassMismatchError with 3, NumericalError with 4.
"""


class GraphSpreadError(Exception):
    """Base class for all package errors."""


class InputError(GraphSpreadError, ValueError):
    """Invalid user input: graph text, parameters, or configuration."""


class EdgeListError(InputError):
    """Malformed edge-list document."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SelfLoopError(EdgeListError):
    """An edge joins a vertex to itself."""


class DuplicateEdgeError(EdgeListError):
    """The same undirected edge appears more than once."""


class DisconnectedError(InputError):
    """The graph is not connected (required by every operation here)."""


class UnknownGraphError(InputError):
    """Unrecognized named-graph identifier."""


class NotATreeError(InputError):
    """A tree-only operation was applied to a graph with cycles."""


class MassMismatchError(GraphSpreadError, ValueError):
    """Total masses of the two measures disagree; transport is infeasible."""


class NumericalError(GraphSpreadError, RuntimeError):
    """Internal numerical failure (solver did not converge or went inconsistent)."""
