"""Exception hierarchy shared by all engine modules.

Every error carries a short machine-readable ``code`` (stable across
releases) next to the human-readable message; the CLI maps the three
exception families onto exit statuses 1/2/3.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all errors raised by this package."""

    exit_status = 1

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


class InputError(EngineError):
    """Invalid user input: malformed distributions, configs, arguments."""

    exit_status = 1


class BudgetError(EngineError):
    """A state or enumeration budget would be exceeded."""

    exit_status = 2


class PropertyViolation(EngineError):
    """A mathematical property that must hold was observed to fail.

    Raised only for defects (e.g. a VIOLATED maximal-inequality status);
    treated as an internal-error signal, never as bad user input.
    """

    exit_status = 3
