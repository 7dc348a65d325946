"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` so the CLI and the
HTTP service can report failures without parsing prose.
"""

from __future__ import annotations


class LumascapeError(Exception):
    """Base class; ``code`` identifies the failure kind."""

    code = "error"

    def __init__(self, message: str, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class InputError(LumascapeError):
    """Bad user input: missing files, unsupported formats, malformed data."""

    code = "input-error"


class ValidationError(LumascapeError):
    """A document failed invariant validation.

    ``violations`` holds the full list of Violation records.
    """

    code = "validation-failed"

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(f"{v.code}: {v.message}" for v in self.violations)
        super().__init__(f"document invalid ({len(self.violations)} violation(s)): {lines}")


class DegenerateNoSignal(LumascapeError):
    """Paired test where every difference is zero: no signal to rank."""

    code = "degenerate-no-signal"
