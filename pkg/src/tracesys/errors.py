"""Exception hierarchy shared by the library and the CLI.

The CLI maps ``InputError`` (and subclasses) to exit status 2 and
``PreconditionError`` to exit status 1.
"""


class InputError(ValueError):
    """Malformed or inconsistent user input."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location

    def __str__(self):
        msg = super().__str__()
        if self.location:
            return f"{self.location}: {msg}"
        return msg


class ValidationError(InputError):
    """A concurrent system or valuation violates a structural invariant."""


class OrderError(ValueError):
    """An order-theoretic operation was applied outside its domain."""


class PreconditionError(ValueError):
    """An analysis was requested on an object that does not satisfy its premise."""


class DeadNodeError(RuntimeError):
    """A sampled Markov chain entered a node whose transition row is empty."""


class TheoremViolation(AssertionError):
    """Computed verdicts contradict a proven implication; always a bug."""
