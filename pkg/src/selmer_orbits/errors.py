"""Error types shared across modules; the CLI maps them to exit codes."""


class ValidationError(ValueError):
    """Malformed or inconsistent input (exit code 2)."""

    exit_code = 2


class Infeasible(RuntimeError):
    """Parameters exceed what exhaustive enumeration can handle (exit code 3)."""

    exit_code = 3


class Unsupported(NotImplementedError):
    """Input outside the implemented range, e.g. p = 2 or deep ramification (exit code 4)."""

    exit_code = 4
