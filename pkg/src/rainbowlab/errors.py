"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or out-of-contract input (CLI exit code 2)."""


class InvariantError(RuntimeError):
    """An internal invariant or proven identity was violated (CLI exit code 3).

    Raised where a failure would contradict a theorem the code relies on,
    which in practice means an arithmetic or implementation bug.
    """
