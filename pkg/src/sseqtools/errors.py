"""Shared exception types."""


class InputError(ValueError):
    """Invalid user-supplied data (bad prime, malformed document, ...).

    The CLI maps this to exit code 2.
    """


class CheckFailed(RuntimeError):
    """An internal consistency assertion that should be impossible fired."""
