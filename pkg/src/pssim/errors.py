"""Shared exception type for domain-contract violations."""


class PsSimError(ValueError):
    """Raised when an operation's preconditions or model contracts are violated.

    The CLI maps this to exit code 3 (runtime model error); everything it
    wraps is a well-formed request that the models cannot satisfy, as opposed
    to malformed input (exit code 2).
    """
