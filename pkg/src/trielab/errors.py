"""Exception types shared across the package."""


class TrieLabError(Exception):
    """Base class for all errors raised by trielab."""


class DomainError(TrieLabError, ValueError):
    """An argument lies outside the validated domain of an operation."""


class GammaPoleError(DomainError):
    """Gamma or digamma evaluated at a non-positive integer."""

    def __init__(self, pole):
        self.pole = int(pole)
        super().__init__(f"gamma pole at {self.pole}")


class InsufficientBitsError(TrieLabError):
    """A fixed key was queried past its materialized bits."""


class IndistinguishableKeysError(TrieLabError):
    """Two fixed keys agree on every materialized bit."""


class DepthCapExceeded(TrieLabError):
    """Trie construction went deeper than the configured cap."""


class QuadratureError(TrieLabError, ArithmeticError):
    """Characteristic-function inversion failed to stabilise."""
