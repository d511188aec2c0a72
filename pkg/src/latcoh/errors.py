"""Exception hierarchy shared by all modules."""


class InputError(ValueError):
    """Malformed input: wrong dimensions, bad file fields, unusable arguments."""


class NoConductorError(InputError):
    """A numerical generating set with gcd != 1 admits no conductor."""


class TruncationError(RuntimeError):
    """Jet windows were exhausted before the computation stabilised.

    ``suggested`` carries a per-branch lower bound for truncation orders
    that would let the computation proceed.
    """

    def __init__(self, message, suggested=None):
        super().__init__(message)
        self.suggested = suggested


class ConsistencyError(AssertionError):
    """Two provably-equivalent computations disagreed: an implementation bug."""
