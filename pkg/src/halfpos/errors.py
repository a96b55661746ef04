"""Exception hierarchy shared by all halfpos modules."""


class HalfposError(Exception):
    """Base class for all errors raised by this package."""


class InputError(HalfposError):
    """Malformed user input: unknown symbol, bad file, alphabet mismatch."""


class ContractError(HalfposError):
    """A documented precondition of an operation was violated by the caller."""


class InternalError(HalfposError):
    """An internal invariant failed; indicates a bug, not bad input."""


class BudgetError(HalfposError):
    """A configured resource bound (strategy budget, ordinal bound) was exceeded."""


class SearchExhausted(HalfposError):
    """Bounded counterexample search finished without finding a verified arena."""

    def __init__(self, message: str, candidates_tried: int = 0):
        super().__init__(message)
        self.candidates_tried = candidates_tried
