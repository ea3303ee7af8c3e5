"""Exception types shared across the library.

Every failure mode that callers are expected to handle gets its own class;
plain ``ValueError`` is reserved for programming mistakes.
"""


class CheegerLabError(Exception):
    """Base class for all library errors."""


class InvalidInputError(CheegerLabError, ValueError):
    """Malformed graph/metric/tree data or an argument outside an op's domain."""


class BudgetExceededError(CheegerLabError):
    """An enumeration would exceed its configured budget.

    Raised eagerly, before any work is done; partial answers are never
    returned silently.
    """

    def __init__(self, required: int, budget: int, what: str = "subsets"):
        self.required = required
        self.budget = budget
        super().__init__(
            f"enumeration of {required} {what} exceeds the budget of {budget}; "
            f"raise the budget explicitly or shrink the instance"
        )


class EmptyWindowError(CheegerLabError):
    """No admissible vertex remains after applying the frontier discipline."""


class InvalidSupportError(CheegerLabError):
    """A function's support touches the frontier zone where identities are not ambient-exact."""


class InvalidHorizonError(CheegerLabError):
    """A horizon parameter exceeds what the loaded window can represent."""


class ConstructionError(CheegerLabError):
    """A built object violated one of its structural invariants (carries a witness)."""

    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)
