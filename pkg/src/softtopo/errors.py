"""Exception hierarchy shared by every module."""


class SoftTopologyError(Exception):
    """Base class for all errors raised by softtopo."""


class ContextMismatchError(SoftTopologyError, ValueError):
    """Two operands live over different contexts."""


class UnknownNameError(SoftTopologyError, KeyError):
    """A parameter or element name is not part of the context."""

    def __init__(self, kind: str, name):
        super().__init__(f"unknown {kind} name: {name!r}")
        self.kind = kind
        self.name = name

    def __str__(self):
        return self.args[0]


class EmptyFamilyError(SoftTopologyError, ValueError):
    """An operation that needs a nonempty family was given none."""


class NotOpenError(SoftTopologyError, ValueError):
    """A soft set expected to be open in a topology is not."""


class NotATopologyError(SoftTopologyError, ValueError):
    """A family of soft sets fails the soft topology axioms."""

    def __init__(self, verdict):
        super().__init__(f"not a soft topology: axiom {verdict.reason!r} violated")
        self.verdict = verdict


class BudgetExceededError(SoftTopologyError):
    """A computation would exceed the configured size budget."""
