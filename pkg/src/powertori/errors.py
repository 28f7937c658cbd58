"""Shared exception types."""


class BudgetExceeded(RuntimeError):
    """An exhaustive computation would exceed its declared budget."""


class NotFinite(ValueError):
    """An integer relation presentation does not present a finite group."""
