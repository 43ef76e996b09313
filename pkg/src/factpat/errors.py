"""Exceptions shared across the package."""


class BudgetError(RuntimeError):
    """An exhaustive enumeration would exceed the configured budget."""


class GaloisDescentError(RuntimeError):
    """A value that must be Frobenius-fixed (hence in the base field) is not.

    This is a bug trap: for well-formed normal-basis data every symmetric
    function of a Galois-stable multiset of roots descends to the base
    field, so this firing means corrupted tables or an arithmetic error.
    """


class CountingIdentityError(RuntimeError):
    """An identity that must hold exactly (no tolerance) failed."""
