class InvalidArgument(ValueError):
    """An argument is outside the documented domain of an operation."""


class DegenerateFamilyError(ArithmeticError):
    """A denominator of the arc/interval correspondence vanished.

    Raised instead of perturbing the data: the correspondence presumes
    P_n(1/gamma) != 0 and t_n != 0.
    """
