"""Exception types shared across the package."""


class NotPrime(ValueError):
    """An integer modulus or a polynomial that should be prime is not."""


class BadCongruence(ValueError):
    """The field size is incompatible with the character order."""

    def __init__(self, q, r, modulus):
        self.q, self.r, self.modulus = q, r, modulus
        super().__init__(f"BadCongruence: q={q} is not 1 mod {modulus} (r={r})")


class ZeroElement(ValueError):
    pass


class DivideByZeroPoly(ZeroDivisionError):
    pass


class NotPowerFree(ValueError):
    pass


class SingularSeries(ValueError):
    pass


class TooLarge(ValueError):
    pass


class TypeMismatch(ValueError):
    pass


class BadInput(ValueError):
    pass


class EmptyFamily(ValueError):
    pass


class NearSingularWeight(ArithmeticError):
    """A weight factor (1 - x_i1...x_ir) with negative exponent is numerically zero."""
