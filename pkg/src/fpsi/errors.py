"""Exception hierarchy shared by every module of the package."""


class FPsiError(Exception):
    """Base class for all errors raised by :mod:`fpsi`."""


class InputError(FPsiError, ValueError):
    """Bad input: out-of-range parameters, malformed series, bad ranges."""


class NumericalFailure(FPsiError, ArithmeticError):
    """A numerical procedure could not produce a certified answer."""


class DivisionByZeroConstantTerm(InputError):
    pass


class NotNormalized(InputError):
    pass


class InnerNotVanishing(InputError):
    pass


class ConstantTermNotZero(InputError):
    pass


class NonFiniteCoefficient(InputError):
    pass


class BadRange(InputError):
    pass


class OrderTooLow(InputError):
    pass


class ParamOutOfRange(InputError):
    pass


class InvalidSchwarz(InputError):
    pass


class TooFewComponents(InputError):
    pass


class DilatationExceedsOne(InputError):
    pass


class HypothesisUnverified(FPsiError):
    """A theorem hypothesis (convex image, axis extrema) is false or unknown."""


class AmbiguousCase(FPsiError):
    pass


class IntegralDivergent(NumericalFailure):
    pass


class NoSignChange(NumericalFailure):
    pass


class TailNotCertified(NumericalFailure):
    pass
