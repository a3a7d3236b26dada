"""Exception hierarchy shared by every module."""


class TwotimeError(Exception):
    """Base class for all errors raised by this package."""


class DomainMismatch(TwotimeError):
    pass


class CarrierTooLarge(TwotimeError):
    pass


class ObjectMismatch(TwotimeError):
    pass


class UnknownGate(TwotimeError):
    pass


class ParseError(TwotimeError):
    pass


class IllTypedWiring(TwotimeError):
    pass


class WeightMismatch(TwotimeError):
    pass


class NotAState(TwotimeError):
    pass


class NotUnitary(TwotimeError):
    pass


class NotCPTP(TwotimeError):
    pass


class TooManyWires(TwotimeError):
    pass


class NotABit(TwotimeError):
    pass


class UnknownWire(TwotimeError):
    pass


class DynLiftInsideBox(TwotimeError):
    pass


class ScopeError(TwotimeError):
    pass


class LinearityError(TwotimeError):
    pass


class UnknownLaw(TwotimeError):
    pass


class UnknownExample(TwotimeError):
    pass
