"""Exception hierarchy shared across the package."""


class NlvcError(Exception):
    """Base class for all package errors."""


class InvalidGeometry(NlvcError, ValueError):
    pass


class MisalignedHorizon(NlvcError, ValueError):
    pass


class MisalignedDomain(NlvcError, ValueError):
    pass


class OutsideDomain(NlvcError, ValueError):
    pass


class NotInNeumannLayer(NlvcError, ValueError):
    pass


class OutsideFullBall(NlvcError, ValueError):
    pass


class UnsupportedOrder(NlvcError, ValueError):
    pass


class SingularSystem(NlvcError, ArithmeticError):
    pass


class FactorizationFailure(NlvcError, ArithmeticError):
    """Cholesky of the constrained stiffness matrix hit a non-positive pivot."""


class EmptyFreeSet(NlvcError, ValueError):
    pass


class NonHalvingEpsilon(NlvcError, ValueError):
    pass


class ConfigError(NlvcError):
    """Raised for unreadable or schema-violating run configurations."""
