"""Exception hierarchy.

Two families: :class:`InputError` for bad user data (CLI exit code 2) and
:class:`TheoremViolation` for failed internal consistency checks that can only
come from an engine bug (CLI exit code 3).
"""


class TwistedHodgeError(Exception):
    def to_dict(self):
        return {"error": type(self).__name__, "message": str(self)}


class InputError(TwistedHodgeError):
    exit_code = 2


class TheoremViolation(TwistedHodgeError):
    exit_code = 3


# exact_linalg
class DivisionByZero(InputError, ZeroDivisionError):
    pass


class DimensionError(InputError, ValueError):
    pass


class NotAChainMap(TheoremViolation):
    pass


# invariant_complex
class ParseError(InputError, ValueError):
    pass


class NotIntegrable(InputError):
    pass


class NotALieAlgebra(InputError):
    def __init__(self, message, generator=None, residual=None):
        super().__init__(message)
        self.generator = generator
        self.residual = residual


class SizeGuard(InputError):
    pass


class ConstructionError(TheoremViolation):
    """An identity that holds by construction failed."""


# twisted_calculus
class NotBottChernClosed(InputError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


# cohomology_engine
class EquivalenceViolation(TheoremViolation):
    pass


class InequalityViolation(TheoremViolation):
    pass


class NoWitness(InputError):
    pass


# hodge_theory
class BadMetric(InputError):
    pass


class NotKahler(InputError):
    pass


class AdjointMismatch(TheoremViolation):
    pass


class HodgeIsoViolation(TheoremViolation):
    pass


class DualityViolation(TheoremViolation):
    pass


class KahlerIdentityViolation(TheoremViolation):
    pass


# model_catalog
class UnknownModel(InputError, KeyError):
    def __str__(self):
        return Exception.__str__(self)
