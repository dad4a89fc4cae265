"""Exception types raised across the package."""


class DimensionMismatch(ValueError):
    pass


class PrimeMismatch(ValueError):
    pass


class SingularMatrix(ValueError):
    pass


class NotUnipotent(ValueError):
    pass


class NotIsometry(ValueError):
    pass


class WordParseError(ValueError):
    pass


class UnknownSymbol(KeyError):
    pass


class NotInvariant(ValueError):
    """A basis handed to ``sub_quotient`` does not span a submodule."""


class ResourceLimit(RuntimeError):
    """A randomized search gave up before reaching a decision."""


class FingerprintAmbiguity(RuntimeError):
    pass


class FactorNotFound(LookupError):
    pass


class FactorNotUnique(LookupError):
    pass


class BudgetExceeded(RuntimeError):
    pass


class PlanError(ValueError):
    pass
