"""Exception hierarchy shared by all submodules."""


class SamplingError(Exception):
    """Base class for every error raised by :mod:`usampling`."""


class InvalidSpecError(SamplingError, ValueError):
    """A group, model or scenario description is malformed."""


class InvalidSubgroupError(InvalidSpecError):
    pass


class InvalidActionError(InvalidSpecError):
    """A point-group matrix does not act on the (discretized) lattice."""


class DomainError(SamplingError, IndexError):
    """An index lies outside the group or grid it refers to."""


class ContractError(SamplingError, ValueError):
    """Operands have inconsistent shapes, groups or models."""


class SingularMatrixError(SamplingError, ArithmeticError):
    def __init__(self, message, lambda_min=None):
        super().__init__(message)
        self.lambda_min = lambda_min


class SingularSystemError(SamplingError, ArithmeticError):
    def __init__(self, message, characters=()):
        super().__init__(message)
        self.characters = list(characters)


class NotRecoverableError(SamplingError, ArithmeticError):
    """``delta_A`` is not above the tolerance: there is no stable left inverse."""

    def __init__(self, message, delta=None, worst_xi=None):
        super().__init__(message)
        self.delta = delta
        self.worst_xi = worst_xi


class DegenerateGeneratorsError(SamplingError, ArithmeticError):
    """The translates of the generators do not form a Riesz sequence."""

    def __init__(self, message, lower_bound=None):
        super().__init__(message)
        self.lower_bound = lower_bound


class ReconstructionMismatchError(SamplingError, ArithmeticError):
    """The two reconstruction routes disagree beyond tolerance."""
