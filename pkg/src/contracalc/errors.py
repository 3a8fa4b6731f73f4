"""Exception types shared across the package."""


class ContracalcError(Exception):
    pass


class DimensionMismatch(ContracalcError):
    pass


class CoalgebraMismatch(ContracalcError):
    pass


class AxiomFailure(ContracalcError):
    pass


class InvalidArgument(ContracalcError, ValueError):
    pass


class NotNilpotent(ContracalcError):
    pass


class SupportViolation(ContracalcError):
    pass


class ProfileUnavailable(ContracalcError):
    pass


class IncompatibleSequence(ContracalcError):
    pass


class InfiniteSource(ContracalcError):
    pass


class ParseError(ContracalcError):
    pass


class NonUnique(ContracalcError):
    """The homogeneous telescope system has a nonzero solution.

    ``witness`` holds the first few terms q_0, q_1, ... of that solution.
    """

    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class NoSolution(ContracalcError):
    def __init__(self, msg, certificate=None):
        super().__init__(msg)
        self.certificate = certificate
