"""Exception hierarchy for the auditing engine."""


class AuditError(ValueError):
    """Base class for every error raised by this package."""


# panel construction
class IncompleteGrid(AuditError):
    pass


class DuplicateCell(AuditError):
    pass


class ProbOutOfRange(AuditError):
    pass


class UnknownGroup(AuditError):
    pass


class BaseGroupNotAllowed(AuditError):
    pass


class InvalidGroupSet(AuditError):
    pass


class ConfigError(AuditError):
    pass


# kernels
class InvalidDf(AuditError):
    pass


class ShapeMismatch(AuditError):
    pass


class TooFewGroups(AuditError):
    pass


class TooFewPoints(AuditError):
    pass


class SampleTooSmall(AuditError):
    pass


class EmptySample(AuditError):
    pass


class EmptyFamily(AuditError):
    pass


# aggregation
class ScoreOutOfRange(AuditError):
    pass


class SingleClassPanel(AuditError):
    pass


# io / synth / oracles
class ParseError(AuditError):
    pass


class SpecOutOfRange(AuditError):
    pass


class InputTooLarge(AuditError):
    pass
