"""Exception hierarchy shared by every module."""


class PoslrError(Exception):
    """Base class for all errors raised by this package."""


class OffDiagonalUncorrectable(PoslrError):
    """Exact-size masking with a budget of one never observes two coordinates together."""


class Infeasible(PoslrError):
    """The Dantzig program admits no feasible point."""


class NumericalFailure(PoslrError):
    """The LP solver hit its iteration cap or lost feasibility to roundoff."""


class EnumerationTooLarge(PoslrError):
    """An exhaustive search would exceed the configured enumeration cap."""


class LossOutOfRange(PoslrError):
    """A loss fed to the budgeted experts learner lies outside [0, 1]."""


class ConfigError(PoslrError):
    """The experiment configuration is malformed or violates an invariant."""


class DegenerateFit(PoslrError):
    """Too few positive checkpoints to fit a log-log slope."""
