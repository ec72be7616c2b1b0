"""Exception hierarchy shared by the library and the command line."""


class LossyHomError(Exception):
    """Base class for all errors raised by lossyhom."""


class ConfigError(LossyHomError, ValueError):
    """Invalid physical parameters or configuration documents."""


class DegenerateError(LossyHomError):
    """The physics has no answer for this input (no beating, no surviving pairs)."""


class NoFeatureError(LossyHomError):
    """The coincidence data contain no dip or peak to fit."""
