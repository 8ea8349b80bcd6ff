"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: data/config/metric problems exit 1,
backend (network or model-response) problems exit 2.
"""


class SimpGuardError(Exception):
    """Base class for all package errors."""


class DataError(SimpGuardError):
    """Malformed dataset, run file, or model file content."""


class ConfigError(SimpGuardError):
    """Invalid configuration value or combination."""


class MetricError(SimpGuardError):
    """A metric is undefined for the given input (empty, single-class, ...)."""


class BackendError(SimpGuardError):
    """A model service call failed after exhausting retries."""


class ScoreParseError(BackendError):
    """A model response could not be parsed into the expected score object."""


class TrainingError(SimpGuardError):
    """Training diverged (non-finite loss) or was misconfigured."""
