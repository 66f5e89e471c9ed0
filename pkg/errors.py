"""Exceptions raised by faircover, each with a machine-parsable code.

The CLI prints `error=<code>` and exits with `exit_status`.
"""

__author__ = "faircover developers"
__copyright__ = "Copyright (C) 2026 faircover developers"
__license__ = "GPLv3"


class FaircoverError(Exception):
    """Base of all faircover errors."""

    code = "FAIRCOVER"
    exit_status = 2


class ConfigError(FaircoverError):
    """Experiment configuration is invalid or cannot be parsed."""

    code = "CONFIG_INVALID"
    exit_status = 1

    def __init__(self, message: str, violations: list[str] | None = None) -> None:
        super().__init__(message)
        self.violations = violations or []


class DataFormatError(FaircoverError, ValueError):
    """An input file has a malformed line or value."""

    code = "DATA_FORMAT"


class UnknownUserError(FaircoverError, LookupError):
    """Identifier is unknown to the experiment."""

    code = "UNKNOWN_USER"


class ColdUserError(FaircoverError, LookupError):
    """User is known but has no training ratings."""

    code = "COLD_USER"


class UnownedItemError(FaircoverError, KeyError):
    """Item has no entry in the provider catalog."""

    code = "UNOWNED_ITEM"

    def __str__(self) -> str:
        # KeyError quotes its argument; keep the message readable
        return str(self.args[0]) if self.args else ""


class ModelDivergedError(FaircoverError, ArithmeticError):
    """Training objective became non-finite."""

    code = "MODEL_DIVERGED"


class ExperimentError(FaircoverError):
    """A pipeline stage failed on otherwise valid configuration."""

    code = "EXPERIMENT_FAILED"
