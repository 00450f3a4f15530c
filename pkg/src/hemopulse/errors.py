"""Exception taxonomy shared by every module.

The CLI maps these onto process exit codes (see cli.py), so new failure
modes should subclass one of the four roots rather than raising bare
ValueError/RuntimeError.
"""

from __future__ import annotations


class HemopulseError(Exception):
    """Base class for all package errors."""


class ConfigError(HemopulseError):
    """Invalid configuration: generator settings, hyperparameters, flags."""


class DataError(HemopulseError):
    """Malformed input data: cohort files, labels, dimensionality."""


class NumericError(HemopulseError):
    """Numerical failure: non-convergence, non-finite intermediate values."""


class ModelFormatError(DataError):
    """Model document cannot be read: unknown kind, bad schema version."""


class FeatureSpaceMismatchError(DataError):
    """Input matrix does not live in the feature space a model was trained on."""

    def __init__(self, model_space: str, model_dim: int, input_space: str, input_dim: int):
        self.model_space = model_space
        self.model_dim = model_dim
        self.input_space = input_space
        self.input_dim = input_dim
        super().__init__(
            f"model was trained on feature space '{model_space}' (d={model_dim}) "
            f"but the input looks like '{input_space}' (d={input_dim})"
        )
