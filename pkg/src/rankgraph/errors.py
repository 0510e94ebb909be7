"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: input/parameter/estimation problems
exit with 2, calibration problems with 3.
"""

from __future__ import annotations

import numpy as np


class RankGraphError(Exception):
    """Base class for all errors raised by this package."""


class InputError(RankGraphError):
    """Malformed or inconsistent input data (files, matrices, shapes)."""


class ParameterError(RankGraphError):
    """A parameter value outside its documented domain."""


class EstimationError(RankGraphError):
    """Edge-probability estimation cannot proceed (e.g. unusable spectrum).

    Carries the offending eigenvalue sequence for diagnosis.
    """

    def __init__(self, message: str, spectrum: np.ndarray | None = None):
        super().__init__(message)
        self.spectrum = None if spectrum is None else np.asarray(spectrum)


class CalibrationError(RankGraphError):
    """A resampling scheme is not applicable to the given sample sizes."""
