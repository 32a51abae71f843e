"""Exception types shared across the package.

Everything mathematical that can go wrong during induction or tower
construction gets its own class so callers (and the CLI) can map failure
modes to exit codes without string matching.
"""

from __future__ import annotations


class CapExceededError(RuntimeError):
    """An orbit or iteration walked past its configured resource cap."""


class SaddleConnectionError(RuntimeError):
    """Induction hit a tie: the two candidate intervals have equal length.

    The step at which the tie occurred and the state reached so far are
    attached so callers can report partial progress.
    """

    def __init__(self, message: str, *, step: int | None = None,
                 path=None, matrix=None, iet=None):
        super().__init__(message)
        self.step = step
        self.path = path
        self.matrix = matrix
        self.iet = iet


class InconsistentPathError(ValueError):
    """A claimed induction path is not reproduced by forward induction."""

    def __init__(self, message: str, *, step: int | None = None):
        super().__init__(message)
        self.step = step


class TowerDisjointnessError(RuntimeError):
    """Stacking a tower produced overlapping floors."""

    def __init__(self, message: str, *, floor_index: int | None = None):
        super().__init__(message)
        self.floor_index = floor_index


class InductionTargetError(RuntimeError):
    """Induction never reached the requested target state within its cap."""
