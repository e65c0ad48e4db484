"""Shadow kinematics on a distant screen.

Closed-form kinematics of a shadow racing across a screen, a retarded-time
transport simulator that measures the same events from first principles, and
a signaling-feasibility analysis for the superluminal-looking regime.
"""

from ._core import (
    SPEED_OF_LIGHT,
    GridBudgetError,
    Scene,
    ValidationError,
    WorldlineGapError,
    anti_bell_check,
    certificate,
    report,
    signal,
    simulate,
    verify,
    __version__,
)

__all__ = [
    "SPEED_OF_LIGHT",
    "GridBudgetError",
    "Scene",
    "ValidationError",
    "WorldlineGapError",
    "anti_bell_check",
    "certificate",
    "report",
    "signal",
    "simulate",
    "verify",
    "__version__",
]
