"""Tempered alpha-stable laws built from completely monotone tempering functions.

Submodules:

* ``special``     Mittag-Leffler and incomplete-gamma machinery
* ``tempering``   completely monotone tempering functions and ratio checks
* ``levy``        the law itself: jump density, exponent, cumulant, nu1
* ``density``     Fourier-inversion densities and the deep-tail series
* ``diagnostics`` ratio-convergence curves and counterexample controls
* ``cli``         batch front-end emitting CSV reports
"""

from .special import (
    ConvergenceError,
    DomainError,
    EvalResult,
    gamma_star,
    mittag_leffler,
    upper_incomplete_gamma,
)

__all__ = [
    "ConvergenceError",
    "DomainError",
    "EvalResult",
    "gamma_star",
    "mittag_leffler",
    "upper_incomplete_gamma",
]

__version__ = "0.1.0"
