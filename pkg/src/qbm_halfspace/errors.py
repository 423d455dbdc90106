"""Exception hierarchy. Everything derives from ``QbmError`` so callers can catch broadly."""


class QbmError(Exception):
    pass


class DomainError(QbmError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class PoleError(QbmError, ZeroDivisionError):
    """Evaluation exactly on an undamped pole."""


class NearPoleError(PoleError):
    """Denominator of a dressed propagator fell below the instability threshold."""

    def __init__(self, message, omega=None):
        super().__init__(message)
        self.omega = omega


class QuadratureError(QbmError, RuntimeError):
    """Adaptive quadrature ran out of panel budget before meeting its tolerance."""

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class UncertaintyViolationError(QbmError, ValueError):
    """Covariances violate the Robertson-Schroedinger bound det V >= 1/4."""


class InsufficientDataError(QbmError, ValueError):
    pass


class ScanError(QbmError, RuntimeError):
    """Every row of a parameter scan failed."""


class ConfigError(QbmError, ValueError):
    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key
