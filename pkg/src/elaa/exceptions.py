"""Exception types raised by the library."""


class ElaaError(Exception):
    """Base class for all library-specific errors."""


class DomainError(ElaaError, ValueError):
    """An input lies outside the mathematical domain of an operation."""


class ReactiveNearFieldError(DomainError):
    """Evaluation point is inside the reactive near-field guard region.

    The radiated-field model is only valid well beyond the wavelength,
    enforced as distance >= REACTIVE_GUARD_WAVELENGTHS * wavelength.
    """


class QuadratureError(ElaaError, RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance.

    Carries the best available estimate and the error bound achieved.
    """

    def __init__(self, message, estimate=None, error_bound=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class DegenerateChannelError(ElaaError, ValueError):
    """A channel vector has zero norm; no precoder can be formed."""


class SingularChannelError(ElaaError, ValueError):
    """The multi-user channel matrix is (numerically) rank deficient."""

    def __init__(self, message, user_pair=None):
        super().__init__(message)
        self.user_pair = user_pair


class NoSignalError(ElaaError, ValueError):
    """All effective channel gains are zero; power allocation is undefined."""


class ConfigError(ElaaError, ValueError):
    """An experiment configuration is invalid.

    ``problems`` lists every violation found, not just the first.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
