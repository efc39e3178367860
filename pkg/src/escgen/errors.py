class ESCError(Exception):
    pass


class UnreachableError(ESCError):
    """Raised when u_n = 0, i.e. no sequence of cluster sizes can sum to n."""

    def __init__(self, n, message=None):
        self.n = n
        super().__init__(message or f"n={n} is unreachable under this cluster size distribution")


class CapabilityError(ESCError):
    """The requested route (closed form, exact oracle) does not cover this input."""


class SamplerExhausted(ESCError):
    def __init__(self, attempts):
        self.attempts = attempts
        super().__init__(f"rejection sampler gave up after {attempts} attempts")
