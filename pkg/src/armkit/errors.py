"""Exception hierarchy shared by all modules.

``InvalidParameterError`` means the caller supplied something outside a
function's domain (bad config field, non-positive time, ...). ``DomainError``
means the inputs were well formed but the problem has no answer: an
unreachable target, a Newton solve that stalls, a response that never settles.
The CLI maps the two families to different exit codes.
"""


class ArmkitError(Exception):
    """Base class for every error raised by armkit."""


class InvalidParameterError(ArmkitError, ValueError):
    def __init__(self, param, message):
        self.param = param
        super().__init__(f"{param}: {message}")


class ConfigError(InvalidParameterError):
    """Arm configuration failed to parse or validate; ``param`` is the field path."""


class DomainError(ArmkitError):
    pass


class ReachabilityError(DomainError):
    def __init__(self, distance, inner, outer, target=None):
        self.distance = distance
        self.inner = inner
        self.outer = outer
        self.target = target
        msg = (f"target unreachable: distance {distance:.6g} outside "
               f"annulus [{inner:.6g}, {outer:.6g}]")
        if target is not None:
            msg += " for target (" + ", ".join(f"{c:.6g}" for c in target) + ")"
        super().__init__(msg)


class ConvergenceError(DomainError):
    def __init__(self, residual, iterations):
        self.residual = residual
        self.iterations = iterations
        super().__init__(f"newton iteration did not converge after {iterations} "
                         f"iterations (residual {residual:.3e})")


class NeverSettlesError(DomainError):
    pass


class InsufficientPeaksError(DomainError):
    pass
