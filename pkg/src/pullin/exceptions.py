class NonAdmissibleError(ValueError):
    """The deformation touches or crosses the ground plate, ``min v <= -1``."""


class OutOfDomainError(ValueError):
    pass


class ConfigError(ValueError):
    pass


class InvalidBracketError(ValueError):
    pass


class SolverDivergenceError(RuntimeError):
    """The elliptic solve did not reach the requested residual.

    Parameters
    ----------
    residual : float
        Relative residual at exit.
    iterations : int
        Iterations performed.
    time : float, optional
        Simulation time of the failing solve, if any.

    """

    def __init__(self, residual, iterations, time=None):
        self.residual = residual
        self.iterations = iterations
        self.time = time
        message = (
            f"Elliptic solve stalled at relative residual {residual:.3e} "
            f"after {iterations} iterations"
        )
        if time is not None:
            message += f" (t = {time:.6g})"
        super().__init__(message)

    def at_time(self, time):
        return SolverDivergenceError(self.residual, self.iterations, time)


class NonMonotoneClassificationError(RuntimeError):
    def __init__(self, lower, upper):
        self.lower = lower
        self.upper = upper
        super().__init__(
            f"Touchdown at lambda = {lower[0]:.6g} but global run at larger "
            f"lambda = {upper[0]:.6g}; refusing to report a threshold"
        )
