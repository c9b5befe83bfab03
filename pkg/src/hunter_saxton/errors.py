"""Exception types raised by the solver suite."""


class ParameterError(ValueError):
    """Invalid numeric parameter or mismatched inputs."""


class MeshFormatError(ValueError):
    """Malformed mesh file."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DomainError(ValueError):
    """Exact solution evaluated outside its validity window."""


class NewtonError(RuntimeError):
    """Newton iteration failed to reach the residual tolerance."""

    def __init__(self, message, iterations, residual):
        self.iterations = iterations
        self.residual = residual
        super().__init__(f"{message} (iterations={iterations}, residual={residual:.3e})")


class StepError(RuntimeError):
    """A time step failed inside a trajectory run."""

    def __init__(self, step, cause):
        self.step = step
        self.cause = cause
        super().__init__(f"step {step} failed: {cause}")
