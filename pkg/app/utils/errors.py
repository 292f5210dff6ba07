# app/utils/errors.py


class ParameterError(ValueError):
    """Raised when parameters or operation preconditions are violated"""


class NoThresholdError(ValueError):
    """Raised when no K_1 inside the pool bound satisfies the threshold condition"""

    def __init__(self, message: str, last_lambda_m: float = 0.0):
        super().__init__(message)
        self.last_lambda_m = last_lambda_m


class ScalingError(ValueError):
    """Raised when a scaling family materializes parameters outside its domain"""

    def __init__(self, message: str, n: int):
        super().__init__(f"n={n}: {message}")
        self.n = n
