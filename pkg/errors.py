"""
Error types for ShapeletBoard
Each error maps onto a CLI exit code
"""

from config import EXIT_DATA, EXIT_NUMERICAL, EXIT_USAGE


class ShapeletBoardError(Exception):
    """Base class for all ShapeletBoard errors"""

    exit_code = 1


class ConfigError(ShapeletBoardError, ValueError):
    """Invalid configuration value or argument combination"""

    exit_code = EXIT_USAGE


class DataError(ShapeletBoardError, ValueError):
    """Unreadable, malformed or inconsistent input data"""

    exit_code = EXIT_DATA


class DivergenceError(ShapeletBoardError, ArithmeticError):
    """Training produced a non-finite loss"""

    exit_code = EXIT_NUMERICAL

    def __init__(self, iteration, learning_rate):
        self.iteration = iteration
        self.learning_rate = learning_rate
        super().__init__(
            f"non-finite loss at iteration {iteration} "
            f"(learning rate {learning_rate:g}); try a smaller --lr"
        )
