from .logger import setup_logger
from .errors import DivkitError, InvalidInputError, NonConvergenceError, PropertyViolation

__all__ = ['setup_logger', 'DivkitError', 'InvalidInputError', 'NonConvergenceError', 'PropertyViolation']
