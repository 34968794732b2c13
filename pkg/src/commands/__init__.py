# Import commands
from .divergence_command import DivergenceCommand
from .decompose_command import DecomposeCommand
from .supsums_command import SupsumsCommand
from .tentropy_command import TEntropyCommand
from .variational_command import VariationalCommand
from .verify_command import VerifyCommand

__all__ = [
    'DivergenceCommand',
    'DecomposeCommand',
    'SupsumsCommand',
    'TEntropyCommand',
    'VariationalCommand',
    'VerifyCommand',
]
