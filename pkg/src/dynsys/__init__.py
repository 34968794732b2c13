from .system import DynamicalSystem, Potential, TransferOperator, build_transfer_operator
from .cycles import InvariantMeasure, enumerate_cycles, invariant_vertices
from .spectral import spectral_potential
from .tentropy import t_entropy, t_entropy_n, t_entropy_n_supremum
from .variational import VariationalReport, variational_check

__all__ = [
    'DynamicalSystem',
    'Potential',
    'TransferOperator',
    'build_transfer_operator',
    'InvariantMeasure',
    'enumerate_cycles',
    'invariant_vertices',
    'spectral_potential',
    't_entropy',
    't_entropy_n',
    't_entropy_n_supremum',
    'VariationalReport',
    'variational_check',
]
