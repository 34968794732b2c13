from .extreal import NEG_INF, POS_INF, ext_add, ext_sum, format_ext
from .extended_convex import ExtendedConvexFunction, make_generator, parse_generator, perspective
from .measure import AtomSpace, FiniteMeasure, SignedMeasure, lebesgue_decompose, radon_nikodym
from .partition import PartitionOfUnity, atomic_partition, sample_partition
from .divergence import DivergenceReport, closed_form, kl_divergence, partition_sum, supsum_estimate

__all__ = [
    'NEG_INF',
    'POS_INF',
    'ext_add',
    'ext_sum',
    'format_ext',
    'ExtendedConvexFunction',
    'make_generator',
    'parse_generator',
    'perspective',
    'AtomSpace',
    'FiniteMeasure',
    'SignedMeasure',
    'lebesgue_decompose',
    'radon_nikodym',
    'PartitionOfUnity',
    'atomic_partition',
    'sample_partition',
    'DivergenceReport',
    'closed_form',
    'kl_divergence',
    'partition_sum',
    'supsum_estimate',
]
