"""Sup-sums F-divergence and its closed form on finite spaces.

For a partition of unity G the sup-sums objective is

    sum_{g in G} mu[g] * F(nu[g] / mu[g])

with the perspective convention on mu[g] = 0. On a finite space the
supremum over G is attained at the atomic partition and equals

    sum_{mu(x) > 0} mu(x) F(nu(x)/mu(x)) + nu_s+(X) F'(+inf) + nu_s-(X) F'(-inf).
"""

import math
from dataclasses import dataclass

import numpy as np

from divergences.extended_convex import evaluate, make_generator, perspective
from divergences.extreal import POS_INF, NEG_INF, ext_add, ext_sum, format_ext, mass_times_slope
from divergences.measure import (
    FiniteMeasure,
    LebesgueDecomposition,
    integrate,
    lebesgue_decompose,
    radon_nikodym,
    require_same_space,
)
from divergences.partition import atomic_partition, require_valid, sample_partition
from utils.errors import ExtendedArithmeticError, InvalidInputError
from utils.logger import setup_logger

logger = setup_logger(name="divergence")


@dataclass(frozen=True, eq=False)
class DivergenceReport:
    """Closed-form divergence split into its three terms."""

    value: float
    ac_term: float
    sing_plus_term: float
    sing_minus_term: float
    decomposition: LebesgueDecomposition
    generator: str = ""

    def to_dict(self, include_decomposition=True):
        report = {
            "generator": self.generator,
            "value": format_ext(self.value),
            "ac_term": format_ext(self.ac_term),
            "sing_plus_term": format_ext(self.sing_plus_term),
            "sing_minus_term": format_ext(self.sing_minus_term),
        }
        if include_decomposition:
            report["decomposition"] = {
                "nu_a": self.decomposition.nu_a.weights.tolist(),
                "nu_s_plus": self.decomposition.nu_s_plus.weights.tolist(),
                "nu_s_minus": self.decomposition.nu_s_minus.weights.tolist(),
            }
        return report


def _require_lower_bounded(value, where):
    if value == NEG_INF:
        raise ExtendedArithmeticError(f"{where} is -inf, which a superlinear generator cannot produce")
    return value


def supsum_term(F, mu, nu, g):
    """
    One summand mu[g] * F(nu[g]/mu[g]) of the sup-sums objective.

    Args:
        F (ExtendedConvexFunction): Generator
        mu (FiniteMeasure): Nonnegative measure
        nu (SignedMeasure): Signed measure
        g (array-like): Nonnegative function on the atoms

    Returns:
        float: Value in R u {+inf}
    """
    require_same_space(mu.space, nu.space)
    g = np.asarray(g, dtype=float)
    if np.any(g < 0.0):
        raise InvalidInputError("partition elements must be nonnegative")
    return _require_lower_bounded(perspective(F, max(integrate(mu, g), 0.0), integrate(nu, g)), "a sup-sums term")


def partition_sum(F, mu, nu, G):
    """
    The sup-sums objective for one partition of unity.

    Raises:
        InvalidPartitionError: If G is not a valid partition of unity
    """
    require_same_space(mu.space, nu.space, G.space)
    require_valid(G)
    return ext_sum(supsum_term(F, mu, nu, g) for g in G)


def closed_form(F, mu, nu):
    """
    Closed form of the sup-sums F-divergence.

    Computes the absolutely continuous integral plus the two singular
    corrections; a zero singular mass contributes zero whatever the slope.

    Args:
        F (ExtendedConvexFunction): Generator
        mu (FiniteMeasure): Nonnegative reference measure
        nu (SignedMeasure): Signed measure

    Returns:
        DivergenceReport: Value and its three terms
    """
    require_same_space(mu.space, nu.space)
    decomposition = lebesgue_decompose(nu, mu)
    density = radon_nikodym(decomposition.nu_a, mu)

    charged = np.flatnonzero(mu.weights > 0.0)
    ac_terms = []
    for x in charged:
        value = evaluate(F, density.values[x])
        ac_terms.append(POS_INF if value == POS_INF else mu.weights[x] * value)
    ac_term = ext_sum(ac_terms)

    sing_plus_term = mass_times_slope(decomposition.nu_s_plus.total_mass, F.slope_pos)
    sing_minus_term = mass_times_slope(decomposition.nu_s_minus.total_mass, F.slope_neg)
    _require_lower_bounded(sing_minus_term, "the negative singular term")

    value = ext_add(ac_term, sing_plus_term, sing_minus_term)
    logger.debug(f"closed_form[{F.label}] = {value} (ac={ac_term}, s+={sing_plus_term}, s-={sing_minus_term})")
    return DivergenceReport(
        value=value,
        ac_term=ac_term,
        sing_plus_term=sing_plus_term,
        sing_minus_term=sing_minus_term,
        decomposition=decomposition,
        generator=F.label,
    )


def supsum_estimate(F, mu, nu, k_max, samples, seed):
    """
    Best sup-sums objective over the atomic partition and random partitions.

    On finite spaces the atomic partition already attains the supremum, so
    this agrees with closed_form; it exists to check that numerically.

    Args:
        F (ExtendedConvexFunction): Generator
        mu (FiniteMeasure): Nonnegative measure
        nu (SignedMeasure): Signed measure
        k_max (int): Largest number of elements of a sampled partition
        samples (int): Number of sampled partitions
        seed (int): Randomness source

    Returns:
        float: The maximum objective found
    """
    if k_max < 1:
        raise InvalidInputError(f"k_max must be at least 1, got {k_max}")
    if samples < 0:
        raise InvalidInputError(f"samples must be nonnegative, got {samples}")

    best = partition_sum(F, mu, nu, atomic_partition(mu.space))
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        k = int(rng.integers(1, k_max + 1))
        best = max(best, partition_sum(F, mu, nu, sample_partition(mu.space, k, rng)))
    return best


def _require_nonnegative(nu):
    if not nu.is_nonnegative:
        raise InvalidInputError(
            "extended Kullback-Leibler divergence is defined for positive measures only; nu has negative weights"
        )
    return nu.as_finite()


def kl_divergence(mu, nu):
    """
    Extended Kullback-Leibler divergence: integral of -ln(d nu_a / d mu) d mu.

    Neither a probability normalization nor absolute continuity is required.
    Returns +inf iff mu charges an atom where nu vanishes.

    Raises:
        InvalidInputError: If nu has negative weights
    """
    nu = _require_nonnegative(nu)
    return closed_form(make_generator("kl"), mu, nu).value


def kl_partition_sum(mu, nu, G):
    """
    sum_{g in G} mu[g] * ln(mu[g] / nu[g]).

    Summands with mu[g] = 0 vanish before any logarithm is taken; mu[g] > 0
    with nu[g] <= 0 gives +inf.
    """
    require_same_space(mu.space, nu.space, G.space)
    require_valid(G)
    terms = []
    for g in G:
        mass = integrate(mu, g)
        if mass <= 0.0:
            continue
        reference = integrate(nu, g)
        terms.append(POS_INF if reference <= 0.0 else mass * math.log(mass / reference))
    return ext_sum(terms)


def named_divergence(name, mu, nu, alpha_param=None):
    """
    Closed form for one of the named generators.

    Signed nu is accepted for every generator except kl.
    """
    F = make_generator(name, alpha_param)
    if name == "kl":
        nu = _require_nonnegative(nu)
    return closed_form(F, mu, nu)


def integrate_generator(F, f, mu):
    """Integral of F(f) against mu over the atoms mu charges."""
    f = np.asarray(f, dtype=float)
    if f.shape != (mu.space.size,):
        raise InvalidInputError(f"function has shape {f.shape}, expected ({mu.space.size},)")
    terms = []
    for x in np.flatnonzero(mu.weights > 0.0):
        value = evaluate(F, f[x])
        terms.append(POS_INF if value == POS_INF else mu.weights[x] * value)
    return ext_sum(terms)


def integral_via_partitions(F, f, mu, G):
    """
    sum_{g in G} mu[g] * F(mu[f g] / mu[g]) with the zero-mass convention.

    Bounded above by integrate_generator(F, f, mu); the atomic partition
    attains the bound.
    """
    if not isinstance(mu, FiniteMeasure):
        mu = mu.as_finite()
    require_same_space(mu.space, G.space)
    require_valid(G)
    f = np.asarray(f, dtype=float)
    if f.shape != (mu.space.size,):
        raise InvalidInputError(f"function has shape {f.shape}, expected ({mu.space.size},)")
    return ext_sum(perspective(F, max(integrate(mu, g), 0.0), integrate(mu, f * g)) for g in G)
