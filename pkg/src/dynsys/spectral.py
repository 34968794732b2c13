"""Spectral potential lambda(phi) = ln r(A_phi).

Two independent computations: repeated squaring of the nonnegative matrix
with sup-norm renormalization, and the closed form for deterministic maps,
max over cycles of the mean of (phi + ln a) along the cycle.
"""

import math

import numpy as np

from divergences.extreal import NEG_INF
from dynsys.cycles import enumerate_cycles
from dynsys.system import potential_values, weight_operator
from utils.errors import InvalidInputError, NonConvergenceError
from utils.logger import setup_logger

logger = setup_logger(name="spectral")

MAX_SQUARINGS = 64


def spectral_potential(A, phi=None, tol=1e-12, max_squarings=MAX_SQUARINGS):
    """
    lambda(phi) as the limit of (1/n) ln ||A_phi^n 1|| along n = 2^k.

    The matrix power is kept as exp(scale) * N with max(N) = 1, and the running
    estimate is scale / n + ln ||N 1|| / n.

    Args:
        A (TransferOperator): Base operator
        phi (Potential | array-like, optional): Potential, zero when omitted
        tol (float): Stop when successive estimates differ by less than tol
        max_squarings (int): Budget of squarings

    Returns:
        float: lambda(phi), -inf if A_phi is nilpotent

    Raises:
        NonConvergenceError: If the estimates have not stabilized within the budget
    """
    if not tol > 0:
        raise InvalidInputError(f"tol must be positive, got {tol}")

    matrix = weight_operator(A, phi).matrix()
    peak = matrix.max()
    if peak <= 0.0:
        return NEG_INF

    normalized = matrix / peak
    # log_scale_per_step = ln(scale) / n for the current power n = 2^k
    log_scale_per_step = math.log(peak)
    power = 1.0
    previous = log_scale_per_step + math.log(normalized.sum(axis=1).max())

    for k in range(1, max_squarings + 1):
        squared = normalized @ normalized
        peak = squared.max()
        if peak <= 0.0:
            logger.debug(f"A_phi^(2^{k}) vanished, spectral potential is -inf")
            return NEG_INF
        normalized = squared / peak
        power *= 2.0
        log_scale_per_step += math.log(peak) / power
        estimate = log_scale_per_step + math.log(normalized.sum(axis=1).max()) / power
        if abs(estimate - previous) < tol:
            logger.debug(f"Spectral potential converged after {k} squarings: {estimate}")
            return estimate
        previous = estimate

    raise NonConvergenceError(
        f"spectral potential did not converge within {max_squarings} squarings",
        best_value=previous,
        iterations=max_squarings,
    )


def cycle_averages(A, phi=None):
    """
    Mean of (phi + ln a) along every cycle of the map.

    Cycles through a zero weight give -inf.

    Returns:
        list: (cycle, average) pairs in cycle order
    """
    values = potential_values(A.system, phi)
    with np.errstate(divide="ignore"):
        log_weights = np.log(A.weight_a)
    averages = []
    for cycle in enumerate_cycles(A.system).cycles:
        indices = list(cycle)
        if np.any(A.weight_a[indices] == 0.0):
            averages.append((cycle, NEG_INF))
        else:
            averages.append((cycle, float(np.mean(values[indices] + log_weights[indices]))))
    return averages


def cycle_spectral_potential(A, phi=None):
    """lambda(phi) from the cycle geometric means of the weights a e^phi."""
    return max(average for _, average in cycle_averages(A, phi))
