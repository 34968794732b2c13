"""t-entropy of invariant measures.

For an invariant probability measure mu,

    tau_n(mu) = -D_KL(mu || A*^n mu),    tau(mu) = inf_n tau_n(mu) / n,

and the three-step partition definition (with an inner supremum over
probability measures m) gives the same tau_n. Both are implemented; the
inner supremum is a concave maximization over the simplex solved by the
mixture-weight EM fixed point.

tau_n is evaluated from ln(A*^n mu)(y) = sum_{k<n} ln a(alpha^k y) + ln mu(alpha^n y),
so long products of large or small weights neither overflow nor underflow.
"""

import math
from dataclasses import dataclass

import numpy as np

from divergences.extreal import NEG_INF, ext_sum
from divergences.measure import FiniteMeasure, integrate, require_same_space
from divergences.partition import require_valid
from dynsys.cycles import INVARIANCE_TOL, InvariantMeasure, check_invariance
from utils.errors import InvalidInputError, NonConvergenceError
from utils.logger import setup_logger

logger = setup_logger(name="tentropy")

DEFAULT_N_MAX = 32
DEFAULT_EM_ITERS = 10_000
DEFAULT_EM_TOL = 1e-10
CONSTANCY_TOL = 1e-9
PROBABILITY_TOL = 1e-12


def _require_positive(name, value):
    if value < 1:
        raise InvalidInputError(f"{name} must be at least 1, got {value}")


def _log(values):
    with np.errstate(divide="ignore"):
        return np.log(values)


def adjoint_push(A, mu, n):
    """
    A*^n mu, defined by (A*^n mu)[g] = mu[A^n g].

    Args:
        A (TransferOperator): The operator
        mu (FiniteMeasure | InvariantMeasure): Nonnegative measure
        n (int): Power, at least 1

    Returns:
        FiniteMeasure: The pushed measure
    """
    _require_positive("n", n)
    if isinstance(mu, InvariantMeasure):
        mu = mu.measure
    require_same_space(A.space, mu.space)
    weights = mu.weights
    for _ in range(n):
        weights = A.adjoint_apply(weights)
    return FiniteMeasure(mu.space, weights)


def log_adjoint_push(A, mu, n):
    """
    Logarithm of the weights of A*^n mu, -inf where A*^n mu vanishes.

    Uses (A* m)(y) = a(y) m(alpha(y)) in log form, so the result stays
    finite whenever every factor is positive.
    """
    _require_positive("n", n)
    if isinstance(mu, InvariantMeasure):
        mu = mu.measure
    require_same_space(A.space, mu.space)
    log_a = _log(A.weight_a)
    log_weights = _log(mu.weights)
    for _ in range(n):
        log_weights = log_a + log_weights[A.system.map_alpha]
    return log_weights


def _tau_n(A, mu, n):
    """-D_KL(mu || A*^n mu) = sum over supp mu of mu(y) (ln(A*^n mu)(y) - ln mu(y))."""
    support = mu.weights > 0.0
    pushed = log_adjoint_push(A, mu, n)[support]
    if np.any(pushed == NEG_INF):
        return NEG_INF
    masses = mu.weights[support]
    return math.fsum(masses * (pushed - np.log(masses)))


def t_entropy_n(A, mu, n, tol=INVARIANCE_TOL):
    """
    tau_n(mu) = -D_KL(mu || A*^n mu).

    Values lie in R u {-inf}; -inf iff mu charges an atom where A*^n mu vanishes.

    Raises:
        NotInvariantError: If mu is not an invariant probability measure within tol
    """
    _require_positive("n", n)
    invariant = check_invariance(A.system, mu, tol)
    return _tau_n(A, invariant.measure, n)


@dataclass(frozen=True)
class TEntropyProfile:
    """tau_n for n = 1..n_max together with the derived t-entropy."""

    tau_n: tuple
    tau: float
    kl_form: float

    @property
    def n_max(self):
        return len(self.tau_n)

    @property
    def is_constant(self):
        rates = [value / n for n, value in enumerate(self.tau_n, start=1)]
        if all(rate == NEG_INF for rate in rates):
            return True
        if any(rate == NEG_INF for rate in rates):
            return False
        return max(rates) - min(rates) <= CONSTANCY_TOL * (1.0 + max(abs(r) for r in rates))


def t_entropy_profile(A, mu, n_max=DEFAULT_N_MAX, tol=INVARIANCE_TOL):
    """
    tau_n(mu) for n = 1..n_max, tau(mu) = min tau_n/n and -max D_KL/n.

    For finite deterministic systems tau_n/n does not depend on n; a
    warning is logged when the computed profile disagrees.
    """
    _require_positive("n_max", n_max)
    invariant = check_invariance(A.system, mu, tol)
    values = [_tau_n(A, invariant.measure, n) for n in range(1, n_max + 1)]
    divergence_rates = [-value / n for n, value in enumerate(values, start=1)]

    tau = min(value / n for n, value in enumerate(values, start=1))
    kl_form = -max(divergence_rates)
    profile = TEntropyProfile(tau_n=tuple(values), tau=tau, kl_form=kl_form)
    if not profile.is_constant:
        logger.warning(f"tau_n/n is not constant in n up to {n_max}: {values}")
    return profile


def t_entropy(A, mu, n_max=DEFAULT_N_MAX, tol=INVARIANCE_TOL):
    """tau(mu) = min over 1 <= n <= n_max of tau_n(mu)/n."""
    return t_entropy_profile(A, mu, n_max, tol).tau


def t_entropy_n_partition(A, mu, n, G):
    """
    Objective of the two-step definition for one partition:

        sum_{g in G} mu[g] ln(mu[A^n g] / mu[g]),

    where mu[g] = 0 contributes 0 and mu[A^n g] = 0 < mu[g] gives -inf.
    Its infimum over partitions is tau_n(mu), attained at the atomic partition.
    """
    _require_positive("n", n)
    if isinstance(mu, InvariantMeasure):
        mu = mu.measure
    require_same_space(A.space, mu.space, G.space)
    require_valid(G)
    terms = []
    for g in G:
        mass = integrate(mu, g)
        if mass <= 0.0:
            continue
        pushed = integrate(mu, A.apply_power(g, n))
        terms.append(NEG_INF if pushed <= 0.0 else mass * math.log(pushed / mass))
    return ext_sum(terms)


def _supremum_objective(masses, images, m):
    """sum_i c_i ln(m[h_i] / c_i) over the active rows."""
    totals = images @ m
    if np.any(totals <= 0.0):
        return NEG_INF
    return float(np.sum(masses * np.log(totals / masses)))


def t_entropy_n_supremum(A, mu, n, G, iters=DEFAULT_EM_ITERS, tol=DEFAULT_EM_TOL, mass_tol=PROBABILITY_TOL):
    """
    tau_n(mu, G) = sup over probability m of sum_i mu[g_i] ln(m[A^n g_i] / mu[g_i]).

    The supremum is computed by the fixed point
    m <- normalize(sum_i c_i (h_i * m) / m[h_i]) with c_i = mu[g_i], h_i = A^n g_i,
    started from the uniform measure. The returned value is never below the
    objective at the feasible point m = mu.

    Args:
        A (TransferOperator): The operator
        mu (FiniteMeasure): Probability measure, not necessarily invariant
        n (int): Power, at least 1
        G (PartitionOfUnity): Partition of unity
        iters (int): Iteration budget
        tol (float): Stop when successive objective values differ by less than tol
        mass_tol (float): Allowed deviation of the total mass of mu from 1

    Returns:
        float: Value in R u {-inf}

    Raises:
        NonConvergenceError: If the budget is exhausted; best_value holds the best objective
    """
    _require_positive("n", n)
    _require_positive("iters", iters)
    if not tol > 0:
        raise InvalidInputError(f"tol must be positive, got {tol}")
    if isinstance(mu, InvariantMeasure):
        mu = mu.measure
    require_same_space(A.space, mu.space, G.space)
    require_valid(G)
    if abs(mu.total_mass - 1.0) > mass_tol:
        raise InvalidInputError(f"mu must be a probability measure, total mass is {mu.total_mass}")

    masses = np.array([integrate(mu, g) for g in G])
    active = masses > 0.0
    masses = masses[active]
    images = np.array([A.apply_power(g, n) for g in G])[active]
    if np.any(~np.any(images > 0.0, axis=1)):
        # some mu[g_i] > 0 while m[A^n g_i] = 0 for every m
        return NEG_INF

    at_mu = _supremum_objective(masses, images, mu.weights)
    m = np.full(A.size, 1.0 / A.size)
    objective = _supremum_objective(masses, images, m)
    for iteration in range(1, iters + 1):
        totals = images @ m
        m = (masses / totals) @ images * m
        m /= m.sum()
        updated = _supremum_objective(masses, images, m)
        if abs(updated - objective) < tol:
            logger.debug(f"Supremum fixed point converged after {iteration} iterations: {updated}")
            return max(updated, at_mu)
        objective = updated

    raise NonConvergenceError(
        f"Supremum fixed point did not converge within {iters} iterations",
        best_value=max(objective, at_mu),
        iterations=iters,
    )
