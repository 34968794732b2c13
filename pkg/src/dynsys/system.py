"""Finite dynamical systems and their weighted transfer operators.

A transfer operator is stored as the pair (alpha, a) and acts by

    (A f)(x) = sum_{y : alpha(y) = x} a(y) f(y).

Column y of its matrix is supported on row alpha(y), which is exactly what
the homological identity A(g o alpha * f) = g * A f requires.
"""

from dataclasses import dataclass, field

import numpy as np

from divergences.measure import FiniteMeasure, require_same_space
from utils.errors import InvalidInputError, PropertyViolation
from utils.logger import setup_logger

logger = setup_logger(name="transfer_operator")

HOMOLOGICAL_TOL = 1e-12
HOMOLOGICAL_TRIALS = 100


@dataclass(frozen=True, eq=False)
class DynamicalSystem:
    """A self-map alpha of a finite atom space, as an index array."""

    space: object
    map_alpha: np.ndarray = field(repr=False)

    def __post_init__(self):
        alpha = np.array(self.map_alpha)
        if alpha.shape != (self.space.size,):
            raise InvalidInputError(f"map has {alpha.size} entries for {self.space.size} atoms")
        if alpha.size and not np.issubdtype(alpha.dtype, np.integer):
            if not np.all(np.equal(np.mod(alpha, 1), 0)):
                raise InvalidInputError("map entries must be atom indices")
        alpha = alpha.astype(np.int64)
        if np.any(alpha < 0) or np.any(alpha >= self.space.size):
            raise InvalidInputError("map entries must be valid 0-based atom indices")
        alpha.setflags(write=False)
        object.__setattr__(self, "map_alpha", alpha)

    @property
    def size(self):
        return self.space.size

    def pullback(self, g):
        """g o alpha."""
        return np.asarray(g, dtype=float)[self.map_alpha]

    def iterate_map(self, n):
        """Index array of alpha^n."""
        power = np.arange(self.size)
        for _ in range(n):
            power = self.map_alpha[power]
        return power


@dataclass(frozen=True, eq=False)
class Potential:
    """A finite real function phi on the atoms."""

    phi: np.ndarray

    def __post_init__(self):
        phi = np.array(self.phi, dtype=float)
        if not np.all(np.isfinite(phi)):
            raise InvalidInputError("potential values must be finite")
        phi.setflags(write=False)
        object.__setattr__(self, "phi", phi)


def potential_values(system, phi):
    if phi is None:
        return np.zeros(system.size)
    values = phi.phi if isinstance(phi, Potential) else Potential(phi).phi
    if values.shape != (system.size,):
        raise InvalidInputError(f"potential has {values.size} values for {system.size} atoms")
    return values


@dataclass(frozen=True, eq=False)
class TransferOperator:
    """Weighted pushforward along the system's map."""

    system: DynamicalSystem
    weight_a: np.ndarray = field(repr=False)

    def __post_init__(self):
        weights = np.array(self.weight_a, dtype=float)
        if weights.shape != (self.system.size,):
            raise InvalidInputError(f"{weights.size} weights for {self.system.size} atoms")
        if not np.all(np.isfinite(weights)) or np.any(weights < 0.0):
            raise InvalidInputError("transfer operator weights must be finite and nonnegative")
        weights.setflags(write=False)
        object.__setattr__(self, "weight_a", weights)

    @property
    def space(self):
        return self.system.space

    @property
    def size(self):
        return self.system.size

    def apply(self, f):
        """(A f)(x) = sum over preimages y of x of a(y) f(y)."""
        f = np.asarray(f, dtype=float)
        return np.bincount(self.system.map_alpha, weights=self.weight_a * f, minlength=self.size)

    def apply_power(self, f, n):
        result = np.asarray(f, dtype=float)
        for _ in range(n):
            result = self.apply(result)
        return result

    def adjoint_apply(self, weights):
        """(A* m)(y) = a(y) m(alpha(y)), so that (A* m)[g] = m[A g]."""
        return self.weight_a * np.asarray(weights, dtype=float)[self.system.map_alpha]

    def matrix(self):
        """Dense matrix with M[x, y] = a(y) if alpha(y) = x."""
        matrix = np.zeros((self.size, self.size))
        matrix[self.system.map_alpha, np.arange(self.size)] = self.weight_a
        return matrix

    def homological_residual(self, f, g):
        """Max-norm of A(g o alpha * f) - g * A f."""
        f = np.asarray(f, dtype=float)
        g = np.asarray(g, dtype=float)
        return float(np.max(np.abs(self.apply(self.system.pullback(g) * f) - g * self.apply(f))))


def check_homological_identity(A, trials=HOMOLOGICAL_TRIALS, seed=0):
    """
    Largest relative homological residual over random (f, g) pairs.

    Returns:
        float: max over trials of residual / (1 + scale of the terms)
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        f = rng.uniform(-1.0, 1.0, A.size)
        g = rng.uniform(-1.0, 1.0, A.size)
        scale = 1.0 + float(np.max(np.abs(A.apply(np.abs(f)))))
        worst = max(worst, A.homological_residual(f, g) / scale)
    return worst


def build_transfer_operator(system, weight_a, verify_trials=HOMOLOGICAL_TRIALS):
    """
    Build the operator (A f)(x) = sum_{alpha(y) = x} a(y) f(y).

    The homological identity is checked on random pairs at construction.

    Args:
        system (DynamicalSystem): The map
        weight_a (array-like): Nonnegative weights a(y)
        verify_trials (int): Number of random (f, g) pairs to check

    Returns:
        TransferOperator: The operator

    Raises:
        InvalidInputError: If a weight is negative
        PropertyViolation: If the identity check fails
    """
    operator = TransferOperator(system, weight_a)
    residual = check_homological_identity(operator, trials=verify_trials)
    if residual > HOMOLOGICAL_TOL:
        raise PropertyViolation(f"homological identity residual {residual:.3e}", residual=residual)
    logger.debug(f"Built transfer operator on {system.size} atoms (identity residual {residual:.1e})")
    return operator


def weight_operator(A, phi):
    """A_phi f = A(e^phi f), i.e. weights a(y) e^{phi(y)}."""
    values = potential_values(A.system, phi)
    return TransferOperator(A.system, A.weight_a * np.exp(values))


def pushforward(system, mu):
    """Image measure of mu under alpha: (alpha_* mu)(x) = sum_{alpha(y) = x} mu(y)."""
    require_same_space(system.space, mu.space)
    return FiniteMeasure(mu.space, np.bincount(system.map_alpha, weights=mu.weights, minlength=system.size))


def invariance_residual(system, mu):
    return float(np.max(np.abs(pushforward(system, mu).weights - mu.weights)))
