"""Finite nonnegative and signed measures on a finite set of atoms.

Every subset of a finite space is measurable, so a measure is just a dense
weight array over an explicit AtomSpace.
"""

from dataclasses import dataclass, field

import numpy as np

from utils.errors import AbsoluteContinuityError, InvalidInputError, SpaceMismatchError


def _frozen_array(values, dtype=float):
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class AtomSpace:
    """Ordered finite list of unique atom labels."""

    atoms: tuple

    def __post_init__(self):
        atoms = tuple(str(label) for label in self.atoms)
        if not atoms:
            raise InvalidInputError("an atom space needs at least one atom")
        if len(set(atoms)) != len(atoms):
            raise InvalidInputError("atom labels must be unique")
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def of_size(cls, n):
        return cls(tuple(str(i) for i in range(n)))

    def __len__(self):
        return len(self.atoms)

    @property
    def size(self):
        return len(self.atoms)

    def index(self, label):
        return self.atoms.index(str(label))


def require_same_space(*spaces):
    first = spaces[0]
    for other in spaces[1:]:
        if other != first:
            raise SpaceMismatchError(f"atom spaces differ: {first.atoms} vs {other.atoms}")


def _as_function(space, g, name="function"):
    values = np.asarray(g, dtype=float)
    if values.shape != (space.size,):
        raise SpaceMismatchError(f"{name} has shape {values.shape}, expected ({space.size},)")
    return values


@dataclass(frozen=True, eq=False)
class SignedMeasure:
    """A finite real-valued measure: one finite weight per atom."""

    space: AtomSpace
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        weights = _frozen_array(self.weights)
        if weights.shape != (self.space.size,):
            raise SpaceMismatchError(f"{weights.shape[0] if weights.ndim else 0} weights for {self.space.size} atoms")
        if not np.all(np.isfinite(weights)):
            raise InvalidInputError("measure weights must be finite")
        object.__setattr__(self, "weights", weights)
        self._validate()

    def _validate(self):
        pass

    @classmethod
    def from_weights(cls, weights, labels=None):
        weights = np.asarray(weights, dtype=float)
        space = AtomSpace(tuple(labels)) if labels is not None else AtomSpace.of_size(weights.size)
        return cls(space, weights)

    @property
    def total_mass(self):
        return float(np.sum(self.weights))

    @property
    def is_nonnegative(self):
        return bool(np.all(self.weights >= 0.0))

    def as_finite(self):
        """Reinterpret as a nonnegative measure, rejecting negative weights."""
        return FiniteMeasure(self.space, self.weights)

    def __add__(self, other):
        require_same_space(self.space, other.space)
        kind = FiniteMeasure if isinstance(self, FiniteMeasure) and isinstance(other, FiniteMeasure) else SignedMeasure
        return kind(self.space, self.weights + other.weights)

    def __eq__(self, other):
        if not isinstance(other, SignedMeasure):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.weights, other.weights)

    __hash__ = None

    def __repr__(self):
        return f"{type(self).__name__}({dict(zip(self.space.atoms, self.weights.tolist()))})"


@dataclass(frozen=True, eq=False, repr=False)
class FiniteMeasure(SignedMeasure):
    """A finite nonnegative measure."""

    def _validate(self):
        if np.any(self.weights < 0.0):
            raise InvalidInputError("a nonnegative measure cannot have negative weights")


@dataclass(frozen=True, eq=False)
class LebesgueDecomposition:
    """nu = nu_a + nu_s_plus + nu_s_minus relative to a reference measure."""

    nu_a: SignedMeasure
    nu_s_plus: FiniteMeasure
    nu_s_minus: SignedMeasure

    def reconstruct(self):
        return SignedMeasure(
            self.nu_a.space,
            self.nu_a.weights + self.nu_s_plus.weights + self.nu_s_minus.weights,
        )


@dataclass(frozen=True, eq=False)
class Density:
    """Radon-Nikodym derivative; zero on atoms where the reference vanishes."""

    space: AtomSpace
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values))


def integrate(m, g):
    """
    Integrate a function against a measure.

    Args:
        m (SignedMeasure): Nonnegative or signed measure
        g (array-like): Values of the function on the atoms

    Returns:
        float: sum_x g(x) * m(x)
    """
    values = _as_function(m.space, g)
    return float(np.dot(values, m.weights))


def jordan_decompose(nu):
    """
    Split a signed measure into positive and negative parts.

    Returns:
        tuple: (nu_plus, nu_minus) with nu = nu_plus - nu_minus and disjoint supports
    """
    positive = np.where(nu.weights > 0.0, nu.weights, 0.0)
    negative = np.where(nu.weights < 0.0, -nu.weights, 0.0)
    return FiniteMeasure(nu.space, positive), FiniteMeasure(nu.space, negative)


def total_variation(nu):
    return float(np.sum(np.abs(nu.weights)))


def lebesgue_decompose(nu, mu):
    """
    Decompose nu relative to mu.

    On atoms charged by mu the weight goes to the absolutely continuous part;
    on mu-null atoms it goes to the positive or negative singular part.

    Args:
        nu (SignedMeasure): Measure to decompose
        mu (FiniteMeasure): Reference measure

    Returns:
        LebesgueDecomposition: The three parts, summing to nu exactly
    """
    require_same_space(nu.space, mu.space)
    charged = mu.weights > 0.0
    nu_a = np.where(charged, nu.weights, 0.0)
    singular = np.where(charged, 0.0, nu.weights)
    return LebesgueDecomposition(
        nu_a=SignedMeasure(nu.space, nu_a),
        nu_s_plus=FiniteMeasure(nu.space, np.maximum(singular, 0.0)),
        nu_s_minus=SignedMeasure(nu.space, np.minimum(singular, 0.0)),
    )


def radon_nikodym(nu_a, mu):
    """
    Density of an absolutely continuous measure with respect to mu.

    Raises:
        AbsoluteContinuityError: If nu_a charges an atom where mu vanishes
    """
    require_same_space(nu_a.space, mu.space)
    charged = mu.weights > 0.0
    if np.any(nu_a.weights[~charged] != 0.0):
        raise AbsoluteContinuityError("nu_a charges atoms where the reference measure vanishes")
    values = np.divide(nu_a.weights, mu.weights, out=np.zeros(mu.space.size), where=charged)
    return Density(mu.space, values)


def apply_density(f, m):
    """
    Reweight a measure by a nonnegative bounded function: (f m)(x) = f(x) m(x).

    Returns:
        SignedMeasure: Same kind as m

    Raises:
        InvalidInputError: If f has a negative or non-finite entry
    """
    values = _as_function(m.space, f, name="density")
    if not np.all(np.isfinite(values)) or np.any(values < 0.0):
        raise InvalidInputError("a density must be finite and nonnegative")
    return type(m)(m.space, values * m.weights)
