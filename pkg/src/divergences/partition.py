"""Finite partitions of unity on an AtomSpace."""

from dataclasses import dataclass, field

import numpy as np

from divergences.measure import require_same_space
from utils.errors import InvalidPartitionError, SpaceMismatchError

# Column-sum tolerance used for constructed partitions
PARTITION_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class PartitionOfUnity:
    """
    A family g_1..g_k of functions on the atoms, stored as a (k, n) array.

    Construction only checks shapes; validate_partition checks the
    nonnegativity and sum-to-one conditions.
    """

    space: object
    elements: np.ndarray = field(repr=False)

    def __post_init__(self):
        elements = np.array(self.elements, dtype=float)
        if elements.ndim == 1:
            elements = elements.reshape(1, -1)
        if elements.ndim != 2 or elements.shape[1] != self.space.size:
            raise SpaceMismatchError(f"partition elements have shape {elements.shape}, expected (k, {self.space.size})")
        elements.setflags(write=False)
        object.__setattr__(self, "elements", elements)

    def __len__(self):
        return self.elements.shape[0]

    def __iter__(self):
        return iter(self.elements)


def atomic_partition(space):
    """Indicators of the single atoms."""
    return PartitionOfUnity(space, np.eye(space.size))


def trivial_partition(space):
    """The one-element partition {1}."""
    return PartitionOfUnity(space, np.ones((1, space.size)))


def sample_partition(space, k, seed):
    """
    Draw a random partition with k elements.

    For each atom the column (g_1(x), ..., g_k(x)) is a point of the simplex
    obtained by normalizing k independent exponentials.

    Args:
        space (AtomSpace): The atoms
        k (int): Number of elements, at least 1
        seed (int | numpy.random.Generator | numpy.random.SeedSequence): Randomness source

    Returns:
        PartitionOfUnity: Deterministic in seed
    """
    if k < 1:
        raise InvalidPartitionError(f"a partition needs at least one element, got k={k}")
    rng = np.random.default_rng(seed)
    draws = rng.exponential(size=(k, space.size))
    return PartitionOfUnity(space, draws / draws.sum(axis=0, keepdims=True))


def refine(G, H):
    """
    Common refinement {g*h : g in G, h in H} by pointwise products.

    Elements are ordered with G's index varying slowest.
    """
    require_same_space(G.space, H.space)
    products = G.elements[:, None, :] * H.elements[None, :, :]
    return PartitionOfUnity(G.space, products.reshape(-1, G.space.size))


def validate_partition(G, tol=PARTITION_TOL):
    """
    Check the partition-of-unity conditions.

    Args:
        G (PartitionOfUnity): Candidate partition
        tol (float): Positive slack for both conditions

    Returns:
        bool: True iff every entry is >= -tol and every column sums to 1 within tol
    """
    if not tol > 0:
        raise InvalidPartitionError(f"tol must be positive, got {tol}")
    if len(G) == 0 or not np.all(np.isfinite(G.elements)):
        return False
    if np.any(G.elements < -tol):
        return False
    return bool(np.all(np.abs(G.elements.sum(axis=0) - 1.0) <= tol))


def require_valid(G, tol=PARTITION_TOL):
    if not validate_partition(G, tol):
        raise InvalidPartitionError("elements are not a partition of unity")
