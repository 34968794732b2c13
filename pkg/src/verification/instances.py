"""Seeded random instances for the property suites.

Every instance draws from its own generator, keyed by (seed, suite, index)
through numpy's SeedSequence spawn keys, so suites can run in any order or
alone and still see identical instances.
"""

import zlib

import numpy as np

from divergences.extended_convex import builtin_generators
from divergences.measure import AtomSpace, FiniteMeasure, SignedMeasure
from dynsys.system import DynamicalSystem, build_transfer_operator


def suite_key(name):
    return zlib.crc32(name.encode("utf-8"))


class InstanceFactory:
    """
    Source of random verification instances.
    """

    def __init__(self, seed, generators=None):
        """
        Initialize the factory.

        Args:
            seed (int): Nonnegative master seed
            generators (list, optional): Pool of ExtendedConvexFunction to draw from,
                defaults to the builtin generators
        """
        self.seed = int(seed)
        self.generators = list(generators) if generators is not None else builtin_generators()

    def rng(self, suite, index):
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=(suite_key(suite), int(index)))
        return np.random.default_rng(sequence)

    def generator(self, rng):
        return self.generators[int(rng.integers(len(self.generators)))]

    @staticmethod
    def size(rng, max_atoms):
        return int(rng.integers(1, max_atoms + 1))

    @staticmethod
    def reference_measure(rng, n):
        """Nonnegative weights, about 30% of atoms null."""
        weights = rng.uniform(0.05, 1.0, n) * (rng.random(n) > 0.3)
        return FiniteMeasure(AtomSpace.of_size(n), weights)

    @staticmethod
    def signed_measure(rng, n):
        """Signed weights, about 15% of atoms exactly zero."""
        weights = rng.uniform(-1.0, 1.0, n) * (rng.random(n) > 0.15)
        return SignedMeasure(AtomSpace.of_size(n), weights)

    def measure_pair(self, rng, max_atoms=6):
        n = self.size(rng, max_atoms)
        return self.reference_measure(rng, n), self.signed_measure(rng, n)

    def probability_pair(self, rng, max_atoms=6):
        """Probability measures mu << nu with nu strictly positive."""
        n = self.size(rng, max_atoms)
        mu = rng.uniform(0.05, 1.0, n) * (rng.random(n) > 0.25)
        if mu.sum() == 0.0:
            mu[int(rng.integers(n))] = 1.0
        nu = rng.uniform(0.05, 1.0, n)
        space = AtomSpace.of_size(n)
        return FiniteMeasure(space, mu / mu.sum()), FiniteMeasure(space, nu / nu.sum())

    @staticmethod
    def density(rng, n):
        return rng.uniform(0.0, 2.0, n) * (rng.random(n) > 0.2)

    @staticmethod
    def function(rng, n):
        """Mostly positive values, sometimes arbitrary reals."""
        if rng.random() < 0.7:
            return rng.uniform(0.05, 3.0, n)
        return rng.normal(0.0, 2.0, n)

    def system(self, rng, max_atoms=8, positive=True):
        n = self.size(rng, max_atoms)
        alpha = rng.integers(0, n, n)
        weights = rng.uniform(0.2, 3.0, n)
        if not positive:
            weights = weights * (rng.random(n) > 0.2)
        return build_transfer_operator(DynamicalSystem(AtomSpace.of_size(n), alpha), weights)

    @staticmethod
    def potential(rng, n):
        return rng.normal(0.0, 1.0, n)
