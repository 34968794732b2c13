"""Cycles of a finite self-map and the invariant measures they support.

Each weakly connected component of the functional graph x -> alpha(x) holds
exactly one cycle. Uniform measures on the cycles are the vertices of the
simplex of alpha-invariant probability measures.
"""

from dataclasses import dataclass

import networkx as nx
import numpy as np

from divergences.measure import FiniteMeasure, require_same_space
from dynsys.system import invariance_residual
from utils.errors import InvalidInputError, NotInvariantError

INVARIANCE_TOL = 1e-12


def canonical_rotation(cycle):
    """Rotate a cycle so that it starts at its smallest index."""
    start = cycle.index(min(cycle))
    return tuple(int(x) for x in cycle[start:] + cycle[:start])


@dataclass(frozen=True)
class CycleDecomposition:
    """Disjoint cycles of alpha plus the atoms not lying on any cycle."""

    cycles: tuple
    transient: tuple

    def cycle_index_of(self, x):
        for index, cycle in enumerate(self.cycles):
            if x in cycle:
                return index
        return None


def functional_graph(system):
    graph = nx.DiGraph()
    graph.add_nodes_from(range(system.size))
    graph.add_edges_from((x, int(y)) for x, y in enumerate(system.map_alpha))
    return graph


def enumerate_cycles(system):
    """
    All cycles of the functional graph of alpha, plus transient atoms.

    Returns:
        CycleDecomposition: Cycles in canonical rotation, sorted by first index
    """
    graph = functional_graph(system)
    cycles = tuple(sorted(canonical_rotation(cycle) for cycle in nx.simple_cycles(graph)))
    on_cycle = {x for cycle in cycles for x in cycle}
    transient = tuple(x for x in range(system.size) if x not in on_cycle)
    return CycleDecomposition(cycles=cycles, transient=transient)


@dataclass(frozen=True, eq=False)
class InvariantMeasure:
    """An alpha-invariant probability measure."""

    measure: FiniteMeasure

    @property
    def weights(self):
        return self.measure.weights

    @property
    def space(self):
        return self.measure.space


def check_invariance(system, mu, tol=INVARIANCE_TOL):
    """
    Wrap mu as an InvariantMeasure after checking it.

    Raises:
        NotInvariantError: If mu is not a probability measure fixed by alpha
    """
    if isinstance(mu, InvariantMeasure):
        mu = mu.measure
    require_same_space(system.space, mu.space)
    if not isinstance(mu, FiniteMeasure):
        mu = mu.as_finite()
    mass_error = abs(mu.total_mass - 1.0)
    if mass_error > tol:
        raise NotInvariantError(f"measure has total mass {mu.total_mass}, expected 1", residual=mass_error)
    residual = invariance_residual(system, mu)
    if residual > tol:
        raise NotInvariantError(f"measure is not invariant, max residual {residual:.3e}", residual=residual)
    return InvariantMeasure(mu)


def cycle_measure(system, cycle):
    weights = np.zeros(system.size)
    weights[list(cycle)] = 1.0 / len(cycle)
    return FiniteMeasure(system.space, weights)


def invariant_vertices(system):
    """Uniform probability measure on each cycle, in cycle order."""
    decomposition = enumerate_cycles(system)
    return [check_invariance(system, cycle_measure(system, cycle)) for cycle in decomposition.cycles]


def cycle_mixture(system, weights):
    """
    Convex combination sum_i w_i * (uniform measure on cycle i).

    Args:
        system (DynamicalSystem): The map
        weights (array-like): Nonnegative mixture weights, one per cycle, summing to 1
    """
    vertices = invariant_vertices(system)
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (len(vertices),):
        raise InvalidInputError(f"{weights.size} mixture weights for {len(vertices)} cycles")
    if np.any(weights < 0.0) or abs(weights.sum() - 1.0) > INVARIANCE_TOL:
        raise InvalidInputError("mixture weights must be nonnegative and sum to 1")
    combined = sum(w * vertex.weights for w, vertex in zip(weights, vertices))
    return check_invariance(system, FiniteMeasure(system.space, combined))
