"""Numerical check of lambda(phi) = max over invariant mu of (mu[phi] + tau(mu))."""

import math
from dataclasses import dataclass

from divergences.extreal import NEG_INF, POS_INF, ext_add, format_ext
from divergences.measure import integrate
from dynsys.cycles import enumerate_cycles, invariant_vertices
from dynsys.spectral import cycle_spectral_potential, spectral_potential
from dynsys.system import potential_values
from dynsys.tentropy import DEFAULT_N_MAX, t_entropy
from utils.logger import setup_logger

logger = setup_logger(name="variational")


@dataclass(frozen=True)
class VariationalReport:
    lam: float
    lam_cycles: float
    best: float
    argmax_cycle: int
    cycle: tuple
    vertex_values: tuple
    gap: float

    def to_dict(self):
        return {
            "lambda": format_ext(self.lam),
            "lambda_cycles": format_ext(self.lam_cycles),
            "best": format_ext(self.best),
            "argmax_cycle": self.argmax_cycle,
            "cycle": list(self.cycle),
            "vertex_values": [format_ext(value) for value in self.vertex_values],
            "gap": format_ext(self.gap),
        }


def extended_gap(a, b):
    """|a - b| with equal infinities at distance 0."""
    if a == b:
        return 0.0
    if math.isinf(a) or math.isinf(b):
        return POS_INF
    return abs(a - b)


def variational_check(A, phi=None, tol=1e-12, n_max=DEFAULT_N_MAX):
    """
    Compare lambda(phi) with the best vertex value mu[phi] + tau(mu).

    mu[phi] + tau(mu) is affine on the simplex of invariant measures, so the
    maximum over all of it is attained at a cycle vertex.

    Args:
        A (TransferOperator): Base operator
        phi (Potential | array-like, optional): Potential, zero when omitted
        tol (float): Tolerance of the power iteration
        n_max (int): Truncation of the infimum over n in tau

    Returns:
        VariationalReport: lambda by power iteration and by cycles, best vertex and gap

    Raises:
        NonConvergenceError: Propagated from spectral_potential
    """
    values = potential_values(A.system, phi)
    lam = spectral_potential(A, values, tol=tol)
    lam_cycles = cycle_spectral_potential(A, values)

    vertex_values = []
    for vertex in invariant_vertices(A.system):
        tau = t_entropy(A, vertex, n_max)
        vertex_values.append(NEG_INF if tau == NEG_INF else ext_add(integrate(vertex.measure, values), tau))

    argmax = max(range(len(vertex_values)), key=lambda i: vertex_values[i])
    best = vertex_values[argmax]
    cycle = enumerate_cycles(A.system).cycles[argmax]
    gap = extended_gap(lam, best)
    logger.info(f"Variational check: lambda={lam}, best={best} on cycle {cycle}, gap={gap}")
    return VariationalReport(
        lam=lam,
        lam_cycles=lam_cycles,
        best=best,
        argmax_cycle=argmax,
        cycle=cycle,
        vertex_values=tuple(vertex_values),
        gap=gap,
    )
