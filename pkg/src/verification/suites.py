"""Property suites run by `divkit verify`.

Each suite checks one family of mathematical facts on seeded random
instances. An instance is identified by (suite, seed, index) and can be
replayed alone.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from divergences.divergence import (
    closed_form,
    integral_via_partitions,
    integrate_generator,
    kl_divergence,
    kl_partition_sum,
    partition_sum,
)
from divergences.extended_convex import numeric_slope, perspective
from divergences.extreal import POS_INF, ext_add, ext_close, ext_le
from divergences.measure import AtomSpace, FiniteMeasure, apply_density, integrate, lebesgue_decompose
from divergences.partition import atomic_partition, refine, sample_partition
from dynsys.cycles import cycle_mixture, enumerate_cycles, invariant_vertices
from dynsys.spectral import cycle_averages
from dynsys.system import DynamicalSystem, build_transfer_operator, check_homological_identity
from dynsys.tentropy import adjoint_push, t_entropy_n, t_entropy_n_supremum, t_entropy_n_partition, t_entropy_profile
from dynsys.variational import variational_check
from utils.errors import DivkitError, NonConvergenceError
from utils.logger import setup_logger
from verification.instances import InstanceFactory

logger = setup_logger(name="verification")

EXACT_TOL = 1e-12
LOOSE_TOL = 1e-9
SLOPE_ORACLE_TOL = 1e-6
DEFINITION_TOL = 1e-6
PERSPECTIVE_SAMPLES = 50
SUPSUM_PARTITIONS = 200
JENSEN_PARTITIONS = 10
KL_PARTITIONS = 20
MAX_PARTITION_SIZE = 4
TENTROPY_N_MAX = 8
VARIATIONAL_N_MAX = 4
SUPREMUM_ITERS = 2_000


@dataclass(frozen=True)
class Violation:
    suite: str
    seed: int
    index: int
    message: str

    def __str__(self):
        return f"[{self.suite} seed={self.seed} index={self.index}] {self.message}"

    def to_dict(self):
        return {"suite": self.suite, "seed": self.seed, "index": self.index, "message": self.message}


@dataclass
class SuiteResult:
    suite: str
    trials: int
    checks: int = 0
    violations: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.violations

    def to_dict(self):
        return {
            "suite": self.suite,
            "trials": self.trials,
            "checks": self.checks,
            "passed": self.passed,
            "violations": [violation.to_dict() for violation in self.violations],
        }


class CheckLog:
    """Counts checks of one instance and keeps the failed ones."""

    def __init__(self):
        self.checks = 0
        self.failures = []

    def expect(self, condition, template, *args):
        self.checks += 1
        if not condition:
            self.failures.append(template.format(*args))
        return condition


def _sample_k(rng):
    return int(rng.integers(1, MAX_PARTITION_SIZE + 1))


def check_slopes(factory, rng, log):
    for F in factory.generators:
        for direction, analytic in (("+", F.slope_pos), ("-", F.slope_neg)):
            try:
                numeric = numeric_slope(F, direction)
            except NonConvergenceError as error:
                log.expect(False, "{} slope at {}inf: {}", F.label, direction, error)
                continue
            if math.isinf(analytic) or math.isinf(numeric):
                log.expect(analytic == numeric, "{} slope at {}inf: analytic {} vs numeric {}", F.label, direction, analytic, numeric)
            else:
                log.expect(
                    abs(analytic - numeric) <= SLOPE_ORACLE_TOL,
                    "{} slope at {}inf: analytic {} vs numeric {}",
                    F.label,
                    direction,
                    analytic,
                    numeric,
                )


def _scale_sample(rng):
    return 0.0 if rng.random() < 0.25 else float(rng.uniform(0.0, 3.0))


def _argument_sample(rng):
    return 0.0 if rng.random() < 0.15 else float(rng.normal(0.0, 2.0))


def check_perspective(factory, rng, log):
    F = factory.generator(rng)
    slope, intercept = F.support_line
    for _ in range(PERSPECTIVE_SAMPLES):
        s, t = _scale_sample(rng), _scale_sample(rng)
        x, y = _argument_sample(rng), _argument_sample(rng)
        joint = perspective(F, s + t, x + y)
        split = ext_add(perspective(F, s, x), perspective(F, t, y))
        log.expect(
            ext_le(joint, split, atol=LOOSE_TOL, rtol=EXACT_TOL),
            "{}: P({}, {}) = {} exceeds P({}, {}) + P({}, {}) = {}",
            F.label, s + t, x + y, joint, s, x, t, y, split,
        )
        value = perspective(F, s, x)
        log.expect(
            ext_le(slope * x + intercept * s, value, atol=LOOSE_TOL, rtol=EXACT_TOL),
            "{}: P({}, {}) = {} below the support bound {}",
            F.label, s, x, value, slope * x + intercept * s,
        )
        if s > 0.0:
            factor = float(rng.uniform(0.1, 5.0))
            scaled = perspective(F, factor * s, factor * x)
            expected = POS_INF if value == POS_INF else factor * value
            log.expect(
                ext_close(scaled, expected, atol=LOOSE_TOL, rtol=LOOSE_TOL),
                "{}: P({} s, {} x) = {} but {} P(s, x) = {}",
                F.label, factor, factor, scaled, factor, expected,
            )


def check_supsums(factory, rng, log):
    F = factory.generator(rng)
    mu, nu = factory.measure_pair(rng)
    closed = closed_form(F, mu, nu).value
    atomic = partition_sum(F, mu, nu, atomic_partition(mu.space))
    log.expect(
        ext_close(atomic, closed, atol=EXACT_TOL, rtol=EXACT_TOL),
        "{}: atomic partition sum {} differs from closed form {} for mu={} nu={}",
        F.label, atomic, closed, mu.weights.tolist(), nu.weights.tolist(),
    )
    for _ in range(SUPSUM_PARTITIONS):
        G = sample_partition(mu.space, _sample_k(rng), rng)
        value = partition_sum(F, mu, nu, G)
        log.expect(
            ext_le(value, closed, atol=LOOSE_TOL),
            "{}: partition sum {} exceeds closed form {} for mu={} nu={}",
            F.label, value, closed, mu.weights.tolist(), nu.weights.tolist(),
        )
    G = sample_partition(mu.space, _sample_k(rng), rng)
    H = sample_partition(mu.space, _sample_k(rng), rng)
    coarse = partition_sum(F, mu, nu, G)
    fine = partition_sum(F, mu, nu, refine(G, H))
    log.expect(
        ext_le(coarse, fine, atol=LOOSE_TOL),
        "{}: refinement decreased the partition sum from {} to {}",
        F.label, coarse, fine,
    )


def check_subadditivity(factory, rng, log):
    F = factory.generator(rng)
    n = factory.size(rng, 6)
    mu1, nu1 = factory.reference_measure(rng, n), factory.signed_measure(rng, n)
    mu2, nu2 = factory.reference_measure(rng, n), factory.signed_measure(rng, n)
    joint = closed_form(F, mu1 + mu2, nu1 + nu2).value
    split = ext_add(closed_form(F, mu1, nu1).value, closed_form(F, mu2, nu2).value)
    log.expect(
        ext_le(joint, split, atol=LOOSE_TOL, rtol=EXACT_TOL),
        "{}: D(mu1 + mu2, nu1 + nu2) = {} exceeds {}",
        F.label, joint, split,
    )


def check_additivity(factory, rng, log):
    F = factory.generator(rng)
    mu, nu = factory.measure_pair(rng)
    f1 = factory.density(rng, mu.space.size)
    f2 = factory.density(rng, mu.space.size)
    whole = closed_form(F, apply_density(f1 + f2, mu), apply_density(f1 + f2, nu)).value
    parts = ext_add(
        closed_form(F, apply_density(f1, mu), apply_density(f1, nu)).value,
        closed_form(F, apply_density(f2, mu), apply_density(f2, nu)).value,
    )
    log.expect(
        ext_close(whole, parts, atol=LOOSE_TOL, rtol=LOOSE_TOL),
        "{}: D over f1 + f2 is {} but the sum over f1 and f2 is {}",
        F.label, whole, parts,
    )


def check_kl(factory, rng, log):
    mu, nu = factory.probability_pair(rng)
    value = kl_divergence(mu, nu)
    charged = mu.weights > 0.0
    direct = float(np.sum(mu.weights[charged] * np.log(mu.weights[charged] / nu.weights[charged])))
    log.expect(ext_close(value, direct, atol=EXACT_TOL, rtol=EXACT_TOL), "kl {} vs direct sum {}", value, direct)

    atomic = kl_partition_sum(mu, nu, atomic_partition(mu.space))
    log.expect(ext_close(atomic, value, atol=EXACT_TOL, rtol=EXACT_TOL), "atomic kl sum {} vs kl {}", atomic, value)
    nu_a = lebesgue_decompose(nu, mu).nu_a
    for _ in range(KL_PARTITIONS):
        G = sample_partition(mu.space, _sample_k(rng), rng)
        for reference in (nu, nu_a):
            partial = kl_partition_sum(mu, reference, G)
            log.expect(ext_le(partial, value, atol=LOOSE_TOL), "kl partition sum {} exceeds kl {}", partial, value)

    # Pinsker: D_KL >= ||mu - nu||_1^2 / 2
    distance = float(np.sum(np.abs(mu.weights - nu.weights)))
    log.expect(value >= 0.5 * distance**2 - EXACT_TOL, "kl {} violates Pinsker with distance {}", value, distance)
    self_value = kl_divergence(mu, mu)
    log.expect(abs(self_value) <= EXACT_TOL, "kl(mu, mu) = {}", self_value)


def check_jensen(factory, rng, log):
    F = factory.generator(rng)
    n = factory.size(rng, 6)
    mu = factory.reference_measure(rng, n)
    f = factory.function(rng, n)
    integral = integrate_generator(F, f, mu)
    atomic = integral_via_partitions(F, f, mu, atomic_partition(mu.space))
    log.expect(
        ext_close(atomic, integral, atol=EXACT_TOL, rtol=EXACT_TOL),
        "{}: atomic sum {} vs integral {}",
        F.label, atomic, integral,
    )
    for _ in range(JENSEN_PARTITIONS):
        G = sample_partition(mu.space, _sample_k(rng), rng)
        value = integral_via_partitions(F, f, mu, G)
        log.expect(ext_le(value, integral, atol=LOOSE_TOL), "{}: partition sum {} exceeds integral {}", F.label, value, integral)


def check_homological(factory, rng, log):
    A = factory.system(rng, positive=False)
    residual = check_homological_identity(A, trials=100, seed=rng)
    log.expect(
        residual <= EXACT_TOL,
        "homological residual {} for map {} weights {}",
        residual, A.system.map_alpha.tolist(), A.weight_a.tolist(),
    )


def check_adjoint(factory, rng, log):
    A = factory.system(rng, positive=False)
    mu = factory.reference_measure(rng, A.size)
    g = rng.normal(0.0, 1.0, A.size)
    n = int(rng.integers(1, 5))
    lhs = integrate(mu, A.apply_power(g, n))
    rhs = integrate(adjoint_push(A, mu, n), g)
    log.expect(abs(lhs - rhs) <= EXACT_TOL * (1.0 + abs(lhs)), "mu[A^{} g] = {} but (A*^{} mu)[g] = {}", n, lhs, n, rhs)


def _identity_oracle(log):
    space = AtomSpace.of_size(2)
    A = build_transfer_operator(DynamicalSystem(space, [0, 1]), [math.e, math.e**2])
    mu = FiniteMeasure(space, [0.5, 0.5])
    for n in range(1, 33):
        value = t_entropy_n(A, mu, n)
        log.expect(abs(value - 1.5 * n) <= LOOSE_TOL, "identity oracle: tau_{} = {}, expected {}", n, value, 1.5 * n)


def check_tentropy(factory, rng, log):
    A = factory.system(rng)
    averages = [average for _, average in cycle_averages(A)]
    for vertex, average in zip(invariant_vertices(A.system), averages):
        profile = t_entropy_profile(A, vertex, TENTROPY_N_MAX)
        for n, value in enumerate(profile.tau_n, start=1):
            log.expect(abs(value / n - average) <= LOOSE_TOL, "tau_{}/{} = {} on a cycle with mean ln a {}", n, n, value / n, average)

    weights = rng.dirichlet(np.ones(len(averages)))
    mixture = cycle_mixture(A.system, weights)
    expected = float(np.dot(weights, averages))
    n = int(rng.integers(1, TENTROPY_N_MAX + 1))
    value = t_entropy_n(A, mixture, n)
    log.expect(abs(value / n - expected) <= LOOSE_TOL, "tau_{} of a cycle mixture is {}, expected {}", n, value / n, expected)


def _supremum_value(A, mu, n, G):
    try:
        return t_entropy_n_supremum(A, mu, n, G, iters=SUPREMUM_ITERS)
    except NonConvergenceError as error:
        return error.best_value


def check_definitions(factory, rng, log):
    A = factory.system(rng, max_atoms=6)
    cycles = enumerate_cycles(A.system).cycles
    mu = cycle_mixture(A.system, rng.dirichlet(np.ones(len(cycles)))).measure
    n = int(rng.integers(1, 4))
    tau = t_entropy_n(A, mu, n)
    atomic = atomic_partition(mu.space)

    two_step = t_entropy_n_partition(A, mu, n, atomic)
    log.expect(abs(two_step - tau) <= DEFINITION_TOL, "two-step value {} at the atomic partition, tau_{} = {}", two_step, n, tau)
    three_step = _supremum_value(A, mu, n, atomic)
    log.expect(abs(three_step - tau) <= DEFINITION_TOL, "three-step value {} at the atomic partition, tau_{} = {}", three_step, n, tau)

    for index in range(5):
        G = sample_partition(mu.space, _sample_k(rng), rng)
        value = t_entropy_n_partition(A, mu, n, G)
        log.expect(value >= tau - DEFINITION_TOL, "two-step value {} below tau_{} = {}", value, n, tau)
        if index < 2:
            value = _supremum_value(A, mu, n, G)
            log.expect(value >= tau - DEFINITION_TOL, "three-step value {} below tau_{} = {}", value, n, tau)


def check_variational(factory, rng, log):
    A = factory.system(rng)
    phi = factory.potential(rng, A.size)
    report = variational_check(A, phi, tol=EXACT_TOL, n_max=VARIATIONAL_N_MAX)
    log.expect(report.gap <= LOOSE_TOL, "variational gap {} (lambda {}, best vertex {})", report.gap, report.lam, report.best)
    log.expect(
        abs(report.lam - report.lam_cycles) <= LOOSE_TOL,
        "power iteration lambda {} vs cycle closed form {}",
        report.lam, report.lam_cycles,
    )


SUITES = {
    "slopes": check_slopes,
    "perspective": check_perspective,
    "supsums": check_supsums,
    "subadditivity": check_subadditivity,
    "additivity": check_additivity,
    "kl": check_kl,
    "jensen": check_jensen,
    "homological": check_homological,
    "adjoint": check_adjoint,
    "tentropy": check_tentropy,
    "definitions": check_definitions,
    "variational": check_variational,
}


def run_instance(factory, suite, index):
    """
    Run one instance of a suite.

    Returns:
        CheckLog: Number of checks and failure messages
    """
    log = CheckLog()
    rng = factory.rng(suite, index)
    try:
        if suite == "tentropy" and index == 0:
            _identity_oracle(log)
        SUITES[suite](factory, rng, log)
    except DivkitError as error:
        log.expect(False, "{}: {}", type(error).__name__, error)
    return log


def run_suite(factory, suite, trials, index=None):
    """
    Run a suite on trials instances, or on the single instance index.

    Returns:
        SuiteResult: Check count and violations
    """
    result = SuiteResult(suite=suite, trials=trials if index is None else 1)
    indices = range(trials) if index is None else [index]
    for i in indices:
        log = run_instance(factory, suite, i)
        result.checks += log.checks
        for message in log.failures:
            result.violations.append(Violation(suite=suite, seed=factory.seed, index=i, message=message))
    if result.passed:
        logger.info(f"Suite {suite}: {result.checks} checks passed over {result.trials} instances")
    else:
        logger.warning(f"Suite {suite}: {len(result.violations)} of {result.checks} checks failed")
    return result


def run_suites(seed, trials, suites=None, index=None, generators=None):
    """
    Run the named suites (all when None) sequentially.

    Args:
        seed (int): Master seed
        trials (int): Instances per suite; 0 checks nothing
        suites (list, optional): Suite names
        index (int, optional): Replay only this instance
        generators (list, optional): Generator pool overriding the builtins

    Returns:
        list: One SuiteResult per suite
    """
    factory = InstanceFactory(seed, generators)
    names = list(SUITES) if suites is None else list(suites)
    return [run_suite(factory, name, trials, index) for name in names]
