import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divergences.extreal import NEG_INF
from divergences.measure import AtomSpace, FiniteMeasure
from divergences.partition import atomic_partition, sample_partition, trivial_partition
from dynsys.cycles import cycle_mixture, enumerate_cycles
from dynsys.system import DynamicalSystem, TransferOperator
from dynsys.tentropy import (
    adjoint_push,
    t_entropy,
    t_entropy_n,
    t_entropy_n_supremum,
    t_entropy_n_partition,
    t_entropy_profile,
)
from utils.errors import InvalidInputError, NonConvergenceError, NotInvariantError

HALF = FiniteMeasure.from_weights([0.5, 0.5])


def operator(alpha, weights):
    return TransferOperator(DynamicalSystem(AtomSpace.of_size(len(alpha)), alpha), weights)


@st.composite
def invariant_cases(draw, max_atoms=6):
    """A positive-weight system with a random invariant probability measure."""
    n = draw(st.integers(1, max_atoms))
    alpha = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    weights = draw(st.lists(st.floats(0.2, 3.0), min_size=n, max_size=n))
    A = operator(alpha, weights)
    k = len(enumerate_cycles(A.system).cycles)
    raw = np.array(draw(st.lists(st.one_of(st.just(0.0), st.floats(0.01, 1.0)), min_size=k, max_size=k)))
    mixture = raw / raw.sum() if raw.sum() > 0.1 else np.full(k, 1.0 / k)
    return A, cycle_mixture(A.system, mixture)


class TestAdjointPush:
    def test_two_cycle(self, two_cycle):
        assert adjoint_push(two_cycle([2.0, 3.0]), HALF, 1).weights.tolist() == [1.0, 1.5]

    def test_identity_operator(self):
        mu = FiniteMeasure.from_weights([0.2, 0.8])
        assert adjoint_push(operator([0, 1], [1.0, 1.0]), mu, 5) == mu

    def test_power_must_be_positive(self, identity_system):
        with pytest.raises(InvalidInputError):
            adjoint_push(identity_system, HALF, 0)


class TestTEntropyN:
    def test_identity_closed_form(self, identity_system):
        assert t_entropy_n(identity_system, HALF, 3) == pytest.approx(4.5, abs=1e-12)

    def test_unit_weights(self):
        assert t_entropy_n(operator([0, 1], [1.0, 1.0]), HALF, 4) == 0.0

    def test_uniform_on_three_cycle(self):
        A = operator([1, 2, 0], [1.0, 2.0, 4.0])
        mu = FiniteMeasure.from_weights([1.0 / 3.0] * 3)
        rate = math.log(8.0) / 3.0
        for n in (1, 2, 3, 7):
            assert t_entropy_n(A, mu, n) == pytest.approx(n * rate, abs=1e-12)

    def test_zero_weight_on_support(self):
        A = operator([0, 1], [0.0, 1.0])
        assert t_entropy_n(A, FiniteMeasure.from_weights([1.0, 0.0]), 1) == NEG_INF

    def test_zero_weight_off_support(self):
        A = operator([0, 1], [0.0, math.e])
        assert t_entropy_n(A, FiniteMeasure.from_weights([0.0, 1.0]), 2) == pytest.approx(2.0)

    def test_requires_invariance(self, two_cycle):
        with pytest.raises(NotInvariantError):
            t_entropy_n(two_cycle([1.0, 1.0]), FiniteMeasure.from_weights([1.0, 0.0]), 1)

    def test_requires_probability(self, identity_system):
        with pytest.raises(NotInvariantError):
            t_entropy_n(identity_system, FiniteMeasure.from_weights([1.0, 1.0]), 1)

    @given(case=invariant_cases(), n=st.integers(1, 4))
    @settings(max_examples=100, deadline=None)
    def test_linear_in_n(self, case, n):
        A, mu = case
        assert t_entropy_n(A, mu, n) == pytest.approx(n * t_entropy_n(A, mu, 1), rel=1e-9, abs=1e-9)


class TestProfile:
    def test_identity(self, identity_system):
        for n_max in (1, 5, 32):
            profile = t_entropy_profile(identity_system, HALF, n_max)
            assert profile.n_max == n_max
            assert profile.tau == pytest.approx(1.5, abs=1e-12)
            assert profile.kl_form == pytest.approx(1.5, abs=1e-12)
            assert profile.is_constant
            assert list(profile.tau_n) == pytest.approx([1.5 * n for n in range(1, n_max + 1)])

    def test_t_entropy_of_two_cycle(self, two_cycle):
        assert t_entropy(two_cycle([2.0, 8.0]), HALF) == pytest.approx(math.log(4.0), abs=1e-12)

    def test_minus_infinity(self):
        profile = t_entropy_profile(operator([0, 1], [0.0, 1.0]), FiniteMeasure.from_weights([1.0, 0.0]), 3)
        assert profile.tau == NEG_INF
        assert profile.kl_form == NEG_INF
        assert profile.is_constant

    def test_n_max_must_be_positive(self, identity_system):
        with pytest.raises(InvalidInputError):
            t_entropy_profile(identity_system, HALF, 0)

    @given(case=invariant_cases())
    @settings(max_examples=100, deadline=None)
    def test_mass_preserving_operator_has_nonpositive_entropy(self, case):
        A, mu = case
        indegree = np.bincount(A.system.map_alpha, minlength=A.size)
        stochastic = TransferOperator(A.system, 1.0 / indegree[A.system.map_alpha])
        assert t_entropy(stochastic, mu, n_max=4) <= 1e-12


class TestPartitionDefinition:
    def test_atomic_partition_gives_tau_n(self, identity_system):
        G = atomic_partition(identity_system.space)
        assert t_entropy_n_partition(identity_system, HALF, 2, G) == pytest.approx(3.0, abs=1e-12)

    @given(case=invariant_cases(), n=st.integers(1, 3), k=st.integers(1, 4), seed=st.integers(0, 1000))
    @settings(max_examples=100, deadline=None)
    def test_atomic_partition_is_the_infimum(self, case, n, k, seed):
        A, mu = case
        tau_n = t_entropy_n(A, mu, n)
        assert t_entropy_n_partition(A, mu, n, atomic_partition(A.space)) == pytest.approx(tau_n, abs=1e-9)
        assert t_entropy_n_partition(A, mu, n, sample_partition(A.space, k, seed)) >= tau_n - 1e-9

    def test_vanishing_image(self):
        A = operator([0, 1], [0.0, 1.0])
        mu = FiniteMeasure.from_weights([1.0, 0.0])
        assert t_entropy_n_partition(A, mu, 1, atomic_partition(A.space)) == NEG_INF


class TestSupremumDefinition:
    def test_identity_at_atomic_partition(self, identity_system):
        value = t_entropy_n_supremum(identity_system, HALF, 2, atomic_partition(identity_system.space))
        assert value == pytest.approx(3.0, abs=1e-8)

    def test_two_cycle_at_atomic_partition(self, two_cycle):
        A = two_cycle([2.0, 8.0])
        assert t_entropy_n_supremum(A, HALF, 1, atomic_partition(A.space)) == pytest.approx(math.log(4.0), abs=1e-8)

    def test_trivial_partition_picks_best_point_mass(self, identity_system):
        # sup over m of ln m[A 1] is ln max(A 1) = ln e^2
        value = t_entropy_n_supremum(identity_system, HALF, 1, trivial_partition(identity_system.space))
        assert value == pytest.approx(2.0, abs=1e-8)

    def test_identity_operator(self):
        A = operator([0, 1, 2], [1.0, 1.0, 1.0])
        mu = FiniteMeasure.from_weights([0.2, 0.0, 0.8])
        assert t_entropy_n_supremum(A, mu, 1, atomic_partition(A.space)) == pytest.approx(0.0, abs=1e-10)

    def test_vanishing_image(self):
        A = operator([0, 1], [0.0, 1.0])
        mu = FiniteMeasure.from_weights([1.0, 0.0])
        assert t_entropy_n_supremum(A, mu, 1, atomic_partition(A.space)) == NEG_INF

    def test_requires_probability(self, identity_system):
        with pytest.raises(InvalidInputError):
            t_entropy_n_supremum(identity_system, FiniteMeasure.from_weights([1.0, 1.0]), 1, atomic_partition(identity_system.space))

    def test_budget_exhausted(self, identity_system):
        with pytest.raises(NonConvergenceError) as error:
            t_entropy_n_supremum(identity_system, HALF, 1, trivial_partition(identity_system.space), iters=1)
        assert error.value.iterations == 1
        assert error.value.best_value <= 2.0

    @given(case=invariant_cases(max_atoms=4), n=st.integers(1, 2))
    @settings(max_examples=50, deadline=None)
    def test_matches_kl_form_on_invariant_measures(self, case, n):
        A, mu = case
        value = t_entropy_n_supremum(A, mu, n, atomic_partition(A.space), iters=20000, tol=1e-13)
        assert value == pytest.approx(t_entropy_n(A, mu, n), abs=1e-6)


class TestExtremeWeights:
    @pytest.mark.parametrize("weight", [1e-12, 1e12])
    def test_fixed_point_at_default_n_max(self, weight):
        A = operator([0], [weight])
        mu = FiniteMeasure.from_weights([1.0])
        assert t_entropy_n(A, mu, 32) == pytest.approx(32 * math.log(weight), rel=1e-12)
        profile = t_entropy_profile(A, mu)
        assert profile.tau == pytest.approx(math.log(weight), rel=1e-12)
        assert profile.kl_form == pytest.approx(math.log(weight), rel=1e-12)

    def test_mixed_scales_on_three_cycle(self):
        A = operator([1, 2, 0], [1e-12, 1.0, 1e12])
        mu = FiniteMeasure.from_weights([1.0 / 3.0] * 3)
        assert t_entropy(A, mu) == pytest.approx(0.0, abs=1e-9)
        assert t_entropy_n(A, mu, 32) == pytest.approx(0.0, abs=1e-9)


class TestInvarianceTolerance:
    NEARLY_UNIFORM = FiniteMeasure.from_weights([0.333333, 0.333333, 0.333334])

    def test_default_tolerance_rejects(self):
        with pytest.raises(NotInvariantError):
            t_entropy_profile(operator([1, 2, 0], [1.0, 2.0, 4.0]), self.NEARLY_UNIFORM, 3)

    def test_loose_tolerance_accepts(self):
        A = operator([1, 2, 0], [1.0, 2.0, 4.0])
        profile = t_entropy_profile(A, self.NEARLY_UNIFORM, 3, tol=1e-5)
        assert profile.tau == pytest.approx(math.log(8.0) / 3.0, abs=1e-5)
        assert t_entropy_n(A, self.NEARLY_UNIFORM, 1, tol=1e-5) == pytest.approx(profile.tau_n[0])
