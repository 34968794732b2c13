import numpy as np
import pytest

from divergences.extended_convex import ExtendedConvexFunction, builtin_generators
from utils.errors import PropertyViolation
from verification import SUITES, InstanceFactory, run_instance, run_suite, run_suites
from verification.suites import CheckLog, Violation


def lying_square():
    """(t - 1)^2 advertising finite slopes and so violating the slope oracle."""
    return ExtendedConvexFunction(lambda t: (t - 1.0) ** 2, "lying_square", slope_pos=1.0, slope_neg=-1.0, support_line=(0.0, 0.0))


class TestInstanceFactory:
    def test_instances_are_keyed_by_suite_and_index(self):
        factory = InstanceFactory(seed=7)
        first = factory.rng("supsums", 3).random(4)
        again = InstanceFactory(seed=7).rng("supsums", 3).random(4)
        other_index = factory.rng("supsums", 4).random(4)
        other_suite = factory.rng("kl", 3).random(4)
        assert np.array_equal(first, again)
        assert not np.array_equal(first, other_index)
        assert not np.array_equal(first, other_suite)

    def test_reference_measures_are_nonnegative(self):
        factory = InstanceFactory(seed=1)
        for index in range(20):
            mu, nu = factory.measure_pair(factory.rng("pairs", index))
            assert mu.is_nonnegative
            assert mu.space == nu.space

    def test_probability_pairs(self):
        factory = InstanceFactory(seed=2)
        for index in range(20):
            mu, nu = factory.probability_pair(factory.rng("pairs", index))
            assert mu.total_mass == pytest.approx(1.0)
            assert nu.total_mass == pytest.approx(1.0)
            assert np.all(nu.weights > 0.0)

    def test_positive_systems(self):
        factory = InstanceFactory(seed=3)
        for index in range(20):
            A = factory.system(factory.rng("systems", index))
            assert np.all(A.weight_a > 0.0)
            assert 1 <= A.size <= 8

    def test_systems_are_built_with_identity_check(self, monkeypatch):
        monkeypatch.setattr("dynsys.system.HOMOLOGICAL_TOL", -1.0)
        factory = InstanceFactory(seed=3)
        with pytest.raises(PropertyViolation):
            factory.system(factory.rng("systems", 0))

    def test_generator_pool(self):
        factory = InstanceFactory(seed=0, generators=[lying_square()])
        assert factory.generator(factory.rng("slopes", 0)).label == "lying_square"
        assert len(InstanceFactory(seed=0).generators) == len(builtin_generators())


class TestCheckLog:
    def test_counts_and_failures(self):
        log = CheckLog()
        assert log.expect(True, "never shown")
        assert not log.expect(False, "value {} above {}", 2, 1)
        assert log.checks == 2
        assert log.failures == ["value 2 above 1"]

    def test_violation_text(self):
        violation = Violation(suite="kl", seed=4, index=9, message="gibbs")
        assert str(violation) == "[kl seed=4 index=9] gibbs"
        assert violation.to_dict() == {"suite": "kl", "seed": 4, "index": 9, "message": "gibbs"}


class TestSuites:
    @pytest.mark.parametrize("suite", list(SUITES))
    def test_suite_passes(self, suite):
        result = run_suite(InstanceFactory(seed=0), suite, trials=3)
        assert result.checks > 0
        assert result.passed, [str(violation) for violation in result.violations]

    def test_zero_trials_is_vacuous(self):
        results = run_suites(seed=0, trials=0)
        assert [result.suite for result in results] == list(SUITES)
        assert all(result.passed and result.checks == 0 for result in results)

    def test_identity_oracle_runs_on_first_instance(self):
        factory = InstanceFactory(seed=0)
        assert run_instance(factory, "tentropy", 0).checks >= 32

    def test_lying_generator_is_caught(self):
        (result,) = run_suites(seed=5, trials=2, suites=["slopes"], generators=[lying_square()])
        assert not result.passed
        assert all(violation.suite == "slopes" and violation.seed == 5 for violation in result.violations)
        assert "lying_square" in result.violations[0].message

    def test_replay_by_index(self):
        factory = InstanceFactory(seed=11, generators=[lying_square()])
        full = run_suite(factory, "perspective", trials=4)
        single = run_suite(factory, "perspective", trials=4, index=2)
        assert single.trials == 1
        assert [v.message for v in single.violations] == [v.message for v in full.violations if v.index == 2]

    def test_result_document(self):
        (result,) = run_suites(seed=0, trials=1, suites=["adjoint"])
        document = result.to_dict()
        assert document["suite"] == "adjoint"
        assert document["trials"] == 1
        assert document["passed"] is True
        assert document["violations"] == []
