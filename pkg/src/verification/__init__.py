from .instances import InstanceFactory
from .suites import SUITES, SuiteResult, Violation, run_instance, run_suite, run_suites

__all__ = ['InstanceFactory', 'SUITES', 'SuiteResult', 'Violation', 'run_instance', 'run_suite', 'run_suites']
