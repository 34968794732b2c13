from commands.base import EXIT_OK, EXIT_PROPERTY_VIOLATION, Command
from utils.errors import InvalidInputError
from verification.suites import SUITES, run_suites


class VerifyCommand(Command):
    """
    Runs the seeded property suites.
    """

    name = "verify"

    def __init__(self, report_store, run_id, generators=None):
        """
        Initialize the command.

        Args:
            report_store (ReportStore): The shared run ledger
            run_id (str): The run this command records into
            generators (list, optional): Generator pool replacing the builtins
        """
        super().__init__(report_store, run_id)
        self.generators = generators

    def run(self, config):
        if config.suite is not None and config.suite not in SUITES:
            raise InvalidInputError(f"unknown suite {config.suite!r}, expected one of {', '.join(SUITES)}")
        suites = None if config.suite is None else [config.suite]

        results = run_suites(config.seed, config.trials, suites=suites, index=config.index, generators=self.generators)
        passed = all(result.passed for result in results)
        return {
            "exit_code": EXIT_OK if passed else EXIT_PROPERTY_VIOLATION,
            "seed": config.seed,
            "trials": config.trials,
            "passed": passed,
            "suites": [result.to_dict() for result in results],
        }

    def render_plain(self, result):
        lines = [f"{'suite':<14} {'instances':>9} {'checks':>8} {'failed':>7}  status"]
        for suite in result["suites"]:
            status = "ok" if suite["passed"] else "FAIL"
            lines.append(
                f"{suite['suite']:<14} {suite['trials']:>9} {suite['checks']:>8} {len(suite['violations']):>7}  {status}"
            )
        for suite in result["suites"]:
            for violation in suite["violations"]:
                lines.append(
                    f"violation [{violation['suite']} seed={violation['seed']} index={violation['index']}] "
                    f"{violation['message']}"
                )
                lines.append(
                    f"  replay: divkit verify {violation['suite']} --seed {violation['seed']} --index {violation['index']}"
                )
        return lines
