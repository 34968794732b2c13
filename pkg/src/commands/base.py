import math

from pydantic import ValidationError

from divergences.measure import require_same_space
from utils.errors import ExtendedArithmeticError, InvalidInputError, NonConvergenceError, PropertyViolation
from utils.file_utils import load_measure
from utils.logger import setup_logger

EXIT_OK = 0
EXIT_INVALID_INPUT = 1
EXIT_NONCONVERGENCE = 2
EXIT_PROPERTY_VIOLATION = 3


def format_plain(value):
    """Number for the plain-text tables."""
    if isinstance(value, str):
        return value
    if value is None:
        return "-"
    if math.isinf(value):
        return "+inf" if value > 0 else "-inf"
    return f"{value:.12g}"


class Command:
    """
    A CLI subcommand.

    Subclasses implement run(config) -> dict and render_plain(result) -> list of lines.
    """

    name = "command"

    def __init__(self, report_store, run_id):
        """
        Initialize the command.

        Args:
            report_store (ReportStore): The shared run ledger
            run_id (str): The run this command records into
        """
        self.reports = report_store
        self.run_id = run_id
        self.logger = setup_logger(name=f"{self.name}_command")

    def run(self, config):
        raise NotImplementedError

    def render_plain(self, result):
        raise NotImplementedError

    def process(self, config):
        """
        Run the command and record the outcome in the ledger.

        Args:
            config (RunConfig): The validated run configuration

        Returns:
            dict: {"exit_code": int, "result": dict} on success or
                {"exit_code": int, "error": str, "details": str} on failure
        """
        self.logger.info(f"Processing {self.name} for run {self.run_id}")

        try:
            result = self.run(config)
            exit_code = result.pop("exit_code", EXIT_OK)
            outcome = {"exit_code": exit_code, "result": result}
            self.logger.info(f"{self.name} finished with exit code {exit_code}")
        except NonConvergenceError as e:
            self.logger.error(f"Numeric iteration did not converge: {str(e)}")
            outcome = {
                "exit_code": EXIT_NONCONVERGENCE,
                "error": "Numeric iteration did not converge",
                "details": str(e),
            }
        except PropertyViolation as e:
            self.logger.error(f"Property violation: {str(e)}")
            outcome = {
                "exit_code": EXIT_PROPERTY_VIOLATION,
                "error": "Property violation",
                "details": str(e),
            }
        except (InvalidInputError, ExtendedArithmeticError, ValidationError) as e:
            self.logger.error(f"Invalid input: {str(e)}")
            outcome = {
                "exit_code": EXIT_INVALID_INPUT,
                "error": "Invalid input",
                "details": str(e),
            }

        self.reports.add_entry(self.run_id, {"step": self.name, **outcome})
        return outcome


def load_measure_pair(config):
    """mu (nonnegative) and nu from the run configuration, on a common space."""
    mu = load_measure(config.mu, nonnegative=True)
    nu = load_measure(config.nu)
    require_same_space(mu.space, nu.space)
    return mu, nu
