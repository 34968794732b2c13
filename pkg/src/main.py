import sys
import json
import argparse
from dotenv import load_dotenv
from pydantic import ValidationError
from commands import (
    DecomposeCommand,
    DivergenceCommand,
    SupsumsCommand,
    TEntropyCommand,
    VariationalCommand,
    VerifyCommand,
)
from commands.base import EXIT_INVALID_INPUT
from reports.report_store import ReportStore
from utils.config import Settings, build_run_config
from utils.errors import InvalidInputError
from utils.logger import setup_logger, set_log_level

# Setup logger
logger = setup_logger()

COMMANDS = {
    "divergence": DivergenceCommand,
    "decompose": DecomposeCommand,
    "supsums": SupsumsCommand,
    "tentropy": TEntropyCommand,
    "variational": VariationalCommand,
    "verify": VerifyCommand,
}


class DivkitArgumentParser(argparse.ArgumentParser):
    """Argument parser that reports usage errors as invalid input instead of exiting."""

    def error(self, message):
        raise InvalidInputError(f"{self.prog}: {message}")


def build_parser():
    """
    Build the divkit argument parser.

    Flags left out on the command line parse to None so the environment
    settings and RunConfig defaults apply.
    """
    common = DivkitArgumentParser(add_help=False)
    common.add_argument("--f", dest="generator", help="Generator: kl, hellinger, total_variation, pearson_chi2, alpha:<value>")
    common.add_argument("--alpha", type=float, help="Parameter of the alpha generator")
    common.add_argument("--mu", help="Reference measure file")
    common.add_argument("--nu", help="Compared measure file")
    common.add_argument("--system", help="Dynamical system file")
    common.add_argument("--phi", help="Potential file")
    common.add_argument("--n-max", dest="n_max", type=int, help="Truncation of the infimum over n (default 32)")
    common.add_argument("--k-max", dest="k_max", type=int, help="Largest sampled partition size (default 4)")
    common.add_argument("--samples", type=int, help="Number of sampled partitions (default 200)")
    common.add_argument("--seed", type=int, help="Random seed (default DIVKIT_SEED or 0)")
    common.add_argument("--tol", type=float, help="Numeric tolerance (default DIVKIT_TOL or 1e-12)")
    common.add_argument("--iters", type=int, help="Fixed-point iteration budget (default 10000)")
    common.add_argument("--trials", type=int, help="Instances per verification suite (default DIVKIT_TRIALS or 100)")
    common.add_argument("--output", choices=["plain", "structured"], help="Output format")
    common.add_argument("--report", action="store_true", default=None, help="Print the full three-term report")
    common.add_argument("--record", help="Save the run ledger as JSON to this path")

    parser = DivkitArgumentParser(prog="divkit", description="Sup-sums F-divergences and t-entropy of finite systems")
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    subparsers.add_parser("divergence", parents=[common], help="Closed-form F-divergence of nu relative to mu")
    subparsers.add_parser("decompose", parents=[common], help="Jordan and Lebesgue decompositions")
    subparsers.add_parser("supsums", parents=[common], help="Closed form against sampled partition sums")
    subparsers.add_parser("tentropy", parents=[common], help="t-entropy of an invariant measure")
    subparsers.add_parser("variational", parents=[common], help="Spectral potential and the variational principle")
    verify = subparsers.add_parser("verify", parents=[common], help="Run the property suites")
    verify.add_argument("suite", nargs="?", help="Run only this suite")
    verify.add_argument("--index", type=int, help="Replay a single instance of the suite")
    return parser


def emit(command, config, run_id, outcome):
    """Print the outcome: results on stdout, plain-mode errors on stderr."""
    if config.output == "structured":
        document = {"run_id": run_id, "subcommand": config.subcommand, **outcome}
        print(json.dumps(document, indent=2, allow_nan=False))
        return

    if "error" in outcome:
        print(f"divkit {config.subcommand}: {outcome['error']}: {outcome['details']}", file=sys.stderr)
        return
    for line in command.render_plain(outcome["result"]):
        print(line)


def main(argv=None, generators=None):
    """
    Run divkit.

    Args:
        argv (list, optional): Arguments without the program name, defaults to sys.argv[1:]
        generators (list, optional): Generator pool for verify, replacing the builtins

    Returns:
        int: Exit code (0 ok, 1 invalid input, 2 non-convergence, 3 property violation)
    """
    # Load environment variables
    load_dotenv()

    try:
        settings = Settings.from_env()
        if settings.log_level:
            set_log_level(settings.log_level)
        args = vars(build_parser().parse_args(argv))
        subcommand = args.pop("subcommand")
        config = build_run_config(subcommand, args, settings)
    except (InvalidInputError, ValidationError) as e:
        logger.error(f"Invalid invocation: {str(e)}")
        print(f"divkit: error: {e}", file=sys.stderr)
        return EXIT_INVALID_INPUT

    store = ReportStore()
    run_id = store.create_run(config.run_key())
    logger.info(f"Running {config.subcommand} as run {run_id}")

    if config.subcommand == "verify":
        command = VerifyCommand(store, run_id, generators=generators)
    else:
        command = COMMANDS[config.subcommand](store, run_id)

    outcome = command.process(config)
    emit(command, config, run_id, outcome)

    if config.record and not store.save_run(run_id, config.record):
        print(f"divkit: could not write the run ledger to {config.record}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    return outcome["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
