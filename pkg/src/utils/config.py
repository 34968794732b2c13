import os
from typing import Literal, Optional

from pydantic import BaseModel, NonNegativeInt, PositiveFloat, PositiveInt, model_validator

from utils.errors import InvalidInputError

SUBCOMMANDS = ("divergence", "decompose", "supsums", "tentropy", "variational", "verify")

# Input files each subcommand cannot run without
REQUIRED_PATHS = {
    "divergence": ("mu", "nu"),
    "decompose": ("mu", "nu"),
    "supsums": ("mu", "nu"),
    "tentropy": ("system", "mu"),
    "variational": ("system",),
    "verify": (),
}


class Settings(BaseModel):
    """
    Defaults read from the environment (after load_dotenv).
    """

    seed: NonNegativeInt = 0
    tol: PositiveFloat = 1e-12
    output: Literal["plain", "structured"] = "plain"
    trials: NonNegativeInt = 100
    log_level: Optional[str] = None
    log_dir: Optional[str] = None

    @classmethod
    def from_env(cls, environ=None):
        """
        Build settings from DIVKIT_* variables.

        Args:
            environ (dict, optional): Mapping to read instead of os.environ

        Returns:
            Settings: Validated settings
        """
        environ = os.environ if environ is None else environ
        values = {}
        for field_name in cls.model_fields:
            raw = environ.get(f"DIVKIT_{field_name.upper()}")
            if raw not in (None, ""):
                values[field_name] = raw
        return cls(**values)


class RunConfig(BaseModel):
    """
    One CLI invocation, validated.
    """

    subcommand: Literal["divergence", "decompose", "supsums", "tentropy", "variational", "verify"]
    mu: Optional[str] = None
    nu: Optional[str] = None
    system: Optional[str] = None
    phi: Optional[str] = None
    generator: str = "kl"
    alpha: Optional[float] = None
    tol: PositiveFloat = 1e-12
    n_max: PositiveInt = 32
    k_max: PositiveInt = 4
    samples: NonNegativeInt = 200
    seed: NonNegativeInt = 0
    iters: PositiveInt = 10_000
    trials: NonNegativeInt = 100
    suite: Optional[str] = None
    index: Optional[NonNegativeInt] = None
    report: bool = False
    output: Literal["plain", "structured"] = "plain"
    record: Optional[str] = None

    @model_validator(mode="after")
    def check_paths(self):
        missing = [name for name in REQUIRED_PATHS[self.subcommand] if not getattr(self, name)]
        if missing:
            flags = ", ".join(f"--{name}" for name in missing)
            raise ValueError(f"{self.subcommand} requires {flags}")
        return self

    def run_key(self):
        """Stable identity of the run, excluding where the ledger is written."""
        return self.model_dump_json(exclude={"record", "output"})


def build_run_config(subcommand, arguments, settings):
    """
    Merge parsed CLI arguments over the environment settings.

    Args:
        subcommand (str): Chosen subcommand
        arguments (dict): Parsed flags; None means "not given"
        settings (Settings): Environment defaults

    Returns:
        RunConfig: The validated configuration

    Raises:
        pydantic.ValidationError: If a value violates the constraints
    """
    values = {"seed": settings.seed, "tol": settings.tol, "output": settings.output, "trials": settings.trials}
    values.update({key: value for key, value in arguments.items() if value is not None})
    if subcommand not in SUBCOMMANDS:
        raise InvalidInputError(f"unknown subcommand {subcommand!r}")
    return RunConfig(subcommand=subcommand, **values)
