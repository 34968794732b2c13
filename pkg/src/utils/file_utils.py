import os
import json

from pydantic import ValidationError

from divergences.measure import AtomSpace, FiniteMeasure, SignedMeasure
from dynsys.system import DynamicalSystem, Potential, build_transfer_operator
from utils.errors import InvalidInputError, SpaceMismatchError
from utils.logger import setup_logger
from utils.schemas import MeasureFile, PotentialFile, SystemFile

logger = setup_logger(name="file_utils")


def read_file(file_path):
    """
    Read a file and return its content.

    Args:
        file_path (str): Path to the file

    Returns:
        str: The file content

    Raises:
        InvalidInputError: If the file cannot be read
    """
    try:
        with open(file_path, 'r', encoding='utf-8') as f:
            return f.read()
    except OSError as e:
        logger.error(f"Error reading file {file_path}: {str(e)}")
        raise InvalidInputError(f"cannot read {file_path}: {e.strerror or e}") from e


def write_file(file_path, content):
    """
    Write content to a file.

    Args:
        file_path (str): Path to the file
        content (str): Content to write

    Returns:
        bool: True if successful, False otherwise
    """
    try:
        # Create directory if it doesn't exist
        directory = os.path.dirname(file_path)
        if directory:
            os.makedirs(directory, exist_ok=True)

        with open(file_path, 'w', encoding='utf-8') as f:
            f.write(content)

        logger.info(f"Successfully wrote to file: {file_path}")
        return True
    except OSError as e:
        logger.error(f"Error writing to file {file_path}: {str(e)}")
        return False


def _load(file_path, schema):
    content = read_file(file_path)
    try:
        return schema.model_validate(json.loads(content))
    except json.JSONDecodeError as e:
        logger.error(f"Invalid JSON in {file_path}: {str(e)}")
        raise InvalidInputError(f"{file_path} is not valid JSON: {e}") from e
    except ValidationError as e:
        logger.error(f"Invalid {schema.__name__} in {file_path}: {str(e)}")
        problems = "; ".join(error["msg"] for error in e.errors())
        raise InvalidInputError(f"{file_path}: {problems}") from e


def load_measure(file_path, nonnegative=False):
    """
    Load a measure file.

    Args:
        file_path (str): Path to a {"space", "weights"} document
        nonnegative (bool): Reject negative weights

    Returns:
        SignedMeasure | FiniteMeasure: FiniteMeasure when every weight is nonnegative
    """
    document = _load(file_path, MeasureFile)
    space = AtomSpace(tuple(document.space))
    if all(weight >= 0.0 for weight in document.weights):
        return FiniteMeasure(space, document.weights)
    if nonnegative:
        raise InvalidInputError(f"{file_path}: weights must be nonnegative")
    return SignedMeasure(space, document.weights)


def load_system(file_path):
    """
    Load a system file.

    Returns:
        tuple: (TransferOperator, Potential or None)
    """
    document = _load(file_path, SystemFile)
    space = AtomSpace(tuple(document.space))
    operator = build_transfer_operator(DynamicalSystem(space, document.map), document.weights)
    potential = Potential(document.phi) if document.phi is not None else None
    return operator, potential


def load_potential(file_path, space):
    """
    Load a potential file for the given space.

    Raises:
        SpaceMismatchError: If the file names a different space
    """
    document = _load(file_path, PotentialFile)
    if document.space is not None and tuple(str(label) for label in document.space) != tuple(str(atom) for atom in space.atoms):
        raise SpaceMismatchError(f"{file_path}: potential is defined on a different space")
    if len(document.phi) != space.size:
        raise InvalidInputError(f"{file_path}: {len(document.phi)} values for {space.size} atoms")
    return Potential(document.phi)
