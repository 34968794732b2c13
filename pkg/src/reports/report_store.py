import json
import hashlib
from utils.logger import setup_logger
from utils.file_utils import write_file


class ReportStore:
    """
    Shared ledger of results, one list of entries per run.

    Entries are kept in insertion order and carry a sequence number instead of
    a timestamp, so that a run renders to the same document every time.
    """

    def __init__(self):
        self.logger = setup_logger(name="report_store")
        self.runs = {}

    def create_run(self, run_key):
        """
        Create a run whose ID is derived from its configuration.

        Args:
            run_key (str): Canonical serialization of the run configuration

        Returns:
            str: The run ID
        """
        run_id = hashlib.sha256(run_key.encode("utf-8")).hexdigest()[:16]
        self.runs[run_id] = []
        self.logger.info(f"Created run {run_id}")
        return run_id

    def add_entry(self, run_id, entry):
        """
        Append an entry to a run.

        Args:
            run_id (str): The run ID
            entry (dict): The entry; a "sequence" number is added
        """
        if run_id not in self.runs:
            self.runs[run_id] = []

        entries = self.runs[run_id]
        entries.append({"sequence": len(entries), **entry})
        self.logger.debug(f"Added {entry.get('step', 'entry')} to run {run_id}")

    def get_entries(self, run_id):
        if run_id not in self.runs:
            self.logger.warning(f"Run {run_id} not found")
            return []
        return self.runs[run_id]

    def render(self, run_id):
        """
        The run as a JSON document with stable key order.

        Returns:
            str: Indented JSON
        """
        document = {"run_id": run_id, "entries": self.get_entries(run_id)}
        return json.dumps(document, indent=2, allow_nan=False)

    def save_run(self, run_id, file_path):
        """
        Write the rendered run to a file.

        Returns:
            bool: True if successful, False otherwise
        """
        if run_id not in self.runs:
            self.logger.warning(f"Run {run_id} not found")
            return False
        return write_file(file_path, self.render(run_id) + "\n")
