"""Exception hierarchy shared across the toolkit.

The CLI maps these onto exit codes: usage problems exit 1 (argparse),
`DataError` and subclasses exit 2, `RemoteScorerError` exits 3.
"""

from __future__ import annotations


class TruthlineError(Exception):
    """Base class for all toolkit errors."""


class DataError(TruthlineError):
    """Contract or data violation: bad formats, duplicate ids, bad preconditions."""


class CorpusFormatError(DataError):
    """One or more malformed lines in an input file.

    `errors` is a list of (line_number, message) pairs, 1-based.
    """

    def __init__(self, path, errors):
        self.path = str(path)
        self.errors = list(errors)
        lines = "; ".join(f"line {n}: {msg}" for n, msg in self.errors[:10])
        more = "" if len(self.errors) <= 10 else f" (+{len(self.errors) - 10} more)"
        super().__init__(f"{self.path}: {lines}{more}")


class DegenerateInputError(DataError):
    """Input outside the operation's domain (e.g. an empty headline)."""


class ScorerError(TruthlineError):
    """Failure inside an entailment scorer."""


class RemoteScorerError(ScorerError):
    """Remote scoring failed (timeout, transport fault, bad response).

    Retryable by default; `instance_id` names the affected instance when known.
    """

    def __init__(self, message, *, instance_id=None, retryable=True):
        super().__init__(message)
        self.instance_id = instance_id
        self.retryable = retryable


class ProtocolViolationError(RemoteScorerError):
    """The remote scorer broke the wire protocol (non-2xx, bad JSON, out-of-range probability)."""
