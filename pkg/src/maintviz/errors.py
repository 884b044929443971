"""Exception types shared by the ingest/classify/analytics pipeline."""


class MaintvizError(Exception):
    """Base class for every error this package raises deliberately."""


class IoFailure(MaintvizError):
    """Path unreadable, missing, or some other OS-level failure."""


class NotARepository(MaintvizError):
    """The given path is not itself a Git repository."""


class EmptyRepository(MaintvizError):
    """Repository exists but has no commits on its default branch."""


class MalformedRecord(MaintvizError):
    """A single record could not be decoded; carries row/line context."""

    def __init__(self, message: str, row: int | None = None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class SchemaMismatch(MaintvizError):
    """CSV header row differs from the expected schema."""


class DuplicateKey(MaintvizError):
    """The same key appears more than once where uniqueness is required."""


class InvalidLabel(MaintvizError):
    """Label outside the closed activity set."""


class UnknownProject(MaintvizError):
    """Requested project does not exist in the dataset."""


class InvalidThreshold(MaintvizError):
    """Balance threshold outside the (0, 1/3] domain."""
