"""Exception types shared across the package."""


class CompnliError(Exception):
    """Base class for all package-specific errors."""


class DataError(CompnliError):
    """Bad or unusable input data (unparseable files, empty corpora, infeasible splits)."""


class FormatError(DataError):
    """A structured file failed to parse; carries the offending line number."""

    def __init__(self, message: str, path=None, lineno: int | None = None):
        self.path = path
        self.lineno = lineno
        where = ""
        if path is not None:
            where = f" [{path}"
            where += f":{lineno}]" if lineno is not None else "]"
        super().__init__(message + where)


class NumericalError(CompnliError):
    """Training or evaluation produced non-finite numbers."""
