"""Exception types raised across the package.

Each class carries the stable API error code it maps to when surfaced
over HTTP.
"""


class WarpgateError(Exception):
    code = "internal"


class MalformedRow(WarpgateError):
    """A data or ground-truth row that cannot be parsed; rejects the file."""

    code = "bad_request"

    def __init__(self, path, row_number, reason):
        self.path = str(path)
        self.row_number = row_number
        self.reason = reason
        super().__init__(f"{path}: row {row_number}: {reason}")


class EmptyTable(WarpgateError):
    code = "bad_request"


class UnknownTable(WarpgateError):
    code = "unknown_table"


class UnknownColumn(WarpgateError):
    code = "unknown_column"


class DimensionMismatch(WarpgateError):
    code = "bad_request"


class ConfigMismatch(WarpgateError):
    code = "bad_request"


class VersionMismatch(WarpgateError):
    code = "bad_request"


class CorruptFile(WarpgateError):
    code = "bad_request"


class IndexNotBuilt(WarpgateError):
    code = "index_not_built"


class BuildInProgress(WarpgateError):
    code = "build_in_progress"


class InvalidSpec(WarpgateError):
    code = "bad_request"


class EmptyIndex(WarpgateError):
    """An index build that produced zero indexed columns."""

    code = "bad_request"
