"""Exception hierarchy. The CLI maps GraphDataError to exit code 2."""


class GraphDistError(Exception):
    """Base for all graphdist errors."""


class GraphDataError(GraphDistError, ValueError):
    """Input data cannot be turned into a valid graph, sample or report."""


class EdgeListParseError(GraphDataError):
    """A line of an edge-list file is malformed."""

    def __init__(self, path: str, line_number: int, line: str) -> None:
        self.path = path
        self.line_number = line_number
        self.line = line
        super().__init__(
            f"{path}:{line_number}: expected two whitespace-separated node labels, "
            f"got {line.strip()!r}"
        )


class EmptyGraphError(GraphDataError):
    """A graph with zero nodes was requested or loaded."""


class DatasetMissingError(GraphDataError):
    """A real-world table needs a dataset path the user did not supply."""

    def __init__(self, dataset: str) -> None:
        self.dataset = dataset
        super().__init__(
            f"Dataset '{dataset}' is required for this table. "
            f"Pass it with --dataset {dataset}=PATH"
        )


class ReportValidationError(GraphDataError):
    """An experiment row violates the K-S result invariants."""
