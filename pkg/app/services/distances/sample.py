"""DistanceSample: the empirical distribution a graph is compared by."""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class DistanceSample:
    """Sorted Jaccard distances, one per unordered node pair.

    values: ascending float64 array in [0, 1] (read-only; a writeable input is copied)
    directed: directedness of the source graph
    source: provenance (node/edge counts, generator spec or file path)
    """

    values: np.ndarray
    directed: bool = False
    source: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise ValueError("Distance sample must be one-dimensional")
        if values.size and (values[0] < 0.0 or values[-1] > 1.0):
            raise ValueError("Jaccard distances must lie in [0, 1]")
        if values.size > 1 and (np.diff(values) < 0).any():
            raise ValueError("Distance sample must be sorted ascending")
        # a caller that already froze its float64 array hands it over without a copy
        if values is self.values and values.flags.writeable:
            values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def from_unsorted(cls, values: np.ndarray | list[float], directed: bool = False, source: dict | None = None) -> "DistanceSample":
        return cls(np.sort(np.asarray(values, dtype=np.float64)), directed, dict(source or {}))

    @staticmethod
    def expected_count(n: int) -> int:
        return n * (n - 1) // 2

    @property
    def count(self) -> int:
        return int(self.values.size)

    def mean(self) -> float:
        return float(self.values.mean()) if self.values.size else float("nan")

    def __len__(self) -> int:
        return self.count
