"""Exception types shared across the toolkit."""


class CurveBenchError(Exception):
    """Base class for all toolkit errors."""


class DuplicatePointError(CurveBenchError, ValueError):
    """Point set contains exactly coincident points."""

    def __init__(self, pairs):
        self.pairs = list(pairs)
        shown = ", ".join(f"{i}=={j}" for i, j in self.pairs[:8])
        more = "" if len(self.pairs) <= 8 else f" (+{len(self.pairs) - 8} more)"
        super().__init__(f"duplicate points at indices {shown}{more}")


class DegenerateInputError(CurveBenchError, ValueError):
    """Input admits no valid result (e.g. all points collinear)."""


class DegenerateTriangleError(DegenerateInputError):
    """Collinear triple where a proper triangle is required."""


class UndefinedMetricError(CurveBenchError, ValueError):
    """Metric requested on an empty curve; reported as a failure, never 0."""
