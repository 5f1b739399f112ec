"""Bergman kernels and L^p regularity on generalized Hartogs triangles."""

__version__ = "0.1.0"

from .domain import DomainParams, Point, contains, pair  # noqa: E402
from .kernel import kernel_closed, kernel_series  # noqa: E402
from .regularity import critical_interval  # noqa: E402

__all__ = [
    "__version__",
    "DomainParams",
    "Point",
    "contains",
    "pair",
    "kernel_closed",
    "kernel_series",
    "critical_interval",
]
