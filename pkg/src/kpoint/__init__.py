"""k-point semidefinite bounds and copositive LP bounds for the independence number."""

__version__ = "0.1.0"
