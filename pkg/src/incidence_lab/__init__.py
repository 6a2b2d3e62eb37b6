"""Exact-arithmetic laboratory for point-curve incidence geometry in the plane."""

__version__ = "0.1.0"
