"""Fixed-point-free groups and isolated quotient singularities."""
__version__ = "0.1.0"
