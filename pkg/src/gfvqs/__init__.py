"""Green's functions of Hubbard models from variational real-time evolution."""

__version__ = "0.1.0"
