"""Monte Carlo and verification tools for exponential last-passage percolation,
its Busemann process and the stationary horizon."""
from ._accel import backend_name
from . import busemann_scaling, horizon, lattice_lpp, queueing, verify

__version__ = "0.1.0"
__all__ = ["backend_name", "busemann_scaling", "horizon", "lattice_lpp", "queueing", "verify"]
