"""Exact computations with even lattices: discriminant forms, orbits of
vectors under orthogonal groups, and Tits buildings of arithmetic groups of
signature ``(2, n)``."""

from .lattice import Lattice, LatticeError, build_lattice, lattice
from .ogroup import GroupSpec, OrthMap, parse_group_flags, stable_plus

__all__ = [
    "GroupSpec",
    "Lattice",
    "LatticeError",
    "OrthMap",
    "build_lattice",
    "lattice",
    "parse_group_flags",
    "stable_plus",
]

__version__ = "0.1.0"
