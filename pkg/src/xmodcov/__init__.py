"""Finite crossed modules, group-groupoids, their coverings, and extensions of type a crossed module."""

from .cohomology import PhiModule, cohomology_group, coboundary, trivial_module
from .crossed import CrossedModule, GroupGroupoid, beta, delta, make_crossed_module, validate_crossed_module
from .errors import AlgebraError
from .extensions import (
    AbstractKernel,
    ExtensionOfType,
    are_equivalent,
    classify,
    covering_with_kernel,
    make_abstract_kernel,
    obstruction_class,
    oracle_enumerate,
    realize,
)
from .groupoids import FiniteGroupoid, covering_from_subgroup
from .groups import FiniteGroup, GroupMorphism, cyclic_group, dihedral_group, symmetric_group

__version__ = "0.1.0"

__all__ = [
    "AbstractKernel", "AlgebraError", "CrossedModule", "ExtensionOfType", "FiniteGroup", "FiniteGroupoid",
    "GroupGroupoid", "GroupMorphism", "PhiModule", "are_equivalent", "beta", "classify", "coboundary",
    "cohomology_group", "covering_from_subgroup", "covering_with_kernel", "cyclic_group", "delta",
    "dihedral_group", "make_abstract_kernel", "make_crossed_module", "obstruction_class", "oracle_enumerate",
    "realize", "symmetric_group", "trivial_module", "validate_crossed_module",
]
