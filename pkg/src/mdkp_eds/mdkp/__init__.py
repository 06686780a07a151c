"""Coframes, invariants and structure-equation checks for the mdKP family."""
from .coframes import (
    EXCEPTIONAL,
    GENERIC,
    BranchError,
    Invariants,
    McCoframe,
    branch_of,
    invariants,
    mc_coframe,
    structure_rhs,
)
from .structure import (
    StructureReport,
    abstract_system,
    audit,
    closure_check,
    reconstruction_consistency,
    verify_structure,
)

__all__ = [
    "EXCEPTIONAL",
    "GENERIC",
    "BranchError",
    "Invariants",
    "McCoframe",
    "branch_of",
    "invariants",
    "mc_coframe",
    "structure_rhs",
    "StructureReport",
    "abstract_system",
    "audit",
    "closure_check",
    "reconstruction_consistency",
    "verify_structure",
]
