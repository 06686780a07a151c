"""Coverings of the mdKP family: flatness, WE congruence and CIE witnesses."""
from .cie import CieReport, CieWitness, case_for, cie_audit, cie_verify
from .covering import (
    Covering,
    CoveringFileError,
    Extended,
    ValidityError,
    builtin,
    default_kappa,
    flatness,
    read_covering_file,
    user_covering,
)
from .data import CIE_CASES, COVERINGS, WE_FORMS
from .we import FormShapeError, covering_of, mutation_checks, we_check, we_check_builtin, we_form

__all__ = [
    "CieReport",
    "CieWitness",
    "case_for",
    "cie_audit",
    "cie_verify",
    "Covering",
    "CoveringFileError",
    "Extended",
    "ValidityError",
    "builtin",
    "default_kappa",
    "flatness",
    "read_covering_file",
    "user_covering",
    "CIE_CASES",
    "COVERINGS",
    "WE_FORMS",
    "FormShapeError",
    "covering_of",
    "mutation_checks",
    "we_check",
    "we_check_builtin",
    "we_form",
]
