"""Transcribed coframes, invariants and structure equations.

Everything here is text in the form DSL (``&`` is the wedge product), kept
as close to the printed layout as the grammar allows.  Places where the
printed text cannot be used as is are handled by :data:`ERRATA`; each
erratum is applied by exact substring replacement, so the printed wording
is always recoverable.
"""
from __future__ import annotations

from dataclasses import dataclass

GENERIC = "generic"
EXCEPTIONAL = "exceptional"

# ---------------------------------------------------------------- coframes
# Names available inside coframe text: vth_0, vth_1, vth_2, vth_3, vth_22
# (on-shell contact forms), dt, dx, dy, du_xxx, U, V (as jet expressions)
# and the coframe elements defined earlier in the list.

COFRAME_ORDER = ("theta_0", "theta_1", "theta_2", "theta_3", "theta_22", "xi_1", "xi_2", "xi_3", "eta_1")

GENERIC_COFRAME = {
    "theta_0": "u[x,x,x]^2/u[x,x]^3*vth_0",
    "theta_1": (
        "u[x,x,x]^3/u[x,x]^6*(k*(u[x]*u[x,x] + u[x,y])*vth_0 + vth_1"
        " + (1/2*(k+3)*u[x]^2 + u[y])*vth_2 + (k+2)*u[x]*vth_3)"
    ),
    "theta_2": "u[x,x,x]/u[x,x]^2*vth_2",
    "theta_3": "u[x,x,x]^2/u[x,x]^4*((k-4)*u[x,x]*vth_0 + u[x]*vth_2 + vth_3)",
    "theta_22": "1/u[x,x]*vth_22",
    "xi_1": "u[x,x]^3/u[x,x,x]*dt",
    "xi_2": "u[x,x,x]/u[x,x]*((1/2*(k+1)*u[x,x]^2 - u[y])*dt + dx - u[x]*dy)",
    "xi_3": "-u[x,x]*u[x]*(k+2)*dt + u[x,x]*dy",
    "eta_1": (
        "2*du_xxx/u[x,x,x] - 3*(theta_22 - xi_2)"
        " - 1/(2*u[x,x]^3)*(3*V*u[x,x]^3 - 4*(k+3)*(u[x]*u[x,x] + u[x,y])*u[x,x,x])*xi_1"
        " - (3*U + 1/8*(k-4))*xi_3"
    ),
}

EXCEPTIONAL_COFRAME = {
    "theta_0": "u[x,x,x]^2/u[x,x]^3*vth_0",
    "theta_1": (
        "u[x,x,x]^3/u[x,x]^6*vth_1"
        " + u[x,x,x]/(64*u[x,x]^6)*(64*(u[y]*u[x,x,x]^2 + u[x,x,y]^2) + u[x,x]^2*(9*u[x,x]^2 - 48*u[x,x,y]))*vth_2"
        " - u[x,x,x]^2/u[x,x]^7*(u[x,x,x]*(u[t,x,x] + u[y]*u[x,x,x] - u[x]*u[x,x,y] + 2*u[x,x]*u[x,y])"
        " - u[x,x,y]*(u[x,x,y] + 2*u[x,x]^2) + 57/64*u[x,x]^4)*vth_0"
        " - u[x,x,x]^2/(4*u[x,x]^6)*(8*u[x,x,y] + 4*u[x]*u[x,x,x] - 3*u[x,x]^2)*vth_3"
    ),
    "theta_2": "u[x,x,x]/u[x,x]^2*vth_2",
    "theta_3": (
        "u[x,x,x]/(8*u[x,x]^4)*(8*u[x,x,x]*vth_3 - 5*u[x,x]*u[x,x,x]*vth_0"
        " - (8*u[x,x,y] - 3*u[x,x]^2)*vth_2)"
    ),
    "theta_22": "1/u[x,x]*vth_22",
    "xi_1": "u[x,x]^3/u[x,x,x]*dt",
    # the -3/64 term is printed on its own line after the dt; it is read as
    # part of the bracket multiplying dt (dropping it, or moving it outside
    # the 1/(u_xx*u_xxx) prefactor or onto dx, breaks d(theta_0))
    "xi_2": (
        "1/(u[x,x]*u[x,x,x])*(u[x,x,y]*(u[x,x,y] - 3/4*u[x,x]^2)"
        " + u[x,x,x]*(u[x]*u[x,x,y] - u[y]*u[x,x,x])"
        " - 3/64*u[x,x]^2*(8*u[x]*u[x,x,x] - 3*u[x,x]^2))*dt"
        " + u[x,x,x]/u[x,x]*dx + (8*u[x,x,y] - 3*u[x,x]^2)/(8*u[x,x])*dy"
    ),
    "xi_3": "u[x,x]/(4*u[x,x,x])*(8*u[x,x,y] + 4*u[x]*u[x,x,x] - 3*u[x,x]^2)*dt + u[x,x]*dy",
    "eta_1": (
        "2*du_xxx/u[x,x,x] - 3*(theta_22 + xi_2)"
        " + 1/(2*u[x,x]^3)*((4*U + 3)*u[x,x]^3 + 8*(u[x,y]*u[x,x,x] - u[x,x]*u[x,x,y]))*xi_1"
        " - 1/2*xi_3"
    ),
}

# -------------------------------------------------------------- invariants

INVARIANTS = {
    GENERIC: {
        "U": "(u[x,x,y] + u[x]*u[x,x,x])/u[x,x]^2",
        "V": (
            "u[x,x,x]*(2*u[t,x,x] + ((k+3)*u[x]^2 + 2*u[y])*u[x,x,x]"
            " + 2*(k+2)*(u[x]*(u[x,x,y] + u[x,x]^2) + u[x,x]*u[x,y]))/u[x,x]^4"
        ),
    },
    EXCEPTIONAL: {
        "U": (
            "(u[x,x,x]*(u[x]*u[x,x,y] - u[t,x,x] - u[y]*u[x,x,x] - u[x,y]*u[x,x])"
            " + u[x,x,y]*(u[x,x,y] + u[x,x]^2))/u[x,x]^4 - 33/64"
        ),
    },
}

# ---------------------------------------------------- structure equations
# Keys name the form (or invariant) being differentiated.

GENERIC_SE = {
    "theta_0": "eta_1 & theta_0 + xi_1 & theta_1 + xi_2 & theta_2 + xi_3 & theta_3",
    "theta_1": (
        "1/16*(24*eta_1 - 24*theta_22 - 12*V*xi_1 - 12*xi_2 - (12*U - k + 4)*xi_3) & theta_1"
        " + xi_1 & theta_11 + xi_2 & theta_12"
        " + (1/8*(2*k^2 + 15*k + 4)*theta_2 + k*theta_23 + (k*U + 1 - 1/8*k*(k-10))*xi_2"
        " + 1/16*(7*k + 4)*V*xi_3) & theta_0"
        " + ((k+1)*theta_2 + (k+2)*xi_2) & theta_3 + xi_3 & theta_13"
    ),
    "theta_2": (
        "1/2*(eta_1 - theta_22 - 1/2*V*xi_1 - xi_2 - (U - 7/8*k - 1/2)*xi_3) & theta_2"
        " + xi_1 & theta_12 + xi_2 & theta_22 + xi_3 & theta_23"
    ),
    "theta_3": (
        "(eta_1 - theta_22 - 1/2*V*xi_1 - xi_2 - (U - 1/4*k)*xi_3) & theta_3"
        " + 1/2*(k+2)*xi_2 & theta_2 + xi_1 & theta_13"
        " + 1/8*(k-4)*(theta_22 + xi_2 + 1/8*(8*U - k - 4)*xi_3) & theta_0"
        " + xi_2 & theta_23 + xi_3 & theta_12"
    ),
    "xi_1": "-1/2*(eta_1 - 3*theta_22 + 3*xi_2 - (3*U - 1/8*(k-4))*xi_3) & xi_1",
    "xi_2": (
        "1/2*(eta_1 + theta_22 + 1/2*V*xi_1 + (U + 1/8*k + 3/2)*xi_3) & xi_2"
        " + (1/8*(k-4)*theta_0 - theta_3) & xi_1 - theta_2 & xi_3"
    ),
    "xi_3": "(theta_22 + 1/2*V*xi_1 + xi_2) & xi_3 - (k+2)*(theta_2 + xi_2) & xi_1",
    "theta_22": "eta_3 & xi_1 - 1/2*(eta_1 + theta_22) & xi_2 + eta_2 & xi_3",
    "eta_1": (
        "1/4*(k^2 + 7*k + 4)*xi_1 & theta_2 + 1/8*(k-4)*xi_3 & theta_22 + k*xi_1 & theta_23"
        " + 1/16*(7*k + 4)*V*xi_1 & xi_3 + (k*U - 1/8*k^2 + 5/4*k + 4)*xi_1 & xi_2"
        " - 1/8*(k-4)*xi_2 & xi_3"
    ),
    # the theta_0 bracket prints a bare "3 U" with no form attached; the
    # placeholder names the reading chosen in READINGS
    "eta_2": (
        "-1/8*(4*theta_2 + (2*U + 1/4*k + 3)*xi_2 - 3*V*xi_3) & eta_1"
        " - (theta_22 + V*xi_1 + 1/2*xi_2 - (3*U + 2*k + 1)*xi_3) & eta_2"
        " - 1/32*((32*U - 7*k^2 + 38*k + 8)*xi_1 + 96*xi_3) & eta_3"
        " + 1/16*(k-4)*theta_0 & (3*U*BARE_U_FORM + 1/16*(7*k^2 + 40*k + 16)*xi_1 - 3*xi_3)"
        " - 1/2*theta_2 & (theta_22 + (1/128*(k+2)*(8*(7*k^2 + 126*k + 120)*U + 21*k^3 + 198*k^2 + 688*k + 160)"
        " + 3/2*(k+3)*V)*xi_1 + 3/8*(8*k*U + 3*k^2 + 26*k + 24)*xi_3)"
        " - 1/32*theta_3 & ((48*U + 7*k^2 + 40*k + 16)*xi_1 - 48*xi_3)"
        " - theta_12 & xi_1"
        " + 1/64*theta_22 & ((7*k^2 + 38*k - 8)*V*xi_1 - (16*U + 6*k + 8)*xi_2"
        " - (64*(2*k + 1)*U + 24*V + 128*(k+1))*xi_3)"
        " - 1/32*theta_23 & ((k+2)*(64*U + 7*k^2 + 38*k - 8)*xi_1 - 16*(3*k + 4)*xi_3)"
        " + (128*(k+2)*U^2 + 24*U*V + 4*(k+2)*(7*k^2 + 70*k + 40)*U"
        " + (7*k^2 + 91*k + 148)*V + 2*(k+2)*(7*k^2 + 70*k + 24))*xi_1 & xi_2"
        " + 1/2048*V*(32*(7*k^2 + 166*k + 152)*U + 2304*V - 49*k^4 - 756*k^3 - 2324*k^2"
        " + 5152*k + 2752)*xi_1 & xi_3"
        " + 1/8*(3*V - 6*U^2 + 2*(19*k + 16)*U + 1/32*(31*k^2 + 1144*k + 1200))*xi_2 & xi_3"
    ),
    "U": (
        "theta_2 - U*theta_22 - eta_2 - 1/64*V*(64*U + 7*k^2 + 38*k - 8)*xi_1"
        " - 1/16*(8*U - k - 6)*xi_2 - (2*U^2 - (2*k + 1)*U - 3/4*V - k - 1)*xi_3"
    ),
    "V": (
        "-1/4*(k-4)*theta_0 + 1/4*(8*(k+2)*U + 3*(k^2 + 6*k + 8))*theta_2 + 2*theta_3"
        " - 3/2*V*theta_22 + 2*(k+2)*theta_23 - 2*eta_3 + 1/2*V*eta_1"
        " + (2*(k+2)*(2*U + 1) - V)*xi_2 - 1/32*V*(80*U + 7*k^2 + 4*k - 64)*xi_3"
    ),
}

EXCEPTIONAL_SE = {
    "theta_0": "eta_1 & theta_0 + xi_1 & theta_1 + xi_2 & theta_2 + xi_3 & theta_3",
    "theta_1": (
        "3/2*eta_1 & theta_1 + 2*eta_2 & theta_3 + eta_3 & theta_0"
        " - 1/8*(12*theta_22 + 16*U*xi_1 + 12*xi_2 + 7*xi_3) & theta_1"
        " + xi_1 & theta_11 + xi_2 & theta_12 + xi_3 & theta_13"
    ),
    "theta_2": (
        "1/8*(4*(eta_1 - theta_22 - xi_2) - 3*xi_3) & theta_2"
        " + xi_1 & theta_12 + xi_2 & theta_22 + xi_3 & theta_23"
    ),
    "theta_3": (
        "(eta_1 - theta_22 - U*xi_1 - xi_2 - 5/8*xi_3) & theta_3 + eta_2 & theta_2"
        " - 5/8*(theta_22 + xi_2) & theta_0 + xi_1 & theta_13 + xi_2 & theta_23 + xi_3 & theta_12"
    ),
    "xi_1": "1/8*(12*theta_22 - 4*eta_1 + 12*xi_2 + 7*xi_3) & xi_1",
    "xi_2": (
        "-1/8*(5*theta_0 + 8*theta_3) & xi_1 + 1/8*(4*(eta_1 + theta_22) + 3*xi_3) & xi_2"
        " - (eta_2 + theta_2) & xi_3"
    ),
    "xi_3": "-(2*eta_2 + theta_2) & xi_1 + (theta_22 + U*xi_1 + xi_2) & xi_3",
    "theta_22": (
        "-1/2*eta_1 & xi_2 + 3/2*eta_2 & xi_1 + eta_2 & xi_3 + eta_3 & xi_1"
        " + theta_2 & (21/8*xi_1 + xi_3) + theta_3 & xi_1 - 1/8*theta_22 & (8*xi_2 + 3*xi_3)"
        " + 2*theta_23 & xi_1 - 1/4*xi_1 & (7*xi_2 - U*xi_3)"
    ),
    # "theta_22 (4 theta_23 + 3 xi^2)" is printed without a wedge sign
    "theta_23": (
        "1/2*eta_1 & theta_23 + eta_2 & (theta_22 + xi_2 + 3/2*xi_3) + eta_3 & xi_3 + eta_4 & xi_1"
        " - 5/8*theta_0 & xi_3 + 1/16*theta_2 & (72*(theta_22 + xi_2) + 49*xi_3)"
        " - 3/8*theta_22 & (4*theta_23 + 3*xi_2) + 3/2*theta_23 & (xi_2 + 2*xi_3)"
        " + 77/32*xi_2 & xi_3"
    ),
    "eta_1": "-eta_3 & xi_1 + 5/8*((theta_0 - theta_2) & xi_1 + (theta_22 + xi_2) & xi_3)",
    # "xi_1" (lower index) in the theta_0 term is read as xi^1
    "eta_2": (
        "-1/4*eta_2 & (2*eta_1 - 2*theta_22 - 4*U*xi_1 - 2*xi_2 - xi_3) - eta_3 & xi_3"
        " - 5/16*theta_0 & (xi_1 - 2*xi_3) + theta_2 & (U*xi_1 - 13/8*xi_3)"
        " - 1/2*theta_3 & xi_1 + 1/2*theta_22 & xi_2 - theta_23 & xi_3"
        " - 1/16*(8*U*xi_1 - 21*xi_3) & xi_2"
    ),
    # the theta_0 bracket contains a stray "15/16 xi^2 ^ theta_0"; see READINGS
    "eta_3": (
        "1/16*eta_1 & (5*theta_0 + 8*eta_3)"
        " - 1/16*eta_2 & (20*theta_22 + 8*U*xi_1 + 20*xi_2 + 15*xi_3)"
        " - eta_4 & xi_1 - 5/8*theta_1 & xi_1"
        " + 1/4*eta_3 & (6*theta_22 + 8*U*xi_1 + 6*xi_2 + xi_3)"
        " - 5/32*theta_0 & (6*theta_22 + (4*U - 3)*xi_1 + xi_3) + STRAY_TERM"
        " + 1/64*theta_2 & (192*U*xi_1 - 40*xi_2 - 85*xi_3)"
        " + 1/8*theta_3 & (6*xi_1 - 5*xi_3) + 9/8*theta_12 & xi_1"
        " + 5/8*theta_22 & (xi_2 + U*xi_3) + theta_23 & (3*U*xi_1 - 5/8*xi_3)"
        " - 1/8*U*xi_1 & (22*xi_2 + 15*U*xi_3) + 5/32*(4*U - 7)*xi_2 & xi_3"
    ),
    "U": (
        "-5/8*theta_0 + 9/8*theta_2 - 1/8*(4*U - 7)*xi_2 - 3/2*U*(theta_22 + xi_3)"
        " + theta_23 + eta_3 - 1/4*eta_2 + 1/2*U*eta_1"
    ),
}

COFRAMES = {GENERIC: GENERIC_COFRAME, EXCEPTIONAL: EXCEPTIONAL_COFRAME}
STRUCTURE = {GENERIC: GENERIC_SE, EXCEPTIONAL: EXCEPTIONAL_SE}


@dataclass(frozen=True)
class Erratum:
    """A printed expression that fails its own identity, with the fix.

    ``kind`` is ``coframe`` or ``structure``; ``key`` names the entry; the
    correction replaces ``printed`` by ``corrected`` (exactly one match).
    """

    id: str
    branch: str
    kind: str
    key: str
    printed: str
    corrected: str
    evidence: str


@dataclass(frozen=True)
class Reading:
    """Choice for a placeholder standing in for unparseable printed text."""

    id: str
    branch: str
    key: str
    placeholder: str
    chosen: str
    alternatives: tuple[str, ...]
    note: str


ERRATA: tuple[Erratum, ...] = (
    Erratum(
        "G1",
        GENERIC,
        "coframe",
        "xi_2",
        "(1/2*(k+1)*u[x,x]^2 - u[y])*dt",
        "(1/2*(k+1)*u[x]^2 - u[y])*dt",
        "as printed, d(theta_0) and d(xi_2) leave remainders proportional to (k+1)*(u_x^2 - u_xx^2)",
    ),
    Erratum(
        "G2",
        GENERIC,
        "coframe",
        "eta_1",
        "- 3*(theta_22 - xi_2)",
        "- 3*(theta_22 + xi_2)",
        "as printed, d(theta_0) leaves 6*theta_0^xi_2 and d(xi_1) leaves -6*xi_1^xi_2",
    ),
    Erratum(
        "G3",
        GENERIC,
        "coframe",
        "theta_3",
        "(k-4)*u[x,x]*vth_0",
        "1/8*(k-4)*u[x,x]*vth_0",
        "as printed, d(theta_0) and d(xi_2) leave remainders along theta_0^xi_3 and theta_0^xi_1 scaled by 7/8*(k-4)",
    ),
    Erratum(
        "G4",
        GENERIC,
        "structure",
        "xi_1",
        "+ 3*xi_2",
        "- 3*xi_2",
        "with G1-G3 applied, d(xi_1) still leaves -6*xi_1^xi_2; the sign flip makes it exact",
    ),
    Erratum(
        "G5",
        GENERIC,
        "structure",
        "theta_1",
        "- 12*xi_2 - (12*U - k + 4)*xi_3",
        "- 24*xi_2 - (24*U - k + 4)*xi_3",
        "with theta_11 solved from its xi^1 slot, d(theta_1) leaves 3/4*theta_1^xi_2 + 3/4*U*theta_1^xi_3",
    ),
    Erratum(
        "G6",
        GENERIC,
        "structure",
        "eta_1",
        "+ 5/4*k + 4)*xi_1 & xi_2",
        "+ 5/4*k + 1)*xi_1 & xi_2",
        "d(eta_1) leaves -3*xi_1^xi_2 for every gauge of theta_23",
    ),
    Erratum(
        "G7",
        GENERIC,
        "structure",
        "U",
        "(8*U - k - 6)",
        "(8*U - k - 12)",
        "eta_2 from dU and from d(theta_22) differ by 3/8*xi_2, outside the span of xi^1, xi^3; moving the fix into d(theta_22) instead leaves more failing slots in d(eta_2)",
    ),
    Erratum(
        "G8",
        GENERIC,
        "structure",
        "eta_2",
        "+ (128*(k+2)*U^2",
        "+ 1/64*(128*(k+2)*U^2",
        "the xi^1^xi^2 slot of d(eta_2) equals the printed polynomial divided by 64",
    ),
    Erratum(
        "G9",
        GENERIC,
        "structure",
        "eta_2",
        "+ 1/64*theta_22 & (",
        "- 1/64*theta_22 & (",
        "the theta_22^xi^1, theta_22^xi^2 and theta_22^xi^3 slots of d(eta_2) all have the opposite sign",
    ),
    Erratum(
        "G10",
        GENERIC,
        "structure",
        "eta_2",
        "+ 3/8*(8*k*U + 3*k^2 + 26*k + 24)*xi_3)",
        "- 3/8*(8*k*U + 3*k^2 + 26*k + 24)*xi_3)",
        "the theta_2^xi^3 slot of d(eta_2) has the opposite sign",
    ),
    Erratum(
        "G11",
        GENERIC,
        "structure",
        "eta_2",
        "- 3*V*xi_3) & eta_1",
        "+ 3*V*xi_3) & eta_1",
        "the xi^3^eta_1 slot of d(eta_2) has the opposite sign",
    ),
    Erratum(
        "G12",
        GENERIC,
        "structure",
        "eta_2",
        "(3*U + 2*k + 1)*xi_3) & eta_2",
        "(-3*U + 2*k + 1)*xi_3) & eta_2",
        "the xi^3^eta_2 slot of d(eta_2) is off by -6*U",
    ),
    Erratum(
        "G13",
        GENERIC,
        "structure",
        "eta_2",
        "((32*U - 7*k^2 + 38*k + 8)*xi_1 + 96*xi_3) & eta_3",
        "((32*U + 7*k^2 + 38*k - 8)*xi_1 - 48*xi_3) & eta_3",
        "the xi^1^eta_3 slot of d(eta_2) is off by 1/2 - 7/16*k^2 and the xi^3^eta_3 slot by 9/2",
    ),
    Erratum(
        "E1",
        EXCEPTIONAL,
        "structure",
        "theta_22",
        "8*xi_2 + 3*xi_3",
        "4*xi_2 + 3*xi_3",
        "d(theta_22) leaves 1/2*theta_22^xi_2; d(d xi_3) leaves -1/2*theta_22^xi_2^xi_3 without it",
    ),
    Erratum(
        "E2",
        EXCEPTIONAL,
        "structure",
        "U",
        "- 1/8*(4*U - 7)*xi_2",
        "- 1/8*(12*U - 7)*xi_2",
        "dU leaves exactly -U*xi_2; d(d xi_3) leaves -U*xi_1^xi_2^xi_3 without it",
    ),
    Erratum(
        "E3",
        EXCEPTIONAL,
        "structure",
        "theta_23",
        "72*(theta_22 + xi_2)",
        "18*(theta_22 + xi_2)",
        "d(theta_23) leaves -27/8*theta_2^(theta_22 + xi_2) for every gauge; d(dU) leaves the negative",
    ),
    Erratum(
        "E4",
        EXCEPTIONAL,
        "structure",
        "eta_3",
        "(4*U - 3)*xi_1",
        "(8*U - 3)*xi_1",
        "d(eta_3) leaves -5/8*U*theta_0^xi_1; d(dU) leaves the negative",
    ),
    Erratum(
        "E5",
        EXCEPTIONAL,
        "structure",
        "eta_3",
        "22*xi_2 + 15*U*xi_3",
        "22*xi_2 - 15*U*xi_3",
        "d(eta_3) leaves 15/4*U^2*xi_1^xi_3; d(dU) leaves the negative",
    ),
)
READINGS: tuple[Reading, ...] = (
    Reading(
        "R1",
        GENERIC,
        "eta_2",
        "BARE_U_FORM",
        "xi_1",
        ("xi_2", "xi_3", "theta_22", "0*xi_1"),
        "the theta_0 bracket prints a bare 3U with no 1-form",
    ),
    Reading(
        "R2",
        EXCEPTIONAL,
        "eta_3",
        "STRAY_TERM",
        "15/16*xi_2 & theta_0",
        ("-75/512*theta_0 & xi_2", "0*xi_1 & xi_2"),
        "a complete 2-form 15/16 xi^2 ^ theta_0 is printed inside the theta_0 bracket;"
        " it is read as a separate term (the alternatives keep it inside the bracket or drop it)",
    ),
)
