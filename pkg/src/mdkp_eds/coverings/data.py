"""Transcriptions of the built-in coverings, the WE forms and the CIE witnesses.

Seeds are the coefficients of d/dv_0 in the extended total derivatives
``Dt`` and ``Dy``; the x direction is always the shift v_j -> v_{j+1}.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class CoveringData:
    id: str
    Dt: str
    Dy: str
    # None: any kappa outside ``excluded``; otherwise the one admissible value
    kappa: str | None
    excluded: tuple[str, ...] = ()
    uses_lambda: bool = False
    we: str = ""


COVERINGS = {
    "cov1": CoveringData(
        "cov1",
        Dt="(1/2*(k+1)*u[x]^2 - u[y])*v[1]",
        Dy="-u[x]*v[1]",
        kappa=None,
        excluded=("-1",),
        we="WE1",
    ),
    "cov2": CoveringData(
        "cov2",
        Dt="v[1]^(2*k+3)/(2*k+3) - u[x]*v[1]^(k+2) + (1/2*(k+1)*u[x]^2 - u[y])*v[1]",
        Dy="v[1]^(k+2)/(k+2) - u[x]*v[1]",
        kappa=None,
        excluded=("-2", "-3/2", "-1"),
        we="WE2",
    ),
    "cov3": CoveringData(
        "cov3",
        Dt="-(v[1]^(-1) + u[x] + (1/2*u[x]^2 + u[y])*v[1])",
        Dy="ln(v[1]) - u[x]*v[1]",
        kappa="-2",
        we="WE3",
    ),
    "cov4": CoveringData(
        "cov4",
        Dt="-((1/4*u[x]^2 + u[y])*v[1] + u[x]*sqrt(v[1]) - ln(v[1]))",
        Dy="2*sqrt(v[1]) - u[x]*v[1]",
        kappa="-3/2",
        we="WE4",
    ),
    "cov5": CoveringData(
        "cov5",
        Dt="-(u + (u[x]^2 + u[y])*v[1])",
        Dy="-(v[1]*u[x] + x)",
        kappa="-3",
        we="WE5",
    ),
    "cov6": CoveringData(
        "cov6",
        Dt="-(u[y] + lam*u[x] - lam^2)*v[1]",
        Dy="-(u[x] - lam)*v[1]",
        kappa="-1",
        uses_lambda=True,
        we="WE6",
    ),
}


@dataclass(frozen=True)
class WeData:
    id: str
    # bracket multiplying the common prefactor u_xxx/(u_xx*v_x); names dv, dt,
    # dx, dy are the coordinate differentials and v[1] stands for v_x
    bracket: str
    kappa: str | None
    excluded: tuple[str, ...] = ()
    uses_lambda: bool = False
    default_lambda: str | None = None
    covering: str = ""
    # (description, old, new) edits that must break the congruence
    mutations: tuple[tuple[str, str, str], ...] = ()


PREFACTOR = "u[x,x,x]/(u[x,x]*v[1])"

WE_FORMS = {
    "WE1": WeData(
        "WE1",
        "dv - (1/2*(k+1)*u[x]^2 - u[y])*v[1]*dt - v[1]*dx + u[x]*v[1]*dy",
        kappa=None,
        excluded=("-1",),
        covering="cov1",
        mutations=(
            ("u_x replaced by u_y in the dy coefficient", "+ u[x]*v[1]*dy", "+ u[y]*v[1]*dy"),
            ("dt coefficient loses its u_y term", "- u[y])*v[1]*dt", ")*v[1]*dt"),
        ),
    ),
    "WE2": WeData(
        "WE2",
        "dv - ((2*k+3)^(-1)*v[1]^(2*(k+1)) - lam*u[x]*v[1]^(k+1)"
        " + (1/2*(k+1)*u[x]^2 - u[y]))*v[1]*dt"
        " - v[1]*dx - ((k+2)^(-1)*v[1]^(k+1) - u[x])*v[1]*dy",
        kappa=None,
        excluded=("-2", "-3/2", "-1"),
        uses_lambda=True,
        # as printed this is a covering only at lam = 1, the value cov2 uses
        default_lambda="1",
        covering="cov2",
        mutations=(
            ("exponent 2(k+1) lowered to 2k+1", "v[1]^(2*(k+1))", "v[1]^(2*k+1)"),
            ("(k+2)^(-1) replaced by (k+3)^(-1)", "(k+2)^(-1)", "(k+3)^(-1)"),
        ),
    ),
    "WE3": WeData(
        "WE3",
        "dv + (v[1]^(-1) + u[x] + (1/2*u[x]^2 + u[y])*v[1])*dt - (ln(v[1]) - u[x]*v[1])*dy - v[1]*dx",
        kappa="-2",
        covering="cov3",
        mutations=(
            ("ln|v_x| replaced by v_x", "(ln(v[1]) - u[x]*v[1])", "(v[1] - u[x]*v[1])"),
            ("v_x^(-1) dropped from the dt coefficient", "v[1]^(-1) + u[x]", "u[x]"),
        ),
    ),
    "WE4": WeData(
        "WE4",
        "dv + ((1/4*u[x]^2 + u[y])*v[1] + u[x]*sqrt(v[1]) - ln(v[1]))*dt"
        " + (u[x]*v[1] - 2*sqrt(v[1]))*dy - v[1]*dx",
        kappa="-3/2",
        covering="cov4",
        mutations=(
            ("factor 2 on sqrt|v_x| in dy dropped", "- 2*sqrt(v[1]))*dy", "- sqrt(v[1]))*dy"),
            ("1/4 u_x^2 replaced by 1/2 u_x^2", "(1/4*u[x]^2", "(1/2*u[x]^2"),
        ),
    ),
    "WE5": WeData(
        "WE5",
        "dv + (u + (u[x]^2 + u[y])*v[1])*dt - v[1]*dx + (v[1]*u[x] + x)*dy",
        kappa="-3",
        covering="cov5",
        mutations=(
            ("x dropped from the dy coefficient", "(v[1]*u[x] + x)*dy", "v[1]*u[x]*dy"),
            ("u replaced by 2u in the dt coefficient", "(u + (u[x]^2", "(2*u + (u[x]^2"),
        ),
    ),
    "WE6": WeData(
        "WE6",
        "dv + v[1]*(u[y] + lam*u[x] - lam^2)*dt - v[1]*dx + v[1]*(u[x] - lam)*dy",
        kappa="-1",
        uses_lambda=True,
        covering="cov6",
        mutations=(
            ("lam^2 sign flipped", "- lam^2)*dt", "+ lam^2)*dt"),
            ("lam dropped from the dy coefficient", "(u[x] - lam)*dy", "u[x]*dy"),
        ),
    ),
}


@dataclass(frozen=True)
class CieData:
    """One case of a CIE theorem: the d(omega_0) and dW right-hand sides.

    Names follow the structure equations (theta_*, xi_*, eta_*, U, V, W, k);
    ``omega_1`` is the second form of the extension.
    """

    id: str
    theorem: str
    we: str
    kappa: str | None
    excluded: tuple[str, ...]
    d_omega: str
    dW: str | None = None


CIE_CASES = {
    "1": CieData(
        "1",
        "1",
        "WE1",
        None,
        ("-1",),
        "(omega_1 + 1/2*(eta_1 + theta_22) + 1/4*V*xi_1 + 1/16*(8*U + k + 12)*xi_3) & omega_0"
        " + omega_1 & xi_2 + theta_2 & xi_3 - (1/8*(k-4)*theta_0 - theta_3) & xi_1",
    ),
    "2": CieData(
        "2",
        "2",
        "WE2",
        None,
        ("-2", "-3/2", "-1"),
        "(omega_1 + 1/2*(eta_1 + theta_22) + 1/4*(V - 2*W*(W - 2))*xi_1 + 1/16*(8*(U - W) + k + 12)*xi_3) & omega_0"
        " + (W^2*omega_1 - 1/8*(k-4)*theta_0 + W*theta_2 + theta_3) & xi_1"
        " + omega_1 & xi_2 + (W*omega_1 + theta_2) & xi_3",
        "1/16*W*(8*(eta_1 - theta_22 - k*omega_1 - (k+1)*omega_2)"
        " - 4*(V - 2*W*(W - 2*(k+1)))*xi_1 - (8*(U - W) + 5*(3*k + 4))*xi_3)",
    ),
    "3": CieData(
        "3",
        "3",
        "WE6",
        "-1",
        (),
        "(omega_1 + 1/2*(eta_1 + theta_22 - W*(W - 2)*xi_1) - 1/8*(4*W - 7)*xi_3) & omega_0"
        " + (W^2*omega_1 + 5/8*theta_0 + W*theta_2 + theta_3) & xi_1"
        " + omega_1 & xi_2 + (W*omega_1 + theta_2) & xi_3",
        "eta_2 + U*W*xi_1 + 1/2*W*(eta_1 - theta_22 - (W + 1)*xi_2 + (2*U - W)*xi_3)",
    ),
}
# the kappa = -2 and -3/2 solutions of the Theorem 2 system
CIE_CASES["2-k2"] = CieData("2-k2", "2", "WE3", "-2", (), CIE_CASES["2"].d_omega, CIE_CASES["2"].dW)
CIE_CASES["2-k3/2"] = CieData("2-k3/2", "2", "WE4", "-3/2", (), CIE_CASES["2"].d_omega, CIE_CASES["2"].dW)
CIE_CASES["2-k3"] = CieData(
    "2-k3",
    "2",
    "WE5",
    "-3",
    (),
    "(omega_1 + 1/2*(eta_1 + theta_22) + 1/4*V*xi_1 + 3/2*xi_2 + 1/16*(8*(U + 2*W) + 9)*xi_3) & omega_0"
    " + ((W + 7/8)*theta_0 + theta_3) & xi_1 + omega_1 & xi_2 + theta_2 & xi_3",
    "W*(omega_1 - theta_22 - 1/2*V*W*xi_1 - (U - W - 1)*xi_3)",
)

# theorem 2 at these kappa values is the listed sub-case
CIE_KAPPA_CASES = {"-2": "2-k2", "-3/2": "2-k3/2", "-3": "2-k3"}


@dataclass(frozen=True)
class CieErratum:
    id: str
    cases: tuple[str, ...]
    key: str  # "d_omega" or "dW"
    printed: str
    corrected: str
    evidence: str


CIE_ERRATA: tuple[CieErratum, ...] = (
    CieErratum(
        "C1",
        ("2", "2-k2", "2-k3/2"),
        "dW",
        "- k*omega_1 - (k+1)*omega_2",
        "- 2*(k+1)*omega_1 - k*omega_0",
        "omega_2 is not a form of the extension; with it dropped the residual is"
        " -(k+2)/2*W*omega_1 - k/2*W*omega_0 up to the omega_1 gauge, and the dv_1 and xi^2 slots force these coefficients",
    ),
    CieErratum(
        "C2",
        ("2-k3",),
        "dW",
        "- 1/2*V*W*xi_1",
        "- 1/2*V*xi_1",
        "as printed dW leaves W*(W - 1)*V/2 along xi^1",
    ),
    CieErratum(
        "C3",
        ("3",),
        "dW",
        "1/2*W*(eta_1 - theta_22 - (W + 1)*xi_2 + (2*U - W)*xi_3)",
        "1/2*W*(eta_1 - theta_22) + 1/2*(-(W + 1)*xi_2 + (2*U - W)*xi_3)",
        "as printed dW leaves (W^2 - 1)/2 along xi^2 and (W - 1)*(W/2 - U) along xi^3:"
        " the W factor covers only eta_1 - theta_22",
    ),
)
