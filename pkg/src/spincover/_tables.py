"""Closed-form preimages of Givens factors for (2,2), (3,2) and (4,1).

Each row stores the tabulated matrix both as printed and, where the printed
entry does not map to its Givens factor, in corrected form.  (2,2) and (3,2)
rows of standard rotations carry the half-angle case split: the angle is
reduced to [0, 2 pi), the open intervals (0, pi) and (pi, 2 pi) use the base
matrix with the tabulated sign, and the points 0, pi, 2 pi (within
``BOUNDARY_TOL``) use their special matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import UnsupportedError
from .indefinite_group import GivensFactor, Signature

BOUNDARY_TOL = 1e-12
TWO_PI = 2.0 * math.pi

Formula = Callable[[float], np.ndarray]


@dataclass(frozen=True)
class TableRow:
    """One tabulated preimage.  ``formula`` maps the Givens parameter to the matrix."""

    signature: Signature
    label: str
    kind: str
    i: int
    j: int
    formula: Formula
    printed_formula: Formula | None = None
    lower_sign: int = 1
    upper_sign: int = 1
    pi_matrix: np.ndarray | None = None
    zero_sign: int = 1
    note: str = ""

    @property
    def has_case_split(self) -> bool:
        return self.pi_matrix is not None

    @property
    def printed_differs(self) -> bool:
        return self.printed_formula is not None

    def evaluate(self, parameter: float, variant: str = "corrected") -> tuple[np.ndarray, str]:
        """Table value and the branch used (``lower``, ``upper``, ``pi``, ``zero`` or ``all``)."""
        if variant not in ("corrected", "printed"):
            raise UnsupportedError(f"unknown table variant {variant!r}")
        f = self.printed_formula if (variant == "printed" and self.printed_formula is not None) else self.formula
        if not self.has_case_split:
            return f(parameter), "all"
        t = math.fmod(parameter, TWO_PI)
        if t < 0.0:
            t += TWO_PI
        size = self.pi_matrix.shape[0]
        if t <= BOUNDARY_TOL or TWO_PI - t <= BOUNDARY_TOL:
            return self.zero_sign * np.eye(size), "zero"
        if abs(t - math.pi) <= BOUNDARY_TOL:
            return np.array(self.pi_matrix, dtype=float), "pi"
        if t < math.pi:
            return self.lower_sign * f(t), "lower"
        return self.upper_sign * f(t), "upper"


def _half(theta: float) -> tuple[float, float]:
    return math.cos(theta / 2.0), math.sin(theta / 2.0)


def _hhalf(beta: float) -> tuple[float, float]:
    return math.cosh(beta / 2.0), math.sinh(beta / 2.0)


# --- (2,2): 4x4 embedded pairs ---------------------------------------------

def _r12_22(t: float) -> np.ndarray:
    c, s = _half(t)
    return np.array([[c, 0, 0, -s], [0, c, -s, 0], [0, s, c, 0], [s, 0, 0, c]])


def _r34_22(t: float) -> np.ndarray:
    c, s = _half(t)
    return np.array([[c, 0, 0, s], [0, c, -s, 0], [0, s, c, 0], [-s, 0, 0, c]])


def _h13_22(b: float) -> np.ndarray:
    e, f = math.exp(b / 2), math.exp(-b / 2)
    return -np.diag([e, f, e, f])


def _h24_22(b: float) -> np.ndarray:
    e, f = math.exp(b / 2), math.exp(-b / 2)
    return -np.diag([e, e, f, f])


S22 = Signature(2, 2)
_ROWS_22 = [
    TableRow(S22, "R1,2", "standard", 1, 2, _r12_22, lower_sign=-1, upper_sign=1,
             pi_matrix=np.array([[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]], float), zero_sign=1),
    TableRow(S22, "R3,4", "standard", 3, 4, _r34_22, lower_sign=-1, upper_sign=1,
             pi_matrix=np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]], float), zero_sign=-1),
    TableRow(S22, "H1,3", "hyperbolic", 1, 3, _h13_22),
    TableRow(S22, "H2,4", "hyperbolic", 2, 4, _h24_22),
]


# --- (3,2): 4x4 matrices with Y^T M Y = M ----------------------------------

def _r12_32(t: float) -> np.ndarray:
    c, s = _half(t)
    return np.array([[c, 0, 0, s], [0, c, s, 0], [0, -s, c, 0], [-s, 0, 0, c]])


def _r13_32(t: float) -> np.ndarray:
    c, s = _half(t)
    return np.array([[c, 0, s, 0], [0, c, 0, -s], [-s, 0, c, 0], [0, s, 0, c]])


def _r13_32_printed(t: float) -> np.ndarray:
    c, s = _half(t)
    return np.array([[c, 0, s, 0], [0, c, 0, -c], [-s, 0, c, 0], [0, s, 0, c]])


def _r23_32(t: float) -> np.ndarray:
    c, s = _half(t)
    return np.array([[c, s, 0, 0], [-s, c, 0, 0], [0, 0, c, s], [0, 0, -s, c]])


def _r23_32_printed(t: float) -> np.ndarray:
    c, s = _half(t)
    return np.array([[c, s, 0, 0], [-s, c, 0, 0], [0, 0, c, -s], [0, 0, -s, c]])


def _r45_32(t: float) -> np.ndarray:
    c, s = _half(t)
    return np.array([[c, 0, 0, -s], [0, c, s, 0], [0, -s, c, 0], [s, 0, 0, c]])


def _h14_32(b: float) -> np.ndarray:
    e, f = math.exp(b / 2), math.exp(-b / 2)
    return -np.diag([e, e, f, f])


def _h25_32(b: float) -> np.ndarray:
    e, f = math.exp(b / 2), math.exp(-b / 2)
    return -np.diag([e, f, e, f])


def _h34_32(b: float) -> np.ndarray:
    ch, sh = _hhalf(b)
    return -np.array([[ch, 0, -sh, 0], [0, ch, 0, sh], [-sh, 0, ch, 0], [0, sh, 0, ch]])


S32 = Signature(3, 2)
_ROWS_32 = [
    TableRow(S32, "R1,2", "standard", 1, 2, _r12_32, lower_sign=-1, upper_sign=1,
             pi_matrix=np.array([[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]], float)),
    TableRow(S32, "R1,3", "standard", 1, 3, _r13_32, _r13_32_printed, lower_sign=-1, upper_sign=1,
             pi_matrix=np.array([[0, 0, 1, 0], [0, 0, 0, -1], [-1, 0, 0, 0], [0, 1, 0, 0]], float),
             note="entry (2,4) printed as -cos(theta/2); the forward map requires -sin(theta/2)"),
    TableRow(S32, "R2,3", "standard", 2, 3, _r23_32, _r23_32_printed, lower_sign=-1, upper_sign=1,
             pi_matrix=np.array([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], float),
             note="entry (3,4) printed as -sin(theta/2); the forward map and the theta = pi entry require +sin(theta/2)"),
    TableRow(S32, "R4,5", "standard", 4, 5, _r45_32, lower_sign=-1, upper_sign=1,
             pi_matrix=np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]], float),
             note="the (0, pi) cell has misaligned entries in row 3; read as the (pi, 2 pi) matrix"),
    TableRow(S32, "H1,4", "hyperbolic", 1, 4, _h14_32),
    TableRow(S32, "H2,5", "hyperbolic", 2, 5, _h25_32, note="row header mislabels the covering map as the (2,2) one"),
    TableRow(S32, "H3,4", "hyperbolic", 3, 4, _h34_32),
]


# --- (4,1): 2x2 quaternionic matrices, arrays of shape (2, 2, 4) -------------

_ONE, _I, _J, _K = np.eye(4)


def _qm(a, b, c, d) -> np.ndarray:
    return np.array([[a, b], [c, d]], dtype=float)


def _r14_41(t: float) -> np.ndarray:
    c, s = _half(t)
    return _qm(c * _ONE, -s * _J, -s * _J, c * _ONE)


def _r13_41(t: float) -> np.ndarray:
    c, s = _half(t)
    return _qm(c * _ONE, s * _ONE, -s * _ONE, c * _ONE)


def _r13_41_printed(t: float) -> np.ndarray:
    c, s = _half(t)
    return _qm(c * _ONE, -s * _ONE, s * _ONE, c * _ONE)


def _r12_41(t: float) -> np.ndarray:
    c, s = _half(t)
    return _qm(c * _ONE, -s * _K, -s * _K, c * _ONE)


def _r34_41(t: float) -> np.ndarray:
    c, s = _half(t)
    return _qm(c * _ONE - s * _J, 0 * _ONE, 0 * _ONE, c * _ONE + s * _J)


def _h15_41(b: float) -> np.ndarray:
    return _qm(math.exp(-b / 2) * _ONE, 0 * _ONE, 0 * _ONE, math.exp(b / 2) * _ONE)


def _h15_41_printed(b: float) -> np.ndarray:
    return _qm(math.exp(-b / 2) * _ONE, 0 * _ONE, 0 * _ONE, math.exp(-b / 2) * _ONE)


def _r42_41(t: float) -> np.ndarray:
    c, s = _half(t)
    return _qm(c * _ONE + s * _I, 0 * _ONE, 0 * _ONE, c * _ONE + s * _I)


def _r42_41_printed(t: float) -> np.ndarray:
    c, s = _half(t)
    return _qm(c * _ONE + s * _I, 0 * _ONE, 0 * _ONE, c * _ONE - s * _I)


def _r32_41(t: float) -> np.ndarray:
    c, s = _half(t)
    return _qm(c * _ONE - s * _K, 0 * _ONE, 0 * _ONE, c * _ONE + s * _K)


def _h25_41(b: float) -> np.ndarray:
    ch, sh = _hhalf(b)
    return _qm(ch * _ONE, -sh * _K, sh * _K, ch * _ONE)


def _h35_41(b: float) -> np.ndarray:
    ch, sh = _hhalf(b)
    return _qm(ch * _ONE, sh * _ONE, sh * _ONE, ch * _ONE)


def _h35_41_printed(b: float) -> np.ndarray:
    ch, sh = _hhalf(b)
    return _qm(ch * _ONE, sh * _K, sh * _K, ch * _ONE)


def _h45_41(b: float) -> np.ndarray:
    ch, sh = _hhalf(b)
    return _qm(ch * _ONE, -sh * _J, sh * _J, ch * _ONE)


S41 = Signature(4, 1)
_ROWS_41 = [
    TableRow(S41, "R1,4", "standard", 1, 4, _r14_41),
    TableRow(S41, "R1,3", "standard", 1, 3, _r13_41, _r13_41_printed,
             note="the printed matrix is the preimage of R1,3(-theta)"),
    TableRow(S41, "R1,2", "standard", 1, 2, _r12_41),
    TableRow(S41, "R3,4", "standard", 3, 4, _r34_41,
             note="absent from the printed table; derived as Exp of the preimage of the factor's logarithm"),
    TableRow(S41, "H1,5", "hyperbolic", 1, 5, _h15_41, _h15_41_printed,
             note="printed diag(e^{-b/2}, e^{-b/2}) is not in the group; the second entry must be e^{b/2}"),
    TableRow(S41, "R4,2", "standard", 4, 2, _r42_41, _r42_41_printed,
             note="printed diag(c + s i, c - s i) is not in the group; both entries must be c + s i. "
                  "R4,2(theta) = R2,4(-theta)"),
    TableRow(S41, "R3,2", "standard", 3, 2, _r32_41, note="R3,2(theta) = R2,3(-theta)"),
    TableRow(S41, "H2,5", "hyperbolic", 2, 5, _h25_41),
    TableRow(S41, "H3,5", "hyperbolic", 3, 5, _h35_41, _h35_41_printed,
             note="printed off-diagonal entries sh*k give a matrix outside the group; they must be real sh"),
    TableRow(S41, "H4,5", "hyperbolic", 4, 5, _h45_41),
]

TABLES: dict[Signature, dict[tuple[str, int, int], TableRow]] = {
    sig: {(r.kind, r.i, r.j): r for r in rows} for sig, rows in ((S22, _ROWS_22), (S32, _ROWS_32), (S41, _ROWS_41))
}


def lookup(sig: Signature, f: GivensFactor) -> tuple[TableRow, float]:
    """Table row for a factor and the parameter to evaluate it at.

    A standard factor R_ij(theta) with no row of its own is served by the row
    for R_ji at -theta.
    """
    table = TABLES.get(sig)
    if table is None:
        raise UnsupportedError(f"no Givens preimage table for {sig}")
    row = table.get((f.kind, f.i, f.j))
    if row is not None:
        return row, f.parameter
    if f.kind == "standard":
        row = table.get((f.kind, f.j, f.i))
        if row is not None:
            return row, -f.parameter
    raise UnsupportedError(f"factor {f.label} is not in the {sig} preimage table")


def rows(sig: Signature) -> list[TableRow]:
    return list(TABLES[sig].values())
