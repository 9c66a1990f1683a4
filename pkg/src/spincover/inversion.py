"""Inversion strategies for the covering maps.

* (2,1): positive definite targets by inspection, general targets through the
  polar decomposition (:func:`invert_posdef_21`, :func:`invert_21`);
* (2,2), (3,2), (4,1): Givens factorisation plus tabulated factor preimages
  (:func:`invert_via_givens`);
* (4,1): polar decomposition with closed-form exponentials
  (:func:`invert_41_polar`);
* any signature: the rotor product over a Givens factorisation
  (:func:`agnostic_invert`) and the minor-weighted blade sum
  (:func:`shirokov_invert`).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _tables
from .clifford_blades import Multivector, blade_inverse, conjugation_matrix, reversion
from .core_linalg import QuatMatrix, so4_log_parts, sqrt_posdef_sl2
from .covering_maps import (
    CONCRETE_SIGNATURES,
    SpinAlgebraElement41,
    SpinElement,
    phi,
    phi_21,
    psi_41_inverse,
    sign_normalize,
)
from .errors import GenericityError, InvariantError, MembershipError, UnsupportedError
from .indefinite_group import (
    STRUCTURE_TOL,
    GivensFactor,
    Signature,
    check_so_plus,
    givens_decompose,
    givens_embed,
    leading_minors,
    polar_decompose_n1,
)

__all__ = [
    "PreimagePair",
    "Polar21Result",
    "Polar41Result",
    "ShirokovResult",
    "STRATEGIES",
    "invert",
    "supported_strategies",
    "default_strategy",
    "invert_posdef_21",
    "invert_21",
    "invert_givens",
    "invert_givens_22",
    "invert_givens_32",
    "invert_givens_41",
    "invert_via_givens",
    "invert_41_polar",
    "agnostic_invert",
    "agnostic_pair",
    "rotor",
    "shirokov_invert",
    "shirokov_pair",
    "is_positive_definite_spin",
    "exact_det",
]

SIGN_TOL = 1e-9


# --- result types ------------------------------------------------------------

def _normalize_sign(Y):
    if isinstance(Y, Multivector):
        for c in Y.coeffs:
            if abs(float(c)) > SIGN_TOL:
                return Y if float(c) > 0 else -Y
        return Y
    return Y.sign_normalized()


def _forward(Y) -> np.ndarray:
    if isinstance(Y, Multivector):
        return conjugation_matrix(Y)
    return phi(Y, check=False)


@dataclass(frozen=True, eq=False)
class PreimagePair:
    """The two preimages ``plus`` and ``minus = -plus`` of a target ``X``.

    ``plus`` follows the global sign convention: its first entry (row-major,
    entries below 1e-9 skipped) is positive.  For multivectors the scan runs
    over blade coefficients in the engine's blade order.
    """

    plus: object
    minus: object
    residual: float
    strategy: str = ""
    factors: tuple[GivensFactor, ...] = ()
    warnings: tuple[str, ...] = ()

    @classmethod
    def from_element(cls, Y, X: np.ndarray, strategy: str = "", factors: Sequence[GivensFactor] = (),
                     warnings: Sequence[str] = ()) -> "PreimagePair":
        plus = _normalize_sign(Y)
        residual = float(np.max(np.abs(_forward(plus) - np.asarray(X, dtype=float))))
        return cls(plus, -plus, residual, strategy, tuple(factors), tuple(warnings))

    @property
    def signature(self) -> Signature:
        return self.plus.signature

    def distance_up_to_sign(self, other: "PreimagePair | SpinElement | Multivector") -> float:
        a = self.plus
        b = other.plus if isinstance(other, PreimagePair) else other
        if isinstance(a, Multivector) or isinstance(b, Multivector):
            ca, cb = np.asarray(a.coeffs, dtype=float), np.asarray(b.coeffs, dtype=float)
            return float(min(np.max(np.abs(ca - cb)), np.max(np.abs(ca + cb))))
        return a.distance_up_to_sign(b)


# --- (2,1) -----------------------------------------------------------------

def _require_symmetric_posdef(X: np.ndarray, tol: float) -> None:
    scale = max(1.0, float(np.max(np.abs(X))))
    if np.max(np.abs(X - X.T)) > tol * scale:
        raise InvariantError("target is not symmetric")
    if np.any(leading_minors(X) <= 0.0):
        raise InvariantError("target is not positive definite")


def invert_posdef_21(X: np.ndarray, tol: float = STRUCTURE_TOL) -> SpinElement:
    """Positive definite ``Y in SL(2,R)`` with ``phi_21(Y) = X`` for positive definite ``X``.

    Branches on ``X11 = 1``.  In floating point the branch is taken only when
    ``X11 - 1`` is at rounding level: dropping a small ``y2`` costs
    ``O(y2)`` in the residual while dividing by it costs ``O(eps / y2)``.
    """
    X = check_so_plus(X, (2, 1), tol)
    _require_symmetric_posdef(X, tol)
    d = X[0, 0] - 1.0
    if d > 8.0 * np.finfo(float).eps * max(1.0, float(np.max(np.abs(X)))):
        y2 = math.sqrt(d / 2.0)
        y1 = -(X[0, 1] + X[0, 2]) / (2.0 * y2)
        y4 = (X[0, 1] - X[0, 2]) / (2.0 * y2)
        Y = np.array([[y1, y2], [y2, y4]])
        if y1 < 0.0:
            Y = -Y  # the other root of y2; exactly one of +-Y is positive definite
    else:
        y1 = math.sqrt(max(X[1, 1] + X[1, 2], 0.0))
        y4 = math.sqrt(max(X[1, 1] - X[1, 2], 0.0))
        Y = np.diag([y1, y4])
    return SpinElement(Signature(2, 1), Y)


@dataclass(frozen=True, eq=False)
class Polar21Result:
    """Output of the (2,1) polar route: ``X = V P``, ``P = phi(W)``, ``V = phi(S)``."""

    pair: PreimagePair
    V: np.ndarray
    P: np.ndarray
    W: np.ndarray
    S: np.ndarray
    theta: float


def _rotation_preimage_21(V: np.ndarray) -> tuple[np.ndarray, float]:
    """Half-angle ``S in SO(2)`` with ``phi_21(S) = V = diag(R(theta), 1)``."""
    theta = math.atan2(V[1, 0], V[0, 0])
    if theta < 0.0:
        theta += 2.0 * math.pi
    if theta <= _tables.BOUNDARY_TOL or 2.0 * math.pi - theta <= _tables.BOUNDARY_TOL:
        return -np.eye(2), 0.0
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]]), theta


def invert_21(X: np.ndarray, tol: float = STRUCTURE_TOL) -> Polar21Result:
    """Preimages and polar factors of ``X in SO+(2,1)``.

    ``Z`` is the positive definite preimage of ``X^T X``, ``W`` its square root,
    ``P = phi(W)``, ``P^{-1} = phi(W^{-1})`` (``W^{-1}`` by the 2x2 swap rule),
    ``V = X P^{-1}`` and ``S`` the half-angle rotation over ``V``.  Because
    ``X = phi(S) phi(W) = phi(S W)``, the preimage is ``Y = S W``.
    """
    X = check_so_plus(X, (2, 1), tol)
    Z = invert_posdef_21(X.T @ X, tol).payload
    W = sqrt_posdef_sl2(Z, tol=1e-7)
    P = phi_21(W, check=False)
    W_inv = np.array([[W[1, 1], -W[0, 1]], [-W[1, 0], W[0, 0]]])
    V = X @ phi_21(W_inv, check=False)
    S, theta = _rotation_preimage_21(V)
    Y = SpinElement(Signature(2, 1), S @ W)
    pair = PreimagePair.from_element(Y, X, "polar")
    return Polar21Result(pair, V, P, W, S, theta)


# --- Givens tables -------------------------------------------------------------

def invert_givens(f: GivensFactor, sig: Signature | Sequence[int] | str, variant: str = "corrected") -> PreimagePair:
    """Tabulated preimage of a single Givens factor."""
    sig = Signature.coerce(sig)
    row, param = _tables.lookup(sig, f)
    M, branch = row.evaluate(param, variant)
    Y = SpinElement.from_matrix(sig, M)
    warnings = ()
    if branch in ("pi", "zero"):
        warnings = (f"{f.label}: parameter at a half-angle boundary, dispatched to the theta = {branch} entry",)
    return PreimagePair.from_element(Y, givens_embed(f, sig), "givens", (f,), warnings)


def invert_givens_22(f: GivensFactor, variant: str = "corrected") -> PreimagePair:
    return invert_givens(f, (2, 2), variant)


def invert_givens_32(f: GivensFactor, variant: str = "corrected") -> PreimagePair:
    return invert_givens(f, (3, 2), variant)


def invert_givens_41(f: GivensFactor, variant: str = "corrected") -> PreimagePair:
    return invert_givens(f, (4, 1), variant)


def invert_via_givens(X: np.ndarray, sig: Signature | Sequence[int] | str, tol: float = STRUCTURE_TOL) -> PreimagePair:
    """Factor ``X``, invert each factor from its table and multiply in order."""
    sig = Signature.coerce(sig)
    if sig not in _tables.TABLES:
        raise UnsupportedError(f"no Givens preimage table for {sig}")
    factors = givens_decompose(X, sig, tol)
    Y = SpinElement.identity(sig)
    warnings: list[str] = []
    for f in factors:
        row, param = _tables.lookup(sig, f)
        M, branch = row.evaluate(param)
        if branch in ("pi", "zero"):
            warnings.append(f"{f.label}: parameter at a half-angle boundary, dispatched to the theta = {branch} entry")
        Y = Y @ SpinElement.from_matrix(sig, M)
    return PreimagePair.from_element(Y, X, "givens", factors, warnings)


# --- (4,1) polar route -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Polar41Result:
    pair: PreimagePair
    V: np.ndarray
    P: np.ndarray
    Q: np.ndarray
    lam_P: SpinAlgebraElement41
    lam_V: tuple[SpinAlgebraElement41, SpinAlgebraElement41]
    kappas: tuple[float, float]
    lam: float


def _exp_symmetric_41(lam: SpinAlgebraElement41) -> tuple[np.ndarray, float]:
    """``cosh(l) I + sinh(l)/l Lam`` for Hermitian ``Lam`` with ``Lam^2 = l^2 I``."""
    a1, _, b, _, _, _, be1, be2, _, _ = lam.to_vector()
    l = math.sqrt(a1 * a1 + b * b + be1 * be1 + be2 * be2)
    shc = 1.0 if l == 0.0 else math.sinh(l) / l
    return math.cosh(l) * np.eye(4) + shc * lam.theta_h(), l


def _exp_cubic_41(lam: SpinAlgebraElement41) -> tuple[np.ndarray, float]:
    """Rodrigues form for ``Lam^3 = -kappa^2 Lam``; the kappa = 0 limit is handled by series."""
    _, a2, _, _, al1, al2, _, _, _, _ = lam.to_vector()
    k = 2.0 * math.sqrt(a2 * a2 + al1 * al1 + al2 * al2)
    L = lam.theta_h()
    if k < 1e-6:
        k2 = k * k
        sinc = 1.0 - k2 / 6.0
        cosc = 0.5 - k2 / 24.0
    else:
        sinc = math.sin(k) / k
        cosc = (1.0 - math.cos(k)) / (k * k)
    return np.eye(4) + sinc * L + cosc * (L @ L), k


def invert_41_polar(X: np.ndarray, tol: float = STRUCTURE_TOL) -> Polar41Result:
    """Preimage of ``X in SO+(4,1)`` through ``X = V P`` and closed-form exponentials."""
    pd = polar_decompose_n1(X, (4, 1), tol)
    lam_P = psi_41_inverse(pd.Q, tol)
    EP, l = _exp_symmetric_41(lam_P)
    Y1, Y2 = so4_log_parts(pd.V[:4, :4], tol)
    lams, kappas, EV = [], [], np.eye(4, dtype=complex)
    for Yl in (Y1, Y2):
        hat = np.zeros((5, 5))
        hat[:4, :4] = Yl
        lam_l = psi_41_inverse(hat, tol)
        E, k = _exp_cubic_41(lam_l)
        lams.append(lam_l)
        kappas.append(k)
        EV = EV @ E
    Y = SpinElement.from_matrix((4, 1), EV @ EP)
    pair = PreimagePair.from_element(Y, X, "polar")
    return Polar41Result(pair, pd.V, pd.P, pd.Q, lam_P, (lams[0], lams[1]), (kappas[0], kappas[1]), l)


def is_positive_definite_spin(Y: SpinElement, tol: float = SIGN_TOL) -> bool:
    """Hermitian (symmetric) with positive leading principal minors.

    (2,1) uses the 2x2 matrix, (4,1) the complex adjoint, whose leading minors
    are real for Hermitian input.
    """
    A = Y.matrix()
    if np.max(np.abs(A - A.conj().T)) > tol * max(1.0, float(np.max(np.abs(A)))):
        return False
    minors = [float(np.real(np.linalg.det(A[:k, :k]))) for k in range(1, A.shape[0] + 1)]
    return all(m > tol for m in minors)


# --- signature-agnostic routes -------------------------------------------------

def rotor(f: GivensFactor, sig: Signature | Sequence[int] | str) -> Multivector:
    """Even element whose conjugation action is the Givens factor ``f``.

    With ``i < j`` and ``B = e_j e_i``: a hyperbolic factor maps to
    ``cosh(b/2) + sinh(b/2) B``, a standard factor on two positive indices to
    ``cos(t/2) + sin(t/2) B`` and one on two negative indices to
    ``cos(t/2) - sin(t/2) B``.  Equivalently ``exp((t/2) e_i^2 e_j e_i)``.
    """
    sig = Signature.coerce(sig)
    f = f.canonical()
    f.validate(sig)
    h = f.parameter / 2.0
    B = Multivector.blade(sig, [f.j, f.i])
    if f.kind == "hyperbolic":
        return Multivector.scalar(sig, math.cosh(h)) + B * math.sinh(h)
    sign = 1.0 if sig.is_positive(f.i) else -1.0
    return Multivector.scalar(sig, math.cos(h)) + B * (sign * math.sin(h))


def agnostic_invert(X: np.ndarray, sig: Signature | Sequence[int] | str, tol: float = STRUCTURE_TOL) -> Multivector:
    """Geometric product of the rotors of a Givens factorisation of ``X``."""
    sig = Signature.coerce(sig)
    factors = givens_decompose(X, sig, tol)
    x = Multivector.scalar(sig, 1.0)
    for f in factors:
        x = x * rotor(f, sig)
    return x


def agnostic_pair(X: np.ndarray, sig: Signature | Sequence[int] | str, tol: float = STRUCTURE_TOL) -> PreimagePair:
    sig = Signature.coerce(sig)
    factors = givens_decompose(X, sig, tol)
    x = Multivector.scalar(sig, 1.0)
    for f in factors:
        x = x * rotor(f, sig)
    return PreimagePair.from_element(x, X, "agnostic", factors)


def exact_det(A: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    M = [list(map(Fraction, row)) for row in A]
    n = len(M)
    det = Fraction(1)
    for k in range(n):
        piv = next((r for r in range(k, n) if M[r][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            det = -det
        det *= M[k][k]
        for r in range(k + 1, n):
            if M[r][k] != 0:
                factor = M[r][k] / M[k][k]
                for c in range(k, n):
                    M[r][c] -= factor * M[k][c]
    return det


@dataclass(frozen=True, eq=False)
class ShirokovResult:
    """Minor-weighted blade sum ``M``, the scalar ``M rev(M)`` and ``Y = M / sqrt(M rev(M))``."""

    M: Multivector
    mm_rev_scalar: object
    Y: Multivector | None
    generic_ok: bool
    purity_residual: float
    exact: bool


def shirokov_invert(X, sig: Signature | Sequence[int] | str, exact: bool = False,
                    tol: float = 1e-9, max_n: int = 8) -> ShirokovResult:
    """Sum ``det(X[a, b]) e_a e_b^{-1}`` over equal-size index subsets and normalise.

    In exact mode the entries of ``X`` are converted to :class:`Fraction`
    (floats convert exactly) and the minors are computed by exact elimination,
    so ``M`` and ``M rev(M)`` are exact.  ``Y`` is then evaluated in floating
    point because the normalisation needs a square root.
    """
    sig = Signature.coerce(sig)
    n = sig.n
    if n > max_n:
        raise UnsupportedError(f"minor enumeration is limited to n <= {max_n}")
    if exact:
        Xe = [[Fraction(x) if not isinstance(x, Fraction) else x for x in row] for row in np.asarray(X, dtype=object)]
        check_so_plus(np.array([[float(x) for x in row] for row in Xe]), sig)
    else:
        Xf = check_so_plus(X, sig)
    M = Multivector.zero(sig, exact=exact)
    for k in range(n + 1):
        subsets = list(itertools.combinations(range(1, n + 1), k))
        inverses = {b: blade_inverse(Multivector.blade(sig, b, exact=exact)) for b in subsets}
        for a in subsets:
            ea = Multivector.blade(sig, a, exact=exact)
            for b in subsets:
                if k == 0:
                    d = Fraction(1) if exact else 1.0
                elif exact:
                    d = exact_det([[Xe[r - 1][c - 1] for c in b] for r in a])
                else:
                    d = float(np.linalg.det(Xf[np.ix_([r - 1 for r in a], [c - 1 for c in b])]))
                if d != 0:
                    M = M + (ea * inverses[b]) * d
    MM = M * reversion(M)
    s = MM.scalar_part()
    rest = MM - Multivector.scalar(sig, s, exact=exact)
    rest_norm = max((abs(float(c)) for c in rest.coeffs), default=0.0)
    purity = rest_norm / abs(float(s)) if s != 0 else math.inf
    generic_ok = float(s) > tol * max(1.0, M.norm_inf()) ** 2 and purity <= 1e-8
    Y = None
    if generic_ok:
        Y = M.to_float() / math.sqrt(float(s))
    return ShirokovResult(M, s, Y, generic_ok, purity, exact)


def shirokov_pair(X, sig: Signature | Sequence[int] | str, exact: bool = False) -> PreimagePair:
    res = shirokov_invert(X, sig, exact=exact)
    if not res.generic_ok:
        raise GenericityError(f"M rev(M) is not a positive scalar (scalar part {float(res.mm_rev_scalar):.3g})")
    return PreimagePair.from_element(res.Y, np.asarray(X, dtype=float), "shirokov")


# --- dispatcher --------------------------------------------------------------

STRATEGIES = ("auto", "givens", "polar", "agnostic", "shirokov")


def supported_strategies(sig: Signature | Sequence[int] | str) -> tuple[str, ...]:
    """Strategies applicable to a signature (``auto`` always is)."""
    sig = Signature.coerce(sig)
    out = ["auto"]
    if sig in _tables.TABLES:
        out.append("givens")
    if sig in (Signature(2, 1), Signature(4, 1)):
        out.append("polar")
    if sig.n <= 10:
        out.append("agnostic")
    if sig.n <= 8:
        out.append("shirokov")
    return tuple(out)


def default_strategy(sig: Signature) -> str:
    if sig == Signature(2, 1):
        return "polar"
    if sig in _tables.TABLES:
        return "givens"
    return "agnostic"


def invert(X: np.ndarray, sig: Signature | Sequence[int] | str, strategy: str = "auto",
           tol: float = STRUCTURE_TOL) -> PreimagePair:
    """Run one inversion strategy and return the sign-normalised preimage pair."""
    sig = Signature.coerce(sig)
    if strategy not in STRATEGIES:
        raise UnsupportedError(f"unknown strategy {strategy!r}")
    if strategy not in supported_strategies(sig):
        raise UnsupportedError(f"strategy {strategy!r} does not support signature {sig}")
    if strategy == "auto":
        strategy = default_strategy(sig)
    if strategy == "givens":
        return invert_via_givens(X, sig, tol)
    if strategy == "polar":
        return invert_21(X, tol).pair if sig == Signature(2, 1) else invert_41_polar(X, tol).pair
    if strategy == "agnostic":
        return agnostic_pair(X, sig, tol)
    return shirokov_pair(X, sig)
