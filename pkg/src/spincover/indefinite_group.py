"""The indefinite orthogonal groups SO+(p, q).

Provides the metric, a membership test for the identity component,
standard/hyperbolic Givens factors with their logarithms, a constructive
Givens factorisation valid for every signature, and the closed-form polar
decomposition for signatures (n, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvariantError, MembershipError

__all__ = [
    "Signature",
    "MembershipReport",
    "GivensFactor",
    "PolarDecomposition",
    "metric",
    "is_in_so_plus",
    "check_so_plus",
    "is_in_lie_algebra",
    "givens_embed",
    "givens_log",
    "givens_product",
    "random_givens_factors",
    "givens_decompose",
    "polar_decompose_n1",
    "normalize_angle",
    "leading_minors",
]

STRUCTURE_TOL = 1e-9
HYPERBOLIC_PIVOT_TOL = 1e-7


@dataclass(frozen=True)
class Signature:
    """Signature (p, q) of the metric I_p (+) (-I_q)."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.p < 0 or self.q < 0 or self.p + self.q < 1:
            raise InvariantError(f"invalid signature ({self.p}, {self.q})")

    @property
    def n(self) -> int:
        return self.p + self.q

    @classmethod
    def coerce(cls, sig: "Signature | Sequence[int] | str") -> "Signature":
        if isinstance(sig, Signature):
            return sig
        if isinstance(sig, str):
            parts = sig.replace("(", "").replace(")", "").split(",")
            if len(parts) != 2:
                raise InvariantError(f"cannot parse signature {sig!r}")
            return cls(int(parts[0]), int(parts[1]))
        p, q = sig
        return cls(int(p), int(q))

    def is_positive(self, index: int) -> bool:
        """True when the 1-based basis index squares to +1."""
        return index <= self.p

    def __str__(self) -> str:
        return f"({self.p},{self.q})"


def metric(sig: Signature | Sequence[int]) -> np.ndarray:
    """The diagonal metric I_{p,q}."""
    sig = Signature.coerce(sig)
    return np.diag([1.0] * sig.p + [-1.0] * sig.q)


@dataclass(frozen=True)
class MembershipReport:
    """Outcome of a membership test; truthy exactly when the matrix is a member."""

    ok: bool
    reason: str = "ok"
    metric_residual: float = 0.0
    det: float = 1.0

    def __bool__(self) -> bool:
        return self.ok


def _scale(X: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(X), initial=0.0)))


def is_in_so_plus(X: np.ndarray, sig: Signature | Sequence[int], tol: float = STRUCTURE_TOL) -> MembershipReport:
    """Test ``X^T I X = I``, ``det X = 1`` and the identity-component criterion.

    The tolerance is absolute for unit-scale matrices and grows with the square
    of the largest entry, which is how rounding errors in ``X^T I X`` grow.
    The identity component is detected by ``det`` of the leading p x p block
    being positive.
    """
    sig = Signature.coerce(sig)
    X = np.asarray(X, dtype=float)
    if X.shape != (sig.n, sig.n):
        return MembershipReport(False, "shape", math.inf, math.nan)
    J = metric(sig)
    s2 = _scale(X) ** 2
    res = float(np.max(np.abs(X.T @ J @ X - J)))
    det = float(np.linalg.det(X))
    if not np.isfinite(res) or res > tol * s2:
        return MembershipReport(False, "metric", res, det)
    if abs(det - 1.0) > tol * s2:
        return MembershipReport(False, "determinant", res, det)
    if sig.p > 0 and sig.q > 0 and np.linalg.det(X[: sig.p, : sig.p]) <= 0.0:
        return MembershipReport(False, "component", res, det)
    return MembershipReport(True, "ok", res, det)


def check_so_plus(X: np.ndarray, sig: Signature | Sequence[int], tol: float = STRUCTURE_TOL) -> np.ndarray:
    """Return ``X`` as a float array or raise :class:`MembershipError`."""
    rep = is_in_so_plus(X, sig, tol)
    if not rep:
        raise MembershipError(f"matrix is not in SO+{Signature.coerce(sig)} ({rep.reason}, residual {rep.metric_residual:.3g})")
    return np.asarray(X, dtype=float)


def is_in_lie_algebra(L: np.ndarray, sig: Signature | Sequence[int], tol: float = STRUCTURE_TOL) -> bool:
    """``L^T I = -I L``."""
    sig = Signature.coerce(sig)
    L = np.asarray(L, dtype=float)
    J = metric(sig)
    return L.shape == (sig.n, sig.n) and float(np.max(np.abs(L.T @ J + J @ L))) <= tol * _scale(L)


def normalize_angle(theta: float) -> float:
    """Map an angle into (-pi, pi]."""
    t = math.remainder(theta, 2.0 * math.pi)
    return math.pi if t == -math.pi else t


@dataclass(frozen=True)
class GivensFactor:
    """A standard rotation R_ij(theta) or hyperbolic rotation H_ij(beta).

    Indices are 1-based.  For a standard factor the principal submatrix on
    rows/columns (i, j), in that order, is ((c, -s), (s, c)), so that
    R_ij(theta) = R_ji(-theta).
    """

    kind: str
    i: int
    j: int
    parameter: float

    def __post_init__(self) -> None:
        if self.kind not in ("standard", "hyperbolic"):
            raise InvariantError(f"unknown Givens kind {self.kind!r}")
        if self.i == self.j or self.i < 1 or self.j < 1:
            raise InvariantError(f"invalid Givens indices ({self.i}, {self.j})")

    @classmethod
    def R(cls, i: int, j: int, theta: float) -> "GivensFactor":
        return cls("standard", i, j, float(theta))

    @classmethod
    def H(cls, i: int, j: int, beta: float) -> "GivensFactor":
        return cls("hyperbolic", i, j, float(beta))

    def validate(self, sig: Signature | Sequence[int]) -> None:
        sig = Signature.coerce(sig)
        if max(self.i, self.j) > sig.n:
            raise InvariantError(f"Givens index out of range for signature {sig}")
        if self.kind == "hyperbolic":
            if not (1 <= self.i <= sig.p < self.j <= sig.n):
                raise InvariantError(f"hyperbolic factor needs i <= p < j, got ({self.i}, {self.j}) for {sig}")
        elif sig.is_positive(self.i) != sig.is_positive(self.j):
            raise InvariantError(f"standard factor ({self.i}, {self.j}) straddles the signature split of {sig}")

    def canonical(self) -> "GivensFactor":
        """Same matrix with i < j (only changes standard factors)."""
        if self.kind == "standard" and self.i > self.j:
            return GivensFactor("standard", self.j, self.i, -self.parameter)
        return self

    def inverse(self) -> "GivensFactor":
        return GivensFactor(self.kind, self.i, self.j, -self.parameter)

    @property
    def label(self) -> str:
        return f"{'R' if self.kind == 'standard' else 'H'}{self.i},{self.j}"

    def __str__(self) -> str:
        return f"{self.label}({self.parameter:.17g})"


def givens_embed(f: GivensFactor, sig: Signature | Sequence[int]) -> np.ndarray:
    """Identity matrix with the (i, j) principal block replaced by the rotation."""
    sig = Signature.coerce(sig)
    f.validate(sig)
    X = np.eye(sig.n)
    i, j = f.i - 1, f.j - 1
    if f.kind == "standard":
        c, s = math.cos(f.parameter), math.sin(f.parameter)
        X[i, i], X[i, j], X[j, i], X[j, j] = c, -s, s, c
    else:
        a, b = math.cosh(f.parameter), math.sinh(f.parameter)
        X[i, i], X[i, j], X[j, i], X[j, j] = a, b, b, a
    return X


def givens_log(f: GivensFactor, sig: Signature | Sequence[int]) -> np.ndarray:
    """Element L of so(p, q) with Exp(L) equal to the embedded factor."""
    sig = Signature.coerce(sig)
    f.validate(sig)
    L = np.zeros((sig.n, sig.n))
    i, j = f.i - 1, f.j - 1
    if f.kind == "standard":
        L[i, j], L[j, i] = -f.parameter, f.parameter
    else:
        L[i, j] = L[j, i] = f.parameter
    return L


def givens_product(factors: Iterable[GivensFactor], sig: Signature | Sequence[int]) -> np.ndarray:
    """Ordered product of embedded factors."""
    sig = Signature.coerce(sig)
    X = np.eye(sig.n)
    for f in factors:
        X = X @ givens_embed(f, sig)
    return X


def random_givens_factors(
    sig: Signature | Sequence[int],
    rng: np.random.Generator,
    count: int | None = None,
    beta_max: float = 1.0,
) -> list[GivensFactor]:
    """Random admissible factors: angles uniform on [0, 2 pi), rapidities on [-beta_max, beta_max].

    ``count`` defaults to n(n-1)/2.  Index pairs are drawn uniformly from all
    admissible pairs, so a product may repeat or omit planes.
    """
    sig = Signature.coerce(sig)
    pairs = [(i, j) for i in range(1, sig.n + 1) for j in range(i + 1, sig.n + 1)]
    count = len(pairs) if count is None else count
    out = []
    for k in rng.integers(0, len(pairs), size=count):
        i, j = pairs[k]
        if sig.is_positive(i) == sig.is_positive(j):
            out.append(GivensFactor.R(i, j, rng.uniform(0.0, 2.0 * math.pi)))
        else:
            out.append(GivensFactor.H(i, j, rng.uniform(-beta_max, beta_max)))
    return out


def _apply_left_inverse(A: np.ndarray, f: GivensFactor) -> None:
    """In place ``A <- G(f)^{-1} A`` touching only rows i and j."""
    i, j = f.i - 1, f.j - 1
    ri, rj = A[i].copy(), A[j].copy()
    if f.kind == "standard":
        c, s = math.cos(f.parameter), math.sin(f.parameter)
        A[i], A[j] = c * ri + s * rj, -s * ri + c * rj
    else:
        a, b = math.cosh(f.parameter), math.sinh(f.parameter)
        A[i], A[j] = a * ri - b * rj, -b * ri + a * rj


def givens_decompose(X: np.ndarray, sig: Signature | Sequence[int], tol: float = STRUCTURE_TOL) -> list[GivensFactor]:
    """Factor ``X`` in SO+(p, q) as an ordered product of Givens factors.

    Columns are reduced left to right by left multiplication.  Within a column
    the standard rotations first compress the p-block onto the diagonal pivot
    and the q-block onto a pivot index (cycling through the q-block from
    column to column), then a single hyperbolic rotation merges the two.  Columns past the split are handled by an ordinary SO(q)
    reduction.  Factors with a zero parameter are omitted.
    """
    sig = Signature.coerce(sig)
    A = check_so_plus(X, sig, tol).copy()
    n, p = sig.n, sig.p
    reduction: list[GivensFactor] = []
    for k in range(1, n + 1):
        if k <= p:
            for j in range(k + 1, p + 1):
                _rotate_column(A, k, j, k, reduction, force_positive=True)
            if p < n:
                piv = p + 1 + (k - 1) % sig.q
                for j in range(p + 1, n + 1):
                    if j != piv:
                        _rotate_column(A, piv, j, k, reduction, force_positive=False)
                x, y = A[k - 1, k - 1], A[piv - 1, k - 1]
                if x <= 0.0 or (abs(x) - abs(y)) * (abs(x) + abs(y)) < HYPERBOLIC_PIVOT_TOL:
                    raise MembershipError(
                        f"hyperbolic pivot degenerate in column {k}: x={x:.6g}, y={y:.6g}"
                    )
                if y != 0.0:
                    f = GivensFactor.H(k, piv, math.atanh(y / x))
                    _apply_left_inverse(A, f)
                    A[piv - 1, k - 1] = 0.0
                    reduction.append(f)
        else:
            for j in range(k + 1, n + 1):
                _rotate_column(A, k, j, k, reduction, force_positive=True)
    residual = float(np.max(np.abs(A - np.eye(n))))
    if residual > 1e-7 * _scale(np.asarray(X)) ** 2:
        raise MembershipError(f"Givens reduction left a residual of {residual:.3g}")
    return reduction


def _rotate_column(
    A: np.ndarray, pivot: int, j: int, col: int, out: list[GivensFactor], force_positive: bool
) -> None:
    """Zero ``A[j, col]`` against ``A[pivot, col]`` with R_{pivot, j}.

    With ``force_positive`` a negative pivot is flipped even when ``A[j, col]``
    is already zero (a rotation by pi), so the pivot ends up non-negative.
    """
    x, y = A[pivot - 1, col - 1], A[j - 1, col - 1]
    if y == 0.0 and (x >= 0.0 or not force_positive):
        return
    f = GivensFactor.R(pivot, j, math.atan2(y, x))
    _apply_left_inverse(A, f)
    A[j - 1, col - 1] = 0.0
    out.append(f.canonical())


@dataclass(frozen=True, eq=False)
class PolarDecomposition:
    """``X = V P`` with ``V = Z (+) 1`` orthogonal and ``P = Exp(Q)`` positive definite."""

    V: np.ndarray
    P: np.ndarray
    Q: np.ndarray
    sigma: float
    axis: np.ndarray  # unit vector U e_1 in R^n


def leading_minors(A: np.ndarray) -> np.ndarray:
    """Leading principal minors of a square matrix."""
    A = np.asarray(A)
    return np.array([np.linalg.det(A[:k, :k]) for k in range(1, A.shape[0] + 1)])


def polar_decompose_n1(X: np.ndarray, sig: Signature | Sequence[int] | None = None, tol: float = STRUCTURE_TOL) -> PolarDecomposition:
    """Closed-form polar decomposition in SO+(n, 1) from the last row and column.

    With ``cosh(sigma) = X[n, n]`` and ``u`` the unit vector along the last row,
    ``P = I + (cosh(sigma) - 1) u u^T`` on the spatial block with ``sinh(sigma) u``
    in the last row and column, ``Q = sigma (u e^T + e u^T)``, and
    ``V = X P^{-1}`` where ``P^{-1} = I_{n,1} P I_{n,1}``, evaluated in a
    cancellation-free form.
    """
    X = np.asarray(X, dtype=float)
    m = X.shape[0]
    sig = Signature(m - 1, 1) if sig is None else Signature.coerce(sig)
    if sig.q != 1 or sig.n != m:
        raise InvariantError(f"polar_decompose_n1 needs signature (n, 1), got {sig}")
    check_so_plus(X, sig, tol)
    n = sig.p
    ch = X[n, n]
    row = X[n, :n]
    sh = float(np.linalg.norm(row))
    if sh == 0.0:
        u = np.zeros(n)
        u[0] = 1.0
        sigma = 0.0
    else:
        u = row / sh
        sigma = math.asinh(sh)
    ch = math.cosh(sigma)
    P = np.eye(m)
    P[:n, :n] += (ch - 1.0) * np.outer(u, u)
    P[:n, n] = P[n, :n] = math.sinh(sigma) * u
    P[n, n] = ch
    Q = np.zeros((m, m))
    Q[:n, n] = Q[n, :n] = sigma * u
    # V = X P^{-1} = Z (+) 1.  Forming the product directly cancels terms of
    # size cosh(sigma)^2; since X[:n, n] = sinh(sigma) Z u, the spatial block is
    # also Z = X_s - tanh(sigma / 2) X[:n, n] u^T, which only loses cosh(sigma).
    V = np.eye(m)
    V[:n, :n] = X[:n, :n] - math.tanh(0.5 * sigma) * np.outer(X[:n, n], u)
    return PolarDecomposition(V=V, P=P, Q=Q, sigma=sigma, axis=u)
