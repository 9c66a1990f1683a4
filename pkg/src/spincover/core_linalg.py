"""Quaternions, quaternionic matrices and small closed-form matrix functions.

Quaternionic matrices are stored as real arrays of shape ``(rows, cols, 4)``
holding the coefficients of ``1, i, j, k``.  The complex adjoint
``theta_h`` maps an ``n x n`` quaternionic matrix ``X = Z + W j`` to the
``2n x 2n`` complex block matrix ``[[Z, W], [-conj(W), conj(Z)]]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import expm

from .errors import InvariantError

__all__ = [
    "Quaternion",
    "QuatMatrix",
    "theta_h",
    "inverse_theta_h",
    "is_theta_h_image",
    "quat_exp",
    "re_trace",
    "sqrt_posdef_sl2",
    "so4_log",
    "so4_log_parts",
    "left_mult_matrix",
    "right_mult_matrix",
]

# Structure constants of the Hamilton product: (a*b)[r] = sum T[p, q, r] a[p] b[q].
_HAMILTON = np.zeros((4, 4, 4))
for _p, _q, _r, _s in [
    (0, 0, 0, 1), (0, 1, 1, 1), (0, 2, 2, 1), (0, 3, 3, 1),
    (1, 0, 1, 1), (1, 1, 0, -1), (1, 2, 3, 1), (1, 3, 2, -1),
    (2, 0, 2, 1), (2, 1, 3, -1), (2, 2, 0, -1), (2, 3, 1, 1),
    (3, 0, 3, 1), (3, 1, 2, 1), (3, 2, 1, -1), (3, 3, 0, -1),
]:
    _HAMILTON[_p, _q, _r] = _s

_CONJ = np.array([1.0, -1.0, -1.0, -1.0])


def _hamilton(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("...p,...q,pqr->...r", a, b, _HAMILTON)


@dataclass(frozen=True)
class Quaternion:
    """A real quaternion ``w + x i + y j + z k``."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, a: Sequence[float]) -> "Quaternion":
        w, x, y, z = (float(t) for t in a)
        return cls(w, x, y, z)

    def to_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z], dtype=float)

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion.from_array(self.to_array() + other.to_array())

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion.from_array(self.to_array() - other.to_array())

    def __neg__(self) -> "Quaternion":
        return Quaternion.from_array(-self.to_array())

    def __mul__(self, other: "Quaternion | float") -> "Quaternion":
        if isinstance(other, Quaternion):
            return Quaternion.from_array(_hamilton(self.to_array(), other.to_array()))
        return Quaternion.from_array(self.to_array() * float(other))

    def __rmul__(self, other: float) -> "Quaternion":
        return Quaternion.from_array(self.to_array() * float(other))

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return float(np.linalg.norm(self.to_array()))

    def inverse(self) -> "Quaternion":
        n2 = self.norm() ** 2
        if n2 == 0.0:
            raise ZeroDivisionError("zero quaternion has no inverse")
        return self.conj() * (1.0 / n2)


@dataclass(frozen=True, eq=False)
class QuatMatrix:
    """A dense matrix with quaternion entries, backed by a ``(r, c, 4)`` array."""

    data: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.data, dtype=float)
        if arr.ndim != 3 or arr.shape[2] != 4:
            raise InvariantError(f"quaternionic matrix data must have shape (r, c, 4), got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    # constructors -------------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "QuatMatrix":
        d = np.zeros((n, n, 4))
        d[np.arange(n), np.arange(n), 0] = 1.0
        return cls(d)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QuatMatrix":
        return cls(np.zeros((rows, cols, 4)))

    @classmethod
    def from_entries(cls, rows: Iterable[Iterable[Quaternion | Sequence[float] | float]]) -> "QuatMatrix":
        out = []
        for row in rows:
            r = []
            for e in row:
                if isinstance(e, Quaternion):
                    r.append(e.to_array())
                elif np.isscalar(e):
                    r.append(np.array([float(e), 0.0, 0.0, 0.0]))
                else:
                    r.append(np.asarray(e, dtype=float))
            out.append(r)
        return cls(np.array(out, dtype=float))

    @classmethod
    def from_real(cls, a: np.ndarray) -> "QuatMatrix":
        a = np.asarray(a, dtype=float)
        d = np.zeros(a.shape + (4,))
        d[..., 0] = a
        return cls(d)

    # basic properties ---------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape[0], self.data.shape[1]

    def __getitem__(self, idx: tuple[int, int]) -> Quaternion:
        return Quaternion.from_array(self.data[idx])

    def entries(self) -> list[list[Quaternion]]:
        return [[Quaternion.from_array(self.data[i, j]) for j in range(self.shape[1])] for i in range(self.shape[0])]

    # algebra ------------------------------------------------------------
    def __add__(self, other: "QuatMatrix") -> "QuatMatrix":
        return QuatMatrix(self.data + other.data)

    def __sub__(self, other: "QuatMatrix") -> "QuatMatrix":
        return QuatMatrix(self.data - other.data)

    def __neg__(self) -> "QuatMatrix":
        return QuatMatrix(-self.data)

    def __mul__(self, scalar: float) -> "QuatMatrix":
        return QuatMatrix(self.data * float(scalar))

    __rmul__ = __mul__

    def __matmul__(self, other: "QuatMatrix") -> "QuatMatrix":
        if self.shape[1] != other.shape[0]:
            raise InvariantError(f"shape mismatch {self.shape} @ {other.shape}")
        return QuatMatrix(np.einsum("ikp,kjq,pqr->ijr", self.data, other.data, _HAMILTON))

    def conj_transpose(self) -> "QuatMatrix":
        return QuatMatrix(np.transpose(self.data * _CONJ, (1, 0, 2)))

    @property
    def H(self) -> "QuatMatrix":
        return self.conj_transpose()

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.data - self.conj_transpose().data), initial=0.0) <= tol)

    def allclose(self, other: "QuatMatrix", atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.data, other.data, atol=atol, rtol=0.0))

    def __repr__(self) -> str:
        return f"QuatMatrix(shape={self.shape})"


def theta_h(X: QuatMatrix) -> np.ndarray:
    """Complex adjoint ``[[Z, W], [-conj(W), conj(Z)]]`` of ``X = Z + W j``."""
    d = X.data
    Z = d[..., 0] + 1j * d[..., 1]
    W = d[..., 2] + 1j * d[..., 3]
    return np.block([[Z, W], [-W.conj(), Z.conj()]])


def is_theta_h_image(C: np.ndarray, tol: float = 1e-12) -> bool:
    C = np.asarray(C)
    if C.ndim != 2 or C.shape[0] != C.shape[1] or C.shape[0] % 2:
        return False
    n = C.shape[0] // 2
    Z, W = C[:n, :n], C[:n, n:]
    return bool(
        np.max(np.abs(C[n:, :n] + W.conj()), initial=0.0) <= tol
        and np.max(np.abs(C[n:, n:] - Z.conj()), initial=0.0) <= tol
    )


def inverse_theta_h(C: np.ndarray, tol: float = 1e-9) -> QuatMatrix:
    """Recover ``X`` from its complex adjoint; rejects matrices without the block form."""
    C = np.asarray(C, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(C), initial=0.0)))
    if not is_theta_h_image(C, tol * scale):
        raise InvariantError("matrix is not of the form [[Z, W], [-conj(W), conj(Z)]]")
    n = C.shape[0] // 2
    Z, W = C[:n, :n], C[:n, n:]
    return QuatMatrix(np.stack([Z.real, Z.imag, W.real, W.imag], axis=-1))


def re_trace(X: QuatMatrix) -> float:
    """Real part of the trace; cyclic even though the trace itself is not."""
    r, c = X.shape
    if r != c:
        raise InvariantError("re_trace needs a square matrix")
    return float(np.trace(X.data[..., 0]))


def _exp_with_annihilator(A: np.ndarray, tol: float = 1e-12) -> np.ndarray | None:
    """Closed-form exponential when A^2 = cI or A^3 = -k^2 A; None otherwise."""
    n = A.shape[0]
    eye = np.eye(n)
    scale = max(1.0, float(np.max(np.abs(A), initial=0.0)) ** 2)
    A2 = A @ A
    c = np.trace(A2).real / n
    if np.max(np.abs(A2 - c * eye)) <= tol * scale:
        if c > 0:
            lam = np.sqrt(c)
            return np.cosh(lam) * eye + (np.sinh(lam) / lam) * A
        if c < 0:
            lam = np.sqrt(-c)
            return np.cos(lam) * eye + (np.sin(lam) / lam) * A
        return eye + A
    A3 = A2 @ A
    denom = np.vdot(A, A).real
    if denom == 0.0:
        return eye
    k2 = -np.vdot(A, A3).real / denom
    if k2 > 0 and np.max(np.abs(A3 + k2 * A)) <= tol * scale * max(1.0, np.sqrt(scale)):
        k = np.sqrt(k2)
        return eye + (np.sin(k) / k) * A + ((1.0 - np.cos(k)) / k2) * A2
    return None


def quat_exp(X: QuatMatrix) -> QuatMatrix:
    """Matrix exponential of a square quaternionic matrix.

    Evaluated on the complex adjoint: a closed form is used when a quadratic or
    cubic annihilating polynomial is detected, scaling-and-squaring otherwise.
    """
    r, c = X.shape
    if r != c:
        raise InvariantError("quat_exp needs a square matrix")
    A = theta_h(X)
    E = _exp_with_annihilator(A)
    if E is None:
        E = expm(A)
    return inverse_theta_h(E, tol=1e-8)


def sqrt_posdef_sl2(Z: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Square root of a symmetric positive definite 2x2 matrix of determinant one.

    Uses ``W = (Z + I) / sqrt(tr Z + 2)``, which needs no diagonalisation.
    """
    Z = np.asarray(Z, dtype=float)
    if Z.shape != (2, 2):
        raise InvariantError("sqrt_posdef_sl2 needs a 2x2 matrix")
    scale = max(1.0, float(np.max(np.abs(Z))))
    if abs(Z[0, 1] - Z[1, 0]) > tol * scale:
        raise InvariantError("matrix is not symmetric")
    det = Z[0, 0] * Z[1, 1] - Z[0, 1] * Z[1, 0]
    if abs(det - 1.0) > tol * scale**2:
        raise InvariantError(f"determinant {det!r} is not 1")
    if Z[0, 0] <= 0.0:
        raise InvariantError("matrix is not positive definite")
    return (Z + np.eye(2)) / np.sqrt(np.trace(Z) + 2.0)


# --- SO(4) logarithm ------------------------------------------------------

def left_mult_matrix(u: Sequence[float]) -> np.ndarray:
    """Real 4x4 matrix of ``x -> u x`` in the basis 1, i, j, k."""
    u = np.asarray(u, dtype=float)
    return np.einsum("p,pqr->rq", u, _HAMILTON)


def right_mult_matrix(v: Sequence[float]) -> np.ndarray:
    """Real 4x4 matrix of ``x -> x v`` in the basis 1, i, j, k."""
    v = np.asarray(v, dtype=float)
    return np.einsum("q,pqr->rp", v, _HAMILTON)


_E4 = np.eye(4)
_LR_BASIS = np.array([[left_mult_matrix(_E4[a]) @ right_mult_matrix(_E4[b] * _CONJ) for b in range(4)] for a in range(4)])


def _pure_log(u: np.ndarray) -> np.ndarray:
    """Pure quaternion p with exp(p) = u for a unit quaternion u != -1."""
    im = u[1:]
    s = float(np.linalg.norm(im))
    if s == 0.0:
        return np.zeros(3)
    lam = np.arctan2(s, u[0])
    return lam * im / s


def _y1(p: np.ndarray) -> np.ndarray:
    p1, p2, p3 = p
    return np.array([[0, -p1, -p2, -p3], [p1, 0, -p3, p2], [p2, p3, 0, -p1], [p3, -p2, p1, 0]], dtype=float)


def _y2(q: np.ndarray) -> np.ndarray:
    q1, q2, q3 = q
    return np.array([[0, q1, q2, q3], [-q1, 0, -q3, q2], [-q2, q3, 0, -q1], [-q3, -q2, q1, 0]], dtype=float)


def _check_so4(X: np.ndarray, tol: float) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.shape != (4, 4):
        raise InvariantError("so4_log needs a 4x4 matrix")
    if np.max(np.abs(X.T @ X - np.eye(4))) > tol:
        raise InvariantError("matrix is not orthogonal")
    if abs(np.linalg.det(X) - 1.0) > tol:
        raise InvariantError("matrix does not have determinant 1")
    return X


def so4_quaternion_pair(X: np.ndarray, tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
    """Unit quaternions (u, v) with ``X x = u x conj(v)``.

    The coefficient matrix ``C[a, b] = <L_{e_a} R_{conj e_b}, X> / 4`` equals
    the outer product ``u v^T``; it is factored through its largest column.
    """
    X = _check_so4(X, tol)
    C = np.einsum("abij,ij->ab", _LR_BASIS, X) / 4.0
    col = int(np.argmax(np.linalg.norm(C, axis=0)))
    u = C[:, col] / np.linalg.norm(C[:, col])
    v = C.T @ u
    v = v / np.linalg.norm(v)
    return u, v


def so4_log_parts(X: np.ndarray, tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
    """Commuting antisymmetric ``Y1`` (left-multiplication part) and ``Y2``
    (right-multiplication part) with ``Exp(Y1 + Y2) = X``."""
    u, v = so4_quaternion_pair(X, tol)
    one = 1.0 - 1e-12
    # (u, v) and (-u, -v) give the same X; prefer the sign that makes u or v equal +1.
    if abs(u[0]) >= one and u[0] < 0:
        u, v = -u, -v
    elif abs(v[0]) >= one and v[0] < 0 and abs(u[0]) < one:
        u, v = -u, -v
    if u[0] >= one and v[0] <= -one:
        # X = -I: both quaternions are real, so the generic formula has no branch.
        Z = np.array([[0.0, np.pi], [-np.pi, 0.0]])
        zero = np.zeros((2, 2))
        return np.block([[Z, zero], [zero, zero]]), np.block([[zero, zero], [zero, Z]])
    # after the sign choice neither u nor v is close to -1, so the logarithm
    # is well conditioned even for rotations far below the sign threshold
    return _y1(_pure_log(u)), _y2(_pure_log(v))


def so4_log(X: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Real antisymmetric logarithm of ``X`` in SO(4)."""
    Y1, Y2 = so4_log_parts(X, tol)
    return Y1 + Y2
