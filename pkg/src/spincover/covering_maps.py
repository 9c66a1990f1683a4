"""Concrete covering maps Spin+(p,q) -> SO+(p,q) and the (4,1) linearisation.

Spin elements are carried in compact form:

* (2,1): a 2x2 real matrix of determinant one;
* (2,2): a pair of such matrices, stored as an array of shape (2, 2, 2).  The
  first member holds the corner entries ``y1, y2, y7, y8`` of the 4x4
  embedding, the second the inner entries ``y3..y6``;
* (3,2): a 4x4 real matrix ``Y`` with ``Y^T M Y = M``, ``M = [[0, J], [J, 0]]``;
* (4,1): a 2x2 quaternionic matrix whose complex adjoint ``C`` satisfies
  ``C^* M C = M`` with ``M = (i sigma_y) (+) (-i sigma_y)``.

The generic map :func:`generic_phi` works for any cataloged basis: column ``j``
holds the coordinates of ``Y V_j Y^{-1}``, extracted with real-part trace inner
products divided by ``Re Tr(V_i^* V_i)``.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Sequence

import numpy as np
from scipy.linalg import expm

from .clifford_bases import OneVectorBasis, basis_for
from .core_linalg import QuatMatrix, inverse_theta_h, theta_h
from .errors import InvariantError, UnsupportedError
from .indefinite_group import STRUCTURE_TOL, Signature, is_in_lie_algebra

__all__ = [
    "SpinElement",
    "SpinAlgebraElement41",
    "CONCRETE_SIGNATURES",
    "M32",
    "M41",
    "embed_spin",
    "embed_21",
    "embed_21_printed",
    "embed_22",
    "embed_32",
    "extract_22",
    "extract_32",
    "phi",
    "phi_21",
    "phi_22",
    "phi_32",
    "phi_41",
    "psi_41",
    "psi_41_inverse",
    "generic_phi",
    "generic_psi",
    "relations_32",
    "random_spin_element",
    "sign_normalize",
]

CONCRETE_SIGNATURES = (Signature(2, 1), Signature(2, 2), Signature(3, 2), Signature(4, 1))

_J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
M32 = np.block([[np.zeros((2, 2)), _J2], [_J2, np.zeros((2, 2))]])
M41 = np.block([[_J2, np.zeros((2, 2))], [np.zeros((2, 2)), -_J2]]).astype(complex)

_PAYLOAD_SHAPES = {
    Signature(2, 1): (2, 2),
    Signature(2, 2): (2, 2, 2),
    Signature(3, 2): (4, 4),
    Signature(4, 1): (2, 2, 4),
}


def sign_normalize(a: np.ndarray, zero_tol: float = 1e-9) -> np.ndarray:
    """Flip the sign of ``a`` so that its first entry above ``zero_tol`` is positive.

    The scan is row-major; quaternionic arrays are scanned coefficient by
    coefficient, so the first nonzero quaternion coefficient ends up positive.
    """
    a = np.asarray(a)
    flat = a.real.ravel() if np.iscomplexobj(a) else a.ravel()
    for x in flat:
        if abs(x) > zero_tol:
            return a if x > 0 else -a
    return a


@dataclass(frozen=True, eq=False)
class SpinElement:
    """An element of Spin+(p,q) for one of the four concrete signatures."""

    signature: Signature
    payload: np.ndarray

    def __post_init__(self) -> None:
        sig = Signature.coerce(self.signature)
        object.__setattr__(self, "signature", sig)
        if sig not in _PAYLOAD_SHAPES:
            raise UnsupportedError(f"no concrete spin representation for {sig}")
        data = np.array(self.payload, dtype=float)
        if data.shape != _PAYLOAD_SHAPES[sig]:
            raise InvariantError(f"payload for {sig} must have shape {_PAYLOAD_SHAPES[sig]}, got {data.shape}")
        data.setflags(write=False)
        object.__setattr__(self, "payload", data)

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_matrix(cls, sig: Signature | Sequence[int] | str, Y) -> "SpinElement":
        """Build from the natural matrix form of a signature.

        (2,2) accepts the 4x4 embedding or a (2,2,2) pair; (4,1) accepts a
        :class:`QuatMatrix`, a (2,2,4) array or a 4x4 complex adjoint.
        """
        sig = Signature.coerce(sig)
        if sig == Signature(2, 2):
            Y = np.asarray(Y, dtype=float)
            return cls(sig, extract_22(Y) if Y.shape == (4, 4) else Y)
        if sig == Signature(4, 1):
            if isinstance(Y, QuatMatrix):
                return cls(sig, Y.data)
            Y = np.asarray(Y)
            if Y.shape == (4, 4):
                return cls(sig, inverse_theta_h(Y).data)
            return cls(sig, Y)
        return cls(sig, Y)

    @classmethod
    def identity(cls, sig: Signature | Sequence[int] | str) -> "SpinElement":
        sig = Signature.coerce(sig)
        if sig == Signature(2, 2):
            return cls(sig, np.stack([np.eye(2), np.eye(2)]))
        if sig == Signature(4, 1):
            return cls(sig, QuatMatrix.identity(2).data)
        return cls(sig, np.eye(_PAYLOAD_SHAPES[sig][0]))

    # -- representations ----------------------------------------------------

    def matrix(self) -> np.ndarray:
        """The natural matrix: 2x2, embedded 4x4, 4x4, or 4x4 complex adjoint."""
        sig = self.signature
        if sig == Signature(2, 2):
            return embed_22(self.payload)
        if sig == Signature(4, 1):
            return theta_h(QuatMatrix(self.payload))
        return np.array(self.payload)

    def quaternionic(self) -> QuatMatrix:
        if self.signature != Signature(4, 1):
            raise UnsupportedError("only (4,1) spin elements are quaternionic")
        return QuatMatrix(self.payload)

    def embedded(self) -> np.ndarray:
        return embed_spin(self)

    def invariant_residual(self) -> float:
        """Max-abs residual of the defining group relation(s)."""
        sig, y = self.signature, self.payload
        if sig == Signature(2, 1):
            return abs(float(np.linalg.det(y)) - 1.0)
        if sig == Signature(2, 2):
            return max(abs(float(np.linalg.det(y[0])) - 1.0), abs(float(np.linalg.det(y[1])) - 1.0))
        if sig == Signature(3, 2):
            return float(np.max(np.abs(y.T @ M32 @ y - M32)))
        C = self.matrix()
        return float(np.max(np.abs(C.conj().T @ M41 @ C - M41)))

    def check(self, tol: float = STRUCTURE_TOL) -> "SpinElement":
        scale = max(1.0, float(np.max(np.abs(self.payload)))) ** 2
        r = self.invariant_residual()
        if not r <= tol * scale:
            raise InvariantError(f"spin element violates the {self.signature} group relation (residual {r:.3g})")
        return self

    # -- group operations ---------------------------------------------------

    def __neg__(self) -> "SpinElement":
        return SpinElement(self.signature, -self.payload)

    def __matmul__(self, other: "SpinElement") -> "SpinElement":
        if other.signature != self.signature:
            raise InvariantError("cannot multiply spin elements of different signatures")
        sig = self.signature
        if sig == Signature(2, 2):
            return SpinElement(sig, np.einsum("kab,kbc->kac", self.payload, other.payload))
        if sig == Signature(4, 1):
            return SpinElement(sig, (QuatMatrix(self.payload) @ QuatMatrix(other.payload)).data)
        return SpinElement(sig, self.payload @ other.payload)

    def inverse(self) -> "SpinElement":
        sig = self.signature
        if sig == Signature(2, 2):
            return SpinElement(sig, np.linalg.inv(self.payload))
        if sig == Signature(4, 1):
            return SpinElement.from_matrix(sig, np.linalg.inv(self.matrix()))
        return SpinElement(sig, np.linalg.inv(self.payload))

    def sign_normalized(self) -> "SpinElement":
        """The member of ``{self, -self}`` selected by the global sign convention."""
        ref = self.matrix() if self.signature == Signature(2, 2) else self.payload
        return self if sign_normalize(ref) is ref else -self

    def distance(self, other: "SpinElement") -> float:
        return float(np.max(np.abs(self.payload - other.payload)))

    def distance_up_to_sign(self, other: "SpinElement") -> float:
        return min(self.distance(other), float(np.max(np.abs(self.payload + other.payload))))

    def to_json(self) -> dict:
        if self.signature == Signature(4, 1):
            entries = [[{"w": float(q[0]), "x": float(q[1]), "y": float(q[2]), "z": float(q[3])} for q in row] for row in self.payload]
            return {"signature": [4, 1], "kind": "quaternionic 2x2", "matrix": entries}
        if self.signature == Signature(2, 2):
            return {"signature": [2, 2], "kind": "pair of 2x2", "pair": self.payload.tolist(), "embedded": self.matrix().tolist()}
        return {"signature": [self.signature.p, self.signature.q], "kind": f"real {self.payload.shape[0]}x{self.payload.shape[1]}",
                "matrix": self.payload.tolist()}

    def __repr__(self) -> str:
        return f"SpinElement({self.signature}, payload_shape={self.payload.shape})"


# --- embeddings ----------------------------------------------------------

def embed_21(Y: np.ndarray) -> np.ndarray:
    """Even-grade 4x4 image of ``Y in SL(2,R)`` for the (2,1) basis.

    The blades 1, Y1Y2, Y1Y3, Y2Y3 span the even subalgebra, and this map is a
    unital algebra homomorphism (``I2 -> I4``).
    """
    y1, y2, y3, y4 = np.asarray(Y, dtype=float).ravel()
    return np.array([[y1, 0, y2, 0], [0, y1, 0, -y2], [y3, 0, y4, 0], [0, -y3, 0, y4]])


def embed_21_printed(Y: np.ndarray) -> np.ndarray:
    """The (2,1) embedding exactly as displayed in the source.

    It lands in the odd part (blades Y1, Y2, Y3, Y1Y2Y3) and is not
    multiplicative; it equals ``embed_21(Y) @ D`` with ``D = diag(1,-1,1,-1)``
    (the central pseudoscalar), so it induces the same conjugation action.
    """
    y1, y2, y3, y4 = np.asarray(Y, dtype=float).ravel()
    return np.array([[y1, 0, y2, 0], [0, -y1, 0, y2], [y3, 0, y4, 0], [0, y3, 0, -y4]])


def embed_22(pair: np.ndarray) -> np.ndarray:
    """4x4 image of a pair ``(A, B)``: A on the corners, B in the middle."""
    pair = np.asarray(pair, dtype=float)
    (y1, y2), (y7, y8) = pair[0]
    (y3, y4), (y5, y6) = pair[1]
    return np.array([[y1, 0, 0, y2], [0, y3, y4, 0], [0, y5, y6, 0], [y7, 0, 0, y8]])


def extract_22(E: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    E = np.asarray(E, dtype=float)
    mask = np.array([[0, 1, 1, 0], [1, 0, 0, 1], [1, 0, 0, 1], [0, 1, 1, 0]], dtype=bool)
    if E.shape != (4, 4) or np.max(np.abs(E[mask])) > tol * max(1.0, float(np.max(np.abs(E)))):
        raise InvariantError("matrix does not have the (2,2) embedding pattern")
    return np.stack([E[np.ix_([0, 3], [0, 3])], E[np.ix_([1, 2], [1, 2])]])


def embed_32(Y: np.ndarray) -> np.ndarray:
    """Interleaved 8x8 image ``Y -> Y^`` of a 4x4 spin element.

    Even rows/columns carry ``Y``; odd ones carry ``D Y D`` with
    ``D = diag(1, -1, -1, 1)``, so the map is multiplicative.
    """
    Y = np.asarray(Y, dtype=float)
    D = np.diag([1.0, -1.0, -1.0, 1.0])
    out = np.zeros((8, 8))
    out[0::2, 0::2] = Y
    out[1::2, 1::2] = D @ Y @ D
    return out


def extract_32(Yhat: np.ndarray) -> np.ndarray:
    return np.array(np.asarray(Yhat, dtype=float)[0::2, 0::2])


def embed_spin(Y: SpinElement) -> np.ndarray:
    """Matrix of ``Y`` in the Clifford algebra representation of its signature."""
    sig = Y.signature
    if sig == Signature(2, 1):
        return embed_21(Y.payload)
    if sig == Signature(2, 2):
        return embed_22(Y.payload)
    if sig == Signature(3, 2):
        return embed_32(Y.payload)
    return Y.matrix()


# --- forward maps --------------------------------------------------------

def _as_spin(sig: Signature, Y, check: bool, tol: float) -> SpinElement:
    el = Y if isinstance(Y, SpinElement) else SpinElement.from_matrix(sig, Y)
    if el.signature != sig:
        raise InvariantError(f"expected a {sig} spin element, got {el.signature}")
    return el.check(tol) if check else el


def phi_21(Y, check: bool = True, tol: float = STRUCTURE_TOL) -> np.ndarray:
    """Closed-form image of ``Y in SL(2,R)`` in SO+(2,1)."""
    y1, y2, y3, y4 = _as_spin(Signature(2, 1), Y, check, tol).payload.ravel()
    return np.array([
        [1 + 2 * y2 * y3, y2 * y4 - y1 * y3, -(y1 * y3 + y2 * y4)],
        [y3 * y4 - y1 * y2, 0.5 * (y1**2 - y2**2 - y3**2 + y4**2), 0.5 * (y1**2 + y2**2 - y3**2 - y4**2)],
        [-(y1 * y2 + y3 * y4), 0.5 * (y1**2 - y2**2 + y3**2 - y4**2), 0.5 * (y1**2 + y2**2 + y3**2 + y4**2)],
    ])


def phi_22(Y, check: bool = True, tol: float = STRUCTURE_TOL) -> np.ndarray:
    """The sixteen-entry bilinear table for SL(2,R) x SL(2,R) -> SO+(2,2)."""
    pair = _as_spin(Signature(2, 2), Y, check, tol).payload
    (y1, y2), (y7, y8) = pair[0]
    (y3, y4), (y5, y6) = pair[1]
    d = np.empty((4, 4))
    d[0, 0] = 0.5 * (y2 * y5 + y1 * y6 + y4 * y7 + y3 * y8)
    d[1, 0] = 0.5 * (y6 * y7 + y5 * y8 - y2 * y3 - y1 * y4)
    d[2, 0] = 0.5 * (y2 * y5 + y1 * y6 - y4 * y7 - y3 * y8)
    d[3, 0] = -0.5 * (y2 * y3 + y1 * y4 + y6 * y7 + y5 * y8)
    d[0, 1] = 0.5 * (y2 * y6 - y1 * y5 - y3 * y7 + y4 * y8)
    d[1, 1] = 0.5 * (y1 * y3 - y2 * y4 - y5 * y7 + y6 * y8)
    d[2, 1] = 0.5 * (y2 * y6 - y1 * y5 + y3 * y7 - y4 * y8)
    d[3, 1] = 0.5 * (y1 * y3 - y2 * y4 + y5 * y7 - y6 * y8)
    d[0, 2] = 0.5 * (y1 * y6 - y2 * y5 + y4 * y7 - y3 * y8)
    d[1, 2] = 0.5 * (y2 * y3 - y1 * y4 + y6 * y7 - y5 * y8)
    d[2, 2] = 0.5 * (y1 * y6 - y2 * y5 - y4 * y7 + y3 * y8)
    d[3, 2] = 0.5 * (y2 * y3 - y1 * y4 - y6 * y7 + y5 * y8)
    d[0, 3] = -0.5 * (y1 * y5 + y2 * y6 + y3 * y7 + y4 * y8)
    d[1, 3] = 0.5 * (y1 * y3 + y2 * y4 - y5 * y7 - y6 * y8)
    d[2, 3] = 0.5 * (y3 * y7 + y4 * y8 - y1 * y5 - y2 * y6)
    d[3, 3] = 0.5 * (y1 * y3 + y2 * y4 + y5 * y7 + y6 * y8)
    return d


def relations_32(Y: np.ndarray) -> np.ndarray:
    """The six quadratic relations f1..f6 cutting out Spin+(3,2) (zero on the group)."""
    y = np.concatenate([[np.nan], np.asarray(Y, dtype=float).ravel()])
    return np.array([
        y[1] * y[16] - y[4] * y[13] - y[5] * y[12] + y[8] * y[9] - 1,
        y[2] * y[16] - y[4] * y[14] - y[6] * y[12] + y[8] * y[10],
        y[3] * y[16] - y[4] * y[15] - y[7] * y[12] + y[8] * y[11],
        y[1] * y[15] - y[3] * y[13] - y[5] * y[11] + y[7] * y[9],
        y[2] * y[15] - y[3] * y[14] - y[6] * y[11] + y[7] * y[10] + 1,
        y[1] * y[14] - y[2] * y[13] - y[5] * y[10] + y[6] * y[9],
    ])


def phi_32(Y, check: bool = True, tol: float = STRUCTURE_TOL) -> np.ndarray:
    """The twenty-five-entry quadratic table for Spin+(3,2) -> SO+(3,2)."""
    el = _as_spin(Signature(3, 2), Y, check, tol)
    if check:
        r = float(np.max(np.abs(relations_32(el.payload))))
        if r > tol * max(1.0, float(np.max(np.abs(el.payload)))) ** 2:
            raise InvariantError(f"relations f1..f6 violated (residual {r:.3g})")
    y = np.concatenate([[np.nan], el.payload.ravel()])
    m = np.empty((5, 5))
    m[0, 0] = .5 * (-y[10] * y[13] - y[12] * y[15] + y[11] * y[16] - y[2] * y[5] + y[1] * y[6] - y[4] * y[7] + y[3] * y[8] + y[14] * y[9])
    m[1, 0] = .5 * (-y[1] * y[10] - y[12] * y[3] + y[11] * y[4] + y[14] * y[5] - y[13] * y[6] + y[16] * y[7] - y[15] * y[8] + y[2] * y[9])
    m[2, 0] = y[10] * y[5] + y[12] * y[7] - y[11] * y[8] - y[6] * y[9]
    m[3, 0] = .5 * (y[10] * y[13] + y[12] * y[15] - y[11] * y[16] - y[2] * y[5] + y[1] * y[6] - y[4] * y[7] + y[3] * y[8] - y[14] * y[9])
    m[4, 0] = .5 * (-y[1] * y[10] - y[12] * y[3] + y[11] * y[4] - y[14] * y[5] + y[13] * y[6] - y[16] * y[7] + y[15] * y[8] + y[2] * y[9])
    m[0, 1] = .5 * (y[11] * y[13] - y[12] * y[14] + y[10] * y[16] + y[3] * y[5] - y[4] * y[6] - y[1] * y[7] + y[2] * y[8] - y[15] * y[9])
    m[1, 1] = .5 * (y[1] * y[11] - y[12] * y[2] + y[10] * y[4] - y[15] * y[5] + y[16] * y[6] + y[13] * y[7] - y[14] * y[8] - y[3] * y[9])
    m[2, 1] = -y[11] * y[5] + y[12] * y[6] - y[10] * y[8] + y[7] * y[9]
    m[3, 1] = .5 * (-y[11] * y[13] + y[12] * y[14] - y[10] * y[16] + y[3] * y[5] - y[4] * y[6] - y[1] * y[7] + y[2] * y[8] + y[15] * y[9])
    m[4, 1] = .5 * (y[1] * y[11] - y[12] * y[2] + y[10] * y[4] + y[15] * y[5] - y[16] * y[6] - y[13] * y[7] + y[14] * y[8] - y[3] * y[9])
    m[0, 2] = -y[11] * y[14] + y[10] * y[15] - y[3] * y[6] + y[2] * y[7]
    m[1, 2] = -y[11] * y[2] + y[10] * y[3] + y[15] * y[6] - y[14] * y[7]
    m[2, 2] = -1 + 2 * y[11] * y[6] - 2 * y[10] * y[7]
    m[3, 2] = y[11] * y[14] - y[10] * y[15] - y[3] * y[6] + y[2] * y[7]
    m[4, 2] = -y[11] * y[2] + y[10] * y[3] - y[15] * y[6] + y[14] * y[7]
    m[0, 3] = .5 * (-y[10] * y[13] + y[12] * y[15] - y[11] * y[16] - y[2] * y[5] + y[1] * y[6] + y[4] * y[7] - y[3] * y[8] + y[14] * y[9])
    m[1, 3] = .5 * (-y[1] * y[10] + y[12] * y[3] - y[11] * y[4] + y[14] * y[5] - y[13] * y[6] - y[16] * y[7] + y[15] * y[8] + y[2] * y[9])
    m[2, 3] = y[10] * y[5] - y[12] * y[7] + y[11] * y[8] - y[6] * y[9]
    m[3, 3] = .5 * (y[10] * y[13] - y[12] * y[15] + y[11] * y[16] - y[2] * y[5] + y[1] * y[6] + y[4] * y[7] - y[3] * y[8] - y[14] * y[9])
    m[4, 3] = .5 * (-y[1] * y[10] + y[12] * y[3] - y[11] * y[4] - y[14] * y[5] + y[13] * y[6] + y[16] * y[7] - y[15] * y[8] + y[2] * y[9])
    m[0, 4] = .5 * (y[11] * y[13] + y[12] * y[14] - y[10] * y[16] + y[3] * y[5] + y[4] * y[6] - y[1] * y[7] - y[2] * y[8] - y[15] * y[9])
    m[1, 4] = .5 * (y[1] * y[11] + y[12] * y[2] - y[10] * y[4] - y[15] * y[5] - y[16] * y[6] + y[13] * y[7] + y[14] * y[8] - y[3] * y[9])
    m[2, 4] = -y[11] * y[5] - y[12] * y[6] + y[10] * y[8] + y[7] * y[9]
    m[3, 4] = .5 * (-y[11] * y[13] - y[12] * y[14] + y[10] * y[16] + y[3] * y[5] + y[4] * y[6] - y[1] * y[7] - y[2] * y[8] + y[15] * y[9])
    m[4, 4] = .5 * (y[1] * y[11] + y[12] * y[2] - y[10] * y[4] + y[15] * y[5] + y[16] * y[6] - y[13] * y[7] - y[14] * y[8] - y[3] * y[9])
    return m


def phi_41(Y, check: bool = True, tol: float = STRUCTURE_TOL) -> np.ndarray:
    """Image in SO+(4,1), computed by the generic conjugation oracle.

    Uses the working (4,1) basis, whose second element is the negative of the
    printed one (see :mod:`spincover.clifford_bases`).
    """
    el = _as_spin(Signature(4, 1), Y, check, tol)
    return generic_phi(basis_for((4, 1)), el.matrix())


def phi(Y: SpinElement, check: bool = True, tol: float = STRUCTURE_TOL) -> np.ndarray:
    """Dispatch to the concrete covering map of ``Y.signature``."""
    fn = {Signature(2, 1): phi_21, Signature(2, 2): phi_22, Signature(3, 2): phi_32, Signature(4, 1): phi_41}
    return fn[Y.signature](Y, check=check, tol=tol)


# --- generic oracle --------------------------------------------------------

def _basis_matrices(basis: OneVectorBasis | Sequence[np.ndarray]) -> list[np.ndarray]:
    if isinstance(basis, OneVectorBasis):
        return basis.numeric()
    return [np.asarray(m) for m in basis]


def _coordinates(mats: list[np.ndarray], W: np.ndarray, tol: float) -> np.ndarray:
    norms = np.array([np.trace(V.conj().T @ V).real for V in mats])
    c = np.array([np.trace(V.conj().T @ W).real for V in mats]) / norms
    recon = sum((ci * V for ci, V in zip(c, mats)), np.zeros_like(W))
    scale = max(1.0, float(np.max(np.abs(W))))
    resid = float(np.max(np.abs(W - recon)))
    if resid > tol * scale:
        raise InvariantError(
            f"image leaves the real span of the one-vectors (residual {resid:.3g}); "
            "the element is not in the spin group for this basis"
        )
    return c


def _as_rep_matrix(Y) -> np.ndarray:
    if isinstance(Y, SpinElement):
        return embed_spin(Y)
    if isinstance(Y, QuatMatrix):
        return theta_h(Y)
    return np.asarray(Y)


def generic_phi(basis: OneVectorBasis | Sequence[np.ndarray], Y, tol: float = 1e-8) -> np.ndarray:
    """Matrix of ``v -> Y v Y^{-1}`` on the real span of the basis.

    ``Y`` is a representation matrix (or a :class:`SpinElement` /
    :class:`QuatMatrix`, which are converted); on the spin group
    ``Y^{cc} = Y^{-1}``.
    """
    mats = _basis_matrices(basis)
    Y = _as_rep_matrix(Y)
    if Y.shape != mats[0].shape:
        raise InvariantError(f"spin matrix shape {Y.shape} does not match basis matrices {mats[0].shape}")
    Yi = np.linalg.inv(Y)
    return np.column_stack([_coordinates(mats, Y @ V @ Yi, tol) for V in mats])


def generic_psi(basis: OneVectorBasis | Sequence[np.ndarray], Lam, tol: float = 1e-8) -> np.ndarray:
    """Matrix of ``v -> Lam v - v Lam`` on the real span of the basis."""
    mats = _basis_matrices(basis)
    Lam = _as_rep_matrix(Lam)
    return np.column_stack([_coordinates(mats, Lam @ V - V @ Lam, tol) for V in mats])


# --- (4,1) Lie algebra -----------------------------------------------------

@dataclass(frozen=True)
class SpinAlgebraElement41:
    """Ten real parameters of ``Lam = Z + W j`` in the Lie algebra of Spin+(4,1).

    ``Z = [[a1 + i a2, b], [c, -a1 + i a2]]`` and
    ``W = [[alpha1 + i alpha2, beta1 + i beta2], [gamma1 + i gamma2, -alpha1 - i alpha2]]``.
    """

    a1: float = 0.0
    a2: float = 0.0
    b: float = 0.0
    c: float = 0.0
    alpha1: float = 0.0
    alpha2: float = 0.0
    beta1: float = 0.0
    beta2: float = 0.0
    gamma1: float = 0.0
    gamma2: float = 0.0

    @classmethod
    def from_vector(cls, v: Sequence[float]) -> "SpinAlgebraElement41":
        v = [float(x) for x in v]
        if len(v) != 10:
            raise InvariantError("a (4,1) Lie algebra element has ten parameters")
        return cls(*v)

    def to_vector(self) -> np.ndarray:
        return np.array([getattr(self, f.name) for f in fields(self)])

    def theta_h(self) -> np.ndarray:
        Z = np.array([[self.a1 + 1j * self.a2, self.b], [self.c, -self.a1 + 1j * self.a2]])
        W = np.array([[self.alpha1 + 1j * self.alpha2, self.beta1 + 1j * self.beta2],
                      [self.gamma1 + 1j * self.gamma2, -self.alpha1 - 1j * self.alpha2]])
        return np.block([[Z, W], [-W.conj(), Z.conj()]])

    def quaternionic(self) -> QuatMatrix:
        return inverse_theta_h(self.theta_h())

    def __mul__(self, t: float) -> "SpinAlgebraElement41":
        return SpinAlgebraElement41.from_vector(self.to_vector() * t)

    __rmul__ = __mul__

    def lie_residual(self) -> float:
        """Residual of ``Lam^* M = -M Lam``."""
        L = self.theta_h()
        return float(np.max(np.abs(L.conj().T @ M41 + M41 @ L)))

    def exp(self) -> SpinElement:
        """Group element ``Exp(Lam)`` (general purpose; inversion uses closed forms)."""
        return SpinElement.from_matrix((4, 1), expm(self.theta_h()))


def psi_41(lam: SpinAlgebraElement41) -> np.ndarray:
    """The linear isomorphism from the (4,1) spin Lie algebra onto so(4,1)."""
    a1, a2, b, c, al1, al2, be1, be2, ga1, ga2 = lam.to_vector()
    return np.array([
        [0.0, be2 + ga2, -b + c, be1 + ga1, -2 * a1],
        [-be2 - ga2, 0.0, -2 * al2, 2 * a2, -be2 + ga2],
        [b - c, 2 * al2, 0.0, 2 * al1, b + c],
        [-be1 - ga1, -2 * a2, -2 * al1, 0.0, -be1 + ga1],
        [-2 * a1, -be2 + ga2, b + c, -be1 + ga1, 0.0],
    ])


def psi_41_inverse(L: np.ndarray, tol: float = STRUCTURE_TOL) -> SpinAlgebraElement41:
    """Read the ten parameters back off an so(4,1) matrix."""
    L = np.asarray(L, dtype=float)
    if L.shape != (5, 5) or not is_in_lie_algebra(L, (4, 1), tol):
        raise InvariantError("matrix is not in so(4,1)")
    lam = SpinAlgebraElement41.from_vector([
        -L[0, 4] / 2,
        L[1, 3] / 2,
        (L[2, 0] + L[2, 4]) / 2,
        (L[2, 4] - L[2, 0]) / 2,
        L[2, 3] / 2,
        L[2, 1] / 2,
        (L[0, 3] - L[3, 4]) / 2,
        (L[0, 1] - L[1, 4]) / 2,
        (L[0, 3] + L[3, 4]) / 2,
        (L[0, 1] + L[1, 4]) / 2,
    ])
    resid = float(np.max(np.abs(psi_41(lam) - L)))
    if resid > tol * max(1.0, float(np.max(np.abs(L)))):
        raise InvariantError(f"psi_41 round trip failed (residual {resid:.3g})")
    return lam


# --- random sampling ---------------------------------------------------------

def random_spin_element(sig: Signature | Sequence[int] | str, rng: np.random.Generator, scale: float = 1.0) -> SpinElement:
    """Exponential of a random Lie algebra element of the given spin group."""
    sig = Signature.coerce(sig)
    if sig == Signature(2, 1):
        A = rng.normal(scale=scale, size=(2, 2))
        A[1, 1] = -A[0, 0]
        return SpinElement(sig, expm(A))
    if sig == Signature(2, 2):
        A = rng.normal(scale=scale, size=(2, 2, 2))
        A[:, 1, 1] = -A[:, 0, 0]
        return SpinElement(sig, np.stack([expm(A[0]), expm(A[1])]))
    if sig == Signature(3, 2):
        S = rng.normal(scale=scale, size=(4, 4))
        S = (S + S.T) / 2
        return SpinElement(sig, expm(np.linalg.solve(M32, S)))
    if sig == Signature(4, 1):
        lam = SpinAlgebraElement41.from_vector(rng.normal(scale=scale, size=10))
        return lam.exp()
    raise UnsupportedError(f"no concrete spin representation for {sig}")
