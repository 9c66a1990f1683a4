"""Abstract Clifford algebras Cl(p, q) as coefficient vectors over blades.

A blade ``e_A = e_{a1} e_{a2} ... e_{ak}`` (``a1 < a2 < ... < ak``) is indexed
by the bitmask with bit ``a - 1`` set for every ``a`` in ``A``.  Generators
``e_1 .. e_p`` square to +1 and ``e_{p+1} .. e_n`` square to -1.

Coefficients are float64 by default.  Passing ``exact=True`` (or Fractions)
stores them as Python objects so products of rational multivectors are exact.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import InvariantError
from .indefinite_group import Signature

__all__ = [
    "Multivector",
    "blade_mask",
    "blade_indices",
    "blade_name",
    "blade_order",
    "product_sign_table",
    "geometric_product",
    "reversion",
    "grade_involution",
    "clifford_conjugate",
    "blade_inverse",
    "matrix_rep",
    "conjugation_matrix",
]

MAX_DIMENSION = 12


def blade_mask(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        if i < 1:
            raise InvariantError("blade indices are 1-based")
        m |= 1 << (i - 1)
    return m


def blade_indices(mask: int) -> tuple[int, ...]:
    out = []
    k = 1
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return tuple(out)


def blade_name(mask: int) -> str:
    return "1" if mask == 0 else "".join(f"e{i}" for i in blade_indices(mask))


def _popcount(a: np.ndarray) -> np.ndarray:
    a = a.astype(np.int64)
    c = np.zeros_like(a)
    while np.any(a):
        c += a & 1
        a = a >> 1
    return c


@lru_cache(maxsize=None)
def blade_order(n: int) -> tuple[int, ...]:
    """Blade masks sorted by grade, then lexicographically by index tuple."""
    return tuple(sorted(range(1 << n), key=lambda m: (bin(m).count("1"), blade_indices(m))))


@lru_cache(maxsize=None)
def product_sign_table(p: int, q: int) -> np.ndarray:
    """``S[a, b]`` with ``e_a e_b = S[a, b] e_{a xor b}``.

    The reordering sign counts, for every generator in ``b``, the generators of
    ``a`` with a larger index it has to pass; shared generators then contribute
    their square.
    """
    n = p + q
    if n > MAX_DIMENSION:
        raise InvariantError(f"dimension {n} exceeds the supported maximum {MAX_DIMENSION}")
    size = 1 << n
    a = np.arange(size, dtype=np.int64)[:, None]
    b = np.arange(size, dtype=np.int64)[None, :]
    swaps = np.zeros((size, size), dtype=np.int64)
    for k in range(n):
        bit_b = (b >> k) & 1
        swaps = swaps + bit_b * _popcount(a >> (k + 1))
    sign = np.where(swaps % 2 == 0, 1, -1).astype(np.int8)
    neg_mask = ((1 << n) - 1) ^ ((1 << p) - 1)
    common_neg = _popcount(a & b & neg_mask)
    sign = sign * np.where(common_neg % 2 == 0, 1, -1).astype(np.int8)
    return sign


@lru_cache(maxsize=None)
def _grades(n: int) -> np.ndarray:
    return _popcount(np.arange(1 << n))


class Multivector:
    """Element of Cl(p, q) stored as a dense coefficient vector over blade masks."""

    __slots__ = ("signature", "coeffs")

    def __init__(self, signature: Signature | Sequence[int], coeffs: Sequence | np.ndarray, exact: bool = False):
        sig = Signature.coerce(signature)
        if sig.n > MAX_DIMENSION:
            raise InvariantError(f"dimension {sig.n} exceeds the supported maximum {MAX_DIMENSION}")
        arr = np.asarray(coeffs)
        if arr.shape != (1 << sig.n,):
            raise InvariantError(f"expected {1 << sig.n} coefficients, got shape {arr.shape}")
        if exact or arr.dtype == object:
            arr = np.array([Fraction(c) if not isinstance(c, Fraction) else c for c in arr], dtype=object)
        else:
            arr = arr.astype(float)
        arr.setflags(write=False)
        self.signature = sig
        self.coeffs = arr

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, sig: Signature | Sequence[int], exact: bool = False) -> "Multivector":
        sig = Signature.coerce(sig)
        c = np.array([Fraction(0)] * (1 << sig.n), dtype=object) if exact else np.zeros(1 << sig.n)
        return cls(sig, c, exact)

    @classmethod
    def scalar(cls, sig: Signature | Sequence[int], value=1, exact: bool = False) -> "Multivector":
        return cls.blade(sig, (), value, exact)

    @classmethod
    def blade(cls, sig: Signature | Sequence[int], indices: Sequence[int], coeff=1, exact: bool = False) -> "Multivector":
        """``coeff * e_{i1} e_{i2} ...`` for arbitrary (possibly unsorted) indices."""
        sig = Signature.coerce(sig)
        if any(i < 1 or i > sig.n for i in indices):
            raise InvariantError(f"blade index out of range for {sig}")
        out = cls.scalar_unit(sig, exact)
        for i in indices:
            out = out * cls._generator(sig, i, exact)
        return out * (Fraction(coeff) if exact else coeff)

    @classmethod
    def scalar_unit(cls, sig: Signature, exact: bool) -> "Multivector":
        c = np.array([Fraction(0)] * (1 << sig.n), dtype=object) if exact else np.zeros(1 << sig.n)
        c[0] = Fraction(1) if exact else 1.0
        return cls(sig, c, exact)

    @classmethod
    def _generator(cls, sig: Signature, i: int, exact: bool) -> "Multivector":
        c = np.array([Fraction(0)] * (1 << sig.n), dtype=object) if exact else np.zeros(1 << sig.n)
        c[1 << (i - 1)] = Fraction(1) if exact else 1.0
        return cls(sig, c, exact)

    @classmethod
    def vector(cls, sig: Signature | Sequence[int], components: Sequence, exact: bool = False) -> "Multivector":
        """One-vector ``sum_i components[i-1] e_i``."""
        sig = Signature.coerce(sig)
        out = cls.zero(sig, exact)
        c = np.array(out.coeffs, dtype=object if exact else float)
        for i, v in enumerate(components):
            c[1 << i] = Fraction(v) if exact else float(v)
        return cls(sig, c, exact)

    # properties ---------------------------------------------------------
    @property
    def exact(self) -> bool:
        return self.coeffs.dtype == object

    @property
    def n(self) -> int:
        return self.signature.n

    def __getitem__(self, indices: Sequence[int] | int) -> float:
        if isinstance(indices, int):
            return self.coeffs[indices]
        return self.coeffs[blade_mask(indices)]

    def grade_part(self, k: int) -> "Multivector":
        c = np.array(self.coeffs)
        c[_grades(self.n) != k] = 0
        return Multivector(self.signature, c, self.exact)

    def scalar_part(self):
        return self.coeffs[0]

    def is_even(self, tol: float = 0.0) -> bool:
        odd = self.coeffs[_grades(self.n) % 2 == 1]
        return all(abs(c) <= tol for c in odd)

    def terms(self, tol: float = 0.0) -> list[tuple[int, object]]:
        """Nonzero (mask, coefficient) pairs in canonical blade order."""
        return [(m, self.coeffs[m]) for m in blade_order(self.n) if abs(self.coeffs[m]) > tol]

    def to_float(self) -> "Multivector":
        return Multivector(self.signature, np.array([float(c) for c in self.coeffs]))

    # arithmetic ---------------------------------------------------------
    def _check(self, other: "Multivector") -> None:
        if self.signature != other.signature:
            raise InvariantError(f"signature mismatch {self.signature} vs {other.signature}")

    def _coerce_pair(self, other: "Multivector") -> tuple[np.ndarray, np.ndarray, bool]:
        exact = self.exact and other.exact
        if exact:
            return self.coeffs, other.coeffs, True
        return self.coeffs.astype(float), other.coeffs.astype(float), False

    def __add__(self, other: "Multivector") -> "Multivector":
        self._check(other)
        a, b, exact = self._coerce_pair(other)
        return Multivector(self.signature, a + b, exact)

    def __sub__(self, other: "Multivector") -> "Multivector":
        self._check(other)
        a, b, exact = self._coerce_pair(other)
        return Multivector(self.signature, a - b, exact)

    def __neg__(self) -> "Multivector":
        return Multivector(self.signature, -self.coeffs, self.exact)

    def __mul__(self, other: "Multivector | float | int | Fraction") -> "Multivector":
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        return Multivector(self.signature, self.coeffs * other, self.exact)

    def __rmul__(self, other: float | int | Fraction) -> "Multivector":
        return Multivector(self.signature, self.coeffs * other, self.exact)

    def __truediv__(self, scalar: float | int | Fraction) -> "Multivector":
        if self.exact:
            return Multivector(self.signature, self.coeffs * (1 / Fraction(scalar)), True)
        return Multivector(self.signature, self.coeffs / scalar)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Multivector) or other.signature != self.signature:
            return NotImplemented
        return bool(all(a == b for a, b in zip(self.coeffs, other.coeffs)))

    __hash__ = None  # type: ignore[assignment]

    def allclose(self, other: "Multivector", atol: float = 1e-12) -> bool:
        self._check(other)
        return bool(np.max(np.abs(self.coeffs.astype(float) - other.coeffs.astype(float))) <= atol)

    def norm_inf(self) -> float:
        return float(np.max(np.abs(self.coeffs.astype(float))))

    def reverse(self) -> "Multivector":
        return reversion(self)

    def cc(self) -> "Multivector":
        return clifford_conjugate(self)

    def __repr__(self) -> str:
        parts = [f"{float(c):+.6g}*{blade_name(m)}" for m, c in self.terms()]
        return f"Multivector{self.signature}[{' '.join(parts) or '0'}]"


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    """Bilinear product determined by ``e_i^2 = +-1`` and anticommutation."""
    a._check(b)
    sig = a.signature
    S = product_sign_table(sig.p, sig.q)
    A, B, exact = a._coerce_pair(b)
    size = 1 << sig.n
    idx = np.arange(size)
    out = np.array([Fraction(0)] * size, dtype=object) if exact else np.zeros(size)
    for m in np.nonzero(A)[0] if not exact else [i for i in range(size) if A[i] != 0]:
        # e_m e_k = S[m, k] e_{m xor k}; xor by m is a permutation of the blades
        target = m ^ idx
        contrib = (S[m].astype(object) if exact else S[m]) * B * A[m]
        out[target] = out[target] + contrib
    return Multivector(sig, out, exact)


def _grade_signs(n: int, kind: str) -> np.ndarray:
    g = _grades(n)
    if kind == "rev":
        return np.where((g * (g - 1) // 2) % 2 == 0, 1, -1)
    if kind == "gr":
        return np.where(g % 2 == 0, 1, -1)
    return np.where((g * (g + 1) // 2) % 2 == 0, 1, -1)


def reversion(a: Multivector) -> Multivector:
    """Grade-k parts scaled by (-1)^{k(k-1)/2}."""
    s = _grade_signs(a.n, "rev")
    return Multivector(a.signature, a.coeffs * (s.astype(object) if a.exact else s), a.exact)


def grade_involution(a: Multivector) -> Multivector:
    """Grade-k parts scaled by (-1)^k."""
    s = _grade_signs(a.n, "gr")
    return Multivector(a.signature, a.coeffs * (s.astype(object) if a.exact else s), a.exact)


def clifford_conjugate(a: Multivector) -> Multivector:
    """Reversion composed with grade involution: (-1)^{k(k+1)/2} per grade."""
    s = _grade_signs(a.n, "cc")
    return Multivector(a.signature, a.coeffs * (s.astype(object) if a.exact else s), a.exact)


def blade_inverse(a: Multivector) -> Multivector:
    """Inverse of a nonzero multiple of a single blade."""
    nz = [m for m in range(1 << a.n) if a.coeffs[m] != 0]
    if len(nz) != 1:
        raise InvariantError("blade_inverse needs a nonzero multiple of exactly one blade")
    m = nz[0]
    c = a.coeffs[m]
    S = product_sign_table(a.signature.p, a.signature.q)
    square_sign = int(S[m, m])  # e_m e_m = square_sign * 1
    out = Multivector.zero(a.signature, a.exact)
    coeffs = np.array(out.coeffs)
    coeffs[m] = (Fraction(square_sign) / c) if a.exact else square_sign / c
    return Multivector(a.signature, coeffs, a.exact)


# --- matrix representations ------------------------------------------------

def _blade_matrices(mats: tuple[np.ndarray, ...]) -> list[np.ndarray]:
    n = len(mats)
    size = mats[0].shape[0] if n else 1
    dtype = np.result_type(*mats) if n else float
    out: list[np.ndarray] = [np.eye(size, dtype=dtype)]
    for m in range(1, 1 << n):
        hi = m.bit_length() - 1
        out.append(out[m ^ (1 << hi)] @ mats[hi])
    return out


def matrix_rep(a: Multivector, basis) -> np.ndarray:
    """Evaluate ``a`` with the basis matrices substituted for the generators.

    ``basis`` is a :class:`~spincover.clifford_bases.OneVectorBasis` (its
    complex/real numeric images are used) or a plain sequence of matrices.
    """
    mats = tuple(np.asarray(m) for m in (basis.numeric() if hasattr(basis, "numeric") else basis))
    sig = getattr(basis, "signature", a.signature)
    if Signature.coerce(sig) != a.signature or len(mats) != a.n:
        raise InvariantError("basis signature does not match the multivector")
    blades = _blade_matrices(mats)
    coeffs = a.coeffs.astype(float)
    out = np.zeros_like(blades[0], dtype=np.result_type(blades[0], float))
    for m in np.nonzero(coeffs)[0]:
        out = out + coeffs[m] * blades[m]
    return out


def conjugation_matrix(x: Multivector, tol: float = 1e-9) -> np.ndarray:
    """Matrix of ``v -> x v cc(x)`` on one-vectors, computed in the blade engine.

    Column j holds the one-vector coefficients of ``x e_j cc(x)``; the
    non-vector part of the image is checked against ``tol``.
    """
    sig = x.signature
    xc = clifford_conjugate(x)
    n = sig.n
    out = np.zeros((n, n))
    vec_masks = [1 << i for i in range(n)]
    for j in range(n):
        img = x * Multivector._generator(sig, j + 1, x.exact) * xc
        coeffs = img.coeffs.astype(float)
        out[:, j] = coeffs[vec_masks]
        rest = coeffs.copy()
        rest[vec_masks] = 0.0
        if np.max(np.abs(rest)) > tol * max(1.0, float(np.max(np.abs(coeffs)))):
            raise InvariantError("conjugation does not preserve one-vectors; element is not in the Clifford group")
    return out
