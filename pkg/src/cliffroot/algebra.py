"""Dense multivector arithmetic for real Clifford algebras Cl(p,q).

Basis blades are indexed by bitmasks over the generators e_1 .. e_n: bit k-1
set means e_k is a factor, and the blade's factors are written in ascending
index order.  A multivector is a length-2^n coefficient vector whose entry i
belongs to the blade with mask i.  The product of blades i and j lands on
blade ``i ^ j``; its sign is the parity of the transpositions needed to
interleave the factors, times e_k^2 = eps_k for every shared generator.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels

#: Arithmetic is generic in n but bounded; root classification stops at n = 4.
N_MAX = 6

#: Series tolerance and term cap for `exp` after argument scaling.
EXP_SERIES_TOL = 1e-14
EXP_SERIES_CAP = 64


class AlgebraError(Exception):
    """Base class for algebra-level errors."""


class SignatureMismatchError(AlgebraError):
    """Two multivectors from different Cl(p,q) were combined."""


class ExpConvergenceError(AlgebraError):
    """The exponential series did not converge (input too large or not finite)."""


@dataclass(frozen=True)
class Signature:
    """The pair (p, q): e_k^2 = +1 for k <= p and -1 for p < k <= p+q."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or not isinstance(self.q, int):
            raise TypeError("p and q must be integers")
        if self.p < 0 or self.q < 0:
            raise ValueError("p and q must be nonnegative")
        if not 1 <= self.p + self.q <= N_MAX:
            raise ValueError(f"need 1 <= p+q <= {N_MAX}, got p+q = {self.p + self.q}")

    @property
    def n(self) -> int:
        return self.p + self.q

    def eps(self, k: int) -> int:
        """Square of generator e_k (1-based index)."""
        if not 1 <= k <= self.n:
            raise ValueError(f"generator index {k} out of range 1..{self.n}")
        return 1 if k <= self.p else -1

    @property
    def eps_vector(self) -> tuple[int, ...]:
        return (1,) * self.p + (-1,) * self.q

    @property
    def dim(self) -> int:
        return 1 << self.n

    @property
    def label(self) -> str:
        return f"Cl({self.p},{self.q})"

    def __str__(self) -> str:
        return self.label


def blade_label(mask: int) -> str:
    """Canonical name of a basis blade: '1' for the scalar, else e.g. 'e134'."""
    if mask == 0:
        return "1"
    digits = [str(k + 1) for k in range(mask.bit_length()) if mask >> k & 1]
    return "e" + "".join(digits)


def blade_product(mask_a: int, mask_b: int, sig: Signature) -> tuple[int, int]:
    """Product of two basis blades: result mask and sign.

    The transposition count is the number of generator pairs (i in a, j in b)
    with i > j; summing popcounts of shifted masks counts exactly those pairs.
    Shared generators contract in adjacent pairs and contribute their eps_k.
    """
    swaps = 0
    x = mask_a >> 1
    while x:
        swaps += (x & mask_b).bit_count()
        x >>= 1
    sign = -1 if swaps & 1 else 1
    common = mask_a & mask_b
    k = 0
    while common:
        if common & 1 and k >= sig.p:
            sign = -sign
        common >>= 1
        k += 1
    return mask_a ^ mask_b, sign


class StructureTensor:
    """Cached multiplication table of the 2^n basis blades of one signature.

    ``signs[i, j]`` is the sign of blade_i * blade_j (the result mask is always
    ``i ^ j``).  Grade-filtered variants of the table drive the outer product
    and the left contraction through the same product kernel.
    """

    __slots__ = (
        "signature",
        "dim",
        "signs",
        "grades",
        "gp_table",
        "outer_table",
        "lcont_table",
        "diag_signs",
        "reverse_signs",
        "involution_signs",
        "conjugate_signs",
        "grade_masks",
    )

    def __init__(self, sig: Signature):
        self.signature = sig
        dim = sig.dim
        self.dim = dim
        signs = np.empty((dim, dim), dtype=np.int8)
        for i in range(dim):
            for j in range(dim):
                signs[i, j] = blade_product(i, j, sig)[1]
        signs.flags.writeable = False
        self.signs = signs

        grades = np.array([i.bit_count() for i in range(dim)], dtype=np.int8)
        grades.flags.writeable = False
        self.grades = grades

        idx = np.arange(dim)
        signs_f = signs.astype(np.float64)
        # outer product keeps disjoint blade pairs; the left contraction keeps
        # pairs where the left factors are a subset of the right ones
        disjoint = (idx[:, None] & idx[None, :]) == 0
        subset = (idx[:, None] & ~idx[None, :]) == 0
        self.gp_table = _kernels.make_product_table(signs_f)
        self.outer_table = _kernels.make_product_table(np.where(disjoint, signs_f, 0.0))
        self.lcont_table = _kernels.make_product_table(np.where(subset, signs_f, 0.0))

        self.diag_signs = signs_f.diagonal().copy()
        g = grades.astype(np.int64)
        self.reverse_signs = np.where(g * (g - 1) // 2 % 2 == 0, 1.0, -1.0)
        self.involution_signs = np.where(g % 2 == 0, 1.0, -1.0)
        self.conjugate_signs = np.where(g * (g + 1) // 2 % 2 == 0, 1.0, -1.0)
        for arr in (self.diag_signs, self.reverse_signs, self.involution_signs,
                    self.conjugate_signs):
            arr.flags.writeable = False
        self.grade_masks = tuple(grades == k for k in range(sig.n + 1))

    def sign(self, mask_a: int, mask_b: int) -> int:
        return int(self.signs[mask_a, mask_b])


_STRUCTURE_CACHE: dict[tuple[int, int], StructureTensor] = {}
_STRUCTURE_LOCK = threading.Lock()


def get_structure(sig: Signature) -> StructureTensor:
    """Read-through cache; safe for concurrent first use."""
    key = (sig.p, sig.q)
    table = _STRUCTURE_CACHE.get(key)
    if table is None:
        with _STRUCTURE_LOCK:
            table = _STRUCTURE_CACHE.get(key)
            if table is None:
                table = StructureTensor(sig)
                _STRUCTURE_CACHE[key] = table
    return table


class Multivector:
    """Immutable dense multivector: a 2^n coefficient vector over Cl(p,q)."""

    __slots__ = ("signature", "_coeffs")

    def __init__(self, signature: Signature, coeffs: Iterable[float]):
        arr = np.array(coeffs, dtype=np.float64)
        if arr.shape != (signature.dim,):
            raise ValueError(
                f"expected {signature.dim} coefficients for {signature}, got shape {arr.shape}"
            )
        arr.flags.writeable = False
        object.__setattr__(self, "signature", signature)
        object.__setattr__(self, "_coeffs", arr)

    @classmethod
    def _raw(cls, signature: Signature, arr: np.ndarray) -> "Multivector":
        """Wrap a freshly computed array without copying (internal)."""
        mv = object.__new__(cls)
        arr.flags.writeable = False
        object.__setattr__(mv, "signature", signature)
        object.__setattr__(mv, "_coeffs", arr)
        return mv

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, sig: Signature) -> "Multivector":
        return cls._raw(sig, np.zeros(sig.dim))

    @classmethod
    def scalar(cls, sig: Signature, value: float) -> "Multivector":
        arr = np.zeros(sig.dim)
        arr[0] = value
        return cls._raw(sig, arr)

    @classmethod
    def blade(cls, sig: Signature, mask: int, coeff: float = 1.0) -> "Multivector":
        if not 0 <= mask < sig.dim:
            raise ValueError(f"blade mask {mask} out of range for {sig}")
        arr = np.zeros(sig.dim)
        arr[mask] = coeff
        return cls._raw(sig, arr)

    @classmethod
    def vector(cls, sig: Signature, components: Sequence[float]) -> "Multivector":
        if len(components) != sig.n:
            raise ValueError(f"expected {sig.n} vector components")
        arr = np.zeros(sig.dim)
        for k, v in enumerate(components):
            arr[1 << k] = v
        return cls._raw(sig, arr)

    # arithmetic -----------------------------------------------------------

    def _check(self, other: "Multivector") -> None:
        if self.signature != other.signature:
            raise SignatureMismatchError(
                f"cannot combine {self.signature} with {other.signature}"
            )

    def __add__(self, other):
        if isinstance(other, Multivector):
            self._check(other)
            return Multivector._raw(self.signature, self._coeffs + other._coeffs)
        if isinstance(other, (int, float)):
            arr = self._coeffs.copy()
            arr[0] += other
            return Multivector._raw(self.signature, arr)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Multivector):
            self._check(other)
            return Multivector._raw(self.signature, self._coeffs - other._coeffs)
        if isinstance(other, (int, float)):
            arr = self._coeffs.copy()
            arr[0] -= other
            return Multivector._raw(self.signature, arr)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, float)):
            arr = -self._coeffs
            arr[0] += other
            return Multivector._raw(self.signature, arr)
        return NotImplemented

    def __neg__(self):
        return Multivector._raw(self.signature, -self._coeffs)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        if isinstance(other, (int, float)):
            return Multivector._raw(self.signature, self._coeffs * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return Multivector._raw(self.signature, self._coeffs * other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return Multivector._raw(self.signature, self._coeffs / other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.signature == other.signature and np.array_equal(
            self._coeffs, other._coeffs
        )

    def __hash__(self):
        return hash((self.signature, self._coeffs.tobytes()))

    def allclose(self, other: "Multivector", tol: float = 1e-12) -> bool:
        self._check(other)
        return bool(np.all(np.abs(self._coeffs - other._coeffs) <= tol))

    def norm(self) -> float:
        """Euclidean 2-norm of the coefficient vector."""
        return float(np.linalg.norm(self._coeffs))

    def grade(self, k: int) -> "Multivector":
        return grade_project(self, k)

    def scalar_part(self) -> float:
        return float(self._coeffs[0])

    def __repr__(self):
        from .mvio import format_mv

        return f"<{self.signature}: {format_mv(self)}>"


# operations ---------------------------------------------------------------


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    """The associative Clifford product of two multivectors."""
    a._check(b)
    table = get_structure(a.signature).gp_table
    return Multivector._raw(a.signature, _kernels.geometric_product(table, a.coeffs, b.coeffs))


def outer_product(a: Multivector, b: Multivector) -> Multivector:
    """Grade-raising part: per blade pair keeps the grade r+s component."""
    a._check(b)
    table = get_structure(a.signature).outer_table
    return Multivector._raw(a.signature, _kernels.geometric_product(table, a.coeffs, b.coeffs))


def left_contraction(a: Multivector, b: Multivector) -> Multivector:
    """Grade-lowering part: per blade pair keeps the grade s-r component."""
    a._check(b)
    table = get_structure(a.signature).lcont_table
    return Multivector._raw(a.signature, _kernels.geometric_product(table, a.coeffs, b.coeffs))


def scalar_product(a: Multivector, b: Multivector) -> float:
    """Scalar part of the geometric product."""
    a._check(b)
    diag = get_structure(a.signature).diag_signs
    return float(np.dot(diag * a.coeffs, b.coeffs))


def grade_project(a: Multivector, k: int) -> Multivector:
    st = get_structure(a.signature)
    if not 0 <= k <= a.signature.n:
        raise ValueError(f"grade {k} out of range 0..{a.signature.n}")
    return Multivector._raw(a.signature, np.where(st.grade_masks[k], a.coeffs, 0.0))


def grades(a: Multivector) -> list[Multivector]:
    return [grade_project(a, k) for k in range(a.signature.n + 1)]


def reverse(a: Multivector) -> Multivector:
    """Reverse the generator order in every blade: sign (-1)^(k(k-1)/2)."""
    st = get_structure(a.signature)
    return Multivector._raw(a.signature, st.reverse_signs * a.coeffs)


def grade_involution(a: Multivector) -> Multivector:
    """Flip odd grades: sign (-1)^k."""
    st = get_structure(a.signature)
    return Multivector._raw(a.signature, st.involution_signs * a.coeffs)


def conjugate(a: Multivector) -> Multivector:
    """Reversion composed with grade involution: sign (-1)^(k(k+1)/2)."""
    st = get_structure(a.signature)
    return Multivector._raw(a.signature, st.conjugate_signs * a.coeffs)


def pseudoscalar(sig: Signature) -> Multivector:
    return Multivector.blade(sig, sig.dim - 1)


def pseudoscalar_inverse(sig: Signature) -> Multivector:
    full = sig.dim - 1
    square = get_structure(sig).sign(full, full)
    return Multivector.blade(sig, full, float(square))


def dual(a: Multivector) -> Multivector:
    """Multiply by the inverse unit pseudoscalar (grade k -> n-k)."""
    return geometric_product(a, pseudoscalar_inverse(a.signature))


def exp(a: Multivector, tol: float = EXP_SERIES_TOL) -> Multivector:
    """Exponential by scaling and squaring with a truncated power series.

    General elements of Cl(p,q) need not square to a scalar, so no closed
    form is assumed; the argument is halved until its coefficient norm is
    below 1/2, the series is summed to `tol`, and the result squared back.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    nrm = a.norm()
    if not math.isfinite(nrm):
        raise ExpConvergenceError("input has non-finite coefficients")
    halvings = 0
    while nrm > 0.5:
        nrm /= 2.0
        halvings += 1
    x = a * (0.5**halvings)
    acc = Multivector.scalar(a.signature, 1.0)
    term = acc
    for k in range(1, EXP_SERIES_CAP + 1):
        term = geometric_product(term, x) / k
        acc = acc + term
        if term.norm() <= tol * max(1.0, acc.norm()):
            break
    else:
        raise ExpConvergenceError(
            f"series did not converge within {EXP_SERIES_CAP} terms"
        )
    for _ in range(halvings):
        acc = geometric_product(acc, acc)
    return acc


def signatures_with_dimension(n: int) -> list[Signature]:
    """All signatures with p+q = n, ordered Cl(n,0), Cl(n-1,1), ..., Cl(0,n)."""
    return [Signature(p, n - p) for p in range(n, -1, -1)]
