"""Grade-wise quadratic constraint systems for the root equation A*A = -1.

For a coefficient vector a over Cl(p,q), the blade-m coefficient of A*A is
the quadratic form a . Q_m . a where Q_m collects the structure signs of all
blade pairs multiplying onto m.  A is a square root of -1 exactly when
a.Q_0.a + 1 = 0 and a.Q_m.a = 0 for every m != 0.

Two constructions are provided: `derive_constraints` builds the forms from
the structure tensor, and `reference_system` transcribes the known hand
derivations (n <= 4) written in the classical coordinate groups

    alpha + b1 e1 + b2 e2 + b3 e3 + c1 e23 + c2 e31 + c3 e12 + beta e123

plus, for n = 4, a primed copy of the same groups multiplied by e4.  Note the
cyclic bivector coordinate c2 rides on e31 = -e13, so it maps to the negated
canonical e13 coefficient.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .algebra import Signature, SignatureMismatchError, blade_label, get_structure


class UnsupportedDimensionError(ValueError):
    """Operation only defined for p+q up to a bound (4 for reference data)."""


class ConstraintSystem:
    """One symmetric integer quadratic form per output blade mask."""

    __slots__ = ("signature", "forms", "_float_forms")

    def __init__(self, signature: Signature, forms: np.ndarray):
        forms = np.asarray(forms, dtype=np.int64)
        dim = signature.dim
        if forms.shape != (dim, dim, dim):
            raise ValueError(f"expected forms of shape {(dim, dim, dim)}")
        if not np.array_equal(forms, forms.transpose(0, 2, 1)):
            raise ValueError("each form must be symmetric")
        forms.flags.writeable = False
        object.__setattr__(self, "signature", signature)
        object.__setattr__(self, "forms", forms)
        object.__setattr__(self, "_float_forms", None)

    def __setattr__(self, name, value):
        raise AttributeError("ConstraintSystem is immutable")

    @property
    def dim(self) -> int:
        return self.signature.dim

    @property
    def root_form(self) -> np.ndarray:
        """The scalar-output form: a . root_form . a = -1 at a root."""
        return self.forms[0]

    @property
    def float_forms(self) -> np.ndarray:
        cached = self._float_forms
        if cached is None:
            cached = np.ascontiguousarray(self.forms, dtype=np.float64)
            cached.flags.writeable = False
            object.__setattr__(self, "_float_forms", cached)
        return cached


def derive_constraints(sig: Signature) -> ConstraintSystem:
    """Build the constraint system of A*A = -1 from the structure tensor."""
    st = get_structure(sig)
    dim = sig.dim
    signs = st.signs.astype(np.int64)
    idx = np.arange(dim)
    out_mask = idx[:, None] ^ idx[None, :]
    forms = np.zeros((dim, dim, dim), dtype=np.int64)
    forms[out_mask, idx[:, None], idx[None, :]] = signs
    forms = (forms + forms.transpose(0, 2, 1)) // 2
    return ConstraintSystem(sig, forms)


def systems_equal(a: ConstraintSystem, b: ConstraintSystem) -> bool:
    """Exact entrywise equality of every form."""
    if a.signature != b.signature:
        raise SignatureMismatchError(
            f"cannot compare systems over {a.signature} and {b.signature}"
        )
    return bool(np.array_equal(a.forms, b.forms))


# coordinate groups ---------------------------------------------------------

#: cyclic index -> (the other two indices, in cyclic order)
_CYCLIC = {1: (2, 3), 2: (3, 1), 3: (1, 2)}

#: cyclic bivector coordinate -> (canonical mask, orientation)
_C_MASKS = {1: (0b110, 1), 2: (0b101, -1), 3: (0b011, 1)}


def variable_map(sig: Signature) -> dict[str, tuple[int, int]]:
    """Classical coordinate names -> (canonical mask, orientation).

    The orientation s means: variable value = s * canonical coefficient.
    For n > 4 there is no classical naming; coordinates are a0, a1, a12, ...
    keyed by the blade's digit string.
    """
    n = sig.n
    if n > 4:
        return {("a0" if m == 0 else "a" + blade_label(m)[1:]): (m, 1)
                for m in range(sig.dim)}
    names: dict[str, tuple[int, int]] = {"alpha": (0, 1)}
    if n == 1:
        names["beta"] = (1, 1)
        return names
    for i in range(1, min(n, 3) + 1):
        names[f"b{i}"] = (1 << (i - 1), 1)
    if n == 2:
        names["beta"] = (0b11, 1)
        return names
    for i in (1, 2, 3):
        names[f"c{i}"] = _C_MASKS[i]
    names["beta"] = (0b111, 1)
    if n == 4:
        e4 = 0b1000
        names["alpha'"] = (e4, 1)
        for i in (1, 2, 3):
            names[f"b{i}'"] = ((1 << (i - 1)) | e4, 1)
        for i in (1, 2, 3):
            mask, orient = _C_MASKS[i]
            names[f"c{i}'"] = (mask | e4, orient)
        names["beta'"] = (0b1111, 1)
    return names


def _inverse_variable_map(sig: Signature) -> dict[int, tuple[str, int]]:
    return {mask: (name, s) for name, (mask, s) in variable_map(sig).items()}


class _RefBuilder:
    """Accumulates hand-transcribed equation terms into symmetric forms.

    `add(out, coef, a, b)` records the term coef*a*b in the equation attached
    to the output coordinate named `out`; all three names resolve through the
    classical variable map, so cyclic orientations are applied consistently on
    inputs and outputs.
    """

    def __init__(self, sig: Signature):
        self.sig = sig
        self.vars = variable_map(sig)
        dim = sig.dim
        self.forms = np.zeros((dim, dim, dim), dtype=np.int64)

    def add(self, out: str, coef: int, a: str, b: str) -> None:
        if coef == 0:
            return
        out_mask, out_sign = self.vars[out]
        i, sa = self.vars[a]
        j, sb = self.vars[b]
        c = out_sign * coef * sa * sb
        if i == j:
            self.forms[out_mask, i, i] += c
        else:
            if c % 2:
                raise AssertionError("cross terms must have even coefficients")
            self.forms[out_mask, i, j] += c // 2
            self.forms[out_mask, j, i] += c // 2

    def system(self) -> ConstraintSystem:
        return ConstraintSystem(self.sig, self.forms)


def reference_system(sig: Signature) -> ConstraintSystem:
    """Hand-coded constraint system in the classical coordinate groups.

    Transcribed equation by equation rather than computed, so that
    `systems_equal(derive_constraints(sig), reference_system(sig))` is a real
    cross-check of the product machinery against the published derivations.
    """
    n = sig.n
    if n > 4:
        raise UnsupportedDimensionError(f"reference data stops at n = 4, got n = {n}")
    eps = sig.eps_vector
    e = lambda k: eps[k - 1]  # noqa: E731 - 1-based signature lookup
    bld = _RefBuilder(sig)

    # scalar output: alpha^2 + b^2 + c^2 + beta^2 (e123)^2 for the unprimed
    # block; the primed block enters with eps4 and a grade-involution flip on
    # the odd groups (b', beta').
    bld.add("alpha", 1, "alpha", "alpha")
    if n == 1:
        bld.add("alpha", e(1), "beta", "beta")
        bld.add("beta", 2, "alpha", "beta")
        return bld.system()

    for i in range(1, min(n, 3) + 1):
        bld.add("alpha", e(i), f"b{i}", f"b{i}")
    if n == 2:
        bld.add("alpha", -e(1) * e(2), "beta", "beta")
        bld.add("b1", 2, "alpha", "b1")
        bld.add("b2", 2, "alpha", "b2")
        bld.add("beta", 2, "alpha", "beta")
        return bld.system()

    iota = -e(1) * e(2) * e(3)  # (e123)^2
    for i, (j, k) in _CYCLIC.items():
        bld.add("alpha", -e(j) * e(k), f"c{i}", f"c{i}")
    bld.add("alpha", iota, "beta", "beta")

    if n == 3:
        for i, (j, k) in _CYCLIC.items():
            # vector part: 2 alpha b_i + 2 beta (c e123)_i
            bld.add(f"b{i}", 2, "alpha", f"b{i}")
            bld.add(f"b{i}", -2 * e(j) * e(k), "beta", f"c{i}")
            # bivector part: 2 alpha c_i + 2 beta (b e123)_i
            bld.add(f"c{i}", 2, "alpha", f"c{i}")
            bld.add(f"c{i}", 2 * e(i), "beta", f"b{i}")
        # trivector part: 2 alpha beta + 2 b.c
        bld.add("beta", 2, "alpha", "beta")
        for i in (1, 2, 3):
            bld.add("beta", 2, f"b{i}", f"c{i}")
        return bld.system()

    # n = 4: remaining scalar terms
    e4 = e(4)
    bld.add("alpha", e4, "alpha'", "alpha'")
    for i in range(1, 4):
        bld.add("alpha", -e4 * e(i), f"b{i}'", f"b{i}'")
    for i, (j, k) in _CYCLIC.items():
        bld.add("alpha", -e4 * e(j) * e(k), f"c{i}'", f"c{i}'")
    bld.add("alpha", -e4 * iota, "beta'", "beta'")

    for i, (j, k) in _CYCLIC.items():
        # vector part: 2 alpha b_i + 2 beta (c e123)_i + 2 eps4 (b' . c')_i
        bld.add(f"b{i}", 2, "alpha", f"b{i}")
        bld.add(f"b{i}", -2 * e(j) * e(k), "beta", f"c{i}")
        bld.add(f"b{i}", 2 * e4 * e(k), f"b{k}'", f"c{j}'")
        bld.add(f"b{i}", -2 * e4 * e(j), f"b{j}'", f"c{k}'")
        # bivector part: 2 alpha c_i + 2 eps4 alpha' c'_i
        #                + 2 (beta b - eps4 beta' b')_i e123
        bld.add(f"c{i}", 2, "alpha", f"c{i}")
        bld.add(f"c{i}", 2 * e4, "alpha'", f"c{i}'")
        bld.add(f"c{i}", 2 * e(i), "beta", f"b{i}")
        bld.add(f"c{i}", -2 * e4 * e(i), "beta'", f"b{i}'")
        # e4-vector part: 2 alpha b'_i + 2 (b . c')_i + 2 beta' (c e123)_i
        bld.add(f"b{i}'", 2, "alpha", f"b{i}'")
        bld.add(f"b{i}'", 2 * e(k), f"b{k}", f"c{j}'")
        bld.add(f"b{i}'", -2 * e(j), f"b{j}", f"c{k}'")
        bld.add(f"b{i}'", -2 * e(j) * e(k), "beta'", f"c{i}")
        # e4-bivector part: 2 (b wedge b')_i + 2 alpha c'_i + 2 alpha' c_i
        bld.add(f"c{i}'", 2, f"b{j}", f"b{k}'")
        bld.add(f"c{i}'", -2, f"b{k}", f"b{j}'")
        bld.add(f"c{i}'", 2, "alpha", f"c{i}'")
        bld.add(f"c{i}'", 2, "alpha'", f"c{i}")

    # trivector part: 2 alpha beta + 2 b.c
    bld.add("beta", 2, "alpha", "beta")
    # e4-scalar part: 2 alpha alpha' + 2 c.c'
    bld.add("alpha'", 2, "alpha", "alpha'")
    # e4-trivector part: 2 alpha beta' + 2 b'.c
    bld.add("beta'", 2, "alpha", "beta'")
    for i, (j, k) in _CYCLIC.items():
        bld.add("beta", 2, f"b{i}", f"c{i}")
        bld.add("alpha'", -2 * e(j) * e(k), f"c{i}", f"c{i}'")
        bld.add("beta'", 2, f"b{i}'", f"c{i}")
    return bld.system()


# numerical evaluation ------------------------------------------------------


def _check_vector(sys: ConstraintSystem, a) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.shape != (sys.dim,):
        raise ValueError(f"expected coefficient vector of length {sys.dim}")
    return a


def residual(sys: ConstraintSystem, a) -> np.ndarray:
    """Per-blade residual of A*A = -1: (a.Q_0.a + 1, a.Q_1.a, ...)."""
    a = _check_vector(sys, a)
    values = _kernels.quad_values(sys.float_forms, a)
    values[0] += 1.0
    return values


def residual_norm(sys: ConstraintSystem, a) -> float:
    return float(np.linalg.norm(residual(sys, a)))


def jacobian(sys: ConstraintSystem, a) -> np.ndarray:
    """Exact gradient: row m is 2 Q_m a."""
    a = _check_vector(sys, a)
    return _kernels.quad_values_and_jacobian(sys.float_forms, a)[1]


def residual_and_jacobian(sys: ConstraintSystem, a) -> tuple[np.ndarray, np.ndarray]:
    a = _check_vector(sys, a)
    values, jac = _kernels.quad_values_and_jacobian(sys.float_forms, a)
    values[0] += 1.0
    return values, jac


# rendering and export ------------------------------------------------------


def _term_text(coef: int, factors: str) -> tuple[int, str]:
    mag = abs(coef)
    return coef, (factors if mag == 1 else f"{mag}*{factors}")


def form_to_text(sys: ConstraintSystem, mask: int) -> str:
    """The form as a polynomial in the classical coordinates; '0' if empty."""
    inv = _inverse_variable_map(sys.signature)
    q = sys.forms[mask]
    terms: list[tuple[int, str]] = []
    for i in range(sys.dim):
        name_i, si = inv[i]
        if q[i, i]:
            terms.append(_term_text(int(q[i, i]), f"{name_i}^2"))
        for j in range(i + 1, sys.dim):
            if q[i, j]:
                name_j, sj = inv[j]
                terms.append(_term_text(2 * int(q[i, j]) * si * sj,
                                        f"{name_i}*{name_j}"))
    return _join_terms(terms)


def _join_terms(terms: list[tuple[int, str]], trailing: int = 0) -> str:
    if trailing:
        terms = terms + [(trailing, None)]
    if not terms:
        return "0"
    parts = []
    for coef, body in terms:
        text = str(abs(coef)) if body is None else body
        if not parts:
            parts.append(f"-{text}" if coef < 0 else text)
        else:
            parts.append(f"- {text}" if coef < 0 else f"+ {text}")
    return " ".join(parts)


def constraints_to_text(sys: ConstraintSystem, style: str = "equations") -> str:
    """One deterministic line per output blade.

    style 'equations' appends '= 0' (the scalar line carries the root
    equation's +1); style 'polynomials' emits the bare forms.
    """
    if style not in ("equations", "polynomials"):
        raise ValueError(f"unknown style {style!r}")
    lines = []
    for mask in range(sys.dim):
        poly = form_to_text(sys, mask)
        if style == "equations":
            if mask == 0:
                poly = ("1" if poly == "0" else poly + " + 1") + " = 0"
            else:
                poly = poly + " = 0"
        lines.append(f"[{blade_label(mask)}] {poly}")
    return "\n".join(lines)


def root_equation_text(sys: ConstraintSystem, zero_masks=(), solve_pseudoscalar=False) -> str:
    """The root equation with the given coordinates set to zero.

    Rendered as '<poly> = -1', or solved for the squared pseudoscalar
    coordinate ('beta^2 = ...') when requested.  The root form is diagonal,
    so zeroing coordinates just drops their squares.  Terms follow the
    coordinate-group order (alpha, b, c, beta, then the primed groups).
    """
    names = variable_map(sys.signature)
    diag = sys.root_form.diagonal()
    zero = set(zero_masks)
    top = sys.dim - 1
    order = [(name, mask) for name, (mask, _) in names.items()
             if diag[mask] and mask not in zero]
    if solve_pseudoscalar:
        d = int(diag[top])
        if top in zero or d == 0:
            raise ValueError("pseudoscalar coordinate unavailable to solve for")
        terms = [(-int(diag[mask]) * d, f"{name}^2")
                 for name, mask in order if mask != top]
        top_name = next(name for name, (mask, _) in names.items() if mask == top)
        return f"{top_name}^2 = " + _join_terms(terms, trailing=-d)
    terms = [(int(diag[mask]), f"{name}^2") for name, mask in order]
    return _join_terms(terms) + " = -1"


JSON_CONVENTION = (
    "coef is the symmetric-matrix entry Q[i][j]; value(a) = a.Q.a, so every "
    "listed i < j term contributes twice"
)


def system_to_json_dict(sys: ConstraintSystem) -> dict:
    """Export schema: upper-triangle terms of every form."""
    forms = []
    for m in range(sys.dim):
        q = sys.forms[m]
        terms = [
            {"i": i, "j": j, "coef": int(q[i, j])}
            for i in range(sys.dim)
            for j in range(i, sys.dim)
            if q[i, j]
        ]
        forms.append({"mask": m, "terms": terms})
    return {
        "signature": [sys.signature.p, sys.signature.q],
        "convention": JSON_CONVENTION,
        "forms": forms,
    }
