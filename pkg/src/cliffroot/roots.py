"""The catalog of multivector square roots of -1 for p+q <= 4.

Coordinates follow the classical grouping: for n = 3 a multivector is

    alpha + b + c + beta e123,   b a vector, c a bivector (cyclic basis),

and for n = 4 it splits along the last generator as

    alpha + b + c + beta e123 + (alpha' + b' + c' + beta' e123) e4,

with b, b', c, c' living in the subalgebra of e1, e2, e3.  Each family in the
catalog fixes a vanishing pattern of these groups, computes its dependent
groups from the free ones, and satisfies the scalar root equation either by
solving for one magnitude (n <= 3) or by rescaling the whole element (n = 4;
every case's root equation is homogeneous of degree two in the free
parameters, so a sign check plus one scaling reaches -1 exactly).

Useful cyclic-coordinate facts (eps_k = e_k^2):
    b wedge b'  <->  the Euclidean cross product of the coefficient triples,
    b . c = 0   <->  c proportional to (eps_1 b_1, eps_2 b_2, eps_3 b_3),
    b wedge c   =   (b_1 c_1 + b_2 c_2 + b_3 c_3) e123  (Euclidean dot).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .algebra import (
    Multivector,
    Signature,
    geometric_product,
    get_structure,
)
from .constraints import UnsupportedDimensionError

#: Attempt bound for rejection sampling; exceeding it signals an empty or
#: very thin existence region at the requested scale.
REJECTION_CAP = 10_000

#: Relative margin keeping constructions away from the existence boundary,
#: where the normalizing rescale would amplify roundoff.
EXISTENCE_MARGIN = 1e-6


class RootsError(Exception):
    """Base class for root-catalog errors."""


class CaseSignatureError(RootsError):
    """The case does not exist over the given signature."""


class ExistenceRegionError(RootsError):
    """Free parameters fall outside the family's existence region."""


class DegenerateParamError(RootsError):
    """A parameter the case requires to be nonzero (or independent) is not."""


class RejectionCapError(RootsError):
    """Rejection sampling exhausted its attempt budget."""


class NotARootError(RootsError):
    """classify() was handed a multivector that does not square to -1."""


class ConstructionError(RootsError):
    """Internal consistency guard tripped; indicates a bug, not bad input."""


class RootCase(enum.Enum):
    """Solution families, named by their defining vanishing pattern."""

    N1_NEG = "N1_NEG"
    N2_A0 = "N2_A0"
    N3_A0B0 = "N3_A0B0"
    N3_PSEUDO = "N3_PSEUDO"
    N4_A0_APN0 = "N4_A0_APN0"
    N4_Z_BP0_B0 = "N4_Z_BP0_B0"
    N4_Z_BP0_BPN0 = "N4_Z_BP0_BPN0"
    N4_Z_BP0_BN0 = "N4_Z_BP0_BN0"
    N4_Z_BPN0_B0_BE0 = "N4_Z_BPN0_B0_BE0"
    N4_Z_BPN0_B0_BEN0 = "N4_Z_BPN0_B0_BEN0"
    N4_Z_BPN0_BN0_BE0 = "N4_Z_BPN0_BN0_BE0"
    N4_Z_BPN0_BN0_BEN0 = "N4_Z_BPN0_BN0_BEN0"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class VerifyReport:
    """Result of checking A*A = -1."""

    is_root: bool
    residual_norm: float
    per_grade: tuple[float, ...]
    tol: float


def verify(a: Multivector, tol: float = 1e-9) -> VerifyReport:
    """Square the element and report the per-grade norms of A*A + 1."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    res = geometric_product(a, a).coeffs.copy()
    res[0] += 1.0
    st = get_structure(a.signature)
    per_grade = tuple(
        float(np.linalg.norm(res[st.grade_masks[k]]))
        for k in range(a.signature.n + 1)
    )
    total = float(np.linalg.norm(res))
    return VerifyReport(total <= tol, total, per_grade, tol)


# coordinate groups ---------------------------------------------------------

_B_MASKS = (0b001, 0b010, 0b100)
_C_MASKS = (0b110, 0b101, 0b011)       # e23, e13, e12
_C_ORIENT = np.array([1.0, -1.0, 1.0])  # c2 rides on e31 = -e13


def split_groups(a: Multivector) -> dict:
    """Classical coordinate groups of a multivector, n <= 4."""
    n = a.signature.n
    if n > 4:
        raise UnsupportedDimensionError("coordinate groups are defined for n <= 4")
    co = a.coeffs
    groups: dict = {"alpha": float(co[0])}
    if n == 1:
        groups["beta"] = float(co[1])
        return groups
    if n == 2:
        groups["b"] = np.array([co[1], co[2]])
        groups["beta"] = float(co[3])
        return groups
    groups["b"] = np.array([co[m] for m in _B_MASKS])
    groups["c"] = np.array([co[m] for m in _C_MASKS]) * _C_ORIENT
    groups["beta"] = float(co[0b111])
    if n == 4:
        e4 = 0b1000
        groups["alpha_p"] = float(co[e4])
        groups["b_p"] = np.array([co[m | e4] for m in _B_MASKS])
        groups["c_p"] = np.array([co[m | e4] for m in _C_MASKS]) * _C_ORIENT
        groups["beta_p"] = float(co[0b1111])
    return groups


def assemble_groups(sig: Signature, **groups) -> Multivector:
    """Inverse of `split_groups`; omitted groups are zero."""
    n = sig.n
    if n > 4:
        raise UnsupportedDimensionError("coordinate groups are defined for n <= 4")
    co = np.zeros(sig.dim)
    co[0] = groups.get("alpha", 0.0)
    if n == 1:
        co[1] = groups.get("beta", 0.0)
        return Multivector(sig, co)
    b = np.asarray(groups.get("b", np.zeros(min(n, 3))), dtype=np.float64)
    if n == 2:
        co[1], co[2] = b
        co[3] = groups.get("beta", 0.0)
        return Multivector(sig, co)
    c = np.asarray(groups.get("c", np.zeros(3)), dtype=np.float64)
    for k in range(3):
        co[_B_MASKS[k]] = b[k]
        co[_C_MASKS[k]] = c[k] * _C_ORIENT[k]
    co[0b111] = groups.get("beta", 0.0)
    if n == 4:
        e4 = 0b1000
        co[e4] = groups.get("alpha_p", 0.0)
        b_p = np.asarray(groups.get("b_p", np.zeros(3)), dtype=np.float64)
        c_p = np.asarray(groups.get("c_p", np.zeros(3)), dtype=np.float64)
        for k in range(3):
            co[_B_MASKS[k] | e4] = b_p[k]
            co[_C_MASKS[k] | e4] = c_p[k] * _C_ORIENT[k]
        co[0b1111] = groups.get("beta_p", 0.0)
    return Multivector(sig, co)


# arithmetic on the e1/e2/e3 block, in classical coordinates ----------------


def _eps3(sig: Signature) -> np.ndarray:
    return np.array(sig.eps_vector[:3], dtype=np.float64)


def _vsq(eps, v) -> float:
    """Square of a vector: sum eps_k v_k^2."""
    return float(np.dot(eps * v, v))


def _bsq(eps, x) -> float:
    """Square of a bivector in cyclic coordinates."""
    e1, e2, e3 = eps
    return float(-(e2 * e3 * x[0] ** 2 + e3 * e1 * x[1] ** 2 + e1 * e2 * x[2] ** 2))


def _biv_dot(eps, x, y) -> float:
    """Symmetric inner product of two bivectors."""
    e1, e2, e3 = eps
    return float(-(e2 * e3 * x[0] * y[0] + e3 * e1 * x[1] * y[1] + e1 * e2 * x[2] * y[2]))


def _v_dot_biv(eps, v, x) -> np.ndarray:
    """Left contraction of a vector into a bivector (a vector)."""
    return -np.cross(eps * v, x)


def _v_mul_i3(eps, v) -> np.ndarray:
    """v e123 as a bivector: component-wise eps_k v_k."""
    return eps * v


def _iota(sig: Signature) -> float:
    """(e123)^2 = -eps1 eps2 eps3."""
    e = sig.eps_vector
    return float(-e[0] * e[1] * e[2])


def _plane_project(seed, b) -> np.ndarray:
    """Euclidean projection of `seed` onto the plane with b1 c1 + b2 c2 + b3 c3 = 0."""
    nb2 = float(np.dot(b, b))
    if nb2 == 0.0:
        return np.asarray(seed, dtype=np.float64).copy()
    return seed - (np.dot(seed, b) / nb2) * b


def _line_project(eps, seed, b) -> np.ndarray:
    """Euclidean projection of `seed` onto the line of (eps_1 b_1, eps_2 b_2, eps_3 b_3)."""
    u = eps * b
    nu2 = float(np.dot(u, u))
    if nu2 == 0.0:
        return np.zeros(3)
    return (np.dot(seed, u) / nu2) * u


# case registry --------------------------------------------------------------


@dataclass(frozen=True)
class CaseInfo:
    """Catalog metadata for one solution family."""

    case: "RootCase"
    n: int
    applies: Callable[[Signature], bool]
    conditions: str
    constraints: str
    #: masks zeroed by the case conditions (drives the table rendering)
    zero_masks: tuple[int, ...]
    #: (name, kind) of the free parameters; kinds: sign, scalar,
    #: scalar_nonzero, vec3, vec3_nonzero
    param_spec: tuple[tuple[str, str], ...]
    #: closed-form solution text for point families, else None
    solutions: Optional[str] = None


def _n3_pseudo_applies(sig: Signature) -> bool:
    e = sig.eps_vector
    return sig.n == 3 and e[0] * e[1] * e[2] == 1


def _n4_bp0_bn0_applies(sig: Signature) -> bool:
    # In Cl(0,4) the root equation of this case, beta^2 (e123)^2 + eps4 c'^2
    # - eps4 beta'^2 (e123)^2, is positive definite, so no roots exist there.
    return sig.n == 4 and (sig.p, sig.q) != (0, 4)


_VEC_SPEC = (("b", "vec3"), ("c", "vec3"), ("c_p", "vec3"))

CASES: dict[RootCase, CaseInfo] = {
    RootCase.N1_NEG: CaseInfo(
        RootCase.N1_NEG, 1, lambda s: (s.p, s.q) == (0, 1),
        "alpha = 0", "beta = +/-1",
        zero_masks=(0,),
        param_spec=(("sigma", "sign"),),
        solutions="A = +/-e1",
    ),
    RootCase.N2_A0: CaseInfo(
        RootCase.N2_A0, 2, lambda s: s.n == 2,
        "alpha = 0", "",
        zero_masks=(0,),
        param_spec=(("b1", "scalar"), ("b2", "scalar"), ("sigma", "sign")),
    ),
    RootCase.N3_A0B0: CaseInfo(
        RootCase.N3_A0B0, 3, lambda s: s.n == 3,
        "alpha = 0, beta = 0", "b1*c1 + b2*c2 + b3*c3 = 0",
        zero_masks=(0, 0b111),
        param_spec=(("b", "vec3"), ("c", "vec3"), ("sigma", "sign")),
    ),
    RootCase.N3_PSEUDO: CaseInfo(
        RootCase.N3_PSEUDO, 3, _n3_pseudo_applies,
        "alpha = 0, beta != 0", "b = 0, c = 0, eps1*eps2*eps3 = 1",
        zero_masks=(0, 1, 2, 3, 4, 5, 6),
        param_spec=(("sigma", "sign"),),
        solutions="A = +/-e123",
    ),
    RootCase.N4_A0_APN0: CaseInfo(
        RootCase.N4_A0_APN0, 4, lambda s: s.n == 4,
        "alpha = 0, alpha' != 0",
        "c = (1/alpha') b' ^ b; c' = (1/alpha') (beta' b' - eps4 beta b) e123",
        zero_masks=(0,),
        param_spec=(("alpha_p", "scalar_nonzero"), ("beta", "scalar"),
                    ("beta_p", "scalar"), ("b", "vec3"), ("b_p", "vec3")),
    ),
    RootCase.N4_Z_BP0_B0: CaseInfo(
        RootCase.N4_Z_BP0_B0, 4, lambda s: s.n == 4,
        "alpha = alpha' = 0, b' = 0, beta = beta' = 0",
        "c . c' = 0; b . c' = 0; b ^ c = 0",
        zero_masks=(0, 0b1000, 0b1001, 0b1010, 0b1100, 0b111, 0b1111),
        param_spec=_VEC_SPEC,
    ),
    RootCase.N4_Z_BP0_BPN0: CaseInfo(
        RootCase.N4_Z_BP0_BPN0, 4, lambda s: s.n == 4,
        "alpha = alpha' = 0, b' = 0, beta = 0, beta' != 0",
        "c = -(1/beta') (b . c') e123^-1",
        zero_masks=(0, 0b1000, 0b1001, 0b1010, 0b1100, 0b111),
        param_spec=(("beta_p", "scalar_nonzero"), ("b", "vec3"), ("c_p", "vec3")),
    ),
    RootCase.N4_Z_BP0_BN0: CaseInfo(
        RootCase.N4_Z_BP0_BN0, 4, _n4_bp0_bn0_applies,
        "alpha = alpha' = 0, b' = 0, beta != 0",
        "b = 0, c = 0",
        zero_masks=(0, 0b1000, 0b1001, 0b1010, 0b1100, 1, 2, 4, 3, 5, 6),
        param_spec=(("beta", "scalar_nonzero"), ("beta_p", "scalar"), ("c_p", "vec3")),
    ),
    RootCase.N4_Z_BPN0_B0_BE0: CaseInfo(
        RootCase.N4_Z_BPN0_B0_BE0, 4, lambda s: s.n == 4,
        "alpha = alpha' = 0, b' != 0, b = 0, beta = 0",
        "beta' = 0; c . c' = 0; b' . c' = 0; b' ^ c = 0",
        zero_masks=(0, 0b1000, 1, 2, 4, 0b111, 0b1111),
        param_spec=(("b_p", "vec3_nonzero"), ("c", "vec3"), ("c_p", "vec3")),
    ),
    RootCase.N4_Z_BPN0_B0_BEN0: CaseInfo(
        RootCase.N4_Z_BPN0_B0_BEN0, 4, lambda s: s.n == 4,
        "alpha = alpha' = 0, b' != 0, b = 0, beta != 0",
        "c = -(eps4/beta) (b' . c') e123^-1; beta' = 0",
        zero_masks=(0, 0b1000, 1, 2, 4, 0b1111),
        param_spec=(("beta", "scalar_nonzero"), ("b_p", "vec3_nonzero"),
                    ("c_p", "vec3")),
    ),
    RootCase.N4_Z_BPN0_BN0_BE0: CaseInfo(
        RootCase.N4_Z_BPN0_BN0_BE0, 4, lambda s: s.n == 4,
        "alpha = alpha' = 0, b' != 0, b != 0, beta = 0",
        "b' = gamma b (gamma != 0); beta' = 0; c . c' = 0; b ^ c = 0; b . c' = 0",
        zero_masks=(0, 0b1000, 0b111, 0b1111),
        param_spec=(("b", "vec3_nonzero"), ("gamma", "scalar_nonzero"),
                    ("c", "vec3"), ("c_p", "vec3")),
    ),
    RootCase.N4_Z_BPN0_BN0_BEN0: CaseInfo(
        RootCase.N4_Z_BPN0_BN0_BEN0, 4, lambda s: s.n == 4,
        "alpha = alpha' = 0, b' != 0, b != 0, beta != 0",
        "beta' != 0; b' = eps4 (beta/beta') b; c = -(1/beta') (b . c') e123^-1",
        zero_masks=(0, 0b1000),
        param_spec=(("beta", "scalar_nonzero"), ("beta_p", "scalar_nonzero"),
                    ("b", "vec3_nonzero"), ("c_p", "vec3")),
    ),
}


def catalog_pairs() -> list[tuple[RootCase, Signature]]:
    """Every (case, signature) pair admitted by the catalog."""
    from .algebra import signatures_with_dimension

    pairs = []
    for case, info in CASES.items():
        for sig in signatures_with_dimension(info.n):
            if info.applies(sig):
                pairs.append((case, sig))
    return pairs


# construction ---------------------------------------------------------------


def _get_params(info: CaseInfo, params: dict) -> dict:
    clean = {}
    names = {name for name, _ in info.param_spec}
    unknown = set(params) - names
    if unknown:
        raise ValueError(f"unknown parameters for {info.case}: {sorted(unknown)}")
    missing = names - set(params)
    if missing:
        raise ValueError(f"missing parameters for {info.case}: {sorted(missing)}")
    for name, kind in info.param_spec:
        value = params[name]
        if kind in ("vec3", "vec3_nonzero"):
            arr = np.asarray(value, dtype=np.float64)
            if arr.shape != (3,):
                raise ValueError(f"parameter {name!r} must have 3 components")
            if kind == "vec3_nonzero" and not arr.any():
                raise DegenerateParamError(f"{info.case} requires {name} != 0")
            clean[name] = arr
        else:
            x = float(value)
            if kind == "sign":
                if x not in (-1.0, 1.0):
                    raise ValueError(f"parameter {name!r} must be +1 or -1")
            elif kind == "scalar_nonzero" and x == 0.0:
                raise DegenerateParamError(f"{info.case} requires {name} != 0")
            clean[name] = x
    return clean


def _finish_scaled(sig: Signature, groups: dict) -> Multivector:
    """Assemble, check the square is scalar, and rescale it onto -1."""
    a = assemble_groups(sig, **groups)
    square = geometric_product(a, a).coeffs
    s = float(square[0])
    ref = 1.0 + float(np.dot(a.coeffs, a.coeffs))
    if float(np.linalg.norm(square[1:])) > 1e-8 * ref:
        raise ConstructionError(
            "constructed element does not square to a scalar; case formulas broken"
        )
    if not (s < 0.0 and -s >= EXISTENCE_MARGIN * ref):
        raise ExistenceRegionError(
            f"square evaluates to {s}; parameters outside the existence region"
        )
    return a / math.sqrt(-s)


def construct(case: RootCase, sig: Signature, params: dict) -> Multivector:
    """Build a root of -1 from the free parameters of one catalog family."""
    info = CASES[case]
    if not info.applies(sig):
        raise CaseSignatureError(f"{case} has no roots over {sig}")
    p = _get_params(info, params)
    eps = _eps3(sig) if sig.n >= 3 else None

    if case is RootCase.N1_NEG:
        return assemble_groups(sig, beta=p["sigma"])

    if case is RootCase.N2_A0:
        e1, e2 = sig.eps_vector
        radicand = e2 * p["b1"] ** 2 + e1 * p["b2"] ** 2 + e1 * e2
        if radicand < 0.0:
            raise ExistenceRegionError(
                f"beta^2 = {radicand} < 0; parameters outside the existence region"
            )
        beta = p["sigma"] * math.sqrt(radicand)
        return assemble_groups(sig, b=[p["b1"], p["b2"]], beta=beta)

    if case is RootCase.N3_PSEUDO:
        return assemble_groups(sig, beta=p["sigma"])

    if case is RootCase.N3_A0B0:
        b = p["b"]
        target = -1.0 - _vsq(eps, b)
        if target == 0.0:
            c = np.zeros(3)
        else:
            w = _plane_project(p["c"], b)
            if not w.any():
                raise DegenerateParamError("bivector seed lies along b")
            wsq = _bsq(eps, w)
            if wsq == 0.0 or target / wsq < 0.0:
                raise ExistenceRegionError(
                    "no bivector magnitude solves the root equation here"
                )
            c = p["sigma"] * math.sqrt(target / wsq) * w
        return assemble_groups(sig, b=b, c=c)

    # n = 4 families: fill the dependent groups, then rescale onto -1
    eps4 = float(sig.eps_vector[3])
    iota = _iota(sig)

    if case is RootCase.N4_A0_APN0:
        ap, beta, beta_p = p["alpha_p"], p["beta"], p["beta_p"]
        b, b_p = p["b"], p["b_p"]
        c = np.cross(b_p, b) / ap
        c_p = _v_mul_i3(eps, beta_p * b_p - eps4 * beta * b) / ap
        return _finish_scaled(sig, dict(alpha_p=ap, beta=beta, beta_p=beta_p,
                                        b=b, b_p=b_p, c=c, c_p=c_p))

    if case is RootCase.N4_Z_BP0_B0:
        b = p["b"]
        if b.any():
            c = _plane_project(p["c"], b)
            c_p = _line_project(eps, p["c_p"], b)
        else:
            # with b = 0 only c . c' = 0 remains; orthogonalize the seed
            c = p["c"].copy()
            csq = _biv_dot(eps, c, c)
            d = _biv_dot(eps, c, p["c_p"])
            if csq != 0.0:
                c_p = p["c_p"] - (d / csq) * c
            elif d == 0.0:
                c_p = p["c_p"].copy()
            else:
                raise ExistenceRegionError("cannot orthogonalize c' against a null c")
        return _finish_scaled(sig, dict(b=b, c=c, c_p=c_p))

    if case is RootCase.N4_Z_BP0_BPN0:
        beta_p, b, c_p = p["beta_p"], p["b"], p["c_p"]
        c = -(iota / beta_p) * _v_mul_i3(eps, _v_dot_biv(eps, b, c_p))
        return _finish_scaled(sig, dict(beta_p=beta_p, b=b, c=c, c_p=c_p))

    if case is RootCase.N4_Z_BP0_BN0:
        return _finish_scaled(sig, dict(beta=p["beta"], beta_p=p["beta_p"],
                                        c_p=p["c_p"]))

    if case is RootCase.N4_Z_BPN0_B0_BE0:
        b_p = p["b_p"]
        c = _plane_project(p["c"], b_p)
        c_p = _line_project(eps, p["c_p"], b_p)
        return _finish_scaled(sig, dict(b_p=b_p, c=c, c_p=c_p))

    if case is RootCase.N4_Z_BPN0_B0_BEN0:
        beta, b_p, c_p = p["beta"], p["b_p"], p["c_p"]
        c = -(eps4 * iota / beta) * _v_mul_i3(eps, _v_dot_biv(eps, b_p, c_p))
        return _finish_scaled(sig, dict(beta=beta, b_p=b_p, c=c, c_p=c_p))

    if case is RootCase.N4_Z_BPN0_BN0_BE0:
        b, gamma = p["b"], p["gamma"]
        c = _plane_project(p["c"], b)
        c_p = _line_project(eps, p["c_p"], b)
        return _finish_scaled(sig, dict(b=b, b_p=gamma * b, c=c, c_p=c_p))

    if case is RootCase.N4_Z_BPN0_BN0_BEN0:
        beta, beta_p, b, c_p = p["beta"], p["beta_p"], p["b"], p["c_p"]
        b_p = eps4 * (beta / beta_p) * b
        c = -(iota / beta_p) * _v_mul_i3(eps, _v_dot_biv(eps, b, c_p))
        return _finish_scaled(sig, dict(beta=beta, beta_p=beta_p, b=b, b_p=b_p,
                                        c=c, c_p=c_p))

    raise AssertionError(f"unhandled case {case}")


def sample(case: RootCase, sig: Signature, rng_seed=0, scale: float = 1.0) -> Multivector:
    """Draw one family member: free parameters uniform in [-scale, scale],
    rejected until the existence region holds.  Deterministic given the seed.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")
    info = CASES[case]
    if not info.applies(sig):
        raise CaseSignatureError(f"{case} has no roots over {sig}")
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) \
        else np.random.default_rng(rng_seed)
    # Over Cl(1,1) the region b2^2 >= 1 + b1^2 has measure zero inside the
    # unit box, so sampling switches charts: draw (b1, beta) and solve for
    # b2 instead (always possible there).  construct() still re-solves beta
    # from (b1, b2) and lands on the same element.
    if case is RootCase.N2_A0 and sig.eps_vector == (1, -1):
        b1 = rng.uniform(-scale, scale)
        beta = rng.uniform(-scale, scale)
        sign_b2 = 1.0 if rng.random() < 0.5 else -1.0
        b2 = sign_b2 * math.sqrt(beta * beta + b1 * b1 + 1.0)
        sigma = 1.0 if beta == 0.0 else _sign_of(beta)
        return construct(case, sig, {"b1": b1, "b2": b2, "sigma": sigma})
    for _ in range(REJECTION_CAP):
        params = {}
        for name, kind in info.param_spec:
            if kind == "sign":
                params[name] = 1.0 if rng.random() < 0.5 else -1.0
            elif kind in ("vec3", "vec3_nonzero"):
                params[name] = rng.uniform(-scale, scale, 3)
            else:
                params[name] = rng.uniform(-scale, scale)
        try:
            return construct(case, sig, params)
        except (ExistenceRegionError, DegenerateParamError):
            continue
    raise RejectionCapError(
        f"no {case} sample over {sig} within {REJECTION_CAP} attempts at scale {scale}"
    )


# classification --------------------------------------------------------------


def _sign_of(x: float) -> float:
    return -1.0 if x < 0 else 1.0


def classify(a: Multivector, tol: float = 1e-9):
    """Match a verified root against the catalog's case tree.

    Returns (case, params) with the recovered free parameters, or None if no
    vanishing pattern fits (which no genuine root should trigger).  A group
    vanishes when its norm is below tol * max(1, |A|).  Where patterns
    overlap on family boundaries the most specific case (more vanishing
    groups) wins.
    """
    report = verify(a, tol)
    if not report.is_root:
        raise NotARootError(
            f"not a root of -1: residual norm {report.residual_norm}"
        )
    n = a.signature.n
    if n > 4:
        raise UnsupportedDimensionError("classification is defined for n <= 4")
    g = split_groups(a)
    cutoff = tol * max(1.0, a.norm())
    gone = lambda key: float(np.linalg.norm(g[key])) <= cutoff  # noqa: E731

    if not gone("alpha"):
        return None
    if n == 1:
        return RootCase.N1_NEG, {"sigma": _sign_of(g["beta"])}
    if n == 2:
        sigma = 1.0 if abs(g["beta"]) <= cutoff else _sign_of(g["beta"])
        return RootCase.N2_A0, {"b1": g["b"][0], "b2": g["b"][1], "sigma": sigma}
    if n == 3:
        if gone("beta"):
            return RootCase.N3_A0B0, {"b": g["b"], "c": g["c"], "sigma": 1.0}
        if gone("b") and gone("c"):
            return RootCase.N3_PSEUDO, {"sigma": _sign_of(g["beta"])}
        return None

    if not gone("alpha_p"):
        return RootCase.N4_A0_APN0, {
            "alpha_p": g["alpha_p"], "beta": g["beta"], "beta_p": g["beta_p"],
            "b": g["b"], "b_p": g["b_p"],
        }
    if gone("b_p"):
        if gone("beta") and gone("beta_p"):
            return RootCase.N4_Z_BP0_B0, {"b": g["b"], "c": g["c"], "c_p": g["c_p"]}
        if gone("beta"):
            return RootCase.N4_Z_BP0_BPN0, {
                "beta_p": g["beta_p"], "b": g["b"], "c_p": g["c_p"],
            }
        if gone("b") and gone("c"):
            return RootCase.N4_Z_BP0_BN0, {
                "beta": g["beta"], "beta_p": g["beta_p"], "c_p": g["c_p"],
            }
        return None
    if gone("b"):
        if not gone("beta_p") and gone("beta"):
            return None
        if gone("beta"):
            return RootCase.N4_Z_BPN0_B0_BE0, {
                "b_p": g["b_p"], "c": g["c"], "c_p": g["c_p"],
            }
        if gone("beta_p"):
            return RootCase.N4_Z_BPN0_B0_BEN0, {
                "beta": g["beta"], "b_p": g["b_p"], "c_p": g["c_p"],
            }
        return None
    if gone("beta"):
        if not gone("beta_p"):
            return None
        gamma = float(np.dot(g["b_p"], g["b"]) / np.dot(g["b"], g["b"]))
        return RootCase.N4_Z_BPN0_BN0_BE0, {
            "b": g["b"], "gamma": gamma, "c": g["c"], "c_p": g["c_p"],
        }
    if gone("beta_p"):
        return None
    return RootCase.N4_Z_BPN0_BN0_BEN0, {
        "beta": g["beta"], "beta_p": g["beta_p"], "b": g["b"], "c_p": g["c_p"],
    }


# JSON record -----------------------------------------------------------------


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return [float(x) for x in value]
    return float(value)


def root_record(a: Multivector, tol: float = 1e-9) -> dict:
    """The root JSON record; `case` stays null for non-roots and n > 4."""
    report = verify(a, tol)
    case = params = None
    if report.is_root and a.signature.n <= 4:
        hit = classify(a, tol)
        if hit is not None:
            case, raw = hit
            params = {k: _jsonable(v) for k, v in raw.items()}
    return {
        "signature": [a.signature.p, a.signature.q],
        "coeffs": [float(x) for x in a.coeffs],
        "residual": report.residual_norm,
        "case": case.value if case is not None else None,
        "params": params,
    }
