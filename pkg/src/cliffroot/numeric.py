"""Damped Gauss-Newton root finding and nonexistence scans.

The constraint system of A*A = -1 is a square set of 2^n quadratic equations
in 2^n unknowns with an exact analytic jacobian, so a small dense
Levenberg-Marquardt loop is all that is needed.  The same loop, with chosen
coordinates pinned, powers the slice scans that probe signatures or case
branches where no roots exist.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import Multivector, Signature
from .constraints import (
    ConstraintSystem,
    derive_constraints,
    residual_and_jacobian,
)

#: Levenberg-Marquardt defaults: initial damping, growth on a failed step,
#: shrink on success, iteration cap, residual tolerance.
LM_DAMPING = 1e-3
LM_DAMPING_UP = 10.0
LM_DAMPING_DOWN = 0.5
LM_MAX_ITER = 200
LM_TOL = 1e-10

#: Full grids larger than this many points are refused.
MAX_GRID_POINTS = 4_000_000


class InfeasibleGridError(ValueError):
    """The requested full grid has too many points to evaluate."""


@dataclass(frozen=True)
class SolveResult:
    """Outcome of one damped Gauss-Newton run."""

    success: bool
    x: np.ndarray
    residual_norm: float
    iterations: int
    signature: Signature

    @property
    def multivector(self) -> Multivector:
        return Multivector(self.signature, self.x)


def _as_system(sig_or_system) -> ConstraintSystem:
    if isinstance(sig_or_system, ConstraintSystem):
        return sig_or_system
    return derive_constraints(sig_or_system)


def lm_minimize(
    system: ConstraintSystem,
    x0,
    *,
    fixed: Optional[dict[int, float]] = None,
    tol: float = LM_TOL,
    max_iter: int = LM_MAX_ITER,
    damping: float = LM_DAMPING,
) -> SolveResult:
    """Minimize |residual|^2 over the free coordinates.

    `fixed` pins coordinates by index; the residual stays the full vector, so
    a pinned scan reports how close the constrained slice comes to a root.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    x = np.array(x0, dtype=np.float64)
    if x.shape != (system.dim,):
        raise ValueError(f"expected initial vector of length {system.dim}")
    fixed = dict(fixed or {})
    for idx, value in fixed.items():
        x[idx] = value
    free = np.array([i for i in range(system.dim) if i not in fixed], dtype=np.intp)

    lam = damping
    r, jac = residual_and_jacobian(system, x)
    fnorm = float(np.linalg.norm(r))
    iterations = 0
    for iterations in range(1, max_iter + 1):
        if fnorm < tol:
            break
        jf = jac[:, free]
        g = jf.T @ r
        h = jf.T @ jf
        try:
            step = np.linalg.solve(h + lam * np.eye(free.size), -g)
        except np.linalg.LinAlgError:
            lam *= LM_DAMPING_UP
            continue
        trial = x.copy()
        trial[free] += step
        r_t, jac_t = residual_and_jacobian(system, trial)
        fnorm_t = float(np.linalg.norm(r_t))
        if fnorm_t < fnorm:
            x, r, jac, fnorm = trial, r_t, jac_t, fnorm_t
            lam = max(lam * LM_DAMPING_DOWN, 1e-14)
        else:
            lam *= LM_DAMPING_UP
            if lam > 1e14 and float(np.linalg.norm(step)) < 1e-14 * (1.0 + float(np.linalg.norm(x))):
                break  # stalled in a local minimum; further iterations are no-ops
    return SolveResult(fnorm < tol, x, fnorm, iterations, system.signature)


def solve_numeric(
    sig_or_system,
    initial,
    tol: float = LM_TOL,
    max_iter: int = LM_MAX_ITER,
    damping: float = LM_DAMPING,
) -> SolveResult:
    """Run damped Gauss-Newton from one starting point.

    `success` is False after `max_iter` without reaching `tol` (the expected
    outcome wherever no roots exist, e.g. all of Cl(1,0)).
    """
    system = _as_system(sig_or_system)
    return lm_minimize(system, initial, tol=tol, max_iter=max_iter, damping=damping)


@dataclass(frozen=True)
class ScanResult:
    """Minimum residual found by a grid or slice scan."""

    signature: Signature
    mode: str
    min_residual: float
    argmin: np.ndarray
    evaluations: int
    #: 1.0 when the scalar equation alone already bounds the residual below
    analytic_bound: Optional[float] = None


def _grid_scan(system: ConstraintSystem, box, resolution: int) -> tuple[float, np.ndarray, int]:
    lo, hi = box
    dim = system.dim
    points = resolution**dim
    if points > MAX_GRID_POINTS:
        raise InfeasibleGridError(
            f"grid of {resolution}^{dim} = {points} points exceeds {MAX_GRID_POINTS}"
        )
    axis = np.linspace(lo, hi, resolution)
    grids = np.meshgrid(*([axis] * dim), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    forms = system.float_forms
    best = math.inf
    best_x = pts[0]
    for start in range(0, len(pts), 65536):
        chunk = pts[start:start + 65536]
        vals = np.einsum("mij,bi,bj->bm", forms, chunk, chunk, optimize=True)
        vals[:, 0] += 1.0
        norms = np.linalg.norm(vals, axis=1)
        k = int(np.argmin(norms))
        if norms[k] < best:
            best = float(norms[k])
            best_x = chunk[k].copy()
    return best, best_x, points


def nonexistence_scan(
    sig_or_system,
    box=(-2.0, 2.0),
    resolution: Optional[int] = None,
    fixed: Optional[dict[int, float]] = None,
    starts: int = 200,
    seed: int = 0,
    tol: float = LM_TOL,
    max_iter: int = LM_MAX_ITER,
) -> ScanResult:
    """Probe how close a signature (or a pinned slice of it) comes to a root.

    Grid mode (`resolution` given) evaluates the residual on a full grid over
    box^(2^n); feasible only for small n.  Slice mode (`fixed` given, e.g.
    {0: 0.5} to pin the scalar coordinate) runs multi-start damped
    Gauss-Newton over the remaining coordinates and reports the best point
    found, converged or not.
    """
    system = _as_system(sig_or_system)
    if (resolution is None) == (fixed is None):
        raise ValueError("give exactly one of resolution (grid) or fixed (slice)")
    lo, hi = float(box[0]), float(box[1])
    if not lo < hi:
        raise ValueError("box must be an increasing pair")
    bound = 1.0 if bool(np.all(system.root_form.diagonal() >= 0)) else None

    if resolution is not None:
        if resolution < 2:
            raise ValueError("resolution must be at least 2 per axis")
        best, best_x, points = _grid_scan(system, (lo, hi), resolution)
        return ScanResult(system.signature, "grid", best, best_x, points, bound)

    if starts < 1:
        raise ValueError("starts must be at least 1")
    rng = np.random.default_rng(seed)
    best = math.inf
    best_x = np.zeros(system.dim)
    for _ in range(starts):
        x0 = rng.uniform(lo, hi, system.dim)
        result = lm_minimize(system, x0, fixed=fixed, tol=tol, max_iter=max_iter)
        if result.residual_norm < best:
            best = result.residual_norm
            best_x = result.x
    return ScanResult(system.signature, "slice", best, best_x, starts, bound)
