#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Times the two hot kernels (dense geometric product, quadratic-form residual
plus jacobian) and one end-to-end workload (multi-start Gauss-Newton root
search) for both backends.  Runs fine when the extension is missing; the
compiled columns then just say unavailable.

    python benchmarks/bench_kernels.py [--reps 20000] [--lm-starts 200]
"""

import argparse
import time

import numpy as np

from cliffroot._kernels import pure
from cliffroot.algebra import Signature, get_structure
from cliffroot.constraints import derive_constraints

try:
    from cliffroot._kernels import _fast
except ImportError:
    _fast = None


def time_gp(impl, signs, reps, rng, dim):
    table = impl.make_product_table(signs)
    pairs = [(rng.uniform(-1, 1, dim), rng.uniform(-1, 1, dim)) for _ in range(64)]
    impl.geometric_product(table, *pairs[0])  # warm up
    start = time.perf_counter()
    for k in range(reps):
        a, b = pairs[k % 64]
        impl.geometric_product(table, a, b)
    return (time.perf_counter() - start) / reps


def time_quad(impl, forms, reps, rng, dim):
    points = [rng.uniform(-1, 1, dim) for _ in range(64)]
    impl.quad_values_and_jacobian(forms, points[0])
    start = time.perf_counter()
    for k in range(reps):
        impl.quad_values_and_jacobian(forms, points[k % 64])
    return (time.perf_counter() - start) / reps


def time_lm(impl, forms, starts, rng, dim, tol=1e-10, max_iter=200):
    """A trimmed copy of the damped Gauss-Newton loop, pinned to one backend."""
    eye = np.eye(dim)
    start = time.perf_counter()
    converged = 0
    for _ in range(starts):
        x = rng.uniform(-2, 2, dim)
        lam = 1e-3
        vals, jac = impl.quad_values_and_jacobian(forms, x)
        vals[0] += 1.0
        fnorm = float(np.linalg.norm(vals))
        for _ in range(max_iter):
            if fnorm < tol:
                converged += 1
                break
            step = np.linalg.solve(jac.T @ jac + lam * eye, -jac.T @ vals)
            trial = x + step
            v_t, j_t = impl.quad_values_and_jacobian(forms, trial)
            v_t[0] += 1.0
            fnorm_t = float(np.linalg.norm(v_t))
            if fnorm_t < fnorm:
                x, vals, jac, fnorm = trial, v_t, j_t, fnorm_t
                lam = max(lam * 0.5, 1e-14)
            else:
                lam *= 10.0
    return (time.perf_counter() - start) / starts, converged


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--reps", type=int, default=20000)
    parser.add_argument("--lm-starts", type=int, default=200)
    args = parser.parse_args()

    backends = [("pure", pure)]
    if _fast is not None:
        backends.append(("fast", _fast))
    else:
        print("compiled extension unavailable; timing the numpy fallback only\n")

    print(f"{'kernel':<28}" + "".join(f"{name + ' (us)':>12}" for name, _ in backends)
          + ("  speedup" if len(backends) == 2 else ""))
    rng = np.random.default_rng(0)
    rows = []
    for n in (3, 4, 5):
        sig = Signature(n, 0)
        signs = get_structure(sig).signs.astype(np.float64)
        times = [time_gp(impl, signs, args.reps, rng, sig.dim) for _, impl in backends]
        rows.append((f"geometric product  n={n}", times))
    for n in (3, 4):
        sig = Signature(1, n - 1)
        forms = derive_constraints(sig).float_forms
        times = [time_quad(impl, forms, args.reps, rng, sig.dim)
                 for _, impl in backends]
        rows.append((f"residual + jacobian n={n}", times))
    for label, times in rows:
        line = f"{label:<28}" + "".join(f"{t * 1e6:>12.2f}" for t in times)
        if len(times) == 2:
            line += f"{times[0] / times[1]:>8.2f}x"
        print(line)

    print()
    for n in (3, 4):
        sig = Signature(n, 0)
        forms = derive_constraints(sig).float_forms
        parts = []
        for name, impl in backends:
            per, conv = time_lm(impl, forms, args.lm_starts, np.random.default_rng(1),
                                sig.dim)
            parts.append(f"{name}: {per * 1e3:.3f} ms/start ({conv} converged)")
        print(f"gauss-newton search n={n}: " + "; ".join(parts))


if __name__ == "__main__":
    main()
