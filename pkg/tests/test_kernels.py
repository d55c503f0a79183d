"""The compiled kernels and the numpy fallback must agree bit-for-bit on
integer inputs and to roundoff on floats."""

import numpy as np
import pytest

from cliffroot import _kernels
from cliffroot._kernels import pure
from cliffroot.algebra import Signature, get_structure
from cliffroot.constraints import derive_constraints

try:
    from cliffroot._kernels import _fast
except ImportError:
    _fast = None

needs_fast = pytest.mark.skipif(_fast is None, reason="compiled kernels unavailable")


def test_a_backend_was_selected():
    assert _kernels.BACKEND in ("pure", "fast")


@needs_fast
def test_geometric_product_matches(rng):
    for sig in (Signature(2, 0), Signature(1, 2), Signature(2, 3)):
        signs = get_structure(sig).signs.astype(np.float64)
        t_pure = pure.make_product_table(signs)
        t_fast = _fast.make_product_table(signs)
        for _ in range(50):
            a = rng.integers(-9, 10, sig.dim).astype(float)
            b = rng.integers(-9, 10, sig.dim).astype(float)
            assert np.array_equal(
                pure.geometric_product(t_pure, a, b),
                _fast.geometric_product(t_fast, a, b),
            )


@needs_fast
def test_quad_kernels_match(rng):
    for sig in (Signature(1, 1), Signature(1, 3)):
        forms = derive_constraints(sig).float_forms
        for _ in range(50):
            a = rng.uniform(-2, 2, sig.dim)
            vp, jp = pure.quad_values_and_jacobian(forms, a)
            vf, jf = _fast.quad_values_and_jacobian(forms, a)
            assert np.allclose(vp, vf, atol=1e-13)
            assert np.allclose(jp, jf, atol=1e-13)
            assert np.allclose(pure.quad_values(forms, a),
                               _fast.quad_values(forms, a), atol=1e-13)


def test_pure_product_sparse_inputs():
    sig = Signature(3, 0)
    signs = get_structure(sig).signs.astype(np.float64)
    table = pure.make_product_table(signs)
    e1 = np.zeros(8)
    e1[1] = 1.0
    out = pure.geometric_product(table, e1, e1)
    expected = np.zeros(8)
    expected[0] = 1.0
    assert np.array_equal(out, expected)
