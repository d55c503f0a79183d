import numpy as np
import pytest

from cliffroot.algebra import Multivector, Signature, get_structure


def random_integer_mv(sig: Signature, rng, lo=-9, hi=9) -> Multivector:
    """Integer-valued coefficients keep float products exact at these sizes."""
    return Multivector(sig, rng.integers(lo, hi + 1, sig.dim).astype(float))


def random_vector(sig: Signature, rng, lo=-9, hi=9) -> Multivector:
    coeffs = np.zeros(sig.dim)
    for k in range(sig.n):
        coeffs[1 << k] = rng.integers(lo, hi + 1)
    return Multivector(sig, coeffs)


def random_blade(sig: Signature, rng, grade=None) -> Multivector:
    st = get_structure(sig)
    if grade is None:
        mask = int(rng.integers(0, sig.dim))
    else:
        choices = np.flatnonzero(st.grades == grade)
        mask = int(rng.choice(choices))
    coeff = int(rng.integers(1, 10)) * (1 if rng.random() < 0.5 else -1)
    return Multivector.blade(sig, mask, float(coeff))


def all_signatures(max_n: int):
    for n in range(1, max_n + 1):
        for p in range(n, -1, -1):
            yield Signature(p, n - p)


@pytest.fixture
def rng():
    return np.random.default_rng(20251204)
