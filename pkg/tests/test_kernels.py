import numpy as np
import pytest

from ellsym2 import _kernels_py, kernels

compiled = pytest.importorskip("ellsym2._kernels")


@pytest.mark.parametrize("weight", range(5))
@pytest.mark.parametrize("mask", range(10))
def test_epstein_backends_agree(weight, mask):
    for c, s in ((1, 3.0), (4, 2.5)):
        a, ac = compiled.epstein_shells(weight, mask, float(c), s, 60, 0)
        b, bc = _kernels_py.epstein_shells(weight, mask, float(c), s, 60, 0)
        np.testing.assert_allclose(a + ac, b + bc, rtol=1e-13, atol=1e-300)


@pytest.mark.parametrize("a,b,e", [(2, 2, 0), (1, 3, 0), (3, 1, 0), (3, 3, 2), (2, 2, 1)])
@pytest.mark.parametrize("den,xa,eb", [(1, 0, 0), (4, 0, 1), (4, 2, 1), (8, 3, 5)])
def test_ek_backends_agree(a, b, e, den, xa, eb):
    for tau in ((0.0, 1.0), (0.3, 1.2)):
        r1 = compiled.ek_shells(*tau, a, b, e, den, xa, eb, 50, 0, 0)
        r2 = _kernels_py.ek_shells(*tau, a, b, e, den, xa, eb, 50, 0, 0)
        np.testing.assert_allclose(r1[0] + r1[1], r2[0] + r2[1], rtol=1e-12, atol=1e-15)
        np.testing.assert_allclose(r1[2] + r1[3], r2[2] + r2[3], rtol=1e-12, atol=1e-15)


def test_ap_backends_agree():
    primes = np.array([3, 5, 7, 11, 13, 101, 997, 7919], dtype=np.int64)
    for b2, b4, b6 in ((0, -8, 0), (0, -2, 1), (1, -2, 0)):
        assert list(compiled.ap_batch(b2, b4, b6, primes, 0)) == \
            list(_kernels_py.ap_batch(b2, b4, b6, primes, 0))


def test_neumaier_backends_agree():
    rng = np.random.default_rng(3)
    x = rng.standard_normal(50000) * 10.0 ** rng.integers(-10, 10, 50000)
    assert compiled.neumaier_blocks(x, 256) == _kernels_py.neumaier_blocks(x, 256)


def test_compiled_is_deterministic():
    runs = [compiled.epstein_shells(1, 0, 1.0, 3.0, 300, 0) for _ in range(2)]
    assert np.array_equal(runs[0][0], runs[1][0]) and np.array_equal(runs[0][1], runs[1][1])
    t1 = compiled.epstein_shells(1, 0, 1.0, 3.0, 300, 1)
    assert np.array_equal(runs[0][0], t1[0])


def test_use_backend_switch():
    orig = kernels.BACKEND
    try:
        kernels.use_backend("python")
        assert kernels.BACKEND == "python"
        kernels.use_backend("cython")
        assert kernels.BACKEND == "cython"
        with pytest.raises(ValueError):
            kernels.use_backend("fortran")
    finally:
        kernels.use_backend(orig)


def test_env_forces_fallback():
    import os
    import subprocess
    import sys
    env = dict(os.environ, ELLSYM2_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from ellsym2 import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True).stdout.strip()
    assert out == "python"


def test_fallback_end_to_end():
    from mpmath import mpf
    from ellsym2.lattice import LatticeSumSpec, evaluate
    orig = kernels.BACKEND
    spec = LatticeSumSpec("m2", "m_odd", 1, 3, 200)
    try:
        kernels.use_backend("python")
        a = evaluate(spec).value
    finally:
        kernels.use_backend(orig)
    assert abs(a - evaluate(spec).value) < mpf(10) ** -14
