import numpy as np
import pytest

from fraceig import (ConstantKernel, FracParams, PeriodicProductKernel,
                     TabulatedKernel, build_interval, kernel_average)


def test_params_validation():
    with pytest.raises(ValueError):
        FracParams(s=0.0, p=2.0)
    with pytest.raises(ValueError):
        FracParams(s=1.0, p=2.0)
    with pytest.raises(ValueError):
        FracParams(s=0.5, p=0.5)
    fp = FracParams(s=0.5, p=3.0)
    assert fp.sp == pytest.approx(1.5)


def test_params_from_alpha_coupling():
    fp = FracParams.from_alpha(0.5, 8.0, 1)
    assert fp.s == pytest.approx(0.5 - 1.0 / 8.0)
    assert fp.alpha == 0.5
    with pytest.raises(ValueError):
        FracParams.from_alpha(0.5, 2.0, 1)     # alpha*p = N


def test_periodic_kernel_symmetry_and_bounds():
    k = PeriodicProductKernel(3, base=2.0, amplitude=1.0)
    rng = np.random.default_rng(0)
    x = rng.random((20, 1))
    y = rng.random((20, 1))
    A = k.pair_matrix(x, y)
    B = k.pair_matrix(y, x)
    assert np.allclose(A, B.T)
    assert A.min() >= k.lower - 1e-12 and A.max() <= k.upper + 1e-12


def test_periodic_kernel_rejects_degenerate():
    with pytest.raises(ValueError):
        PeriodicProductKernel(0)
    with pytest.raises(ValueError):
        PeriodicProductKernel(1, base=1.0, amplitude=1.0)


def test_kernel_average_rules():
    k = PeriodicProductKernel(5, base=2.5, amplitude=0.5)
    avg = kernel_average(k)
    assert isinstance(avg, ConstantKernel)
    assert avg.value == 2.5
    c = ConstantKernel(3.0)
    assert kernel_average(c) is c


def test_tabulated_kernel_validation():
    d = build_interval(1.0, 4)
    m = d.num_interior
    good = np.full((m, m), 2.0)
    k = TabulatedKernel(d, good)
    assert np.array_equal(k.pair_matrix(d.interior_coords), good)
    bad = good.copy()
    bad[0, 1] = 5.0
    with pytest.raises(ValueError):
        TabulatedKernel(d, bad)
    with pytest.raises(ValueError):
        TabulatedKernel(d, np.zeros((m, m)))
