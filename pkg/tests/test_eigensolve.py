import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from fraceig import (ConstantKernel, FracParams, SolverOptions, build_box,
                     build_interval, first_eigenpair, first_eigenpair_weighted,
                     gagliardo_energy, get_quadrature, infinity_eigen_certificate,
                     local_eigenvalue_1d, local_spectrum_box, lq_norm,
                     spectrum_linear)
from fraceig.eigensolve import local_spectrum_box as _lsb  # noqa: F401


def shooting_eigenvalue_1d(k, p, L):
    """lambda_k on (0, L) by ODE shooting.

    Integrates u' = |w|^(1/(p-1)) sgn w, w' = -|u|^(p-2) u from u(0) = 0,
    w(0) = 1 (the eigenvalue-1 problem); the first zero T of u gives
    lambda_k = (k T / L)^p.
    """
    pm1 = p - 1.0

    def rhs(t, y):
        u, w = y
        return [math.copysign(abs(w) ** (1.0 / pm1), w),
                -math.copysign(abs(u) ** pm1, u)]

    def hit_zero(t, y):
        return y[0]
    hit_zero.terminal = True
    hit_zero.direction = -1

    sol = solve_ivp(rhs, [0.0, 50.0], [0.0, 1.0], events=hit_zero,
                    method="DOP853", rtol=1e-11, atol=1e-12)
    T = sol.t_events[0][0]
    return (k * T / L) ** p


@pytest.mark.parametrize("k,p", [(1, 1.5), (1, 2.0), (2, 2.0), (1, 3.0), (2, 3.0)])
def test_local_eigenvalue_matches_shooting_oracle(k, p):
    assert local_eigenvalue_1d(k, p, 1.0) == pytest.approx(
        shooting_eigenvalue_1d(k, p, 1.0), rel=1e-6)


def test_local_eigenvalue_classical_case():
    assert local_eigenvalue_1d(3, 2.0, 2.0) == pytest.approx(
        (3 * math.pi / 2) ** 2, rel=1e-14)


def test_stiffness_matrix_reproduces_energy():
    d = build_interval(1.0, 32)
    fp = FracParams(s=0.6, p=2.0)
    quad = get_quadrature(d, fp.s, fp.p)
    A = quad.form().matrix()
    rng = np.random.default_rng(0)
    for _ in range(5):
        u = d.function(rng.standard_normal(d.num_interior))
        assert (1 - fp.s) * float(u.values @ A @ u.values) == pytest.approx(
            gagliardo_energy(u, fp), rel=1e-12)


def test_spectrum_linear_basic_properties():
    d = build_interval(1.0, 64)
    pairs = spectrum_linear(d, 0.5, 4)
    lams = [lam for lam, _ in pairs]
    assert all(b > a for a, b in zip(lams, lams[1:]))
    for lam, u in pairs:
        assert lam > 0
        assert lq_norm(u, 2.0) == pytest.approx(1.0, rel=1e-12)
    # first eigenfunction is sign-constant
    assert pairs[0][1].values.min() > 0


def test_eigenvalue_scaling_law():
    # lambda scales as L^(-sp) under dilation of the interval
    s, p = 0.6, 2.0
    lam1 = spectrum_linear(build_interval(1.0, 64), s, 1)[0][0]
    lam2 = spectrum_linear(build_interval(2.0, 64), s, 1)[0][0]
    assert lam2 == pytest.approx(lam1 * 2.0 ** (-s * p), rel=1e-10)


def test_domain_monotonicity():
    # a larger domain has a smaller first eigenvalue
    s = 0.5
    lam_small = spectrum_linear(build_interval(1.0, 64), s, 1)[0][0]
    lam_large = spectrum_linear(build_interval(1.5, 96), s, 1)[0][0]
    assert lam_large < lam_small


@pytest.mark.parametrize("n", [32, 64, 128])
def test_descent_matches_dense_eigensolve(n):
    d = build_interval(1.0, n)
    s = 0.5
    lam_dense = spectrum_linear(d, s, 1)[0][0]
    res = first_eigenpair(d, FracParams(s=s, p=2.0),
                          SolverOptions(tolerance=1e-12))
    assert res.converged
    assert res.lam == pytest.approx(lam_dense, rel=1e-6)


def test_descent_eigenfunction_positive_and_normalized():
    d = build_interval(1.0, 64)
    res = first_eigenpair(d, FracParams(s=0.5, p=3.0))
    assert res.converged
    assert res.eigenfunction.values.min() > 0
    assert lq_norm(res.eigenfunction, 3.0) == pytest.approx(1.0, rel=1e-9)


def test_descent_random_restarts_consistent():
    d = build_interval(1.0, 32)
    fp = FracParams(s=0.5, p=2.5)
    base = first_eigenpair(d, fp)
    multi = first_eigenpair(d, fp, SolverOptions(restarts=2, seed=123))
    assert multi.lam == pytest.approx(base.lam, rel=1e-6)


def test_weighted_constant_kernel_reduction():
    # a == c: weighted eigenvalue is c/(1-s) times the scaled one
    d = build_interval(1.0, 64)
    fp = FracParams(s=0.5, p=2.0)
    lam = spectrum_linear(d, fp.s, 1)[0][0]
    res = first_eigenpair_weighted(d, fp, ConstantKernel(2.0),
                                   SolverOptions(tolerance=1e-12))
    assert res.lam == pytest.approx(2.0 * lam / (1.0 - fp.s), rel=1e-6)


def test_certificate_interval_and_box():
    cert = infinity_eigen_certificate(build_interval(1.0, 64), 0.5)
    assert cert.certified
    assert cert.lam == pytest.approx(math.sqrt(2.0), rel=1e-12)
    cert2 = infinity_eigen_certificate(build_box(1.0, 1.0, 16), 0.75)
    assert cert2.certified
    assert cert2.lam == pytest.approx(2.0 ** 0.75, rel=1e-12)


def test_certificate_without_incenter_node():
    cert = infinity_eigen_certificate(build_interval(1.0, 9), 0.5)
    assert not cert.certified
    assert cert.lam == pytest.approx(math.sqrt(2.0), rel=1e-12)


def test_local_spectrum_box_square():
    d = build_box(1.0, 1.0, 32)
    lams = local_spectrum_box(d, 3)
    # discrete five-point values approach (j^2 + k^2) pi^2
    assert lams[0] == pytest.approx(2 * math.pi**2, rel=5e-3)
    assert lams[1] == pytest.approx(5 * math.pi**2, rel=5e-3)
    assert lams[2] == pytest.approx(5 * math.pi**2, rel=5e-3)


def test_sweep_validation_errors():
    d = build_interval(1.0, 16)
    with pytest.raises(ValueError):
        spectrum_linear(d, 0.5, 0)
    with pytest.raises(ValueError):
        local_eigenvalue_1d(0, 2.0, 1.0)
    with pytest.raises(ValueError):
        local_eigenvalue_1d(1, 1.0, 1.0)
    with pytest.raises(ValueError):
        infinity_eigen_certificate(d, 1.5)
