"""First eigenpairs by Rayleigh-quotient descent, linear spectra, and the
exact local / infinity references used as convergence targets."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .functional import NumericError, holder_quotient_sup, lq_norm
from .geometry import Domain, GridFunction, distance_function, has_incenter_node, inradius
from .kernels import Kernel
from .params import FracParams
from .quadrature import get_quadrature

__all__ = [
    "SolverOptions",
    "EigenResult",
    "CertificateResult",
    "first_eigenpair",
    "first_eigenpair_weighted",
    "spectrum_linear",
    "local_eigenvalue_1d",
    "local_spectrum_box",
    "infinity_eigen_certificate",
]


@dataclass(frozen=True)
class SolverOptions:
    max_iterations: int = 50_000
    tolerance: float = 1e-9            # relative Rayleigh-quotient change
    armijo_factor: float = 0.5
    armijo_slope: float = 1e-4
    initial_step: float = 1.0
    restarts: int = 0                  # extra random starts
    seed: int | None = None

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass
class EigenResult:
    lam: float
    eigenfunction: GridFunction
    iterations: int
    residual: float
    converged: bool


@dataclass
class CertificateResult:
    lam: float
    cone: GridFunction
    certified: bool
    message: str = ""


def _normalize(values, h, N, p):
    norm = (np.sum(np.abs(values) ** p) * h**N) ** (1.0 / p)
    if norm == 0:
        raise ValueError("cannot normalize the zero function")
    return values / norm


def _descend(form, domain, p, scale, start, opts):
    """Projected-gradient minimization of scale*E(v)/|v|_p^p on |v|_p = 1.

    Returns (lambda, values, iterations, residual, converged).  The
    quotient is non-increasing by the Armijo acceptance rule; an increase
    trips a NumericError.
    """
    h, N = domain.h, domain.N
    u = _normalize(np.asarray(start, dtype=float), h, N, p)
    lam = scale * form.energy(u)
    step = opts.initial_step
    it = 0
    rel = math.inf
    while it < opts.max_iterations:
        gE = scale * form.gradient(u)
        gN = p * np.abs(u) ** (p - 2.0) * u * h**N
        g = gE - lam * gN
        gn2 = float(np.dot(g, g))
        if gn2 == 0.0:
            rel = 0.0
            break
        step = min(step * 2.0, 1e8)
        accepted = False
        while step > 1e-20:
            v = u - step * g
            nv = (np.sum(np.abs(v) ** p) * h**N) ** (1.0 / p)
            if nv > 0:
                v = v / nv
                lv = scale * form.energy(v)
                if lv <= lam - opts.armijo_slope * step * gn2:
                    accepted = True
                    break
            step *= opts.armijo_factor
        if not accepted:
            rel = 0.0
            break
        if lv > lam:
            raise NumericError("Rayleigh quotient increased during descent")
        rel = (lam - lv) / max(abs(lam), 1e-300)
        u, lam = v, lv
        it += 1
        if rel < opts.tolerance:
            break
    converged = rel < opts.tolerance or rel == 0.0
    return lam, u, it, rel, converged


def _solve_first(domain, fp, kernel, opts):
    if fp.p <= 1:
        raise ValueError(f"the descent solver needs p > 1, got p={fp.p}")
    quad = get_quadrature(domain, fp.s, fp.p)
    form = quad.form(kernel)
    scale = (1.0 - fp.s) if kernel is None else 1.0
    starts = [distance_function(domain).values]
    if opts.restarts:
        rng = np.random.default_rng(opts.seed)
        for _ in range(opts.restarts):
            starts.append(rng.standard_normal(domain.num_interior))

    best = None
    total_it = 0
    for start in starts:
        lam, u, it, rel, conv = _descend(form, domain, fp.p, scale, start, opts)
        total_it += it
        if u.min() < 0.0 < u.max():
            # the first eigenfunction should be sign-constant; |u| never
            # increases the quotient, so restart the descent from it
            lam2, u2, it2, rel2, conv2 = _descend(
                form, domain, fp.p, scale, np.abs(u), opts)
            total_it += it2
            if lam2 <= lam:
                lam, u, rel, conv = lam2, u2, rel2, conv2
        if best is None or lam < best[0]:
            best = (lam, u, rel, conv)
    lam, u, rel, conv = best
    if u.sum() < 0:
        u = -u
    return EigenResult(lam=lam, eigenfunction=GridFunction(domain, u),
                       iterations=total_it, residual=rel, converged=conv)


def first_eigenpair(d: Domain, fp: FracParams,
                    opts: SolverOptions = SolverOptions()) -> EigenResult:
    """Smallest eigenvalue of the scaled fractional p-Laplacian.

    Minimizes (1-s)[v]_{s,p}^p / |v|_p^p by projected gradient descent with
    Armijo backtracking, starting from the boundary-distance function.
    """
    return _solve_first(d, fp, None, opts)


def first_eigenpair_weighted(d: Domain, fp: FracParams, a: Kernel,
                             opts: SolverOptions = SolverOptions()) -> EigenResult:
    """Smallest eigenvalue of the kernel-weighted energy (no (1-s) factor)."""
    return _solve_first(d, fp, a, opts)


def spectrum_linear(d: Domain, s: float, k_max: int):
    """k_max smallest eigenpairs of the p = 2 problem by dense eigensolve.

    The stiffness matrix reproduces the quadratic Gagliardo energy exactly
    (u^T A u = gagliardo_energy(u, s, 2)); mass is the lumped h^N identity.
    Returns a list of (eigenvalue, GridFunction) with |u|_2 = 1, ascending.
    """
    if not 1 <= k_max <= d.num_interior:
        raise ValueError(
            f"k_max must lie in [1, {d.num_interior}], got {k_max}")
    quad = get_quadrature(d, s, 2.0)
    A = (1.0 - s) * quad.form().matrix()
    vals, vecs = sla.eigh(A, subset_by_index=(0, k_max - 1))
    hN = d.h ** d.N
    out = []
    for k in range(k_max):
        v = vecs[:, k] / math.sqrt(hN)
        if v.sum() < 0:
            v = -v
        out.append((float(vals[k]) / hN, GridFunction(d, v)))
    return out


def local_eigenvalue_1d(k: int, p: float, L: float) -> float:
    """k-th Dirichlet eigenvalue of the 1D p-Laplacian on (0, L).

    lambda_k = (k * pi_p / L)^p with pi_p = 2 pi (p-1)^(1/p) / (p sin(pi/p));
    validated against an ODE shooting computation in the test suite.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if p <= 1:
        raise ValueError(f"p must exceed 1, got {p}")
    if L <= 0:
        raise ValueError(f"L must be positive, got {L}")
    pi_p = 2.0 * math.pi * (p - 1.0) ** (1.0 / p) / (p * math.sin(math.pi / p))
    return (k * pi_p / L) ** p


def local_spectrum_box(d: Domain, k_max: int):
    """Ascending eigenvalues of the five-point Laplacian on a box grid."""
    if d.kind != "box":
        raise ValueError("local_spectrum_box needs a box domain")
    h = d.h
    nx, ny = (m - 1 for m in d.shape)
    Lx = d.bounds[0][1] - d.bounds[0][0]
    Ly = d.bounds[1][1] - d.bounds[1][0]
    jx = np.arange(1, nx)
    jy = np.arange(1, ny)
    lx = (4.0 / h**2) * np.sin(jx * math.pi * h / (2.0 * Lx)) ** 2
    ly = (4.0 / h**2) * np.sin(jy * math.pi * h / (2.0 * Ly)) ** 2
    lam = np.sort((lx[:, None] + ly[None, :]).ravel())
    if k_max > len(lam):
        raise ValueError(f"k_max={k_max} exceeds the {len(lam)} grid modes")
    return lam[:k_max]


def infinity_eigen_certificate(d: Domain, alpha: float) -> CertificateResult:
    """The Hölder-infinity eigenvalue R^(-alpha) and its cone d_Omega^alpha.

    When the grid contains a node attaining the inradius, the returned
    cone certifies the value: its Hölder quotient over its sup norm equals
    R^(-alpha) to near machine precision.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0,1), got {alpha}")
    R = inradius(d)
    lam = R ** (-alpha)
    dist = distance_function(d)
    cone = GridFunction(d, dist.values ** alpha)
    if not has_incenter_node(d):
        return CertificateResult(lam, cone, certified=False,
                                 message="no grid node attains the inradius")
    ratio = holder_quotient_sup(cone, alpha) / lq_norm(cone, np.inf)
    if abs(ratio - lam) > 1e-12 * max(1.0, lam):
        raise NumericError(
            f"certificate check failed: quotient ratio {ratio!r} vs {lam!r}")
    return CertificateResult(lam, cone, certified=True)
