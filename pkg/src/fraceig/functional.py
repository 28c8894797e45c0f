"""Energies and seminorms: Gagliardo, weighted, local Dirichlet, Hölder sup.

The scaled Gagliardo energy is (1-s) times the double-sum quadrature of
[u]_{s,p}^p over R^N x R^N with u extended by zero outside the domain;
see :mod:`fraceig.quadrature` for how the singular kernel is integrated.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad as _quad

from .backend import core
from .geometry import GridFunction
from .kernels import Kernel
from .params import FracParams
from .quadrature import get_quadrature

__all__ = [
    "NumericError",
    "gagliardo_energy",
    "f_n",
    "weighted_energy",
    "lq_norm",
    "holder_quotient_sup",
    "k_constant",
    "k_constant_closed_form",
    "dirichlet_energy_local",
]


class NumericError(RuntimeError):
    """A computed quantity came out non-finite or inconsistent."""


def _check_finite(x, what):
    if not math.isfinite(x):
        raise NumericError(f"{what} evaluated to a non-finite value: {x}")
    return x


def gagliardo_energy(u: GridFunction, fp: FracParams) -> float:
    """(1 - s) * [u]_{s,p}^p for the zero-extended grid function u."""
    form = get_quadrature(u.domain, fp.s, fp.p).form()
    return _check_finite((1.0 - fp.s) * form.energy(u.values), "gagliardo energy")


def f_n(u: GridFunction, fp: FracParams) -> float:
    """The 1-homogeneous normalized functional (1-s)^(1/p) [u]_{s,p}."""
    return gagliardo_energy(u, fp) ** (1.0 / fp.p)


def weighted_energy(u: GridFunction, fp: FracParams, a: Kernel) -> float:
    """Kernel-weighted nonlocal energy; no (1-s) scaling.

    With a == 1 this is exactly gagliardo_energy / (1 - s).
    """
    form = get_quadrature(u.domain, fp.s, fp.p).form(a)
    return _check_finite(form.energy(u.values), "weighted energy")


def lq_norm(u: GridFunction, q: float) -> float:
    """Discrete L^q norm; q = inf gives the max over nodes."""
    if q == np.inf:
        return float(np.max(np.abs(u.values), initial=0.0))
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    h = u.domain.h
    return float((np.sum(np.abs(u.values) ** q) * h ** u.domain.N) ** (1.0 / q))


def holder_quotient_sup(u: GridFunction, alpha: float) -> float:
    """sup over all node pairs of |u(x) - u(y)| / |x - y|^alpha.

    Exterior nodes participate with value zero, so the quotient sees the
    jump across the boundary.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0,1), got {alpha}")
    vals = np.ascontiguousarray(u.full_values())
    coords = np.ascontiguousarray(u.domain.coords, dtype=float)
    return core.holder_sup(vals, coords, alpha)


def k_constant_closed_form(N: int, p: float) -> float:
    """(1/p) * 2 * pi^((N-1)/2) * Gamma((p+1)/2) / Gamma((N+p)/2)."""
    return (2.0 / p) * math.pi ** ((N - 1) / 2.0) \
        * math.gamma((p + 1.0) / 2.0) / math.gamma((N + p) / 2.0)


def k_constant(N: int, p: float) -> float:
    """The gradient-limit constant (1/p) int_{|z|=1} |z_N|^p dS, by quadrature.

    Checked internally against the Gamma-function closed form.
    """
    if N not in (1, 2, 3):
        raise ValueError(f"unsupported dimension N={N}")
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if N == 1:
        value = (abs(-1.0) ** p + abs(1.0) ** p) / p
    elif N == 2:
        integral, _ = _quad(lambda t: abs(math.sin(t)) ** p, 0.0, 2.0 * math.pi,
                            points=[math.pi / 2, math.pi, 3 * math.pi / 2], limit=200)
        value = integral / p
    else:
        integral, _ = _quad(lambda phi: abs(math.cos(phi)) ** p * math.sin(phi),
                            0.0, math.pi, points=[math.pi / 2], limit=200)
        value = 2.0 * math.pi * integral / p
    exact = k_constant_closed_form(N, p)
    if abs(value - exact) > 1e-10 * abs(exact):
        raise NumericError(
            f"K({N},{p}) quadrature {value!r} disagrees with closed form {exact!r}")
    return value


def dirichlet_energy_local(u: GridFunction, p: float) -> float:
    """Local Dirichlet energy |grad u|_p^p by forward differences.

    Uses the zero extension on exterior nodes; in 2D the gradient
    magnitude is the Euclidean norm of the two forward differences.
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    dom = u.domain
    h = dom.h
    full = u.full_values().reshape(dom.shape)
    if dom.N == 1:
        d = np.diff(full) / h
        return float(np.sum(np.abs(d) ** p) * h)
    dx = np.diff(full, axis=0)[:, :-1] / h
    dy = np.diff(full, axis=1)[:-1, :] / h
    mag2 = dx * dx + dy * dy
    return float(np.sum(mag2 ** (p / 2.0)) * h * h)
