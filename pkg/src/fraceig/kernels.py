"""Symmetric bounded weights a(x, y) for the weighted nonlocal energies."""

from __future__ import annotations

import numpy as np

__all__ = ["Kernel", "ConstantKernel", "PeriodicProductKernel", "TabulatedKernel",
           "kernel_average"]


class Kernel:
    """Symmetric weight a(x,y) with 0 < lower <= a <= upper everywhere."""

    lower: float
    upper: float

    def __call__(self, x, y):
        """Evaluate on coordinate arrays of shape (..., N) or scalars per axis."""
        raise NotImplementedError

    def pair_matrix(self, coords_a, coords_b=None):
        """Dense a(x_i, y_j) matrix for node coordinate arrays (M, N)."""
        if coords_b is None:
            coords_b = coords_a
        return self(coords_a[:, None, :], coords_b[None, :, :])


class ConstantKernel(Kernel):
    def __init__(self, value):
        if value <= 0:
            raise ValueError(f"kernel value must be positive, got {value}")
        self.value = float(value)
        self.lower = self.upper = self.value

    def __call__(self, x, y):
        shape = np.broadcast_shapes(np.shape(x)[:-1], np.shape(y)[:-1]) \
            if np.ndim(x) else ()
        return np.full(shape, self.value) if shape else self.value

    def __repr__(self):
        return f"ConstantKernel({self.value})"


class PeriodicProductKernel(Kernel):
    """a(x, y) = base + amplitude * cos(2*pi*f*X) * cos(2*pi*f*Y).

    X and Y are the coordinate sums of x and y (the coordinate itself in
    1D), so the kernel is symmetric by construction.  Its weak-* limit as
    the frequency grows is the constant ``base``.
    """

    def __init__(self, frequency, base=2.0, amplitude=1.0):
        if frequency < 1 or int(frequency) != frequency:
            raise ValueError(f"frequency must be a positive integer, got {frequency}")
        if amplitude < 0 or base - amplitude <= 0:
            raise ValueError(
                f"need 0 <= amplitude < base for positive bounds, got "
                f"base={base} amplitude={amplitude}")
        self.frequency = int(frequency)
        self.base = float(base)
        self.amplitude = float(amplitude)
        self.lower = self.base - self.amplitude
        self.upper = self.base + self.amplitude

    def __call__(self, x, y):
        X = np.sum(np.asarray(x, dtype=float), axis=-1)
        Y = np.sum(np.asarray(y, dtype=float), axis=-1)
        w = 2.0 * np.pi * self.frequency
        return self.base + self.amplitude * np.cos(w * X) * np.cos(w * Y)

    def __repr__(self):
        return (f"PeriodicProductKernel(frequency={self.frequency}, "
                f"base={self.base}, amplitude={self.amplitude})")


class TabulatedKernel(Kernel):
    """Kernel given per node pair on a fixed domain."""

    def __init__(self, domain, table):
        table = np.asarray(table, dtype=float)
        m = domain.num_interior
        if table.shape != (m, m):
            raise ValueError(f"table shape {table.shape} != ({m}, {m})")
        if not np.allclose(table, table.T, rtol=0, atol=1e-12 * max(1.0, np.abs(table).max())):
            raise ValueError("tabulated kernel is not symmetric")
        if table.min() <= 0:
            raise ValueError("tabulated kernel must be strictly positive")
        self.domain = domain
        self.table = table
        self.lower = float(table.min())
        self.upper = float(table.max())

    def __call__(self, x, y):
        raise ValueError("tabulated kernels are defined per node pair only")

    def pair_matrix(self, coords_a, coords_b=None):
        if coords_b is not None and coords_b is not coords_a:
            raise ValueError("tabulated kernel only supports its own node set")
        if len(coords_a) != self.table.shape[0]:
            raise ValueError("coordinate count does not match the table")
        return self.table


def kernel_average(kernel):
    """Weak-* limit of a periodic kernel family: the constant mean over a period.

    Constant kernels are their own average; anything else is rejected.
    """
    if isinstance(kernel, ConstantKernel):
        return kernel
    if isinstance(kernel, PeriodicProductKernel):
        return ConstantKernel(kernel.base)
    raise ValueError(f"no averaging rule for kernel {kernel!r}")
