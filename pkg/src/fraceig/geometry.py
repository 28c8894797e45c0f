"""Discretized domains, grid functions and boundary-distance geometry.

A :class:`Domain` is a uniform grid over a bounding box in 1D or 2D.  Grid
nodes on or outside the boundary of the declared open set are *exterior*;
every :class:`GridFunction` is identically zero there, which is how the
zero-exterior (Dirichlet) condition of the nonlocal problems is realized.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from scipy import ndimage

__all__ = [
    "Domain",
    "GridFunction",
    "build_interval",
    "build_box",
    "load_masked_grid",
    "distance_function",
    "inradius",
]


class Domain:
    """Uniform grid over a bounding box with an interior-node mask.

    Immutable after construction; safe to share across threads.  Interior
    nodes are stored in row-major order of the full grid.
    """

    def __init__(self, kind, bounds, n, mask):
        self.kind = kind                      # "interval" | "box" | "masked"
        self.bounds = tuple(tuple(b) for b in bounds)
        self.N = len(self.bounds)
        self.n = int(n)
        if self.N not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {self.N}")
        side = self.bounds[0][1] - self.bounds[0][0]
        self.h = side / self.n
        if self.h <= 0:
            raise ValueError("non-positive grid spacing")

        axes = []
        for lo, hi in self.bounds:
            m = round((hi - lo) / self.h)
            axes.append(lo + np.arange(m + 1) * self.h)
        self.axes = axes
        self.shape = tuple(len(a) for a in axes)

        mask = np.asarray(mask, dtype=bool)
        if mask.shape != self.shape:
            raise ValueError(f"mask shape {mask.shape} != grid shape {self.shape}")
        if not mask.any():
            raise ValueError("domain has no interior nodes")
        self.mask = mask
        self.mask.setflags(write=False)

        if self.N == 1:
            coords = axes[0][:, None]
        else:
            X, Y = np.meshgrid(axes[0], axes[1], indexing="ij")
            coords = np.column_stack([X.ravel(), Y.ravel()])
        self.coords = coords                  # all nodes, (total, N)
        self.coords.setflags(write=False)
        flat = mask.ravel()
        self.interior_index = np.flatnonzero(flat)
        self.interior_coords = coords[self.interior_index]
        self.interior_coords.setflags(write=False)
        self.num_interior = len(self.interior_index)
        self.measure = self.num_interior * self.h**self.N

        self._cache = {}                      # quadrature/tail data, keyed by (s, p)

    @property
    def num_nodes(self):
        return len(self.coords)

    def zeros(self):
        return GridFunction(self, np.zeros(self.num_interior))

    def function(self, values):
        return GridFunction(self, values)

    def sample(self, f):
        """GridFunction from a callable of the node coordinates."""
        xs = self.interior_coords
        if self.N == 1:
            return GridFunction(self, np.asarray(f(xs[:, 0]), dtype=float))
        return GridFunction(self, np.asarray(f(xs[:, 0], xs[:, 1]), dtype=float))

    def __repr__(self):
        return (f"Domain(kind={self.kind!r}, N={self.N}, n={self.n}, "
                f"h={self.h:g}, interior={self.num_interior})")


class GridFunction:
    """Real values on the interior nodes of a Domain; zero on the exterior."""

    __slots__ = ("domain", "values")

    def __init__(self, domain, values):
        values = np.asarray(values, dtype=float)
        if values.shape != (domain.num_interior,):
            raise ValueError(
                f"expected {domain.num_interior} interior values, got {values.shape}")
        self.domain = domain
        self.values = values
        self.values.setflags(write=False)

    def full_values(self):
        """Values on every grid node, zero at exterior nodes."""
        out = np.zeros(self.domain.num_nodes)
        out[self.domain.interior_index] = self.values
        return out

    def _check_compatible(self, other):
        if not isinstance(other, GridFunction):
            raise TypeError("expected a GridFunction")
        if other.domain is not self.domain:
            raise ValueError("GridFunctions built on different domains")

    def __add__(self, other):
        self._check_compatible(other)
        return GridFunction(self.domain, self.values + other.values)

    def __sub__(self, other):
        self._check_compatible(other)
        return GridFunction(self.domain, self.values - other.values)

    def __mul__(self, c):
        return GridFunction(self.domain, self.values * float(c))

    __rmul__ = __mul__

    def __neg__(self):
        return GridFunction(self.domain, -self.values)


def build_interval(L, n):
    """Uniform grid on the interval (0, L) with n subintervals.

    Nodes x_i = i*h, i = 0..n, h = L/n; the endpoint nodes are exterior.
    """
    if L <= 0:
        raise ValueError(f"interval length must be positive, got {L}")
    if n < 3:
        raise ValueError(f"need n >= 3 subintervals, got {n}")
    mask = np.ones(n + 1, dtype=bool)
    mask[0] = mask[-1] = False
    return Domain("interval", [(0.0, float(L))], n, mask)


def build_box(Lx, Ly, n):
    """Tensor grid on the box (0, Lx) x (0, Ly).

    The spacing h = Lx/n is shared by both axes, so Ly must be an integer
    multiple of h; boundary nodes are exterior.
    """
    if Lx <= 0 or Ly <= 0:
        raise ValueError("box sides must be positive")
    if n < 3:
        raise ValueError(f"need n >= 3 subintervals, got {n}")
    h = Lx / n
    my = Ly / h
    if abs(my - round(my)) > 1e-9 * max(1.0, my):
        raise ValueError(f"Ly={Ly} is not an integer multiple of h={h}")
    my = round(my)
    if my < 3:
        raise ValueError("box too thin for the shared spacing: needs >= 3 cells per axis")
    mask = np.ones((n + 1, my + 1), dtype=bool)
    mask[0, :] = mask[-1, :] = mask[:, 0] = mask[:, -1] = False
    return Domain("box", [(0.0, float(Lx)), (0.0, float(Ly))], n, mask)


def load_masked_grid(path):
    """Masked grid from a plain-text file.

    First line: ``N n h``.  Then one 0/1 row per grid line (n+1 entries,
    whitespace-separated or contiguous), n+1 rows in 2D and a single row
    in 1D.  The bounding box is (0, n*h) per axis.
    """
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"empty mask file: {path}")
    head = lines[0].split()
    if len(head) != 3:
        raise ValueError(f"expected header 'N n h', got {lines[0]!r}")
    N, n, h = int(head[0]), int(head[1]), float(head[2])
    if N not in (1, 2) or n < 3 or h <= 0:
        raise ValueError(f"invalid mask header N={N} n={n} h={h}")

    def parse_row(text):
        toks = text.split() if " " in text else list(text)
        row = np.array([int(t) for t in toks], dtype=bool)
        if len(row) != n + 1:
            raise ValueError(f"mask row has {len(row)} entries, expected {n + 1}")
        return row

    rows = [parse_row(ln) for ln in lines[1:]]
    if N == 1:
        if len(rows) != 1:
            raise ValueError(f"1D mask needs exactly one row, got {len(rows)}")
        mask = rows[0]
        bounds = [(0.0, n * h)]
    else:
        if len(rows) != n + 1:
            raise ValueError(f"2D mask needs {n + 1} rows, got {len(rows)}")
        mask = np.vstack(rows)
        bounds = [(0.0, n * h), (0.0, n * h)]
    # nodes on the bounding box edge can never be interior
    if N == 1:
        mask = mask.copy()
        mask[0] = mask[-1] = False
    else:
        mask = mask.copy()
        mask[0, :] = mask[-1, :] = mask[:, 0] = mask[:, -1] = False
    return Domain("masked", bounds, n, mask)


def distance_function(domain):
    """Boundary-distance function d(x) = dist(x, exterior) at interior nodes.

    Exact for interval and box domains (min of the per-axis distances to
    the faces); multi-source Euclidean grid distance for masked grids.
    """
    xs = domain.interior_coords
    if domain.kind == "interval":
        lo, hi = domain.bounds[0]
        d = np.minimum(xs[:, 0] - lo, hi - xs[:, 0])
    elif domain.kind == "box":
        (xl, xh), (yl, yh) = domain.bounds
        d = np.minimum.reduce([xs[:, 0] - xl, xh - xs[:, 0],
                               xs[:, 1] - yl, yh - xs[:, 1]])
    else:
        full = ndimage.distance_transform_edt(
            domain.mask, sampling=[domain.h] * domain.N)
        d = full.ravel()[domain.interior_index]
    return GridFunction(domain, d)


def inradius(domain):
    """Radius of the largest inscribed ball.

    Analytic for interval (L/2) and box (min side / 2); the grid maximum
    of the distance function otherwise.
    """
    if domain.kind == "interval":
        lo, hi = domain.bounds[0]
        return (hi - lo) / 2.0
    if domain.kind == "box":
        return min(hi - lo for lo, hi in domain.bounds) / 2.0
    return float(distance_function(domain).values.max())


def has_incenter_node(domain):
    """True when some grid node attains the inradius exactly."""
    d = distance_function(domain).values
    return bool(np.any(np.abs(d - inradius(domain)) <= 1e-12 * max(1.0, inradius(domain))))
