"""Fractional parameters (s, p) and the Hölder coupling s_p = alpha - N/p."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class FracParams:
    """Order s in (0,1), integrability p >= 1, optional Hölder exponent alpha.

    When alpha is set, s is expected to be the coupled value alpha - N/p;
    use :meth:`from_alpha` to build that regime directly.
    """

    s: float
    p: float
    alpha: float | None = None

    def __post_init__(self):
        if not 0.0 < self.s < 1.0:
            raise ValueError(f"s must lie in (0,1), got {self.s}")
        if self.p < 1.0:
            raise ValueError(f"p must be >= 1, got {self.p}")
        if self.alpha is not None and not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0,1), got {self.alpha}")

    @classmethod
    def from_alpha(cls, alpha, p, N):
        """Coupled regime s_p = alpha - N/p; requires alpha*p > N."""
        if alpha * p <= N:
            raise ValueError(
                f"need alpha*p > N for s_p in (0,1): alpha={alpha} p={p} N={N}")
        return cls(s=alpha - N / p, p=float(p), alpha=float(alpha))

    @property
    def sp(self):
        return self.s * self.p
