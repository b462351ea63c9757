"""Error bounds for the pole-sum approximation of the branch-cut integral.

Two bounds are provided: the per-mode bound in terms of
``beta_j = |cos(theta_j - dtheta)|`` and the bound integrated over tangential
frequencies up to ``k_max``.  Both are linear in the constant ``M``, a
common upper bound on ``|U|``, ``|dU/ds|`` and ``|d^2U/ds^2|`` along the cut.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import DegenerateBound


@dataclass(frozen=True)
class BoundInputs:
    n: int
    t: float
    M: float
    k_abs: float | None = None
    k_max: float | None = None

    def __post_init__(self):
        if (self.k_abs is None) == (self.k_max is None):
            raise ValueError("exactly one of k_abs and k_max must be given")
        vals = [self.t, self.M, self.k_abs if self.k_max is None else self.k_max]
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("bound inputs must be finite")

    def evaluate(self):
        if self.k_abs is not None:
            return per_mode_bound(self.n, self.t, self.k_abs, self.M)
        return integrated_bound(self.n, self.t, self.k_max, self.M)


def _check(n, t, M):
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if t < 0 or M < 0:
        raise ValueError("t and M must be nonnegative")


def betas(n):
    """``|cos(theta_j - dtheta)|`` for ``j = 1..n``."""
    dtheta = math.pi / (2 * (n + 1))
    theta = np.arange(1, n + 1) * math.pi / (n + 1)
    return np.abs(np.cos(theta - dtheta))


def per_mode_bound(n, t, k_abs, M):
    """Bound on ``|I - pole_sum|`` for a single tangential wavenumber.

    Every term enters with the sign it carries in the bound's final
    beta-form, including the negative ones.
    """
    _check(n, t, M)
    if k_abs < 0:
        raise ValueError("k_abs must be nonnegative")
    b = betas(n)
    k = k_abs
    terms = (
        k * b**4 - 2 * k * b**2 + k
        + 2 * t * b**4 - 4 * t * b**2 + 2 * t
        + t * t * b - 2 * t * t * b**2 + t * t
        - 5 * b**3 + 5 * b
        - 5 * b**3 * t + 5 * t * b
        - 4 * b**2 + 2
    )
    dtheta = math.pi / (2 * (n + 1))
    return 2.0 / 3.0 * dtheta**3 * M * (6.0 + float(np.sum(terms)))


def integrated_bound(n, t, k_max, M):
    """``(k_max/3) pi^4/(n+1)^3 M (2nt^2 + 9nt + n k_max + 8n + 3)``."""
    _check(n, t, M)
    if k_max <= 0:
        raise ValueError("k_max must be positive")
    poly = 2 * n * t * t + 9 * n * t + n * k_max + 8 * n + 3
    return k_max / 3.0 * math.pi**4 / (n + 1) ** 3 * M * poly


def estimate_M(g, k_abs, samples=4096):
    """Sup of ``|U|, |dU/ds|, |d^2U/ds^2|`` over ``s = i k cos(theta)``.

    ``U(s) = k g(s/k)`` so ``dU/ds = g'(s/k)`` and ``d^2U/ds^2 = g''(s/k)/k``.
    The theta grid is uniform on ``[0, pi]`` with both endpoints; an even
    ``samples`` is bumped by one so that the cut centre is a grid point.
    """
    if samples < 64:
        raise ValueError("samples must be >= 64")
    if k_abs <= 0:
        raise ValueError("k_abs must be positive")
    z = 1j * np.cos(np.linspace(0.0, math.pi, samples | 1))
    u = np.abs(k_abs * g.eval(z))
    du = np.abs(g.eval_d1(z))
    d2u = np.abs(g.eval_d2(z)) / k_abs
    return float(max(u.max(), du.max(), d2u.max()))


@dataclass(frozen=True)
class BoundCheck:
    holds: bool
    ratio: float


def bound_check(report, bound):
    """Compare a measured quadrature error with a bound.

    Raises
    ------
    DegenerateBound
        If ``bound`` is zero but the measured error is not.
    """
    err = report.abs_error
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    if bound == 0:
        if err > 0:
            raise DegenerateBound(f"bound is 0 but measured error is {err:.3e}")
        return BoundCheck(holds=True, ratio=0.0)
    return BoundCheck(holds=err <= bound, ratio=err / bound)
