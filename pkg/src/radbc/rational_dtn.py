"""Rational approximation of the Dirichlet-to-Neumann symbol sqrt(1 + z**2).

The depth-n continued fraction

    1 / (2z + 1 / (2z + ... + 1 / (2z)))

approximates sqrt(1 + z**2) - z.  Its poles sit on the segment [-i, i] at
z_j = i cos(theta_j), theta_j = j pi / (n + 1), with residues
sin(theta_j)**2 / (n + 1), so the truncation is also a sum of simple poles.
"""

from dataclasses import dataclass
from functools import cached_property
import cmath
import math

import numpy as np

from .errors import DivisionNearZero, PoleProximity

POLE_GUARD = 1e-8
_DENOM_GUARD = 1e-30
_MAX_CHEB_DEGREE = 10_000


def _check_finite(z):
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite complex argument {z!r}")
    return z


def chebyshev_u_eval(n, x):
    """Chebyshev polynomial of the second kind U_n(x) by forward recurrence.

    Works for real or complex ``x``, including ``|x| > 1`` where the
    trigonometric form does not apply.
    """
    if n < 0 or n > _MAX_CHEB_DEGREE:
        raise ValueError(f"degree must lie in [0, {_MAX_CHEB_DEGREE}], got {n}")
    if n == 0:
        return x * 0 + 1.0
    u_prev, u = 1, 2 * x
    for _ in range(n - 1):
        u_prev, u = u, 2 * x * u - u_prev
    return u


def continued_fraction_tail(n, z):
    """Depth-``n`` truncation of ``1/(2z + 1/(2z + ...))``.

    Evaluated through the forward denominator recurrence, so an
    intermediate zero partial denominator (``z = 0`` at even depth) does no
    harm.  The pair is rescaled every step to keep it in range.

    Raises
    ------
    DivisionNearZero
        If the normalized final denominator is below 1e-30, i.e. ``z`` sits
        on a pole.
    """
    if n < 1:
        raise ValueError("continued fraction depth must be >= 1")
    z = _check_finite(z)
    b = 2 * z
    # depth-k value is q_{k-1}/q_k with q_k = b q_{k-1} + q_{k-2}
    q_prev, q = 0j, 1 + 0j
    for _ in range(n):
        q_prev, q = q, b * q + q_prev
        scale = max(abs(q), abs(q_prev))
        q_prev, q = q_prev / scale, q / scale
    if abs(q) < _DENOM_GUARD:
        raise DivisionNearZero(f"z={z!r} is at a pole of the depth-{n} truncation")
    return q_prev / q


@dataclass(frozen=True)
class RationalDtN:
    """Pole/residue form of the order-n continued-fraction approximation."""

    n: int
    thetas: tuple
    poles: tuple
    residues: tuple

    @property
    def delta_theta(self):
        """Half the spacing between consecutive angles, pi / (2(n+1))."""
        return math.pi / (2 * (self.n + 1))

    @cached_property
    def _pole_array(self):
        return np.array(self.poles, dtype=complex)

    @cached_property
    def _residue_array(self):
        return np.array(self.residues, dtype=float)


def poles_and_residues(n):
    """Build the :class:`RationalDtN` of order ``n`` (``j = 1..n`` in order)."""
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    thetas = tuple(j * math.pi / (n + 1) for j in range(1, n + 1))
    cosines = [0.0] * n
    residues = [0.0] * n
    # fill the upper half and mirror, so pole pairs are exact negatives
    for j in range(1, n // 2 + 1):
        c = math.cos(thetas[j - 1])
        r = math.sin(thetas[j - 1]) ** 2 / (n + 1)
        cosines[j - 1], cosines[n - j] = c, -c
        residues[j - 1] = residues[n - j] = r
    if n % 2:
        residues[n // 2] = 1.0 / (n + 1)
    poles = tuple(complex(0.0, c) for c in cosines)
    return RationalDtN(n=n, thetas=thetas, poles=poles, residues=tuple(residues))


def partial_fraction_eval(abc, z):
    """Evaluate ``sum_j alpha_j / (z - z_j)``.

    Raises
    ------
    PoleProximity
        If ``z`` lies within 1e-8 of any pole.
    """
    z = _check_finite(z)
    diff = z - abc._pole_array
    if np.min(np.abs(diff)) < POLE_GUARD:
        raise PoleProximity(f"z={z!r} within {POLE_GUARD} of a pole (n={abc.n})")
    return complex(np.sum(abc._residue_array / diff))


def sqrt_dtn_approx(abc, z):
    """Rational approximation ``z + sum_j alpha_j/(z - z_j)`` to sqrt(1+z**2)."""
    return complex(z) + partial_fraction_eval(abc, z)


def sqrt_branch(z):
    """sqrt(1 + z**2) analytic off [-i, i], asymptotic to ``z`` at infinity.

    The principal root serves the right half plane; the left half plane is
    filled in by the odd continuation ``-sqrt(1 + (-z)**2)``.  On the imaginary
    axis the right-hand limit is returned.
    """
    z = _check_finite(z)
    root = cmath.sqrt(1 + z * z)
    return -root if z.real < 0 else root


def h_symbol(z, k_abs=1.0):
    """The nonlocal part ``k/(z + sqrt(1+z**2))`` of the exact boundary symbol."""
    return k_abs / (complex(z) + sqrt_branch(z))


def branch_jump(y, delta, k_abs=1.0):
    """Jump of ``h`` across the cut at ``iy``: ``h(delta+iy) - h(-delta+iy)``.

    Tends to ``2 k_abs sqrt(1 - y**2)`` as ``delta -> 0``; the leading
    correction is ``-2 k_abs delta``.
    """
    if not -1.0 < y < 1.0:
        raise ValueError(f"y must lie in (-1, 1), got {y}")
    if not 0.0 < delta <= 0.1:
        raise ValueError(f"delta must lie in (0, 0.1], got {delta}")
    return h_symbol(complex(delta, y), k_abs) - h_symbol(complex(-delta, y), k_abs)
