"""Analytic mode functions g(z) with closed-form derivatives.

A mode function enters the branch-cut integral through
``k g(s/k) = U(s, k)``.  Every registered function is analytic on an open
neighbourhood of the segment [-i, i].  All callables accept scalars or numpy
arrays.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import UnknownFunction


@dataclass(frozen=True)
class AnalyticMode:
    name: str
    eval: Callable
    eval_d1: Callable
    eval_d2: Callable

    def __call__(self, z):
        return self.eval(z)

    def scaled(self, c):
        """Return ``c * g`` (derivatives scale alike)."""
        return AnalyticMode(
            name=f"{c!r}*{self.name}",
            eval=lambda z: c * self.eval(z),
            eval_d1=lambda z: c * self.eval_d1(z),
            eval_d2=lambda z: c * self.eval_d2(z),
        )


def constant(c=1.0, name=None):
    c = complex(c) if isinstance(c, complex) else float(c)
    zero = lambda z: np.zeros_like(np.asarray(z, dtype=complex))
    return AnalyticMode(
        name=name or f"const{c:g}",
        eval=lambda z: c + np.zeros_like(np.asarray(z, dtype=complex)),
        eval_d1=zero,
        eval_d2=zero,
    )


def monomial(p, name=None):
    if p < 0:
        raise ValueError("monomial degree must be nonnegative")
    if p == 0:
        return constant(1.0, name=name or "z0")

    def d2(z):
        z = np.asarray(z, dtype=complex)
        return p * (p - 1) * z ** (p - 2) if p >= 2 else np.zeros_like(z)

    return AnalyticMode(
        name=name or ("z" if p == 1 else f"z{p}"),
        eval=lambda z: np.asarray(z, dtype=complex) ** p,
        eval_d1=lambda z: p * np.asarray(z, dtype=complex) ** (p - 1),
        eval_d2=d2,
    )


def runge(a, name=None):
    """``1/(z + a)``; the pole at ``-a`` stays off the cut for ``a > 0``."""
    if a <= 0:
        raise ValueError("runge shift must be positive so the pole avoids [-i, i]")

    def g(z):
        return 1.0 / (np.asarray(z, dtype=complex) + a)

    return AnalyticMode(
        name=name or f"runge{a:g}",
        eval=g,
        eval_d1=lambda z: -g(z) ** 2,
        eval_d2=lambda z: 2 * g(z) ** 3,
    )


def gaussian(name="gauss"):
    """``exp(-z**2)``, entire."""

    def g(z):
        return np.exp(-np.asarray(z, dtype=complex) ** 2)

    return AnalyticMode(
        name=name,
        eval=g,
        eval_d1=lambda z: -2 * np.asarray(z, dtype=complex) * g(z),
        eval_d2=lambda z: (4 * np.asarray(z, dtype=complex) ** 2 - 2) * g(z),
    )


REGISTRY = {
    m.name: m
    for m in (
        constant(1.0, name="const1"),
        monomial(1),
        monomial(2),
        monomial(3),
        monomial(4),
        runge(2.0),
        runge(1.5),
        gaussian(),
    )
}


def get_mode(name):
    try:
        return REGISTRY[name]
    except KeyError:
        known = ", ".join(sorted(REGISTRY))
        raise UnknownFunction(f"unknown mode function {name!r}; known: {known}") from None
