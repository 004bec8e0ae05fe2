"""The Marchenko-Pastur singular-value distribution.

Density, CDF, and upper-tail quantiles of the limiting law for singular
values of large i.i.d. noise matrices with aspect ratio q = m/n and
scale sigma:

    g(x) = sqrt((x^2 - x_min^2) (x_max^2 - x^2)) / (pi q sigma^2 x)

on [x_min, x_max] with x_min = sigma (1 - sqrt(q)), x_max = sigma (1 + sqrt(q)).

The CDF integrates g with the substitution x^2 = x_min^2 + (x_max^2 -
x_min^2) sin^2(u), which removes the square-root endpoint singularities
so adaptive quadrature converges quickly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import InputError, NumericalError

_QUAD_EPSABS = 1e-12
_QUAD_EPSREL = 1e-11


@dataclass(frozen=True)
class MpParams:
    """Scale sigma > 0 and aspect ratio q in (0, 1]."""

    sigma: float
    q: float

    def __post_init__(self):
        if not (self.sigma > 0 and np.isfinite(self.sigma)):
            raise InputError(f"sigma must be positive and finite, got {self.sigma}")
        if not (0 < self.q <= 1):
            raise InputError(f"q must lie in (0, 1], got {self.q}")

    @property
    def x_min(self) -> float:
        return self.sigma * (1.0 - np.sqrt(self.q))

    @property
    def x_max(self) -> float:
        return self.sigma * (1.0 + np.sqrt(self.q))


def mp_density(x, params: MpParams):
    """Density g(x); zero outside [x_min, x_max].

    At q = 1 the left endpoint is x = 0 and g(0) is defined by its
    continuous limit x_max / (pi q sigma^2).
    """
    x_arr = np.asarray(x, dtype=float)
    scalar = x_arr.ndim == 0
    x_arr = np.atleast_1d(x_arr)
    a = params.x_min ** 2
    b = params.x_max ** 2
    out = np.zeros_like(x_arr)
    x2 = x_arr * x_arr
    inside = (x2 >= a) & (x2 <= b) & (x_arr > 0)
    xi = x_arr[inside]
    rad = (xi * xi - a) * (b - xi * xi)
    out[inside] = np.sqrt(np.maximum(rad, 0.0)) / (np.pi * params.q * params.sigma ** 2 * xi)
    if params.q == 1.0:
        out[x_arr == 0.0] = params.x_max / (np.pi * params.q * params.sigma ** 2)
    return float(out[0]) if scalar else out


def _mass_integrand(u: float, a: float, b: float, q: float, sigma: float) -> float:
    # g(x) dx expressed in u where x^2 = a + (b - a) sin^2 u.
    s = np.sin(u)
    c = np.cos(u)
    y = a + (b - a) * s * s
    return (b - a) ** 2 * (s * c) ** 2 / (np.pi * q * sigma ** 2 * y)


def _u_of_x(x: float, a: float, b: float) -> float:
    r = (x * x - a) / (b - a)
    return float(np.arcsin(np.sqrt(min(max(r, 0.0), 1.0))))


def mp_cdf(x: float, params: MpParams) -> float:
    """P(X <= x) for the MP law; 0 below x_min, 1 above x_max."""
    a = params.x_min ** 2
    b = params.x_max ** 2
    if x <= params.x_min:
        return 0.0
    if x >= params.x_max:
        return 1.0
    u_hi = _u_of_x(x, a, b)
    val, err = quad(_mass_integrand, 0.0, u_hi,
                    args=(a, b, params.q, params.sigma),
                    epsabs=_QUAD_EPSABS, epsrel=_QUAD_EPSREL, limit=200)
    if err > 1e-8:
        raise NumericalError(
            f"MP CDF quadrature failed to converge (err={err:.2e}) for {params}")
    return min(max(val, 0.0), 1.0)


def mp_upper_quantile(mass: float, params: MpParams) -> float:
    """The x with upper-tail mass ``mass``: integral of g over [x, x_max].

    mass = 0 returns x_max, mass = 1 returns x_min.
    """
    if not 0.0 <= mass <= 1.0:
        raise InputError(f"mass must lie in [0, 1], got {mass}")
    if mass == 0.0:
        return params.x_max
    if mass == 1.0:
        return params.x_min
    target = 1.0 - mass
    x = brentq(lambda t: mp_cdf(t, params) - target,
               params.x_min, params.x_max,
               xtol=1e-12 * params.sigma, rtol=8.9e-16, maxiter=200)
    return float(x)
