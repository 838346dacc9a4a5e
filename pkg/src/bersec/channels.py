"""Memoryless channel families, their capacities and Gallager's E0 function.

Rates and exponents are in nats. A single ``gallager_e0`` serves both the
random-coding side (``0 < rho <= 1``) and the strong-converse side
(``-1 < rho <= 0``).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from math import exp, expm1, log, log1p, sqrt

import numpy as np
from scipy.optimize import brentq

LN2 = log(2.0)


class Family(enum.Enum):
    BSC = "bsc"
    BEC = "bec"
    BI_AWGN = "biawgn"
    GAUSSIAN_AWGN = "gaussian"


@dataclass(frozen=True)
class ChannelModel:
    """A channel family plus its noise parameter.

    ``param`` is the crossover/erasure probability for BSC/BEC and the linear
    SNR for the two AWGN families. ``BI_AWGN`` is the real channel with
    antipodal unit inputs; ``GAUSSIAN_AWGN`` is the complex channel with
    unit-power input, both with noise variance ``1/param``.
    """

    family: Family
    param: float

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        p = float(self.param)
        object.__setattr__(self, "param", p)
        if not np.isfinite(p):
            raise ValueError(f"channel parameter must be finite, got {p}")
        if fam is Family.BSC and not 0.0 <= p <= 0.5:
            raise ValueError(f"BSC crossover probability must lie in [0, 0.5], got {p}")
        if fam is Family.BEC and not 0.0 <= p <= 1.0:
            raise ValueError(f"BEC erasure probability must lie in [0, 1], got {p}")
        if fam in (Family.BI_AWGN, Family.GAUSSIAN_AWGN) and p < 0.0:
            raise ValueError(f"SNR must be nonnegative, got {p}")

    def __str__(self):
        return f"{self.family.value}({self.param:g})"

    @property
    def is_discrete_input(self):
        return self.family is not Family.GAUSSIAN_AWGN


def bsc(eps):
    return ChannelModel(Family.BSC, eps)


def bec(eps):
    return ChannelModel(Family.BEC, eps)


def biawgn(snr):
    return ChannelModel(Family.BI_AWGN, snr)


def gaussian(snr):
    return ChannelModel(Family.GAUSSIAN_AWGN, snr)


class InputKind(enum.Enum):
    EQUIPROBABLE = "equiprobable"
    EXPLICIT = "explicit"
    CIRCULAR_GAUSSIAN = "circular_gaussian"


@dataclass(frozen=True)
class InputDistribution:
    kind: InputKind = InputKind.EQUIPROBABLE
    pmf: tuple = ()
    power: float = 1.0

    def __post_init__(self):
        kind = InputKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is InputKind.EXPLICIT:
            pmf = tuple(float(v) for v in self.pmf)
            if len(pmf) != 2:
                raise ValueError("explicit input pmf must cover the binary alphabet (0, 1)")
            if min(pmf) < 0.0 or abs(sum(pmf) - 1.0) > 1e-12:
                raise ValueError(f"pmf must be nonnegative and sum to 1, got {pmf}")
            object.__setattr__(self, "pmf", pmf)
        if kind is InputKind.CIRCULAR_GAUSSIAN and self.power < 0.0:
            raise ValueError("input power must be nonnegative")


EQUIPROBABLE = InputDistribution()


def explicit(q0, q1=None):
    if q1 is None:
        q1 = 1.0 - q0
    return InputDistribution(InputKind.EXPLICIT, pmf=(q0, q1))


def circular_gaussian(power=1.0):
    return InputDistribution(InputKind.CIRCULAR_GAUSSIAN, power=power)


def default_input(channel):
    """The input law used throughout: equiprobable, or CN(0, 1) for the Gaussian family."""
    if channel.family is Family.GAUSSIAN_AWGN:
        return circular_gaussian(1.0)
    return EQUIPROBABLE


def _check_compat(channel, dist):
    gaussian_in = dist.kind is InputKind.CIRCULAR_GAUSSIAN
    if gaussian_in != (channel.family is Family.GAUSSIAN_AWGN):
        raise TypeError(f"input distribution {dist.kind.value} is incompatible with {channel.family.value}")


def _binary_entropy(p):
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * log(p) - (1.0 - p) * log1p(-p)


# --- BI-AWGN quadrature -----------------------------------------------------

_GL_ORDER = 16
_GL_X, _GL_W = np.polynomial.legendre.leggauss(_GL_ORDER)


def _nodes(edges):
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    y = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
    w = (half[:, None] * _GL_W[None, :]).ravel()
    return y, w


def _half_edges(length, panels, scale):
    """Uniform panels on [0, length], geometrically graded towards 0 below ``scale``.

    ``scale`` is the width of the smoothed kink of cosh(z)^(1+rho) at y = 0.
    """
    uniform = np.linspace(0.0, length, panels + 1)
    h = uniform[1]
    graded = scale * 2.0 ** np.arange(-8, 60)
    graded = graded[graded < h]
    return np.unique(np.concatenate([uniform, graded]))


def _biawgn_halfwidth(snr):
    return 1.0 + 12.0 / sqrt(snr)


def _log_cosh(z):
    az = np.abs(z)
    return az + np.log1p(np.exp(-2.0 * az)) - LN2


def _biawgn_log_integrand_equ(y, snr, rho):
    # log of sqrt(snr/2pi) exp(-snr(y^2+1)/2) cosh(snr*y/(1+rho))^(1+rho)
    s = 1.0 + rho
    return (0.5 * np.log(snr / (2.0 * np.pi)) - 0.5 * snr * (y * y + 1.0)
            + s * _log_cosh(snr * y / s))


def _biawgn_log_integrand_pmf(y, snr, rho, pmf):
    s = 1.0 + rho
    log_f_plus = 0.5 * np.log(snr / (2.0 * np.pi)) - 0.5 * snr * (y - 1.0) ** 2
    log_f_minus = 0.5 * np.log(snr / (2.0 * np.pi)) - 0.5 * snr * (y + 1.0) ** 2
    with np.errstate(divide="ignore"):
        terms = np.stack([np.log(pmf[0]) + log_f_plus / s,
                          np.log(pmf[1]) + log_f_minus / s])
    return s * np.logaddexp(terms[0], terms[1])


def _biawgn_capacity_integrand(y, snr):
    # density of y given x = +1 times log2-complement term, nats
    dens = sqrt(snr / (2.0 * np.pi)) * np.exp(-0.5 * snr * (y - 1.0) ** 2)
    return dens * np.logaddexp(0.0, -2.0 * snr * y)


def _integrate(log_integrand, snr, panels, rhos):
    """Integrate exp(log_integrand(y, rho)) over [-L, L] for each rho."""
    L = _biawgn_halfwidth(snr)
    rhos = np.asarray(rhos, dtype=float)
    out = np.zeros(len(rhos))
    for i, r in enumerate(rhos):
        edges = _half_edges(L, panels, (1.0 + r) / snr)
        y, w = _nodes(edges)
        y = np.concatenate([-y[::-1], y])
        w = np.concatenate([w[::-1], w])
        out[i] = np.dot(w, np.exp(log_integrand(y, r)))
    return out


_PROBE_RHOS = np.array([-0.999999, -0.99, -0.9, -0.5, -1e-3, 1e-3, 0.5, 1.0])


@lru_cache(maxsize=4096)
def biawgn_panels(snr, rtol=1e-12):
    """Panel count per half-range at which the E0 integrals have converged."""
    panels = 4
    prev = _integrate(lambda y, r: _biawgn_log_integrand_equ(y, snr, r), snr, panels, _PROBE_RHOS)
    while panels < 1 << 14:
        panels *= 2
        cur = _integrate(lambda y, r: _biawgn_log_integrand_equ(y, snr, r), snr, panels, _PROBE_RHOS)
        if np.max(np.abs(cur - prev) / np.abs(cur)) < rtol:
            return panels
        prev = cur
    return panels


def _biawgn_e0(snr, rho, pmf=None, panels=None):
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    if snr == 0.0:
        return np.zeros_like(rho)
    if panels is None:
        panels = biawgn_panels(snr)
    if pmf is None:
        integral = _integrate(lambda y, r: _biawgn_log_integrand_equ(y, snr, r), snr, panels, rho)
    else:
        integral = _integrate(lambda y, r: _biawgn_log_integrand_pmf(y, snr, r, pmf), snr, panels, rho)
    out = -np.log(integral)
    out[rho == 0.0] = 0.0
    return out


@lru_cache(maxsize=4096)
def _biawgn_capacity(snr):
    if snr == 0.0:
        return 0.0
    panels = biawgn_panels(snr)
    L = _biawgn_halfwidth(snr)
    y, w = _nodes(np.linspace(-L, L, 2 * panels + 1))
    total = float(np.dot(w, _biawgn_capacity_integrand(y, snr)))
    # mass of N(1, 1/snr) outside [-L, L] carries a ln2-bounded term; negligible at 12 sigma
    return max(0.0, LN2 - total)


# --- public API ---------------------------------------------------------------

def capacity(channel):
    """Capacity in nats per channel use (per complex use for the Gaussian family)."""
    p = channel.param
    if channel.family is Family.BSC:
        return LN2 - _binary_entropy(p)
    if channel.family is Family.BEC:
        return (1.0 - p) * LN2
    if channel.family is Family.GAUSSIAN_AWGN:
        return log1p(p)
    return _biawgn_capacity(p)


def inverse_capacity(family, rate, rtol=1e-10):
    """Channel parameter at which the family's capacity equals ``rate``."""
    family = Family(family)
    if family is Family.GAUSSIAN_AWGN:
        if rate <= 0.0:
            raise ValueError(f"rate must be positive, got {rate}")
        return expm1(rate)
    if not 0.0 < rate < LN2:
        raise ValueError(f"rate {rate} outside (0, ln 2) for {family.value}")
    if family is Family.BEC:
        return 1.0 - rate / LN2
    if family is Family.BSC:
        return brentq(lambda e: capacity(bsc(e)) - rate, 0.0, 0.5, xtol=1e-15, rtol=rtol)
    hi = 1.0
    while _biawgn_capacity(hi) < rate:
        hi *= 2.0
    return brentq(lambda g: _biawgn_capacity(g) - rate, 0.0, hi, xtol=1e-300, rtol=rtol)


def _check_rho(rho):
    r = np.asarray(rho, dtype=float)
    if np.any(r <= -1.0) or np.any(r > 1.0) or np.any(~np.isfinite(r)):
        raise ValueError(f"rho must lie in (-1, 1], got {rho}")
    return r


def gaussian_e0(rho, snr):
    """E0 of the complex AWGN channel with circular Gaussian input; broadcasts."""
    rho = np.asarray(rho, dtype=float)
    return rho * np.log1p(np.asarray(snr, dtype=float) / (1.0 + rho))


def _bsc_e0(eps, rho):
    if eps == 0.0:
        return rho * LN2
    if eps == 0.5:
        return np.zeros_like(rho)
    s = 1.0 + rho
    return rho * LN2 - s * np.logaddexp(log(eps) / s, log1p(-eps) / s)


def _bsc_e0_pmf(eps, rho, pmf):
    s = 1.0 + rho
    q0, q1 = pmf
    with np.errstate(divide="ignore"):
        la, lb = log(q0) if q0 > 0 else -np.inf, log(q1) if q1 > 0 else -np.inf
        le = log(eps) if eps > 0 else -np.inf
        l1e = log1p(-eps)
    # outputs y=0 and y=1
    y0 = np.logaddexp(la + l1e / s, lb + le / s)
    y1 = np.logaddexp(la + le / s, lb + l1e / s)
    return -np.logaddexp(s * y0, s * y1)


def _bec_e0(eps, rho):
    return -np.log(np.exp2(-rho) * (1.0 - eps) + eps)


def _bec_e0_pmf(eps, rho, pmf):
    s = 1.0 + rho
    q0, q1 = pmf
    keep = 1.0 - eps
    # unerased outputs contribute q_x^(1+rho) (1-eps); the erasure symbol eps
    return -np.log(keep * (q0 ** s + q1 ** s) + eps)


def gallager_e0(channel, dist=None, rho=1.0):
    """Gallager's E0(rho, q) in nats; ``rho`` may be a scalar or an array."""
    if dist is None:
        dist = default_input(channel)
    _check_compat(channel, dist)
    r = _check_rho(rho)
    scalar = r.ndim == 0
    r = np.atleast_1d(r)
    p = channel.param
    fam = channel.family
    if fam is Family.GAUSSIAN_AWGN:
        out = gaussian_e0(r, dist.power * p)
    elif dist.kind is InputKind.EQUIPROBABLE:
        if fam is Family.BSC:
            out = _bsc_e0(p, r)
        elif fam is Family.BEC:
            out = _bec_e0(p, r)
        else:
            out = _biawgn_e0(p, r)
    else:
        if fam is Family.BSC:
            out = _bsc_e0_pmf(p, r, dist.pmf)
        elif fam is Family.BEC:
            out = _bec_e0_pmf(p, r, dist.pmf)
        else:
            out = _biawgn_e0(p, r, pmf=dist.pmf)
    out = np.where(r == 0.0, 0.0, out)
    return float(out[0]) if scalar else out


def biawgn_e0(snr, rho, pmf=None, panels=None):
    """BI-AWGN E0 with an explicit panel count (for convergence checks)."""
    return _biawgn_e0(float(snr), rho, pmf=pmf, panels=panels)
