"""Security gap: how far apart Bob's and Eve's channels must be.

For the complex AWGN channel with circular Gaussian input the SNR limits have
closed forms ``g_bob`` / ``g_eve`` optimised over one scalar. For BI-AWGN,
BSC and BEC the limits come from bisection on the channel parameter with the
bounds of :mod:`bersec.bounds` inside.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import expm1, log, log10, log1p

import numpy as np

from ._optimize import bisect_predicate, scan_then_golden
from .bounds import (
    RHO_CLIP,
    RHO_TOL,
    bob_required_exponent,
    eve_required_exponent,
    optimize_rho_bob,
    optimize_rho_eve,
)
from .channels import Family, ChannelModel, inverse_capacity
from .margins import InfeasibleError


class GapUndefinedError(ValueError):
    """Eve's SNR limit is not positive, so no finite gap exists."""


@dataclass(frozen=True)
class GapResult:
    gap: float
    bob_limit: float
    eve_limit: float
    rho_opt: float
    rho_prime_opt: float
    reference_param: float
    family: Family


def _as_array(x):
    return np.asarray(x, dtype=float)


def g_bob(rho, n, rate, p_err_bob_th):
    """SNR Bob needs at a given ``rho`` so his block bound hits the threshold."""
    rho = _as_array(rho)
    if np.any(rho <= 0.0) or np.any(rho > 1.0):
        raise ValueError("g_bob needs rho in (0, 1]")
    with np.errstate(over="ignore"):
        return (1.0 + rho) * np.expm1(rate - log(p_err_bob_th) / (n * rho))


def g_eve(rho_prime, n, rate, p_err_eve_th):
    """Largest SNR Eve may have at a given ``rho'`` for the security threshold to hold."""
    rp = _as_array(rho_prime)
    if np.any(rp <= -1.0) or np.any(rp >= 0.0):
        raise ValueError("g_eve needs rho' in (-1, 0)")
    with np.errstate(over="ignore"):
        return (1.0 + rp) * np.expm1(rate - log1p(-p_err_eve_th) / (n * rp))


def _minimize_g_bob(n, rate, p_bob):
    x, neg = scan_then_golden(lambda r: -float(g_bob(r, n, rate, p_bob)), RHO_CLIP, 1.0,
                              tol=RHO_TOL, f_vec=lambda rs: -g_bob(rs, n, rate, p_bob))
    return x, -neg


def _maximize_g_eve(n, rate, p_eve):
    return scan_then_golden(lambda r: float(g_eve(r, n, rate, p_eve)), -1.0 + RHO_CLIP, -RHO_CLIP,
                            tol=RHO_TOL, f_vec=lambda rs: g_eve(rs, n, rate, p_eve))


def existence_lhs(n, rate, p_err_eve_th):
    return (1.0 - 2.0 / n * log1p(-p_err_eve_th)) * (1.0 - p_err_eve_th) ** (1.0 / n) * np.exp(rate)


def existence_condition(n, rate, p_err_eve_th):
    """Published existence test for a positive Eve SNR limit.

    It is necessary but not sufficient: see :func:`eve_limit_exists` for the
    exact criterion. The two agree on every practical grid (``n > 10``).
    """
    return bool(existence_lhs(n, rate, p_err_eve_th) > 1.0)


def eve_limit_exists(n, rate, p_err_eve_th):
    """Exact test: ``sup g_eve > 0`` iff ``R > -ln(1 - P) / n``.

    ``g_eve`` is positive at ``rho'`` iff ``|rho'| > -ln(1-P)/(n R)``, and such
    a ``rho'`` in ``(-1, 0)`` exists iff that ratio is below one.
    """
    return bool(rate > -log1p(-p_err_eve_th) / n)


def gamma_limits_gaussian(n, rate, thresholds):
    """``(gamma_bob_inf, rho, gamma_eve_sup, rho_prime)`` for the Gaussian-input channel.

    ``gamma_eve_sup`` may be nonpositive when the existence condition fails;
    callers needing a gap must check it.
    """
    if rate <= 0.0:
        raise ValueError("rate must be positive")
    gamma0 = expm1(rate)
    if thresholds.bob_degenerate:
        gb, rho = gamma0, 0.0
    else:
        rho, gb = _minimize_g_bob(n, rate, thresholds.p_err_bob_th)
    if thresholds.eve_degenerate:
        ge, rho_p = gamma0, 0.0
    else:
        rho_p, ge = _maximize_g_eve(n, rate, thresholds.p_err_eve_th)
    return gb, rho, ge, rho_p


def _db_ratio(bob, eve):
    if eve <= 0.0:
        raise GapUndefinedError(f"Eve's SNR limit {eve!r} is not positive")
    return 10.0 * log10(bob / eve)


def security_gap_gaussian(n, rate, thresholds):
    gb, rho, ge, rho_p = gamma_limits_gaussian(n, rate, thresholds)
    return GapResult(_db_ratio(gb, ge), gb, ge, rho, rho_p, expm1(rate), Family.GAUSSIAN_AWGN)


def security_gap_high_snr(n, rate, thresholds):
    """High-SNR approximation of the Gaussian-input gap in dB.

    Returns ``(gap_db, rho, rho_prime, terms)`` where ``terms`` are Bob's
    threshold term, Eve's threshold term and the ``(1 + rho)/(1 + rho')`` term.
    """
    p_bob, p_eve = thresholds.p_err_bob_th, thresholds.p_err_eve_th
    if thresholds.bob_degenerate or thresholds.eve_degenerate:
        raise ValueError("the high-SNR gap needs interior thresholds")
    lb, le = log(p_bob), log1p(-p_eve)

    # log of the approximate SNR limits with e^R dropped (it cancels in the ratio)
    def bob_obj(r):
        return -(np.log1p(r) - lb / (n * r))

    def eve_obj(r):
        return np.log1p(r) - le / (n * r)

    rho, _ = scan_then_golden(lambda r: float(bob_obj(r)), RHO_CLIP, 1.0, tol=RHO_TOL, f_vec=bob_obj)
    rho_p, _ = scan_then_golden(lambda r: float(eve_obj(r)), -1.0 + RHO_CLIP, -RHO_CLIP,
                                tol=RHO_TOL, f_vec=eve_obj)
    terms = (-10.0 * log10(p_bob) / (n * rho),
             10.0 * log10(1.0 - p_eve) / (n * rho_p),
             10.0 * log10((1.0 + rho) / (1.0 + rho_p)))
    return sum(terms), rho, rho_p, terms


# --- numerically obtained gaps --------------------------------------------------

def _bob_ok(family, n, rate, need):
    def ok(param):
        return optimize_rho_bob(ChannelModel(family, param), None, rate).exponent >= need
    return ok


def _eve_ok(family, n, rate, need):
    def ok(param):
        return optimize_rho_eve(ChannelModel(family, param), None, rate).exponent >= need
    return ok


_EPS_MAX = {Family.BSC: 0.5, Family.BEC: 1.0 - 1e-9}


def security_gap_discrete(family, n, rate, thresholds, tol=1e-12):
    """Gap ``eps_eve_inf - eps_bob_sup`` for BSC or BEC."""
    family = Family(family)
    if family not in _EPS_MAX:
        raise ValueError(f"discrete gap is defined for BSC and BEC, not {family.value}")
    eps0 = inverse_capacity(family, rate)
    rho = rho_p = 0.0

    if thresholds.bob_degenerate:
        eps_bob = eps0
    else:
        ok = _bob_ok(family, n, rate, bob_required_exponent(n, thresholds.p_err_bob_th))
        if not ok(0.0):
            raise InfeasibleError("Bob's threshold is unreachable even on a noiseless channel")
        eps_bob = bisect_predicate(ok, 0.0, eps0, tol)
        rho = optimize_rho_bob(ChannelModel(family, eps_bob), None, rate).rho_opt

    if thresholds.eve_degenerate:
        eps_eve = eps0
    else:
        eps_max = _EPS_MAX[family]
        ok = _eve_ok(family, n, rate, eve_required_exponent(n, thresholds.p_err_eve_th))
        if not ok(eps_max):
            raise InfeasibleError("Eve's threshold is unreachable even on the noisiest channel")
        eps_eve = bisect_predicate(ok, eps_max, eps0, tol)
        rho_p = optimize_rho_eve(ChannelModel(family, eps_eve), None, rate).rho_opt

    return GapResult(eps_eve - eps_bob, eps_bob, eps_eve, rho, rho_p, eps0, family)


def security_gap_biawgn(n, rate, thresholds, rtol=1e-10):
    """Gap in dB for the binary-input real AWGN channel (rate per real dimension)."""
    family = Family.BI_AWGN
    gamma0 = inverse_capacity(family, rate)
    rho = rho_p = 0.0

    if thresholds.bob_degenerate:
        gb = gamma0
    else:
        ok = _bob_ok(family, n, rate, bob_required_exponent(n, thresholds.p_err_bob_th))
        hi = 2.0 * gamma0
        while not ok(hi):
            hi *= 2.0
            if hi > 1e8:
                raise InfeasibleError("Bob's threshold is unreachable at any SNR")
        gb = bisect_predicate(ok, hi, gamma0, rtol * gamma0)
        rho = optimize_rho_bob(ChannelModel(family, gb), None, rate).rho_opt

    if thresholds.eve_degenerate:
        ge = gamma0
    else:
        ok = _eve_ok(family, n, rate, eve_required_exponent(n, thresholds.p_err_eve_th))
        if not ok(0.0):
            raise InfeasibleError("Eve's threshold is unreachable even at zero SNR")
        ge = bisect_predicate(ok, 0.0, gamma0, rtol * gamma0)
        rho_p = optimize_rho_eve(ChannelModel(family, ge), None, rate).rho_opt

    return GapResult(_db_ratio(gb, ge), gb, ge, rho, rho_p, gamma0, family)
