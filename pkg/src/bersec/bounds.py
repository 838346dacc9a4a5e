"""Finite-blocklength block/BER bounds for the legitimate receiver and the eavesdropper.

Bob's side is Gallager's random-coding upper bound (ensemble average); Eve's
side is Arimoto's strong-converse lower bound, valid for every code. Both are
driven by the optimised exponent ``max_rho E0(rho) - rho R``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import exp, expm1, log

import numpy as np

from ._optimize import scan_then_golden
from .channels import default_input, gallager_e0

#: clip margin keeping the optimisers off rho = 0 and rho' = -1
RHO_CLIP = 1e-6
RHO_TOL = 1e-9


@dataclass(frozen=True)
class Thresholds:
    """Block-error thresholds and the SPN output-BER floor they are scaled by."""

    p_err_bob_th: float
    p_err_eve_th: float
    spn_ber_low: float = 0.5

    def __post_init__(self):
        if not 0.0 < self.p_err_bob_th <= 1.0:
            raise ValueError(f"p_err_bob_th must lie in (0, 1], got {self.p_err_bob_th}")
        if not 0.0 <= self.p_err_eve_th < 1.0:
            raise ValueError(f"p_err_eve_th must lie in [0, 1), got {self.p_err_eve_th}")
        if not 0.0 < self.spn_ber_low <= 0.5:
            raise ValueError(f"spn_ber_low must lie in (0, 0.5], got {self.spn_ber_low}")

    @property
    def p_ber_bob_th(self):
        return 0.5 * self.p_err_bob_th

    @property
    def p_ber_eve_th(self):
        return self.spn_ber_low * self.p_err_eve_th

    @property
    def bob_degenerate(self):
        return self.p_err_bob_th == 1.0

    @property
    def eve_degenerate(self):
        return self.p_err_eve_th == 0.0


@dataclass(frozen=True)
class ExponentResult:
    rho_opt: float
    exponent: float
    bound: float


def _optimize(channel, dist, rate, lo, hi):
    if dist is None:
        dist = default_input(channel)

    def f(r):
        return gallager_e0(channel, dist, r) - r * rate

    def f_vec(rs):
        return gallager_e0(channel, dist, rs) - rs * rate

    return scan_then_golden(f, lo, hi, tol=RHO_TOL, f_vec=f_vec)


def bob_required_exponent(n, p_err_bob_th):
    """Exponent needed for Bob's block bound to reach ``p_err_bob_th``."""
    return -log(p_err_bob_th) / n


def eve_required_exponent(n, p_err_eve_th):
    """Exponent needed for Eve's block bound to reach ``p_err_eve_th``."""
    return -np.log1p(-p_err_eve_th) / n


def optimize_rho_bob(channel, dist=None, rate=0.0, n=1):
    """Maximise ``E0(rho) - rho R`` over ``rho`` in ``[RHO_CLIP, 1]``.

    ``bound`` is the block-error upper bound at blocklength ``n``.
    """
    if rate <= 0.0:
        raise ValueError(f"rate must be positive, got {rate}")
    rho, e = _optimize(channel, dist, rate, RHO_CLIP, 1.0)
    return ExponentResult(rho, e, _upper_from_exponent(e, n))


def optimize_rho_eve(channel, dist=None, rate=0.0, n=1):
    """Maximise ``E0(rho') - rho' R`` over ``rho'`` in ``[-1 + RHO_CLIP, -RHO_CLIP]``."""
    if rate <= 0.0:
        raise ValueError(f"rate must be positive, got {rate}")
    rho, e = _optimize(channel, dist, rate, -1.0 + RHO_CLIP, -RHO_CLIP)
    return ExponentResult(rho, e, _lower_from_exponent(e, n))


def _upper_from_exponent(e, n):
    if e <= 0.0:
        return 1.0
    return exp(-n * e)


def _lower_from_exponent(e, n):
    if e <= 0.0:
        return 0.0
    return min(1.0, -expm1(-n * e))


def _check_n(n):
    if n < 1:
        raise ValueError(f"blocklength must be a positive integer, got {n}")


def bob_block_upper(channel, dist, rate, n):
    _check_n(n)
    return _upper_from_exponent(optimize_rho_bob(channel, dist, rate).exponent, n)


def eve_block_lower(channel, dist, rate, n):
    _check_n(n)
    return _lower_from_exponent(optimize_rho_eve(channel, dist, rate).exponent, n)


def bob_ber_upper(channel, dist, rate, n):
    return 0.5 * bob_block_upper(channel, dist, rate, n)


def eve_ber_lower(channel, dist, rate, n, spn_ber_low):
    if not 0.0 < spn_ber_low <= 0.5:
        raise ValueError(f"spn_ber_low must lie in (0, 0.5], got {spn_ber_low}")
    return spn_ber_low * eve_block_lower(channel, dist, rate, n)


def block_upper_at(e0, rho, rate, n):
    """Bob's block bound at a fixed ``rho``; vectorised over ``e0``."""
    expo = np.asarray(e0, dtype=float) - rho * rate
    return np.minimum(1.0, np.exp(-n * expo))


def block_lower_at(e0, rho, rate, n):
    """Eve's block bound at a fixed ``rho'``; vectorised over ``e0``."""
    expo = np.asarray(e0, dtype=float) - rho * rate
    return np.clip(-np.expm1(-n * expo), 0.0, 1.0)
