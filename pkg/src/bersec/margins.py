"""Highest reliable rate, lowest secure rate and the rate margins around capacity."""
from __future__ import annotations

from dataclasses import dataclass

from ._optimize import bisect_predicate
from .bounds import (
    Thresholds,
    bob_required_exponent,
    eve_required_exponent,
    optimize_rho_bob,
    optimize_rho_eve,
)
from .channels import capacity, default_input


class InfeasibleError(ValueError):
    """No rate (or channel parameter) satisfies the requested threshold."""


@dataclass(frozen=True)
class MarginResult:
    r_sup: float
    r_inf: float
    c_bob: float
    c_eve: float
    rho_at_sup: float
    rho_prime_at_inf: float

    @property
    def delta_r_bob(self):
        return self.c_bob - self.r_sup

    @property
    def delta_r_eve(self):
        return self.r_inf - self.c_eve

    @property
    def rate_interval(self):
        return self.r_sup - self.r_inf

    @property
    def capacity_interval(self):
        return self.c_bob - self.c_eve

    @property
    def feasible(self):
        return self.rate_interval > 0.0


def rate_sup(channel, dist, n, p_err_bob_th, rtol=1e-12):
    """Largest rate whose Bob block bound stays at or below ``p_err_bob_th``.

    Returns ``(r_sup, rho)`` with ``rho`` the optimiser at ``r_sup``; the
    degenerate threshold 1 gives capacity and ``rho = 0``.
    """
    if not 0.0 < p_err_bob_th <= 1.0:
        raise ValueError(f"p_err_bob_th must lie in (0, 1], got {p_err_bob_th}")
    dist = default_input(channel) if dist is None else dist
    c = capacity(channel)
    if p_err_bob_th == 1.0:
        return c, 0.0
    need = bob_required_exponent(n, p_err_bob_th)

    def ok(rate):
        return optimize_rho_bob(channel, dist, rate).exponent >= need

    tiny = 1e-300
    if c <= 0.0 or not ok(tiny):
        raise InfeasibleError(f"threshold {p_err_bob_th} unreachable at n={n} even as R -> 0")
    r = bisect_predicate(ok, tiny, c, tol=rtol * c)
    return r, optimize_rho_bob(channel, dist, r).rho_opt


def rate_inf(channel, dist, n, p_err_eve_th, rtol=1e-12):
    """Smallest rate whose Eve block bound reaches ``p_err_eve_th``."""
    if not 0.0 <= p_err_eve_th < 1.0:
        raise ValueError(f"p_err_eve_th must lie in [0, 1), got {p_err_eve_th}")
    dist = default_input(channel) if dist is None else dist
    c = capacity(channel)
    if p_err_eve_th == 0.0:
        return c, 0.0
    need = eve_required_exponent(n, p_err_eve_th)

    def ok(rate):
        return optimize_rho_eve(channel, dist, rate).exponent >= need

    step = 1.0
    while not ok(c + step):
        step *= 2.0
        if step > 1e6:
            raise InfeasibleError("no finite rate meets the security threshold")
    r = bisect_predicate(ok, c + step, c, tol=rtol * max(c + step, 1.0))
    return r, optimize_rho_eve(channel, dist, r).rho_opt


def margins(bob_channel, eve_channel, dist, n, thresholds):
    r_sup, rho = rate_sup(bob_channel, dist, n, thresholds.p_err_bob_th)
    r_inf, rho_p = rate_inf(eve_channel, dist, n, thresholds.p_err_eve_th)
    return MarginResult(r_sup, r_inf, capacity(bob_channel), capacity(eve_channel), rho, rho_p)
