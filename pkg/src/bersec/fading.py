"""Outage analysis for Rayleigh-fading wiretap links with Gaussian input.

Bob's and Eve's power gains are exponential draws. For each draw the link is
judged with the finite-blocklength BER bounds; a power policy is either a
constant ``p_av`` or the reliability-optimal policy that transmits the
smallest power meeting Bob's target, provided it does not exceed the largest
power Eve tolerates and it fits the average-power budget.

All quantities use the complex (two-dimensional) Gaussian-input model, so
rates are in nats per complex channel use.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import inf

import numpy as np

from .bounds import Thresholds, block_lower_at, block_upper_at, bob_required_exponent, eve_required_exponent
from .channels import gaussian_e0
from .gap import _maximize_g_eve, _minimize_g_bob

SAMPLE_BLOCK = 4096
#: relative slack on exponent comparisons; p = p_min puts Bob exactly on his boundary
EXP_RTOL = 1e-9


class ScenarioError(ValueError):
    pass


class PolicyKind(Enum):
    CONSTANT = "constant"
    OPTIMAL = "optimal"


@dataclass(frozen=True)
class PowerPolicy:
    kind: PolicyKind
    p: float | None = None

    @classmethod
    def constant(cls, p=None):
        """Fixed power; ``None`` means use each grid point's ``p_av``."""
        if p is not None and p < 0.0:
            raise ValueError("power must be nonnegative")
        return cls(PolicyKind.CONSTANT, p)

    @classmethod
    def optimal(cls):
        return cls(PolicyKind.OPTIMAL)


@dataclass(frozen=True)
class FadingScenario:
    mean_gain_bob: float
    mean_gain_eve: float
    noise_var: float
    n: int
    R: float
    thresholds: Thresholds
    p_av_grid: tuple = ()
    samples: int = 100_000
    seed: int = 0
    condition_on_bob_stronger: bool = True
    noise_var_eve: float | None = None

    def __post_init__(self):
        for name in ("mean_gain_bob", "mean_gain_eve", "noise_var"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")
        if self.noise_var_eve is not None and not self.noise_var_eve > 0.0:
            raise ValueError("noise_var_eve must be positive")
        if self.n < 1:
            raise ValueError("blocklength must be positive")
        if not self.R > 0.0:
            raise ValueError("rate must be positive")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        grid = tuple(float(p) for p in self.p_av_grid)
        if any(p < 0.0 for p in grid):
            raise ValueError("p_av grid entries must be nonnegative")
        object.__setattr__(self, "p_av_grid", grid)

    @property
    def sigma2_eve(self):
        return self.noise_var if self.noise_var_eve is None else self.noise_var_eve


@dataclass(frozen=True)
class OutageReport:
    p_av: float
    rel: float
    sec: float
    overall: float
    suspension: float
    z_opt: float
    z_open: bool
    achieved_avg_power: float
    accepted: int


@dataclass(frozen=True)
class PolicyConstants:
    """``rho``/``rho'`` optimisers and the channel-free SNR limits they give."""

    rho: float
    rho_prime: float
    g_bob_min: float
    g_eve_max: float


def policy_constants(n, rate, thresholds):
    """Compute the channel-independent optimisers once per scenario."""
    if thresholds.bob_degenerate:
        raise ValueError("the optimal policy needs an interior reliability threshold")
    rho, gb = _minimize_g_bob(n, rate, thresholds.p_err_bob_th)
    if thresholds.eve_degenerate:
        return PolicyConstants(rho, 0.0, gb, inf)
    rho_p, ge = _maximize_g_eve(n, rate, thresholds.p_err_eve_th)
    return PolicyConstants(rho, rho_p, gb, ge)


def p_min(gamma_bob, n, R, p_err_bob_th, consts=None):
    """Smallest power meeting Bob's BER target at instantaneous SNR gain ``gamma_bob``."""
    if consts is None:
        _, gb = _minimize_g_bob(n, R, p_err_bob_th)
    else:
        gb = consts.g_bob_min
    return gb / np.asarray(gamma_bob, dtype=float)


def p_max(gamma_eve, n, R, p_err_eve_th, consts=None):
    """Largest power keeping Eve above her BER target; 0 when no power works."""
    if consts is None:
        if p_err_eve_th == 0.0:
            ge = inf
        else:
            _, ge = _maximize_g_eve(n, R, p_err_eve_th)
    else:
        ge = consts.g_eve_max
    ge = max(ge, 0.0)
    return ge / np.asarray(gamma_eve, dtype=float)


def z_opt(pmin, pmax, p_av):
    """Power cap of the optimal policy on a fixed sample set.

    Returns ``(z, open_side)``. Samples with ``pmin <= pmax`` are eligible;
    transmitting to eligible samples with ``pmin <= z`` gives the sample
    average power, a right-continuous step function of ``z``. ``z`` is the
    largest feasible level: ``inf`` when every eligible sample fits, else the
    first excluded ``pmin`` value with ``open_side=True`` (the supremum is not
    attained, so samples at exactly that value stay suspended).
    """
    pmin = np.asarray(pmin, dtype=float)
    pmax = np.asarray(pmax, dtype=float)
    total = pmin.size
    if total == 0:
        raise ScenarioError("empty sample set")
    vals = np.sort(pmin[pmin <= pmax])
    if vals.size == 0:
        return inf, False
    csum = np.cumsum(vals)
    # only admit whole groups of tied values
    ends = np.flatnonzero(np.r_[vals[1:] != vals[:-1], True])
    feasible = ends[csum[ends] / total <= p_av]
    if feasible.size and feasible[-1] == vals.size - 1:
        return inf, False
    first_out = 0 if feasible.size == 0 else feasible[-1] + 1
    return float(vals[first_out]), True


def _under_cap(pmin, z, open_side):
    return pmin < z if open_side else pmin <= z


def optimal_power(gamma_bob, gamma_eve, scenario, z, open_side=False, consts=None):
    """Power assigned by the reliability-optimal policy (vectorised)."""
    if consts is None:
        consts = policy_constants(scenario.n, scenario.R, scenario.thresholds)
    lo = p_min(gamma_bob, scenario.n, scenario.R, None, consts)
    hi = p_max(gamma_eve, scenario.n, scenario.R, None, consts)
    ok = (lo <= hi) & _under_cap(lo, z, open_side)
    return np.where(ok, lo, 0.0)


def draw_gains(scenario):
    """Instantaneous SNR gains ``(Gamma_bob, Gamma_eve)`` after optional rejection.

    Draws are made in blocks of ``SAMPLE_BLOCK`` keyed by ``(seed, block)``;
    ``samples`` counts draws before rejection.
    """
    gb, ge = [], []
    for block in range((scenario.samples + SAMPLE_BLOCK - 1) // SAMPLE_BLOCK):
        m = min(SAMPLE_BLOCK, scenario.samples - block * SAMPLE_BLOCK)
        rng = np.random.default_rng(np.random.SeedSequence(scenario.seed, spawn_key=(block,)))
        # full blocks keep every prefix identical across sample counts
        gb.append(rng.exponential(scenario.mean_gain_bob, SAMPLE_BLOCK)[:m])
        ge.append(rng.exponential(scenario.mean_gain_eve, SAMPLE_BLOCK)[:m])
    hb, he = np.concatenate(gb), np.concatenate(ge)
    if scenario.condition_on_bob_stronger:
        keep = hb > he
        hb, he = hb[keep], he[keep]
    if hb.size == 0:
        raise ScenarioError("no channel draws left after conditioning on |h_bob| > |h_eve|")
    return hb / scenario.noise_var, he / scenario.sigma2_eve


def outage_events(power, gamma_bob, gamma_eve, scenario, consts):
    """Boolean ``(rel, sec)`` outage indicators per sample.

    Bob's bound is evaluated at ``rho`` and Eve's at ``rho'`` from
    ``consts``; for Gaussian input these fixed-``rho`` tests coincide with
    the fully optimised bounds.
    """
    n, R, th = scenario.n, scenario.R, scenario.thresholds
    snr_b = power * gamma_bob
    snr_e = power * gamma_eve
    if th.bob_degenerate:
        rel = np.zeros(snr_b.shape, dtype=bool)
    else:
        need = bob_required_exponent(n, th.p_err_bob_th)
        have = gaussian_e0(consts.rho, snr_b) - consts.rho * R
        rel = have < need * (1.0 - EXP_RTOL)
    if th.eve_degenerate:
        sec = np.zeros(snr_e.shape, dtype=bool)
    else:
        need = eve_required_exponent(n, th.p_err_eve_th)
        have = gaussian_e0(consts.rho_prime, snr_e) - consts.rho_prime * R
        sec = have < need * (1.0 - EXP_RTOL)
    return rel, sec


def ber_bounds(power, gamma_bob, gamma_eve, scenario, consts):
    """Bob's BER upper bound and Eve's BER lower bound at the policy optimisers."""
    n, R, th = scenario.n, scenario.R, scenario.thresholds
    up = 0.5 * block_upper_at(gaussian_e0(consts.rho, power * gamma_bob), consts.rho, R, n)
    low = th.spn_ber_low * block_lower_at(gaussian_e0(consts.rho_prime, power * gamma_eve),
                                          consts.rho_prime, R, n)
    return up, low


def _report(p_av, power, rel, sec, z, z_open):
    m = power.size
    return OutageReport(
        p_av=p_av,
        rel=np.count_nonzero(rel) / m,
        sec=np.count_nonzero(sec) / m,
        overall=np.count_nonzero(rel | sec) / m,
        suspension=np.count_nonzero(power == 0.0) / m,
        z_opt=z,
        z_open=z_open,
        achieved_avg_power=float(power.mean()),
        accepted=m,
    )


def outage_mc(scenario, policy, gains=None):
    """One :class:`OutageReport` per ``p_av`` in the scenario grid.

    All grid points share one set of channel draws.
    """
    if gains is None:
        gains = draw_gains(scenario)
    gamma_b, gamma_e = gains
    consts = policy_constants(scenario.n, scenario.R, scenario.thresholds)
    reports = []
    if policy.kind is PolicyKind.OPTIMAL:
        lo = p_min(gamma_b, scenario.n, scenario.R, None, consts)
        hi = p_max(gamma_e, scenario.n, scenario.R, None, consts)
        for p_av in scenario.p_av_grid:
            z, z_open = z_opt(lo, hi, p_av)
            power = np.where((lo <= hi) & _under_cap(lo, z, z_open), lo, 0.0)
            rel, sec = outage_events(power, gamma_b, gamma_e, scenario, consts)
            reports.append(_report(p_av, power, rel, sec, z, z_open))
    else:
        for p_av in scenario.p_av_grid:
            p = p_av if policy.p is None else policy.p
            power = np.full(gamma_b.shape, p)
            rel, sec = outage_events(power, gamma_b, gamma_e, scenario, consts)
            reports.append(_report(p_av, power, rel, sec, inf, False))
    return reports


def infeasible_fraction(scenario, gains=None):
    """Share of samples where Bob's minimum power exceeds Eve's maximum."""
    if gains is None:
        gains = draw_gains(scenario)
    consts = policy_constants(scenario.n, scenario.R, scenario.thresholds)
    lo = p_min(gains[0], scenario.n, scenario.R, None, consts)
    hi = p_max(gains[1], scenario.n, scenario.R, None, consts)
    return np.count_nonzero(lo > hi) / lo.size


def infeasible_probability(scenario):
    """Closed-form ``Pr(p_min > p_max)`` for exponential gains.

    With ``X`` (Bob) and ``Y`` (Eve) exponential of means ``a`` and ``b``,
    ``Pr(Y > t X) = 1 / (1 + t a / b)``. The event is ``Gamma_eve / Gamma_bob > c``
    with ``c = g_eve_max / g_bob_min``.
    """
    consts = policy_constants(scenario.n, scenario.R, scenario.thresholds)
    if consts.g_eve_max <= 0.0:
        return 1.0
    # rescale noise so the event is expressed in raw gains
    c = consts.g_eve_max / consts.g_bob_min * scenario.sigma2_eve / scenario.noise_var
    k = scenario.mean_gain_bob / scenario.mean_gain_eve

    def tail(t):
        return 1.0 / (1.0 + t * k)

    if not scenario.condition_on_bob_stronger:
        return tail(c)
    if c >= 1.0:
        return 0.0
    return (tail(c) - tail(1.0)) / (1.0 - tail(1.0))


def db_grid(lo_db, hi_db, step_db):
    """Linear ``p_av / sigma^2`` values on a dB grid (inclusive of ``hi_db``)."""
    db = np.arange(lo_db, hi_db + 0.5 * step_db, step_db)
    return db, 10.0 ** (db / 10.0)


def preset_scenario(figure, R, samples=100_000, seed=0, grid_db=(0.0, 40.0, 2.0), spn_ber_low=0.5):
    """Scenarios behind the fading outage figures (8 and 9 share gains 2/1; 10 uses 10/1)."""
    gains = {8: (2.0, 1.0), 9: (2.0, 1.0), 10: (10.0, 1.0)}
    if figure not in gains:
        raise ValueError(f"no fading preset for figure {figure}")
    _, lin = db_grid(*grid_db)
    return FadingScenario(
        mean_gain_bob=gains[figure][0],
        mean_gain_eve=gains[figure][1],
        noise_var=1.0,
        n=100_000,
        R=R,
        thresholds=Thresholds(1e-4, 0.9999, spn_ber_low),
        p_av_grid=tuple(lin),
        samples=samples,
        seed=seed,
    )
