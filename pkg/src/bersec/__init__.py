"""Finite-blocklength reliability/security toolkit for coded wiretap links.

Channel exponents, block/BER bounds, keyless SPN error amplification, rate
margins, security gaps and fading outage under power control.
"""
from .bounds import (
    ExponentResult,
    Thresholds,
    bob_ber_upper,
    bob_block_upper,
    eve_ber_lower,
    eve_block_lower,
    optimize_rho_bob,
    optimize_rho_eve,
)
from .channels import (
    ChannelModel,
    Family,
    InputDistribution,
    bec,
    biawgn,
    bsc,
    capacity,
    circular_gaussian,
    explicit,
    gallager_e0,
    gaussian,
    inverse_capacity,
)
from .fading import FadingScenario, OutageReport, PowerPolicy, outage_mc, preset_scenario
from .gap import (
    GapResult,
    GapUndefinedError,
    existence_condition,
    g_bob,
    g_eve,
    gamma_limits_gaussian,
    security_gap_biawgn,
    security_gap_discrete,
    security_gap_gaussian,
    security_gap_high_snr,
)
from .margins import InfeasibleError, MarginResult, margins, rate_inf, rate_sup
from .spn import SpnGeometry, ideal_ber, simulate_spn_ber, spn_ber_lower

__version__ = "0.1.0"
