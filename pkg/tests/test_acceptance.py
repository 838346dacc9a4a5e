"""Acceptance suite: one test and one PASS/FAIL line per criterion.

Run ``pytest tests/test_acceptance.py`` (the verdicts appear in the terminal
summary) or ``python tests/test_acceptance.py``.
"""
import math
import time
from fractions import Fraction
from itertools import product

import numpy as np
from scipy import integrate

from acceptance_log import record
from bersec.bounds import (
    RHO_CLIP,
    Thresholds,
    bob_block_upper,
    eve_block_lower,
    optimize_rho_bob,
    optimize_rho_eve,
)
from bersec.channels import bec, biawgn, bsc, capacity, explicit, gallager_e0, gaussian
from bersec.fading import FadingScenario, PowerPolicy, outage_mc, policy_constants, preset_scenario
from bersec.gap import (
    existence_condition,
    g_bob,
    g_eve,
    gamma_limits_gaussian,
    security_gap_biawgn,
    security_gap_gaussian,
)
from bersec.margins import margins, rate_sup
from bersec.spn import SpnGeometry, ideal_ber, ideal_weight_dists, simulate_spn_ber

N_DECADES = [100, 1000, 10 ** 4, 10 ** 5, 10 ** 6]
N_HALF = [int(round(10 ** e)) for e in np.arange(2.0, 6.01, 0.5)]
PAIRS = [(1e-2, 0.99), (1e-4, 0.9999), (1e-6, 0.999999)]


def _close(label, got, want, tol):
    return label, abs(got - want) <= tol, f"got {got!r}, want {want!r} +- {tol:g}"


# --- 1 ---------------------------------------------------------------------------

def criterion_1():
    t0 = time.perf_counter()
    checks = [
        _close("E0 BSC(0) rho=1", gallager_e0(bsc(0.0), None, 1.0), math.log(2.0), 1e-12),
        _close("E0 Gaussian(3) rho=1", gallager_e0(gaussian(3.0), None, 1.0), math.log(2.5), 1e-12),
        _close("E0 BEC(0.5) rho=1", gallager_e0(bec(0.5), None, 1.0), -math.log(0.75), 1e-12),
    ]
    for ch in (bsc(0.11), bec(0.3), gaussian(2.0), biawgn(1.5), biawgn(100.0)):
        checks.append(_close(f"E0 {ch} rho=0", float(gallager_e0(ch, None, 0.0)), 0.0, 1e-12))
    return record(1, "closed-form E0 spot checks", checks, time.perf_counter() - t0, 1)


# --- 2 ---------------------------------------------------------------------------

def _single_box_law():
    return [Fraction(math.comb(8, w), 255) for w in range(1, 9)]


def _exhaustive_k8_b4(rounds):
    """Weight law of the ideal model for K=8, B=4: errors sit on a uniformly random
    pattern of their weight and every touched box emits a uniform nonzero difference.
    Each round enumerates all patterns and all box outputs in exact rationals."""
    K, B = 8, 4
    pc = [bin(x).count("1") for x in range(1 << K)]
    law = [Fraction(0)] * (K + 1)
    for out in range(1, 1 << B):
        law[pc[out]] += Fraction(1, (1 << B) - 1)
    for _ in range(rounds - 1):
        nxt = [Fraction(0)] * (K + 1)
        for w in range(1, K + 1):
            if not law[w]:
                continue
            pats = [m for m in range(1 << K) if pc[m] == w]
            for m in pats:
                touched = sum(1 for j in range(K // B) if (m >> (j * B)) & 0xF)
                share = law[w] / len(pats) / 15 ** touched
                for outs in product(range(1, 16), repeat=touched):
                    nxt[sum(pc[o] for o in outs)] += share
        law = nxt
    return law


def criterion_2():
    t0 = time.perf_counter()
    checks = []
    exact = _single_box_law()
    for K in (32, 64, 128, 256):
        got = ideal_weight_dists(SpnGeometry(K, 8, 1))[0].probs
        err = max(abs(got[w - 1] - float(exact[w - 1])) for w in range(1, 9))
        err = max(err, float(np.abs(got[8:]).max()))
        checks.append((f"round-1 law C(8,w)/255, K={K}", err <= 1e-15, f"max err {err:.2e}"))
        checks.append(_close(f"round-1 mean weight K={K}", ideal_weight_dists(SpnGeometry(K, 8, 1))[0].mean(),
                             1024 / 255, 1e-12))
    for K in (32, 64, 128):
        ber = ideal_ber(SpnGeometry(K, 8, 10))
        for r in range(4, 11):
            b = ber[r - 1]
            checks.append((f"K={K} r={r} BER in [0.49, 0.51]", 0.49 <= b <= 0.51, f"BER={b:.6f}"))
    for K in (32, 64, 128, 256):
        for k, d in enumerate(ideal_weight_dists(SpnGeometry(K, 8, 8))):
            s = float(np.sum(d.probs))
            if abs(s - 1) > 1e-12:
                checks.append((f"K={K} round {k} sums to 1", False, f"sum {s!r}"))
    checks.append(("per-round distributions sum to 1 within 1e-12", True, ""))
    for rounds in (1, 2, 3):
        oracle = _exhaustive_k8_b4(rounds)
        got = ideal_weight_dists(SpnGeometry(8, 4, rounds))[rounds - 1].probs
        err = max(abs(got[w - 1] - float(oracle[w])) for w in range(1, 9))
        checks.append((f"K=8 B=4 law after {rounds} round(s) vs enumeration", err <= 1e-12, f"max err {err:.2e}"))
    return record(2, "ideal SPN recursion", checks, time.perf_counter() - t0, 10)


# --- 3 ---------------------------------------------------------------------------

def criterion_3():
    t0 = time.perf_counter()
    checks = []
    geom = SpnGeometry(128, 8, 10)
    runs = {w: simulate_spn_ber(geom, 10_000, 2024, w) for w in (1, 2, 8)}
    ber, se = runs[1]
    checks.append(("r=0 BER = 1/K exactly", ber[0] == 1 / 128, f"got {ber[0]!r}"))
    checks.append(("K=128 r=10 within 3 SE of 0.5", abs(ber[10] - 0.5) <= 3 * se[10],
                   f"BER={ber[10]:.5f} SE={se[10]:.5f}"))
    for w in (2, 8):
        same = runs[w][0].tobytes() == ber.tobytes() and runs[w][1].tobytes() == se.tobytes()
        checks.append((f"workers={w} byte-identical to workers=1", same, ""))
    return record(3, "concrete SPN simulation", checks, time.perf_counter() - t0, 30)


# --- 4 ---------------------------------------------------------------------------

def criterion_4():
    t0 = time.perf_counter()
    checks = []
    worst = 0.0
    for n in N_DECADES:
        r, _ = rate_sup(bsc(0.0), None, n, 1e-4)
        worst = max(worst, abs(r - (math.log(2) - math.log(1e4) / n)))
    checks.append(("BSC(0) R_sup closed form within 1e-9", worst <= 1e-9, f"max err {worst:.2e}"))
    for ch in (bsc(0.01), biawgn(10 ** 0.6)):
        m = margins(ch, ch, None, 1000, Thresholds(1.0, 0.0))
        checks.append((f"degenerate thresholds give zero margins ({ch})",
                       m.delta_r_bob == 0.0 and m.delta_r_eve == 0.0, f"{m.delta_r_bob}, {m.delta_r_eve}"))
    presets = {"Fig.4 BSC 0.01/0.3": (bsc(0.01), bsc(0.3)),
               "Fig.5 BI-AWGN 6/-2 dB": (biawgn(10 ** 0.6), biawgn(10 ** -0.2))}
    violations = 0
    for name, (bob, eve) in presets.items():
        for pb, pe in PAIRS:
            ms = [margins(bob, eve, None, n, Thresholds(pb, pe)) for n in N_HALF]
            db = np.array([m.delta_r_bob for m in ms])
            de = np.array([m.delta_r_eve for m in ms])
            ok = bool(np.all(np.diff(db) < 0) and np.all(np.diff(de) < 0))
            checks.append((f"{name} P=({pb:g},{pe:g}) margins strictly decrease", ok, ""))
            ratio = max(db[-1] / db[0], de[-1] / de[0])
            checks.append((f"{name} P=({pb:g},{pe:g}) n=1e6 below 10% of n=1e2", ratio < 0.1,
                           f"ratio {ratio:.3f}"))
            for n, m in zip(N_HALF, ms):
                if m.delta_r_bob < -math.log(pb) / (n * m.rho_at_sup) - 1e-12:
                    violations += 1
                if m.delta_r_eve < math.log1p(-pe) / (n * m.rho_prime_at_inf) - 1e-12:
                    violations += 1
    checks.append(("margin lower bounds -ln P / (n rho) never violated", violations == 0, f"{violations} violations"))
    return record(4, "finite-blocklength rate margins", checks, time.perf_counter() - t0, 60)


# --- 5 ---------------------------------------------------------------------------

def criterion_5():
    t0 = time.perf_counter()
    checks = [_close("g_bob(1; 1000, 1, 1e-4)", float(g_bob(1.0, 1000, 1.0, 1e-4)), 3.48686, 1e-4),
              _close("g_eve(-1+1e-9)", float(g_eve(-1 + 1e-9, 1000, 1.0, 0.9999)), 0.0, 1e-6),
              _close("g_eve(-1e-9)", float(g_eve(-1e-9, 1000, 1.0, 0.9999)), -1.0, 1e-6)]
    rb = np.linspace(RHO_CLIP, 1.0, 1_000_000)
    re = np.linspace(-1 + RHO_CLIP, -RHO_CLIP, 1_000_000)
    worst, gaps = 0.0, []
    for pb, pe in PAIRS:
        for n in N_DECADES:
            th = Thresholds(pb, pe)
            gb, _, ge, _ = gamma_limits_gaussian(n, 1.0, th)
            worst = max(worst, abs(gb - g_bob(rb, n, 1.0, pb).min()), abs(ge - g_eve(re, n, 1.0, pe).max()))
            gaps.append((pb, n, security_gap_gaussian(n, 1.0, th).gap))
    checks.append(("gamma limits vs 1e6-point grid within 1e-7", worst <= 1e-7, f"max err {worst:.2e}"))
    checks.append(("security gap >= 0", min(g for _, _, g in gaps) >= 0, ""))
    at_1e6 = max(g for _, n, g in gaps if n == 10 ** 6)
    checks.append(("GI gap at n=1e6 below 0.1 dB", at_1e6 < 0.1, f"largest {at_1e6:.4f} dB"))
    bad = [(n, R) for n in (11, 30, 100, 1000, 10 ** 4, 10 ** 5, 10 ** 6)
           for R in np.round(np.arange(1, 61) * 0.1, 10) if not existence_condition(n, R, 0.9999)]
    checks.append(("existence test holds on the Fig. 6 grid for n > 10", not bad, f"fails at {bad[:3]}"))
    return record(5, "Gaussian security gap", checks, time.perf_counter() - t0, 10)


# --- 6 ---------------------------------------------------------------------------

def criterion_6():
    t0 = time.perf_counter()
    checks = []
    for pb, pe in PAIRS:
        th = Thresholds(pb, pe)
        for n in N_DECADES:
            bi = security_gap_biawgn(n, 0.5, th).gap
            gi = security_gap_gaussian(n, 1.0, th).gap
            checks.append((f"P=({pb:g},{pe:g}) n={n}: BI gap > GI gap", bi > gi, f"{bi:.4f} vs {gi:.4f} dB"))
    return record(6, "binary vs Gaussian input gap ordering", checks, time.perf_counter() - t0, 300)


# --- 7 ---------------------------------------------------------------------------

def _wilson(k, m, z=1.96):
    p = k / m
    c = (p + z * z / (2 * m)) / (1 + z * z / m)
    h = z * math.sqrt(p * (1 - p) / m + z * z / (4 * m * m)) / (1 + z * z / m)
    return c - h, c + h


def _floor_oracle(sc):
    """Pr(he > c hb | hb > he) by direct numerical integration of exponential densities."""
    k = policy_constants(sc.n, sc.R, sc.thresholds)
    c = k.g_eve_max * sc.sigma2_eve / (k.g_bob_min * sc.noise_var)
    a, b = sc.mean_gain_bob, sc.mean_gain_eve

    def joint(lo_factor):
        f = lambda x: math.exp(-x / a) / a * (math.exp(-lo_factor * x / b) - math.exp(-x / b))
        return integrate.quad(f, 0, math.inf, epsabs=1e-14, epsrel=1e-12)[0]
    both = joint(0.0)
    return joint(c) / both if c < 1 else 0.0


def criterion_7():
    t0 = time.perf_counter()
    checks = []
    for fig in (9, 10):
        for R in (0.5, 3.0, 5.5):
            sc = preset_scenario(fig, R, samples=100_000, seed=7)
            reps = outage_mc(sc, PowerPolicy.optimal())
            tag = f"Fig.{fig} R={R}"
            checks.append((f"{tag} optimal sec outage exactly 0", all(r.sec == 0 for r in reps), ""))
            checks.append((f"{tag} rel = overall = suspension",
                           all(r.rel == r.overall == r.suspension for r in reps), ""))
            excess = max(r.achieved_avg_power - r.p_av for r in reps)
            checks.append((f"{tag} achieved power <= p_av", excess <= 0, f"excess {excess:.3g}"))
            hi = FadingScenario(**{**sc.__dict__, "p_av_grid": (1e9,)})
            top = outage_mc(hi, PowerPolicy.optimal())[0]
            p = _floor_oracle(sc)
            se = math.sqrt(p * (1 - p) / top.accepted)
            checks.append((f"{tag} outage floor vs integral oracle within 3 SE",
                           top.z_opt == math.inf and abs(top.overall - p) <= 3 * se,
                           f"MC {top.overall:.5f} oracle {p:.5f} SE {se:.5f}"))
    for R in (0.5, 3.0, 5.5):
        sc = preset_scenario(8, R, samples=100_000, seed=7)
        reps = outage_mc(sc, PowerPolicy.constant())
        m = reps[0].accepted
        up = [i for i in range(len(reps) - 1)
              if _wilson(reps[i + 1].rel * m, m)[0] > _wilson(reps[i].rel * m, m)[1]]
        down = [i for i in range(len(reps) - 1)
                if _wilson(reps[i + 1].sec * m, m)[1] < _wilson(reps[i].sec * m, m)[0]]
        checks.append((f"Fig.8 R={R} constant rel decreasing (Wilson)", not up and reps[-1].rel < reps[0].rel,
                       f"significant rises at {up}"))
        checks.append((f"Fig.8 R={R} constant sec increasing (Wilson)", not down and reps[-1].sec > reps[0].sec,
                       f"significant drops at {down}"))
        low = min(r.overall for r in reps)
        checks.append((f"Fig.8 R={R} constant overall >= 0.3", low >= 0.3, f"min {low:.4f}"))
    return record(7, "fading outage and optimal power", checks, time.perf_counter() - t0, 300)


# --- 8 ---------------------------------------------------------------------------

def _random_channel(rng):
    fam = rng.choice(["bsc", "bec", "gaussian", "biawgn"])
    if fam == "bsc":
        return bsc(rng.uniform(0.0, 0.45))
    if fam == "bec":
        return bec(rng.uniform(0.0, 0.95))
    snr = 10 ** rng.uniform(-1.5, 2.0)
    return gaussian(snr) if fam == "gaussian" else biawgn(snr)


def criterion_8():
    t0 = time.perf_counter()
    checks = []
    rng = np.random.default_rng(8)
    # the equiprobable input is extremal for symmetric binary-input channels
    bad = 0
    for ch in (bsc(0.02), bsc(0.2), bec(0.1), bec(0.6), biawgn(0.5), biawgn(3.0)):
        rn, rp = rng.uniform(-0.999, -0.001, 10), rng.uniform(0.001, 1.0, 10)
        en, ep = gallager_e0(ch, None, rn), gallager_e0(ch, None, rp)
        for q0 in rng.uniform(0, 1, 100):
            d = explicit(q0)
            bad += int(np.sum(en > gallager_e0(ch, d, rn) + 1e-12))
            bad += int(np.sum(ep < gallager_e0(ch, d, rp) - 1e-12))
    checks.append(("equiprobable-input extremality on 100 pmfs x 10 rho x 6 channels", bad == 0, f"{bad} violations"))
    worst = 0.0
    for ch in (bsc(0.01), bsc(0.3), bec(0.2), gaussian(0.3), gaussian(30.0), biawgn(0.2), biawgn(20.0)):
        for d in (1e-5, -1e-5):
            worst = max(worst, abs(float(gallager_e0(ch, None, d)) / d - capacity(ch)))
    checks.append(("E0 slope at |rho|=1e-5 matches capacity within 1e-3", worst <= 1e-3, f"max {worst:.2e}"))
    # clamping and monotonicity of block bounds
    bad = 0
    for _ in range(40):
        ch = _random_channel(rng)
        R = rng.uniform(0.01, 1.5 * max(capacity(ch), 0.05))
        ub = [bob_block_upper(ch, None, R, n) for n in N_DECADES]
        lb = [eve_block_lower(ch, None, R, n) for n in N_DECADES]
        bad += int(not all(0 <= u <= 1 for u in ub) or not all(0 <= v <= 1 for v in lb))
        bad += int(np.any(np.diff(ub) > 0) or np.any(np.diff(lb) < 0))
        bad += int(bob_block_upper(ch, None, R * 1.1, 1000) < ub[1] or eve_block_lower(ch, None, R * 1.1, 1000) < lb[1])
    checks.append(("block bounds clamped to [0,1] and monotone in n and R", bad == 0, f"{bad} violations"))
    # grid oracles
    for name, opt, lo, hi in (("bob", optimize_rho_bob, RHO_CLIP, 1.0),
                              ("eve", optimize_rho_eve, -1 + RHO_CLIP, -RHO_CLIP)):
        worst = 0.0
        for _ in range(50):
            ch = _random_channel(rng)
            R = rng.uniform(0.01, 1.5 * max(capacity(ch), 0.05))
            grid = np.linspace(lo, hi, 4001 if ch.family.value == "biawgn" else 1_000_000)
            oracle = float(np.max(gallager_e0(ch, None, grid) - grid * R))
            res = opt(ch, None, R)
            worst = max(worst, oracle - res.exponent, abs(oracle - res.exponent))
        checks.append((f"{name} exponent optimiser vs grid oracle, 50 instances, within 1e-7", worst <= 1e-7,
                       f"max err {worst:.2e}"))
    worst = 0.0
    rb = np.linspace(RHO_CLIP, 1.0, 1_000_000)
    re = np.linspace(-1 + RHO_CLIP, -RHO_CLIP, 1_000_000)
    for _ in range(50):
        n = int(10 ** rng.uniform(1.5, 6))
        R = rng.uniform(0.05, 6.0)
        pb, pe = 10 ** rng.uniform(-8, -1), 1 - 10 ** rng.uniform(-8, -1)
        if not R > -math.log1p(-pe) / n:
            continue
        gb, _, ge, _ = gamma_limits_gaussian(n, R, Thresholds(pb, pe))
        worst = max(worst, abs(gb - g_bob(rb, n, R, pb).min()) / max(1.0, gb),
                    abs(ge - g_eve(re, n, R, pe).max()) / max(1.0, ge))
    checks.append(("gamma-limit optimisers vs grid oracle, 50 instances, within 1e-7 (relative above 1)",
                   worst <= 1e-7, f"max err {worst:.2e}"))
    return record(8, "property suites", checks, time.perf_counter() - t0, 600)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


def test_criterion_1():
    assert criterion_1()[0]


def test_criterion_2():
    ok, line = criterion_2()
    assert ok, line


def test_criterion_3():
    ok, line = criterion_3()
    assert ok, line


def test_criterion_4():
    ok, line = criterion_4()
    assert ok, line


def test_criterion_5():
    ok, line = criterion_5()
    assert ok, line


def test_criterion_6():
    ok, line = criterion_6()
    assert ok, line


def test_criterion_7():
    ok, line = criterion_7()
    assert ok, line


def test_criterion_8():
    ok, line = criterion_8()
    assert ok, line


if __name__ == "__main__":
    for fn in CRITERIA:
        fn()
