"""Security gap: the SNR separation needed between Bob and Eve at finite blocklength.

Run: python demos/04_security_gap.py
"""
# %%
from bersec import Thresholds, existence_condition, security_gap_biawgn, security_gap_gaussian, security_gap_high_snr
from bersec.gap import eve_limit_exists

th = Thresholds(1e-4, 0.9999)

# %% Gaussian input (rate per complex use) against binary input (rate per real use)
print("n        GI gap [dB]   BI gap [dB]")
for n in (100, 1000, 10_000, 100_000, 1_000_000):
    gi = security_gap_gaussian(n, 1.0, th)
    bi = security_gap_biawgn(n, 0.5, th)
    print(f"{n:<8d} {gi.gap:10.4f}   {bi.gap:10.4f}")

# %% High-SNR closed form and its three terms
approx, rho, rho_p, terms = security_gap_high_snr(1000, 6.0, th)
print(f"\nhigh-SNR gap at R=6: {approx:.3f} dB, terms {[round(t, 3) for t in terms]}")
print(f"exact:               {security_gap_gaussian(1000, 6.0, th).gap:.3f} dB")

# %% The published existence test is necessary only; the exact test is R > -ln(1-P)/n
n, R, p = 2, 0.001, 0.9
print(f"\nn={n} R={R} P={p}: published test {existence_condition(n, R, p)}, exact {eve_limit_exists(n, R, p)}")
