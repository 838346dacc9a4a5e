"""Rate margins: how far below Bob's capacity and above Eve's the code rate must sit.

Run: python demos/03_rate_margins.py
"""
# %%
from bersec import Thresholds, biawgn, bsc, margins

# %% BSC pair: Bob at crossover 0.01, Eve at 0.3
bob, eve = bsc(0.01), bsc(0.3)
print("n        dR_bob    dR_eve    R_sup     R_inf")
for n in (100, 1000, 10_000, 100_000, 1_000_000):
    m = margins(bob, eve, None, n, Thresholds(1e-4, 0.9999))
    print(f"{n:<8d} {m.delta_r_bob:.5f}  {m.delta_r_eve:.5f}  {m.r_sup:.5f}  {m.r_inf:.5f}")

# %% Stricter targets widen both margins (BI-AWGN, Bob at 6 dB and Eve at -2 dB)
bob, eve = biawgn(10 ** 0.6), biawgn(10 ** -0.2)
for pb, pe in ((1e-2, 0.99), (1e-4, 0.9999), (1e-6, 0.999999)):
    m = margins(bob, eve, None, 1000, Thresholds(pb, pe))
    print(f"P=({pb:g}, {pe:g})  dR_bob={m.delta_r_bob:.4f}  dR_eve={m.delta_r_eve:.4f}  "
          f"usable interval={m.rate_interval:.4f}")
