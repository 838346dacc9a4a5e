"""How an SPN spreads a single decoder bit error: ideal S-boxes against the AES S-box.

Run: python demos/02_spn_avalanche.py
"""
# %%
import numpy as np

from bersec import SpnGeometry, ideal_ber, simulate_spn_ber

# %% Ideal S-boxes (exact rational recursion). One wrong bit in K gives BER 1/K
# before the SPN; a few rounds push it near 1/2.
for K in (32, 64, 128, 256):
    ber = ideal_ber(SpnGeometry(K, 8, 8))
    print(f"K={K:3d} ideal  ", np.round(ber, 4))

# %% The fixed point sits slightly above 1/2: it is the mean of a uniform nonzero K-bit word.
for K in (8, 16, 32):
    print(f"K={K:2d} limit 2^(K-1)/(2^K-1) = {2 ** (K - 1) / (2 ** K - 1):.6f}")

# %% Concrete keyless AES S-box network, 2000 random plaintexts per geometry
for K in (32, 64, 128):
    ber, se = simulate_spn_ber(SpnGeometry(K, 8, 8), trials=2000, seed=1)
    print(f"K={K:3d} AES sim", np.round(ber[1:], 4), f"(stderr ~{se[-1]:.4f})")
