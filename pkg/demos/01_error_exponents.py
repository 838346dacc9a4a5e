"""Error exponents and block-error bounds for the four channel families.

Run: python demos/01_error_exponents.py
"""
# %%
import numpy as np

from bersec import bec, biawgn, bsc, capacity, gallager_e0, gaussian, optimize_rho_bob, optimize_rho_eve

# %% E0 on a grid of rho for each family, plus capacity (nats per use)
rho = np.array([-0.9, -0.5, -0.1, 0.1, 0.5, 1.0])
for ch in (bsc(0.11), bec(0.3), biawgn(2.0), gaussian(2.0)):
    print(f"{str(ch):16s} C={capacity(ch):.5f}  E0:", np.round(gallager_e0(ch, None, rho), 5))

# %% Below capacity the upper bound on Bob's block error decays with n.
# Above capacity the strong-converse lower bound on Eve's block error tends to 1.
ch = bsc(0.11)
for R in (0.25, 0.45):
    print(f"\nR = {R} (capacity {capacity(ch):.4f})")
    for n in (100, 1000, 10_000):
        up = optimize_rho_bob(ch, None, R, n)
        lo = optimize_rho_eve(ch, None, R, n)
        print(f"  n={n:6d}  P_bob <= {up.bound:.3e} (rho={up.rho_opt:.3f})"
              f"   P_eve >= {lo.bound:.4f} (rho'={lo.rho_opt:.3f})")
