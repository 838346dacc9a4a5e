"""Outage on Rayleigh-faded links: constant power against the optimal power policy.

Run: python demos/05_fading_outage.py
"""
# %%
import numpy as np

from bersec import PowerPolicy, outage_mc
from bersec.fading import infeasible_probability, preset_scenario

# %% Bob's mean gain is twice Eve's; 20000 draws, p_av from 0 to 40 dB
for R in (0.5, 3.0):
    sc = preset_scenario(8, R, samples=20_000, seed=3, grid_db=(0.0, 40.0, 8.0))
    const = outage_mc(sc, PowerPolicy.constant())
    opt = outage_mc(sc, PowerPolicy.optimal())
    print(f"\nR = {R}")
    print("p_av[dB]  const rel  const sec  const all   opt all  opt sec")
    for db, c, o in zip(np.arange(0, 41, 8), const, opt):
        print(f"{db:7.0f}  {c.rel:9.4f}  {c.sec:9.4f}  {c.overall:9.4f}  {o.overall:8.4f}  {o.sec:7.1f}")
    print(f"floor Pr(p_min > p_max) = {infeasible_probability(sc):.4f}")
