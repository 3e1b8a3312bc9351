"""Stochastic efficiency eta = W/Q with Lorentzian-broadened peaks.

Every discrete (W, Q) peak turns into a ratio-of-Lorentzians density on
the eta axis.  Near the adiabatic limit the density piles up on the Otto
value 4/9; for faster driving peaks near 1 and 14/9 appear.
"""
import numpy as np

from qotto import DriveProtocol, ThermalConfig, run_cycle
from qotto.distrib import efficiency_distribution, efficiency_oracle, efficiency_peak_L, eta_moments

# the closed form against direct quadrature for one peak
w, q, gamma = 1.6, 3.6, 0.15
for eta in (-1.3, 0.2, 0.4444, 2.5):
    print(f"L({eta:+.4f}) closed form {efficiency_peak_L(w, q, gamma, eta):.10f}"
          f"   quadrature {efficiency_oracle(w, q, gamma, eta):.10f}")
print()

th = ThermalConfig()
for tau in (200.0, 260.0, 320.0):
    res = run_cycle(DriveProtocol(2.0, 3.6, tau), th)
    ed = efficiency_distribution(res.peaks)
    mean, std = eta_moments(ed)
    maxima = ed.local_maxima()
    heights = np.interp(maxima, ed.eta_axis, ed.density)
    print(f"tau = {tau:g} us: <eta> = {mean:.4f}, sigma_eta = {std:.4f}")
    for m, h in zip(maxima, heights):
        print(f"   local maximum at eta = {m:+.3f}, density {h:.3f}")
