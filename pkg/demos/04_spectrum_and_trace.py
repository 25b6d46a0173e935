# %% [markdown]
# # Reading the spectrum off the trace
#
# For the isotropic oscillator in crossed fields the levels are
# (w_eff + wL)(n + 1/2) + (w_eff - wL)(m + 1/2), shifted by the electric
# field.  A dense diagonalization in a product oscillator basis is the
# referee, including for the sign of the field term.

# %%
import numpy as np

from proplab import closed_form as cf, oracles
from proplab.core import SystemConfig

cfg = SystemConfig.from_larmor(4.0, 3.0, e_field=(0.5, 0.0))
evals = oracles.diagonalize_hamiltonian(cfg, 40)[:10]
levels = sorted(cf.energy_level(cfg, (n, k)).value for n in range(11) for k in range(11))[:10]
for e, l in zip(evals, levels):
    print(f"eig {e:.12f}   E(n,m) {l:.12f}")
print("shift q^2 E^2 / 2 m w^2 =", 0.25 / 18, "(levels move down)")

# %% [markdown]
# Euclidean trace: sum of exp(-E s) over the spectrum against the closed
# form 1/2 / (cosh w_eff s - cosh wL s) times the field factor.

# %%
for s in (0.5, 1.0, 2.0):
    rep = oracles.trace_vs_spectrum(cfg, s)
    print(f"s={s}: closed {rep.closed_form:.15e}  sum {rep.spectrum_sum:.15e}"
          f"  rel {rep.rel_discrepancy:.1e}  (other sign: {rep.rel_discrepancy_flipped:.1e})")

# %% [markdown]
# Weak confinement, strong field: Landau levels at hbar w_c (n + 1/2).

# %%
landau = SystemConfig.from_larmor(1.0, 0.01)
print(np.round(oracles.diagonalize_hamiltonian(landau, 30)[:12], 5))
