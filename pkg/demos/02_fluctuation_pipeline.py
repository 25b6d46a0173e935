# %% [markdown]
# # Fluctuation factor from Fourier modes
#
# Expanding the closed fluctuation in exp(2 pi i n t / T) turns the path
# integral into a product over n of Gaussians with weight
# alpha n^2 + gamma n - beta.  A zero-mode k-integral, one lattice sum and
# one regularized product later, the oscillator prefactor drops out.

# %%
import numpy as np

from proplab import closed_form as cf, zeta_reg as zr
from proplab.core import FourierParams, SystemConfig

m, hbar, w, T = 1.0, 1.0, 3.0, 0.2

# %%
fp = FourierParams.from_physical(m, w, T)
one_d = zr.fluctuation_pipeline(fp)
print("B = 0, 1D pipeline     ", one_d)
print("sqrt(mw/2 pi i sin wT) ", np.sqrt(m * w / (2j * np.pi * hbar * np.sin(w * T))))

# %% [markdown]
# With a magnetic field gamma != 0 shifts the lattice.  The roots r1, r2 of
# alpha n^2 + gamma n - beta satisfy pi (r1 - r2) = w_eff T, and the two
# sine products combine into sin(w_eff T).

# %%
for w_l in (0.5, 4.0, -4.0):
    fp = FourierParams.from_physical(m, w, T, w_l)
    cfg = SystemConfig.from_larmor(w_l, w)
    p, c = zr.fluctuation_pipeline(fp), cf.fluctuation_factor(cfg, T)
    print(f"wL={w_l:5.1f} pipeline {p:.15f}  closed {c:.15f}  rel {abs(p / c - 1):.1e}")

# %% [markdown]
# Lattice sum check: the partial sums approach the cotangent formula at
# rate 1/N.

# %%
fp = FourierParams.from_physical(m, w, T, 4.0)
exact = zr.sum_inverse_quadratic(fp)
for N in (10, 100, 1000, 10000):
    print(N, abs(zr.sum_inverse_quadratic_partial(fp, N) - exact))
