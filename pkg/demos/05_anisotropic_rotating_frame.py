# %% [markdown]
# # Where the rotating frame stops working
#
# Rotating with the Larmor frequency removes B exactly for an isotropic
# oscillator.  With wx != wy the rotated potential depends on time, so the
# rotating-frame action is only an approximation.  Three independent checks
# agree on that.

# %%
import numpy as np

from proplab import closed_form as cf, oracles
from proplab.core import Endpoints, SystemConfig

ep = Endpoints(0.3, -0.2, 0.7, 0.4, 0.3)
for label, cfg in [("isotropic  wx=wy=1.5", SystemConfig.from_larmor(0.5, 1.5)),
                   ("no field   wx=1, wy=2", SystemConfig(omega_x=1.0, omega_y=2.0)),
                   ("anisotropic + B     ", SystemConfig.from_larmor(0.5, 1.0, 2.0))]:
    bvp = oracles.action_from_path(cfg, oracles.solve_classical_bvp(cfg, ep))
    closed = cf.classical_action_aniso_B(cfg, ep)
    k_sl = oracles.sliced_propagator(cfg, ep, 4096)
    k_cf = cf.propagator(cfg, ep).amplitude
    res = oracles.schrodinger_residual(cfg, ep, 1e-3)
    print(f"{label}: action rel diff {abs(closed / bvp - 1):.1e}, "
          f"K rel diff {abs(k_cf / k_sl - 1):.1e}, PDE residual {res:.1e}")

# %% [markdown]
# The anisotropic discrepancy grows with wL and with |wx - wy|.

# %%
for w_l in (0.05, 0.2, 0.5, 1.0):
    cfg = SystemConfig.from_larmor(w_l, 1.0, 2.0)
    bvp = oracles.action_from_path(cfg, oracles.solve_classical_bvp(cfg, ep))
    print(f"wL={w_l}: rel diff {abs(cf.classical_action_aniso_B(cfg, ep) / bvp - 1):.2e}")
