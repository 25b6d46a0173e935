# %% [markdown]
# # Real sine modes in a magnetic field
#
# Expanding the fluctuation in sin(n pi t / T) couples x and y modes through
# the magnetic term <phi_n | phi_m'>.  Those overlaps are not zero: every
# n + m odd pair contributes 4 n m / (T^2 (n^2 - m^2)).

# %%
import numpy as np

from proplab import oracles

coupling, report = oracles.sine_mode_coupling(6, 1.0)
print(np.array([[str(v) for v in row] for row in coupling.exact]))
print(report.message)

# %% [markdown]
# Keeping the coupling, the truncated mode determinant converges (like 1/N)
# to the correct pure-B ratio wL T / sin(wL T).  Dropping it gives 1, the
# free-particle answer.

# %%
w_l, T = 1.0, 1.3
exact = w_l * T / np.sin(w_l * T)
for n in (8, 32, 128, 512):
    with_c = oracles.sine_mode_fluctuation_ratio(w_l, T, n)
    without = oracles.sine_mode_fluctuation_ratio(w_l, T, n, include_coupling=False)
    print(f"{n:4d} modes: with coupling {with_c:.8f}  without {without:.8f}  exact {exact:.8f}")
