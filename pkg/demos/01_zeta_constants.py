# %% [markdown]
# # Divergent sums that behave
#
# Damp a divergent series with exp(-eps n), sum it, and let eps go to zero.
# Richardson extrapolation on a halving eps schedule does the limit.

# %%
import numpy as np

from proplab import zeta_reg as zr

alt = lambda n: np.where(n % 2 == 1, 1.0, -1.0)

# %%
for label, term, exact in [
    ("1 - 1 + 1 - ...", alt, 0.5),
    ("1 - 2 + 3 - ...", lambda n: alt(n) * n, 0.25),
    ("1 - 1/2 + 1/3 - ...", lambda n: alt(n) / n, np.log(2)),
    ("log 1 - log 2 + log 3 - ...", lambda n: alt(n) * np.log(n), 0.5 * np.log(2 / np.pi)),
]:
    r = zr.abel_sum(term)
    print(f"{label:28s} {r.value: .15f}  exact {exact: .15f}  est. err {r.extrapolation_error:.1e}")

# %% [markdown]
# The zeta values follow from the alternating ones by splitting off the even
# terms: eta(s) = (1 - 2^(1-s)) zeta(s).

# %%
for s in (0, -1, -2):
    a, b = zr.zeta_nonpositive(s), zr.zeta_nonpositive(s, "abel")
    print(f"zeta({s:2d}) analytic {a.value: .16f}  Abel {b.value: .16f}")
a, b = zr.zeta_prime_zero(), zr.zeta_prime_zero("abel")
print(f"zeta'(0)  analytic {a.value: .16f}  Abel {b.value: .16f}")

# %% [markdown]
# Smoothing the modes by exp(-eps n^2) changes nothing after regularization,
# since sum n^2 -> zeta(-2) = 0.  The naive truncated log runs off like N^3.

# %%
for N in (10, 100, 1000):
    rep = zr.smoothing_check(1e-3, N)
    print(f"N={N:5d} regularized factor {rep.regularized_factor}  naive log {rep.naive_log:.4e}")
