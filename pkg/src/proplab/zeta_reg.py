"""Zeta/Abel regularization and the complex-Fourier fluctuation pipeline.

The fluctuation integral is written in mode space as a product of Fresnel
integrals over Fourier coefficients c_n, constrained by sum(c_n) = 0.  After
inserting the Fourier representation of the delta function, two infinite
products remain:

* a Gaussian in the constraint variable k, whose width is the lattice sum
  sum_n 1 / (alpha n^2 - beta + gamma n)  (a cotangent sum), and
* prod_n sqrt(i pi / (alpha n^2 - beta + gamma n)), which splits into the
  zeta-regularized prod_{n>=1} i pi / (alpha n^2) and Euler sine products.

Series are indexed by their exponent: ``eta_value(s)`` is
sum (-1)^(n+1) n^(-s), so 1 - 2 + 3 - ... is eta(-1) = 1/4 and
1 - 1/2 + 1/3 - ... is eta(1) = log 2.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import CAUSTIC_TOL
from .errors import (
    CausticSingularity,
    DivergedExtrapolation,
    PoleAtInteger,
    PoleOnLattice,
    UnsupportedArgument,
    ZeroAlpha,
)

__all__ = [
    "RegularizedValue",
    "ModeExpansion",
    "SmoothingReport",
    "DEFAULT_EPS_SCHEDULE",
    "abel_sum",
    "eta_value",
    "zeta_nonpositive",
    "zeta_prime_zero",
    "reg_product_quadratic",
    "sum_inverse_quadratic",
    "sum_inverse_quadratic_partial",
    "eulerian_sine_product",
    "fluctuation_pipeline",
    "smoothing_check",
]

DEFAULT_EPS_SCHEDULE = tuple(0.1 * 2.0**-k for k in range(13))
RICHARDSON_ORDER = 4
# damped tail below e^-45 is invisible in double precision
_DAMPING_CUTOFF = 45.0


@dataclass(frozen=True)
class RegularizedValue:
    value: complex
    method: str = "analytic"
    truncation_N: Optional[int] = None
    epsilon_floor: Optional[float] = None
    extrapolation_error: float = 0.0

    def __post_init__(self):
        if self.method not in ("analytic", "abel_richardson", "truncated_product"):
            raise ValueError(f"unknown method {self.method!r}")
        if not np.isfinite(self.extrapolation_error):
            raise ValueError("extrapolation_error must be finite")
        if self.method == "analytic" and self.extrapolation_error != 0.0:
            raise ValueError("analytic values carry no extrapolation error")

    @property
    def real(self):
        return complex(self.value).real


@dataclass(frozen=True)
class ModeExpansion:
    """Truncated complex Fourier series sum_{|n|<=N} c_n exp(2 pi i n t / T)."""

    coefficients: np.ndarray
    period: float

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=complex)
        if c.ndim != 1 or c.size % 2 != 1:
            raise ValueError("coefficients must be indexed n = -N..N")
        if not np.isfinite(np.sum(np.abs(c) ** 2)):
            raise ValueError("coefficients are not square summable")
        object.__setattr__(self, "coefficients", c)

    @property
    def order(self):
        return (self.coefficients.size - 1) // 2

    def __call__(self, t):
        n = np.arange(-self.order, self.order + 1)
        t = np.asarray(t, dtype=float)
        phases = np.exp(2j * np.pi * np.multiply.outer(t, n) / self.period)
        return phases @ self.coefficients

    def norm2(self):
        """<f|f> with the 1/T inner product (Parseval)."""
        return float(np.sum(np.abs(self.coefficients) ** 2))

    def derivative_norm2(self):
        n = np.arange(-self.order, self.order + 1)
        return float((2 * np.pi / self.period) ** 2
                     * np.sum(n**2 * np.abs(self.coefficients) ** 2))


def _richardson(values, eps):
    """Neville table for a polynomial in eps, extrapolated to eps = 0."""
    table = [list(values)]
    for order in range(1, RICHARDSON_ORDER + 1):
        prev = table[-1]
        row = []
        for i in range(len(prev) - 1):
            e_far, e_near = eps[i], eps[i + order]
            row.append((e_far * prev[i + 1] - e_near * prev[i]) / (e_far - e_near))
        table.append(row)
    return table


def abel_sum(term, eps_schedule=DEFAULT_EPS_SCHEDULE, tol=1e-4):
    """Abel sum of sum_{n>=1} term(n), extrapolated eps -> 0.

    ``term`` must accept an integer numpy array.  The damped sums
    sum term(n) exp(-eps n) are evaluated to machine precision for each eps
    in the (decreasing) schedule and Richardson-extrapolated in eps.
    """
    eps = np.asarray(eps_schedule, dtype=float)
    if eps.ndim != 1 or eps.size < RICHARDSON_ORDER + 2:
        raise ValueError(f"need at least {RICHARDSON_ORDER + 2} epsilons")
    if np.any(eps <= 0) or np.any(np.diff(eps) >= 0):
        raise ValueError("epsilon schedule must be positive and decreasing")

    n_max = int(np.ceil(_DAMPING_CUTOFF / eps[-1]))
    n = np.arange(1, n_max + 1)
    a = np.asarray(term(n), dtype=float)
    damped = []
    for e in eps:
        k = int(np.ceil(_DAMPING_CUTOFF / e))
        damped.append(float(np.sum(a[:k] * np.exp(-e * n[:k]))))

    row = np.array(_richardson(damped, eps)[-1])
    # take the most self-consistent extrapolant: small eps adds roundoff,
    # large eps adds truncation
    diffs = np.abs(np.diff(row))
    left = np.concatenate([[np.inf], diffs])
    right = np.concatenate([diffs, [np.inf]])
    spread = np.where(np.isinf(left), right, np.where(np.isinf(right), left, np.maximum(left, right)))
    j = int(np.argmin(spread))
    value, err = float(row[j]), float(spread[j])
    if j == row.size - 1 and diffs[-2] > 0:
        # still contracting at the smallest eps: bound the geometric tail
        rho = diffs[-1] / diffs[-2]
        err = err / (1.0 - rho) if rho < 0.9 else 10.0 * err
    err = max(err, 8.0 * np.finfo(float).eps * max(1.0, abs(value)))
    if not np.isfinite(value) or not err <= tol:
        raise DivergedExtrapolation(
            f"Abel extrapolants did not settle: spread {err:.3e}")
    return RegularizedValue(value, "abel_richardson", n_max, float(eps[-1]), float(err))


def _alternating(power):
    return lambda n: np.where(n % 2 == 1, 1.0, -1.0) * n.astype(float) ** power


_ETA_ANALYTIC = {
    -2: 0.0,  # 1 - 4 + 9 - 16 + ...
    -1: 0.25,  # 1 - 2 + 3 - 4 + ...
    0: 0.5,  # 1 - 1 + 1 - 1 + ...
    1: float(np.log(2.0)),  # 1 - 1/2 + 1/3 - ...
}


def eta_value(s, method="analytic"):
    """Dirichlet eta, sum (-1)^(n+1) n^(-s), for small integer s."""
    s = int(s)
    if method == "analytic":
        if s not in _ETA_ANALYTIC:
            raise UnsupportedArgument(f"no analytic eta value stored for s={s}")
        return RegularizedValue(_ETA_ANALYTIC[s])
    if method == "abel":
        return abel_sum(_alternating(-s))
    raise ValueError(f"unknown method {method!r}")


_ZETA_ANALYTIC = {0: -0.5, -1: -1.0 / 12.0, -2: 0.0}


def zeta_nonpositive(s, method="analytic"):
    """zeta(s) for s in {0, -1, -2}.

    The Abel route sums the alternating companion series and divides by
    1 - 2^(1-s).
    """
    s = int(s)
    if s not in _ZETA_ANALYTIC:
        raise UnsupportedArgument(f"zeta({s}) not supported")
    if method == "analytic":
        return RegularizedValue(_ZETA_ANALYTIC[s])
    if method == "abel":
        eta = eta_value(s, "abel")
        factor = 1.0 - 2.0 ** (1 - s)
        return RegularizedValue(eta.value / factor, "abel_richardson", eta.truncation_N,
                                eta.epsilon_floor, eta.extrapolation_error / abs(factor))
    raise ValueError(f"unknown method {method!r}")


def zeta_prime_zero(method="analytic"):
    """zeta'(0) = -log(2 pi) / 2.

    The Abel route uses X = sum log n = -L - 2 zeta(0) log 2 with
    L = sum (-1)^(n+1) log n, obtained by splitting off the even terms.
    """
    if method == "analytic":
        return RegularizedValue(-0.5 * np.log(2.0 * np.pi))
    if method == "abel":
        alt_log = abel_sum(lambda n: np.where(n % 2 == 1, 1.0, -1.0) * np.log(n))
        z0 = zeta_nonpositive(0, "abel")
        value = alt_log.value + 2.0 * z0.value * np.log(2.0)
        err = alt_log.extrapolation_error + 2.0 * np.log(2.0) * z0.extrapolation_error
        return RegularizedValue(value, "abel_richardson", alt_log.truncation_N,
                                alt_log.epsilon_floor, err)
    raise ValueError(f"unknown method {method!r}")


def reg_product_quadratic(alpha):
    """Zeta-regularized prod_{n>=1} i pi / (alpha n^2) = sqrt(alpha / i pi) / (2 pi).

    log prod = zeta(0) log(i pi / alpha) + 2 zeta'(0).
    """
    alpha = complex(alpha)
    if alpha == 0:
        raise ZeroAlpha("alpha must be nonzero")
    z0 = zeta_nonpositive(0).value
    zp = zeta_prime_zero().value
    return complex(np.exp(z0 * np.log(1j * np.pi / alpha) + 2.0 * zp))


def _roots(fp):
    """Roots r1 > r2 (for real params) of alpha n^2 + gamma n - beta."""
    disc = np.sqrt(complex(fp.gamma**2 + 4.0 * fp.alpha * fp.beta))
    r1 = (-fp.gamma + disc) / (2.0 * fp.alpha)
    r2 = (-fp.gamma - disc) / (2.0 * fp.alpha)
    return r1, r2, disc


def _check_lattice(r):
    k = np.round(r.real)
    if abs(r - k) < 1e-12:
        raise PoleOnLattice(f"alpha n^2 + gamma n - beta vanishes at n = {int(k)}")


def sum_inverse_quadratic(fp):
    """Closed form of sum_{n in Z} 1 / (alpha n^2 - beta + gamma n)."""
    r1, r2, disc = _roots(fp)
    _check_lattice(r1)
    _check_lattice(r2)
    if fp.gamma == 0.0:
        x = np.sqrt(complex(fp.beta / fp.alpha))
        if x == 0:
            raise PoleOnLattice("beta = 0 puts a pole at n = 0")
        value = -(np.pi / x) / np.tan(np.pi * x) / fp.alpha
    else:
        value = np.pi * (1.0 / np.tan(np.pi * r2) - 1.0 / np.tan(np.pi * r1)) / disc
    return complex(value)


def sum_inverse_quadratic_partial(fp, N):
    """Direct partial sum over |n| <= N."""
    n = np.arange(-N, N + 1, dtype=float)
    d = fp.alpha * n**2 - fp.beta + fp.gamma * n
    if np.any(d == 0):
        raise PoleOnLattice("a lattice term has zero denominator")
    # sum small terms first
    terms = 1.0 / d
    order = np.argsort(np.abs(terms))
    return complex(np.sum(terms[order]))


def eulerian_sine_product(x, N):
    """Truncated prod_{n<=N} (1 - x^2/n^2) and its limit sin(pi x)/(pi x)."""
    x = complex(x)
    k = np.round(x.real)
    if k != 0 and abs(x - k) < 1e-12:
        raise PoleAtInteger(f"x = {x} is a nonzero integer")
    n = np.arange(1, int(N) + 1, dtype=float)
    truncated = complex(np.prod(1.0 - x * x / n**2))
    closed = 1.0 + 0j if x == 0 else complex(np.sin(np.pi * x) / (np.pi * x))
    return truncated, closed


def fluctuation_pipeline(fp):
    """Assemble the fluctuation factor from mode-space pieces.

    gamma == 0 returns the 1D factor sqrt(m w / 2 pi i hbar sin wT), built
    from principal-branch roots factor by factor; the 2D factor is its
    square.  gamma != 0 returns the full 2D factor
    m w_eff / (2 pi i hbar sin w_eff T), i.e. the square of
    (1/2pi) * int dk triangle-triangle * star-star.
    """
    r1, r2, disc = _roots(fp)
    # pi (r1 - r2) = w_eff T; the caustics are where its sine vanishes
    if abs(np.sin(np.pi * (r1 - r2))) <= CAUSTIC_TOL:
        raise CausticSingularity(f"sin(w_eff T) vanishes for {fp}")

    lattice_sum = sum_inverse_quadratic(fp)
    # int dk exp(-i k^2 S / 4) = sqrt(i pi / a) with a = -S/4
    gauss_sq = -4j * np.pi / lattice_sum
    zero_mode = 1j * np.pi / (-fp.beta)
    reg = reg_product_quadratic(fp.alpha)
    _, euler1 = eulerian_sine_product(r1, 1)
    _, euler2 = eulerian_sine_product(r2, 1)

    if fp.gamma == 0.0:
        star = np.sqrt(zero_mode) * reg / euler1
        return complex(np.sqrt(gauss_sq) * star / (2.0 * np.pi))
    # the n and -n factors pair to (i pi / alpha n^2)^2 / (1 - r1^2/n^2)(1 - r2^2/n^2)
    star_sq = zero_mode * reg**2 / (euler1 * euler2)
    return complex(gauss_sq * star_sq / (4.0 * np.pi**2))


@dataclass(frozen=True)
class SmoothingReport:
    epsilon: float
    N: int
    regularized_log: float
    regularized_factor: float
    naive_log: float
    naive_log_leading: float


def smoothing_check(epsilon, N):
    """Compare prod_{n>=1} exp(-2 eps n^2), regularized versus truncated.

    With zeta(-2) = 0 the regularized factor is exactly one for every eps;
    the naive truncated log is -2 eps N(N+1)(2N+1)/6 and diverges like N^3.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    reg_log = -2.0 * epsilon * zeta_nonpositive(-2).value
    n = np.arange(1, int(N) + 1, dtype=float)
    naive = -2.0 * epsilon * float(np.sum(n**2))
    return SmoothingReport(
        epsilon=float(epsilon),
        N=int(N),
        regularized_log=float(reg_log),
        regularized_factor=float(np.exp(reg_log)),
        naive_log=naive,
        naive_log_leading=-2.0 * epsilon * N**3 / 3.0,
    )
