"""Brute-force checks that share no algebra with ``closed_form``.

* ``solve_classical_bvp`` / ``action_from_path``: Euler-Lagrange equations
  solved through the matrix exponential of the linear first-order system,
  action obtained by Simpson quadrature of the Lagrangian.
* ``sliced_propagator``: exact evaluation of the N-slice Gaussian path
  integral via block LDL^T of its block-tridiagonal Hessian.
* ``diagonalize_hamiltonian``: dense Hermitian eigensolve in a truncated
  oscillator product basis.
* ``schrodinger_residual``: finite-difference residual of the
  time-dependent Schroedinger equation in (T, x_b, y_b).
* ``sine_mode_coupling``: exact <phi_n | phi_m'> for the real sine modes.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.integrate
import scipy.linalg

from . import closed_form
from .core import CAUSTIC_TOL, derive_frequencies
from .errors import (
    BasisTooSmall,
    CutoffTooSmall,
    NonUniqueSolution,
    SingularHessian,
)

__all__ = [
    "DiscretePath",
    "ConvergenceTable",
    "CouplingMatrix",
    "SineModeReport",
    "TraceReport",
    "solve_classical_bvp",
    "action_from_path",
    "sliced_propagator",
    "gauge_factor",
    "diagonalize_hamiltonian",
    "match_levels",
    "schrodinger_residual",
    "trace_vs_spectrum",
    "sine_mode_coupling",
    "sine_mode_fluctuation_ratio",
    "convergence_table",
    "observed_orders",
]


# ---------------------------------------------------------------- classical


@dataclass(frozen=True)
class DiscretePath:
    """Classical path sampled at t_k = k T / N, k = 0..N."""

    times: np.ndarray
    samples: np.ndarray  # (N+1, 2) positions
    velocities: np.ndarray  # (N+1, 2)
    config: object = field(repr=False)

    def __post_init__(self):
        if self.samples.shape[0] < 3:
            raise ValueError("a discrete path needs N >= 2")

    @property
    def N(self):
        return self.samples.shape[0] - 1


def _flow_generator(config):
    """5x5 generator of d/dt (x, y, vx, vy, 1)."""
    m, w_l = config.mass, config.omega_L
    ex, ey = config.e_field
    gen = np.zeros((5, 5))
    gen[0, 2] = gen[1, 3] = 1.0
    gen[2, 0] = -config.omega_x**2
    gen[3, 1] = -config.omega_y**2
    gen[2, 3] = 2.0 * w_l
    gen[3, 2] = -2.0 * w_l
    gen[2, 4] = config.charge * ex / m
    gen[3, 4] = config.charge * ey / m
    return gen


def solve_classical_bvp(config, ep, N=4096, cond_limit=1e10):
    """Classical path between the endpoints.

    The initial velocity comes from the position-velocity block of the
    fundamental matrix exp(G T); the path is then propagated with exp(G dt).
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    T = ep.duration_T
    gen = _flow_generator(config)
    phi_T = scipy.linalg.expm(gen * T)
    block = phi_T[:2, 2:4]
    sv = np.linalg.svd(block, compute_uv=False)
    # the free-particle block is T * I; compare against that scale as well
    if sv[-1] <= CAUSTIC_TOL * max(sv[0], T) or sv[0] > cond_limit * sv[-1]:
        raise NonUniqueSolution(
            f"fundamental matrix block is singular (singular values {sv[0]:.2e}, "
            f"{sv[-1]:.2e}); T is at or near a caustic")
    u0 = np.array([ep.x_a, ep.y_a, 0.0, 0.0, 1.0])
    rhs = ep.b - phi_T[:2, :2] @ ep.a - phi_T[:2, 4]
    u0[2:4] = np.linalg.solve(block, rhs)

    step = scipy.linalg.expm(gen * (T / N))
    states = np.empty((N + 1, 5))
    states[0] = u0
    for k in range(N):
        states[k + 1] = step @ states[k]
    samples = states[:, :2].copy()
    samples[0], samples[-1] = ep.a, ep.b
    times = np.linspace(0.0, T, N + 1)
    return DiscretePath(times, samples, states[:, 2:4].copy(), config)


def lagrangian(config, r, v):
    """Symmetric-gauge Lagrangian on arrays of positions and velocities."""
    x, y = r[..., 0], r[..., 1]
    vx, vy = v[..., 0], v[..., 1]
    m = config.mass
    ex, ey = config.e_field
    return (0.5 * m * (vx**2 + vy**2)
            - 0.5 * m * (config.omega_x**2 * x**2 + config.omega_y**2 * y**2)
            + m * config.omega_L * (x * vy - y * vx)
            + config.charge * (ex * x + ey * y))


def action_from_path(config, path):
    """Simpson quadrature of the Lagrangian along a sampled path."""
    values = lagrangian(config, path.samples, path.velocities)
    return float(scipy.integrate.simpson(values, x=path.times))


# ------------------------------------------------------------------ sliced


def _segment_form(config, dt, rule, gauge_kappa=0.0):
    """Quadratic form (4x4) and linear part (4,) of one slice's action.

    Variables are (x_k, y_k, x_{k+1}, y_{k+1}); the action of the slice is
    1/2 v.Q.v + l.v.  The potential is averaged over both ends; the vector
    potential B x r / 2 + kappa r is evaluated at r_k + lam (r_{k+1} - r_k)
    with lam = 1/2 ("midpoint") or 0 ("endpoint").
    """
    if rule not in ("midpoint", "endpoint"):
        raise ValueError(f"unknown discretization rule {rule!r}")
    lam = 0.5 if rule == "midpoint" else 0.0
    m, w_l = config.mass, config.omega_L
    kin = m / dt * np.array([[1, 0, -1, 0], [0, 1, 0, -1], [-1, 0, 1, 0], [0, -1, 0, 1]], float)
    pot = -0.5 * dt * m * np.diag([config.omega_x**2, config.omega_y**2,
                                   config.omega_x**2, config.omega_y**2])
    # m wL (x_s dy - y_s dx) as sum of bilinear products
    x_s = np.array([1 - lam, 0, lam, 0])
    y_s = np.array([0, 1 - lam, 0, lam])
    d_x = np.array([-1, 0, 1, 0])
    d_y = np.array([0, -1, 0, 1])
    mag = m * w_l * (np.outer(x_s, d_y) + np.outer(d_y, x_s)
                     - np.outer(y_s, d_x) - np.outer(d_x, y_s))
    if gauge_kappa:
        # q kappa r_s . dr, the gradient of q kappa r^2 / 2
        mag = mag + config.charge * gauge_kappa * (
            np.outer(x_s, d_x) + np.outer(d_x, x_s) + np.outer(y_s, d_y) + np.outer(d_y, y_s))
    ex, ey = config.e_field
    lin = 0.5 * dt * config.charge * np.array([ex, ey, ex, ey])
    return kin + pot + mag, lin


def sliced_propagator(config, ep, N, rule="midpoint", gauge_kappa=0.0):
    """Exact N-slice time-discretized propagator.

    The action is quadratic in the 2(N-1) interior coordinates; the
    Fresnel integral equals the stationary-point exponential times
    |det A|^(-1/2) with a phase exp(i pi/4 (n+ - n-)) from the inertia of
    the Hessian A.

    ``gauge_kappa`` adds the pure-gauge term kappa r to the symmetric-gauge
    vector potential, so the continuum answer picks up the factor
    exp(i q kappa (r_b^2 - r_a^2) / 2 hbar) (see ``gauge_factor``).  In the
    symmetric gauge the two rules agree exactly; with kappa != 0 the
    endpoint rule misses a div A term and stalls at a finite error.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    m, hbar, T = config.mass, config.hbar, ep.duration_T
    dt = T / N
    q_seg, l_seg = _segment_form(config, dt, rule, gauge_kappa)
    d_left, d_right = q_seg[:2, :2], q_seg[2:, 2:]
    off = q_seg[:2, 2:]  # couples r_k (rows) to r_{k+1} (cols)
    diag = d_left + d_right
    ra, rb = ep.a, ep.b

    n_int = N - 1
    b = np.tile(l_seg[:2] + l_seg[2:], (n_int, 1))
    b[0] += off.T @ ra
    b[-1] += off @ rb
    const = 0.5 * ra @ d_left @ ra + 0.5 * rb @ d_right @ rb + l_seg[:2] @ ra + l_seg[2:] @ rb

    (d00, d01), (_, d11) = diag
    (o00, o01), (o10, o11) = off
    scale = abs(d00) + abs(d11) + abs(d01)
    p00, p01, p11 = d00, d01, d11
    g0, g1 = b[0]
    logdet = 0.0
    negatives = 0
    quad = 0.0
    for k in range(n_int):
        if k > 0:
            # P_k = D - O^T P_{k-1}^{-1} O,  g_k = b_k - O^T P_{k-1}^{-1} g_{k-1}
            t00 = i00 * o00 + i01 * o10
            t01 = i00 * o01 + i01 * o11
            t10 = i01 * o00 + i11 * o10
            t11 = i01 * o01 + i11 * o11
            p00 = d00 - (o00 * t00 + o10 * t10)
            p01 = d01 - (o00 * t01 + o10 * t11)
            p11 = d11 - (o01 * t01 + o11 * t11)
            h0 = i00 * g0 + i01 * g1
            h1 = i01 * g0 + i11 * g1
            g0 = b[k, 0] - (o00 * h0 + o10 * h1)
            g1 = b[k, 1] - (o01 * h0 + o11 * h1)
        det = p00 * p11 - p01 * p01
        if abs(det) <= 1e-13 * scale**2:
            raise SingularHessian(f"pivot block {k} is singular (det {det:.3e})")
        i00, i01, i11 = p11 / det, -p01 / det, p00 / det
        logdet += np.log(abs(det))
        if det < 0:
            negatives += 1
        elif p00 + p11 < 0:
            negatives += 2
        quad += g0 * (i00 * g0 + i01 * g1) + g1 * (i01 * g0 + i11 * g1)

    s_stat = const - 0.5 * quad
    log_mod = N * np.log(m / (2 * np.pi * hbar * dt)) + n_int * np.log(2 * np.pi * hbar) - 0.5 * logdet
    # (1/i)^N from the slice prefactors, e^{i pi/4} per positive and
    # e^{-i pi/4} per negative Hessian eigenvalue: net -pi/2 (1 + n-)
    phase = -0.5 * np.pi * (1 + negatives) + s_stat / hbar
    return complex(np.exp(log_mod + 1j * phase))


def gauge_factor(config, ep, gauge_kappa):
    """exp(i q (chi(b) - chi(a)) / hbar) for chi = kappa r^2 / 2."""
    chi = 0.5 * gauge_kappa * (ep.b @ ep.b - ep.a @ ep.a)
    return complex(np.exp(1j * config.charge * chi / config.hbar))


# ---------------------------------------------------------------- spectrum


def _ladder_ops(K, omega_ref, mass, hbar):
    """Position, momentum and their squares in a K-level oscillator basis."""
    size = K + 1
    a = np.diag(np.sqrt(np.arange(1, size)), 1)
    ell = np.sqrt(hbar / (mass * omega_ref))
    x = ell / np.sqrt(2) * (a + a.T)
    p = 1j * hbar / (ell * np.sqrt(2)) * (a.T - a)
    # squares from the enlarged basis are exact in the first K levels
    x2 = (x @ x)[:K, :K].real
    p2 = (p @ p)[:K, :K].real
    return x[:K, :K], p[:K, :K], x2, p2


def _basis_order(K):
    """Permutation sorting (n_x, n_y) by total quantum number, then n_x."""
    nx, ny = np.divmod(np.arange(K * K), K)
    return np.lexsort((nx, nx + ny))


def diagonalize_hamiltonian(config, basis_per_axis, reference_omega=None,
                            convergence_tol=None):
    """Ascending eigenvalues of H = (p - qA)^2/2m + V - qE.r.

    ``reference_omega`` is the (x, y) oscillator frequency of the basis and
    defaults to the effective frequencies.  With ``convergence_tol`` the
    lowest ten levels are compared against a basis four levels smaller and
    BasisTooSmall is raised if they drift by more than the tolerance.
    """
    K = int(basis_per_axis)
    if K < 4:
        raise BasisTooSmall("basis_per_axis must be at least 4")
    freqs = derive_frequencies(config)
    if reference_omega is None:
        reference_omega = (freqs.omega_eff_x, freqs.omega_eff_y)
    elif np.isscalar(reference_omega):
        reference_omega = (reference_omega, reference_omega)
    if min(reference_omega) <= 0:
        raise ValueError("the oscillator basis needs a positive reference frequency")

    m, hbar, w_l = config.mass, config.hbar, freqs.omega_L
    q = config.charge
    ex, ey = config.e_field
    xo, px, x2, p2x = _ladder_ops(K, reference_omega[0], m, hbar)
    yo, py, y2, p2y = _ladder_ops(K, reference_omega[1], m, hbar)
    eye = np.eye(K)
    hx = p2x / (2 * m) + 0.5 * m * freqs.omega_eff_x**2 * x2 - q * ex * xo
    hy = p2y / (2 * m) + 0.5 * m * freqs.omega_eff_y**2 * y2 - q * ey * yo
    lz = np.kron(xo, py) - np.kron(px, yo)
    ham = np.kron(hx, eye) + np.kron(eye, hy) - w_l * lz
    perm = _basis_order(K)
    ham = ham[np.ix_(perm, perm)]
    ham = 0.5 * (ham + ham.conj().T)
    evals = scipy.linalg.eigh(ham, eigvals_only=True)

    if convergence_tol is not None:
        smaller = diagonalize_hamiltonian(config, K - 4, reference_omega)
        drift = np.max(np.abs(evals[:10] - smaller[:10]))
        if drift > convergence_tol:
            raise BasisTooSmall(f"lowest levels drift by {drift:.3e} between "
                                f"K={K - 4} and K={K}")
    return evals


def match_levels(eigenvalues, levels, window):
    """Greedy matching of two ascending lists within ``window``.

    Returns (pairs, unmatched) where pairs are (eigenvalue, level) tuples
    and unmatched lists the levels that found no partner.
    """
    eig = sorted(float(e) for e in eigenvalues)
    lev = sorted(float(v) for v in levels)
    pairs, unmatched = [], []
    i = 0
    for v in lev:
        while i < len(eig) and eig[i] < v - window:
            i += 1
        if i < len(eig) and abs(eig[i] - v) <= window:
            pairs.append((eig[i], v))
            i += 1
        else:
            unmatched.append(v)
    return pairs, unmatched


# --------------------------------------------------------------- residuals


def _closed_kernel(config, ep):
    return closed_form.propagator(config, ep).amplitude


def schrodinger_residual(config, ep, h, kernel=None):
    """|(i hbar d/dT - H_b) K| / |K| by second-order central differences.

    H_b acts on the final point (x_b, y_b):
        -hbar^2/2m Lap + i hbar wL (x d_y - y d_x)
        + m/2 (w_eff_x^2 x^2 + w_eff_y^2 y^2) - q E.r
    ``kernel(config, ep)`` defaults to the closed-form propagator.
    """
    kernel = kernel or _closed_kernel
    freqs = derive_frequencies(config)
    m, hbar, q, w_l = config.mass, config.hbar, config.charge, freqs.omega_L
    ex, ey = config.e_field
    T, xb, yb = ep.duration_T, ep.x_b, ep.y_b

    k0 = kernel(config, ep)
    kt_p = kernel(config, ep.with_duration(T + h))
    kt_m = kernel(config, ep.with_duration(T - h))
    kx_p = kernel(config, ep.with_b(xb + h, yb))
    kx_m = kernel(config, ep.with_b(xb - h, yb))
    ky_p = kernel(config, ep.with_b(xb, yb + h))
    ky_m = kernel(config, ep.with_b(xb, yb - h))

    d_t = (kt_p - kt_m) / (2 * h)
    d_x = (kx_p - kx_m) / (2 * h)
    d_y = (ky_p - ky_m) / (2 * h)
    lap = (kx_p + kx_m + ky_p + ky_m - 4 * k0) / h**2
    pot = (0.5 * m * (freqs.omega_eff_x**2 * xb**2 + freqs.omega_eff_y**2 * yb**2)
           - q * (ex * xb + ey * yb))
    h_k = -hbar**2 / (2 * m) * lap + 1j * hbar * w_l * (xb * d_y - yb * d_x) + pot * k0
    return float(abs(1j * hbar * d_t - h_k) / abs(k0))


# ------------------------------------------------------------------- trace


@dataclass(frozen=True)
class TraceReport:
    s: float
    cutoff: int
    closed_form: float
    spectrum_sum: float  # with closed_form.E_SHIFT_SIGN
    spectrum_sum_flipped: float  # with the opposite sign of the E^2 term
    rel_discrepancy: float
    rel_discrepancy_flipped: float
    reconciling_sign: float


def trace_vs_spectrum(config, s, cutoff=50, tail_tol=1e-10):
    """Closed-form Euclidean trace against sum_{n,m<=cutoff} exp(-E(n,m) s/hbar)."""
    if not s > 0:
        raise ValueError("s must be positive")
    freqs = derive_frequencies(config)
    hbar = config.hbar
    closed = closed_form.trace_closed_form(config, -1j * s)

    n = np.arange(cutoff + 1)
    e_plus = hbar * (freqs.omega_eff_x + freqs.omega_L)
    e_minus = hbar * (freqs.omega_eff_x - freqs.omega_L)
    gap = min(e_plus, e_minus)
    # relative weight of the first omitted level along the softer direction
    tail = np.exp(-gap * (cutoff + 1) * s / hbar) / max(-np.expm1(-gap * s / hbar), 1e-300)
    if tail > tail_tol:
        raise CutoffTooSmall(f"tail bound {tail:.2e} exceeds {tail_tol:.1e}")

    e00 = closed_form.energy_level(config, (0, 0)).value
    e_field_term = e00 - 0.5 * (e_plus + e_minus)
    grid = e_plus * (n[:, None] + 0.5) + e_minus * (n[None, :] + 0.5)
    base = float(np.sum(np.exp(-grid * s / hbar)))
    with_sign = base * np.exp(-e_field_term * s / hbar)
    flipped = base * np.exp(e_field_term * s / hbar)
    closed_r = closed.real
    rel = abs(with_sign - closed_r) / abs(closed_r)
    rel_f = abs(flipped - closed_r) / abs(closed_r)
    sign = closed_form.E_SHIFT_SIGN if rel <= rel_f else -closed_form.E_SHIFT_SIGN
    return TraceReport(float(s), int(cutoff), float(closed_r), float(with_sign),
                       float(flipped), float(rel), float(rel_f), float(sign))


# --------------------------------------------------------------- sine modes


@dataclass(frozen=True)
class CouplingMatrix:
    """M[n-1][m-1] = (1/T) int_0^T phi_n phi_m' dt for phi_n = sqrt(2/T) sin(n pi t/T)."""

    entries: np.ndarray
    exact: tuple  # Fraction rows; entries = exact * 1/T^2
    T: float

    @property
    def n_modes(self):
        return self.entries.shape[0]


@dataclass(frozen=True)
class SineModeReport:
    n_modes: int
    zero_entries: int
    nonzero_entries: list  # (n, m, value)
    claim_holds: bool
    message: str


def _sin_cos_integral(n, m):
    """int_0^pi sin(n u) cos(m u) du as an exact fraction."""
    if n == m:
        return Fraction(0)
    parity = 1 - (-1) ** (n + m)  # 0 or 2
    return Fraction(n * parity, n * n - m * m)


def sine_mode_coupling(n_modes, T):
    """Exact coupling matrix of the real sine modes and a report on it.

    (1/T) int phi_n phi_m' dt = (2 m / T^2) int_0^pi sin(n u) cos(m u) du,
    which is 4 n m / (T^2 (n^2 - m^2)) for n + m odd and zero otherwise.
    """
    if n_modes < 2:
        raise ValueError("need at least two modes")
    exact = tuple(tuple(Fraction(2 * m) * _sin_cos_integral(n, m)
                        for m in range(1, n_modes + 1))
                  for n in range(1, n_modes + 1))
    entries = np.array([[float(v) for v in row] for row in exact]) / T**2
    nonzero = [(n + 1, m + 1, float(entries[n, m]))
               for n in range(n_modes) for m in range(n_modes) if exact[n][m] != 0]
    zeros = n_modes * n_modes - len(nonzero)
    holds = not nonzero
    if holds:
        msg = "all couplings vanish"
    else:
        msg = (f"{len(nonzero)} of {n_modes * n_modes} couplings <phi_n|phi_m'> are "
               "nonzero (every n + m odd pair); the claim that they all vanish "
               "does not hold. Diagonal and even n + m entries are exactly zero.")
    coupling = CouplingMatrix(entries, exact, float(T))
    return coupling, SineModeReport(n_modes, zeros, nonzero, holds, msg)


def sine_mode_fluctuation_ratio(omega_L, T, n_modes, include_coupling=True):
    """F_B / F_free for a pure magnetic field from a truncated sine-mode basis.

    The fluctuation action in modes is
        m/2 sum k_n^2 (a_n^2 + b_n^2) + 2 m wL T a.M.b,  k_n = n pi / T,
    and the Fresnel integral gives F_B/F_free = sqrt(det Q_free / det Q).
    The exact value is wL T / sin(wL T).  Dropping the coupling gives 1.
    """
    coupling, _ = sine_mode_coupling(n_modes, T)
    k2 = (np.arange(1, n_modes + 1) * np.pi / T) ** 2
    # work with Q_free^{-1/2} Q Q_free^{-1/2} = [[I, C'], [C'^T, I]]
    c = 2.0 * omega_L * T * coupling.entries if include_coupling else 0.0 * coupling.entries
    scaled = c / np.sqrt(np.outer(k2, k2))
    full = np.block([[np.eye(n_modes), scaled], [scaled.T, np.eye(n_modes)]])
    sign, logdet = np.linalg.slogdet(full)
    if sign <= 0:
        raise ValueError("mode determinant is not positive; omega_L T is past a caustic")
    return float(np.exp(-0.5 * logdet))


# ------------------------------------------------------------ convergence


@dataclass
class ConvergenceTable:
    """Rows of (resolution, value, reference, rel_error), sorted by resolution."""

    resolution_name: str
    rows: list = field(default_factory=list)

    def add(self, resolution, value, reference):
        rel = abs(value - reference) / abs(reference)
        if not np.isfinite(rel):
            raise ValueError("relative error is not finite")
        if self.rows and resolution <= self.rows[-1][0]:
            raise ValueError("rows must be added in increasing resolution")
        self.rows.append((resolution, value, reference, float(rel)))

    @property
    def errors(self):
        return [r[3] for r in self.rows]

    def as_records(self):
        return [{self.resolution_name: r[0], "value": r[1], "reference": r[2],
                 "rel_error": r[3]} for r in self.rows]


def convergence_table(fn, resolutions, reference, name="N"):
    table = ConvergenceTable(name)
    for res in sorted(resolutions):
        table.add(res, fn(res), reference)
    return table


def observed_orders(steps, errors):
    """log(e_i / e_{i+1}) / log(h_i / h_{i+1}) between consecutive rows."""
    steps = np.asarray(steps, float)
    errors = np.asarray(errors, float)
    return np.log(errors[:-1] / errors[1:]) / np.log(steps[:-1] / steps[1:])
