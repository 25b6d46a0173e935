"""Closed-form actions, fluctuation prefactors, propagators and spectrum.

All formulas are for the symmetric-gauge Lagrangian

    L = m/2 (xdot^2 + ydot^2) - m/2 (wx^2 x^2 + wy^2 y^2)
        + m wL (x ydot - y xdot) + q E.r

The magnetic field is removed by a rotation with the Larmor frequency and
the electric field by a constant shift of the origin; what is left is an
(anisotropic) oscillator with effective frequencies sqrt(w^2 + wL^2).

Caveat: the rotation only decouples the problem when wx == wy or wL == 0.
For a genuinely anisotropic oscillator in a magnetic field the rotated
potential is time dependent, and ``classical_action_aniso_B`` /
``propagator`` return the rotating-frame formula, which is not the exact
answer there.  ``oracles.solve_classical_bvp`` and
``oracles.sliced_propagator`` show the size of the discrepancy.
"""

from dataclasses import dataclass

import numpy as np

from .core import CAUSTIC_TOL, PropagatorValue, SpectrumIndex, derive_frequencies
from .errors import (
    AnisotropyError,
    CausticSingularity,
    DegenerateShift,
    PoleError,
)

__all__ = [
    "TransformedEndpoints",
    "EnergyLevel",
    "E_SHIFT_SIGN",
    "classical_action_1d_ho",
    "classical_action_iso_B",
    "classical_action_pure_B",
    "classical_action_aniso_B",
    "classical_action_iso_EB",
    "iso_EB_terms",
    "transform_endpoints",
    "constant_action_term",
    "general_classical_action",
    "fluctuation_factor",
    "caustic_count",
    "free_propagator",
    "propagator",
    "energy_level",
    "trace_closed_form",
]

# Sign of the q^2 E^2 / 2 m w^2 term in E(n, m).  Completing the square in
# the Hamiltonian lowers every level by q^2 E^2 / 2 m w^2; the trace formula
# and the diagonalization oracle both agree with -1.
E_SHIFT_SIGN = -1.0


@dataclass(frozen=True)
class TransformedEndpoints:
    x_a_t: float
    y_a_t: float
    x_b_t: float
    y_b_t: float


@dataclass(frozen=True)
class EnergyLevel:
    value: float
    index: SpectrumIndex


def _kernel_coeffs(w, T, axis=None):
    """Return (w cot wT, w / sin wT), with the free limit (1/T, 1/T) at w = 0."""
    if w == 0.0:
        return 1.0 / T, 1.0 / T
    s = np.sin(w * T)
    if abs(s) <= CAUSTIC_TOL:
        where = f" on the {axis} axis" if axis else ""
        raise CausticSingularity(
            f"sin({w:g} * {T:g}) = {s:.3e} is a caustic{where}", axis=axis)
    return w * np.cos(w * T) / s, w / s


def _ho_action(m, w, xa, xb, T, axis=None):
    wcot, wcsc = _kernel_coeffs(w, T, axis)
    return 0.5 * m * ((xa * xa + xb * xb) * wcot - 2.0 * xa * xb * wcsc)


def classical_action_1d_ho(m, omega, x_a, x_b, T):
    """Classical action of the 1D oscillator; omega = 0 gives the free particle."""
    if not T > 0:
        raise ValueError("T must be positive")
    return float(_ho_action(m, omega, x_a, x_b, T))


def _require_isotropic(config):
    if not config.is_isotropic:
        raise AnisotropyError(
            f"isotropic formula called with omega_x={config.omega_x}, "
            f"omega_y={config.omega_y}")


def _shift(config):
    """Equilibrium displacement q E / m w^2 per axis (zero where E vanishes)."""
    ex, ey = config.e_field
    q, m = config.charge, config.mass
    if (ex != 0.0 or ey != 0.0) and (config.omega_x == 0.0 or config.omega_y == 0.0):
        raise DegenerateShift(
            "electric field needs nonzero oscillator frequencies on both axes")
    dx = q * ex / (m * config.omega_x**2) if ex != 0.0 else 0.0
    dy = q * ey / (m * config.omega_y**2) if ey != 0.0 else 0.0
    return dx, dy


def classical_action_iso_B(config, ep):
    """Isotropic oscillator in a magnetic field, E ignored."""
    _require_isotropic(config)
    freqs = derive_frequencies(config)
    w, w_l, T = freqs.omega_eff_x, freqs.omega_L, ep.duration_T
    wcot, wcsc = _kernel_coeffs(w, T)
    cl, sl = np.cos(w_l * T), np.sin(w_l * T)
    xa, ya, xb, yb = ep.x_a, ep.y_a, ep.x_b, ep.y_b
    bracket = ((xa**2 + xb**2 + ya**2 + yb**2) * wcot
               - 2.0 * (xa * xb + ya * yb) * cl * wcsc
               - 2.0 * (ya * xb - xa * yb) * sl * wcsc)
    return float(0.5 * config.mass * bracket)


def classical_action_pure_B(config, ep):
    """Charge in a uniform magnetic field with no confining potential."""
    if config.omega_x != 0.0 or config.omega_y != 0.0:
        raise ValueError("pure-B action needs omega_x = omega_y = 0")
    m, w_l, T = config.mass, config.omega_L, ep.duration_T
    dx, dy = ep.x_b - ep.x_a, ep.y_b - ep.y_a
    # w cot(wT) has the free limit 1/T
    wcot, _ = _kernel_coeffs(w_l, T)
    return float(0.5 * m * wcot * (dx * dx + dy * dy)
                 - m * w_l * (ep.y_a * ep.x_b - ep.x_a * ep.y_b))


def classical_action_aniso_B(config, ep):
    """Rotating-frame action S^x + S^y for an anisotropic oscillator, E = 0.

    Exact only for omega_x == omega_y or omega_L == 0 (see module docstring).
    """
    if config.has_e_field:
        raise ValueError("aniso-B action is defined for E = 0")
    freqs = derive_frequencies(config)
    m, w_l, T = config.mass, freqs.omega_L, ep.duration_T
    cl, sl, s2 = np.cos(w_l * T), np.sin(w_l * T), np.sin(2.0 * w_l * T)
    xa, ya, xb, yb = ep.x_a, ep.y_a, ep.x_b, ep.y_b

    wcot, wcsc = _kernel_coeffs(freqs.omega_eff_x, T, "x")
    s_x = (0.5 * m * wcot * (xa**2 + xb**2 * cl**2 + yb**2 * sl**2 - xb * yb * s2)
           + m * wcsc * (xa * yb * sl - xa * xb * cl))

    wcot, wcsc = _kernel_coeffs(freqs.omega_eff_y, T, "y")
    s_y = (0.5 * m * wcot * (ya**2 + xb**2 * sl**2 + yb**2 * cl**2 + xb * yb * s2)
           - m * wcsc * (ya * yb * cl + ya * xb * sl))
    return float(s_x + s_y)


def iso_EB_terms(config, ep):
    """The four endpoint polynomials A1..A4 of the isotropic E x B action."""
    _require_isotropic(config)
    q, m, T = config.charge, config.mass, ep.duration_T
    ex, ey = config.e_field
    w2 = config.omega_x**2
    xa, ya, xb, yb = ep.x_a, ep.y_a, ep.x_b, ep.y_b
    if config.has_e_field:
        if w2 == 0.0:
            raise DegenerateShift("E x B action needs omega > 0 when E != 0")
        k = 2.0 * q / (m * w2)
        e2_term = 2.0 * q**2 * (ex**2 + ey**2) / (m**2 * w2**2)
        lin = (xa + xb) * ex + (ya + yb) * ey
        a4 = (q**2 * T * (ex**2 + ey**2) / (2.0 * m * w2)
              + q * config.omega_L * ex / w2 * (yb - ya)
              - q * config.omega_L * ey / w2 * (xb - xa))
    else:
        k = e2_term = lin = a4 = 0.0
    a1 = xa**2 + xb**2 + ya**2 + yb**2 + e2_term - k * lin
    a2 = k * lin - e2_term - 2.0 * xa * xb - 2.0 * ya * yb
    a3 = 2.0 * xa * yb - 2.0 * xb * ya - k * ((yb - ya) * ex - (xb - xa) * ey)
    return a1, a2, a3, a4


def classical_action_iso_EB(config, ep):
    """Isotropic oscillator in crossed E and B fields."""
    a1, a2, a3, a4 = iso_EB_terms(config, ep)
    freqs = derive_frequencies(config)
    T = ep.duration_T
    wcot, wcsc = _kernel_coeffs(freqs.omega_eff_x, T)
    cl, sl = np.cos(freqs.omega_L * T), np.sin(freqs.omega_L * T)
    # A2 and A3 enter with + so that E = 0 reproduces classical_action_iso_B
    bracket = a1 * wcot + (a2 * cl + a3 * sl) * wcsc
    return float(0.5 * config.mass * bracket + a4)


def transform_endpoints(config, ep, include_shift=True):
    """Endpoints in the shifted, co-rotating frame.

    The a-endpoint (t = 0) is only shifted; the b-endpoint is shifted and then
    rotated by omega_L T.
    """
    dx, dy = _shift(config) if include_shift else (0.0, 0.0)
    theta = config.omega_L * ep.duration_T
    c, s = np.cos(theta), np.sin(theta)
    xb, yb = ep.x_b - dx, ep.y_b - dy
    return TransformedEndpoints(
        x_a_t=ep.x_a - dx,
        y_a_t=ep.y_a - dy,
        x_b_t=float(xb * c - yb * s),
        y_b_t=float(xb * s + yb * c),
    )


def constant_action_term(config, ep):
    """Field-only part C of the action left over after the shift."""
    ex, ey = config.e_field
    if not config.has_e_field:
        return 0.0
    _shift(config)  # validates frequencies
    q, m, T, w_l = config.charge, config.mass, ep.duration_T, config.omega_L
    wx2, wy2 = config.omega_x**2, config.omega_y**2
    return float(q**2 * T / (2.0 * m) * (ex**2 / wx2 + ey**2 / wy2)
                 + q * w_l * ex / wx2 * (ep.y_b - ep.y_a)
                 - q * w_l * ey / wy2 * (ep.x_b - ep.x_a))


def general_classical_action(config, ep):
    """C + S~x + S~y evaluated on the transformed endpoints."""
    freqs = derive_frequencies(config)
    t = transform_endpoints(config, ep, include_shift=config.has_e_field)
    m, T = config.mass, ep.duration_T
    return (constant_action_term(config, ep)
            + _ho_action(m, freqs.omega_eff_x, t.x_a_t, t.x_b_t, T, "x")
            + _ho_action(m, freqs.omega_eff_y, t.y_a_t, t.y_b_t, T, "y"))


def caustic_count(config, T):
    """Number of sine zeros crossed on (0, T), summed over both axes."""
    freqs = derive_frequencies(config)
    count = 0
    for w in (freqs.omega_eff_x, freqs.omega_eff_y):
        if w > 0:
            k = int(np.floor(w * T / np.pi))
            # a zero exactly at T is not "crossed"
            if k > 0 and np.isclose(w * T, k * np.pi, rtol=0, atol=1e-12):
                k -= 1
            count += k
    return count


def fluctuation_factor(config, T, phase_convention="principal_branch"):
    """Endpoint-independent prefactor of the propagator.

    (m / 2 pi i hbar) sqrt(w_x / sin w_x T) sqrt(w_y / sin w_y T), each root on
    its principal branch, which collapses to m w / (2 pi i hbar sin wT) in
    the isotropic case.  With ``phase_convention="maslov_tracked"`` each
    axis uses |sin| and picks up exp(-i pi/2) per caustic crossed.
    """
    freqs = derive_frequencies(config)
    m, hbar = config.mass, config.hbar
    pref = m / (2j * np.pi * hbar)
    roots = []
    for w, axis in ((freqs.omega_eff_x, "x"), (freqs.omega_eff_y, "y")):
        _, wcsc = _kernel_coeffs(w, T, axis)
        if phase_convention == "principal_branch":
            roots.append(np.sqrt(complex(wcsc)))
        elif phase_convention == "maslov_tracked":
            k = int(np.floor(w * T / np.pi)) if w > 0 else 0
            roots.append(np.sqrt(abs(wcsc)) * np.exp(-0.5j * np.pi * k))
        else:
            raise ValueError(f"unknown phase convention {phase_convention!r}")
    return complex(pref * roots[0] * roots[1])


def free_propagator(mass, ep, hbar=1.0):
    """2D free-particle propagator."""
    T = ep.duration_T
    d2 = (ep.x_b - ep.x_a) ** 2 + (ep.y_b - ep.y_a) ** 2
    return complex(mass / (2j * np.pi * hbar * T) * np.exp(1j * mass * d2 / (2 * hbar * T)))


def propagator(config, ep, phase_convention="principal_branch"):
    """Full propagator exp(i (C + S~x + S~y) / hbar) * F(T)."""
    T = ep.duration_T
    if (config.omega_x == 0.0 and config.omega_y == 0.0
            and config.omega_L == 0.0 and not config.has_e_field):
        return PropagatorValue(free_propagator(config.mass, ep, config.hbar), 0,
                               phase_convention)
    action = general_classical_action(config, ep)
    amp = np.exp(1j * action / config.hbar) * fluctuation_factor(config, T, phase_convention)
    return PropagatorValue(complex(amp), caustic_count(config, T), phase_convention)


def energy_level(config, idx):
    """E(n, m) of the isotropic oscillator in crossed fields."""
    _require_isotropic(config)
    n, m_q = idx
    if n < 0 or m_q < 0:
        raise ValueError("quantum numbers must be nonnegative")
    freqs = derive_frequencies(config)
    hbar, w_l, w_eff = config.hbar, freqs.omega_L, freqs.omega_eff_x
    shift = 0.0
    if config.has_e_field:
        w2 = config.omega_x**2
        if w2 == 0.0:
            raise DegenerateShift("energy shift q^2 E^2 / 2 m w^2 needs omega > 0")
        e2 = config.e_field[0] ** 2 + config.e_field[1] ** 2
        shift = E_SHIFT_SIGN * config.charge**2 * e2 / (2.0 * config.mass * w2)
    value = shift + hbar * (w_eff + w_l) * (n + 0.5) + hbar * (w_eff - w_l) * (m_q + 0.5)
    return EnergyLevel(float(value), SpectrumIndex(int(n), int(m_q)))


def trace_closed_form(config, tau):
    """Tr exp(-i H tau / hbar) continued to complex tau with Im(tau) <= 0."""
    _require_isotropic(config)
    tau = complex(tau)
    if tau.imag > 0:
        raise ValueError("trace needs Im(tau) <= 0")
    freqs = derive_frequencies(config)
    denom = np.cos(freqs.omega_eff_x * tau) - np.cos(freqs.omega_L * tau)
    scale = max(abs(np.cos(freqs.omega_eff_x * tau)), abs(np.cos(freqs.omega_L * tau)), 1.0)
    if abs(denom) <= 1e-14 * scale:
        raise PoleError(f"cos(w_eff tau) = cos(w_L tau) at tau = {tau}")
    phase = 1.0
    if config.has_e_field:
        w2 = config.omega_x**2
        if w2 == 0.0:
            raise DegenerateShift("trace with E != 0 needs omega > 0")
        e2 = config.e_field[0] ** 2 + config.e_field[1] ** 2
        phase = np.exp(1j * config.charge**2 * tau * e2
                       / (2.0 * config.mass * config.hbar * w2))
    return complex(0.5 / denom * phase)
