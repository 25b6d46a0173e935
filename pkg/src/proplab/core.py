"""Domain types and derived frequencies.

Units are whatever the caller uses consistently; the defaults (hbar = m = 1)
make every quantity dimensionless.  The Larmor frequency carries the sign of
q*B, so q*B > 0 means a counter-clockwise compensating rotation.
"""

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

__all__ = [
    "PhysicalConstants",
    "SystemConfig",
    "DerivedFrequencies",
    "Endpoints",
    "FourierParams",
    "PropagatorValue",
    "SpectrumIndex",
    "derive_frequencies",
    "CAUSTIC_TOL",
]

# |sin(omega_eff T)| below this is treated as a caustic
CAUSTIC_TOL = 1e-9


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")


@dataclass(frozen=True)
class SystemConfig:
    """Charged 2D oscillator in a perpendicular B field and in-plane E field."""

    mass: float = 1.0
    charge: float = 1.0
    b_field: float = 0.0
    e_field: tuple = (0.0, 0.0)
    omega_x: float = 0.0
    omega_y: float = 0.0
    constants: PhysicalConstants = field(default_factory=PhysicalConstants)

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if self.omega_x < 0 or self.omega_y < 0:
            raise ValueError("oscillator frequencies must be nonnegative")
        ex, ey = self.e_field
        object.__setattr__(self, "e_field", (float(ex), float(ey)))
        for name in ("mass", "charge", "b_field", "omega_x", "omega_y"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")

    @classmethod
    def from_larmor(cls, omega_L, omega_x=0.0, omega_y=None, *, mass=1.0,
                    charge=1.0, e_field=(0.0, 0.0), hbar=1.0):
        """Build a config from the Larmor frequency instead of B.

        ``omega_y`` defaults to ``omega_x`` (isotropic).
        """
        if omega_y is None:
            omega_y = omega_x
        if charge == 0 and omega_L != 0:
            raise ValueError("nonzero Larmor frequency needs nonzero charge")
        b_field = 2.0 * mass * omega_L / charge if charge != 0 else 0.0
        return cls(mass=mass, charge=charge, b_field=b_field, e_field=e_field,
                   omega_x=omega_x, omega_y=omega_y,
                   constants=PhysicalConstants(hbar))

    @property
    def hbar(self):
        return self.constants.hbar

    @property
    def omega_L(self):
        return self.charge * self.b_field / (2.0 * self.mass)

    @property
    def is_isotropic(self):
        return self.omega_x == self.omega_y

    @property
    def has_e_field(self):
        return self.e_field[0] != 0.0 or self.e_field[1] != 0.0


@dataclass(frozen=True)
class DerivedFrequencies:
    omega_L: float
    omega_c: float
    omega_eff_x: float
    omega_eff_y: float
    # isotropic-only splitting, None otherwise
    omega_eff_plus: Optional[float] = None
    omega_eff_minus: Optional[float] = None


def derive_frequencies(config):
    """Larmor, cyclotron and effective (rotating-frame) frequencies."""
    w_l = config.omega_L
    w_c = config.charge * config.b_field / config.mass
    wx = float(np.hypot(config.omega_x, w_l))
    wy = float(np.hypot(config.omega_y, w_l))
    plus = minus = None
    if config.is_isotropic:
        plus = 0.5 * (wx + w_l)
        minus = 0.5 * (wx - w_l)
    return DerivedFrequencies(w_l, w_c, wx, wy, plus, minus)


@dataclass(frozen=True)
class Endpoints:
    x_a: float
    y_a: float
    x_b: float
    y_b: float
    duration_T: float

    def __post_init__(self):
        if not self.duration_T > 0:
            raise ValueError(f"duration_T must be positive, got {self.duration_T}")

    @classmethod
    def from_points(cls, a, b, T):
        return cls(float(a[0]), float(a[1]), float(b[0]), float(b[1]), float(T))

    @property
    def a(self):
        return np.array([self.x_a, self.y_a])

    @property
    def b(self):
        return np.array([self.x_b, self.y_b])

    def with_duration(self, T):
        return Endpoints(self.x_a, self.y_a, self.x_b, self.y_b, T)

    def with_b(self, x_b, y_b):
        return Endpoints(self.x_a, self.y_a, x_b, y_b, self.duration_T)


@dataclass(frozen=True)
class FourierParams:
    """Coefficients of the mode-space action |c_n|^2 (alpha n^2 - beta + gamma n)."""

    alpha: float
    beta: float
    gamma: float = 0.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    @classmethod
    def from_physical(cls, mass, omega, T, omega_L=0.0, hbar=1.0):
        alpha = 2.0 * mass * np.pi**2 / (hbar * T)
        beta = mass * omega**2 * T / (2.0 * hbar)
        gamma = 2.0 * mass * np.pi * omega_L / hbar
        return cls(alpha, beta, gamma)

    @classmethod
    def from_config(cls, config, T):
        if not config.is_isotropic:
            raise ValueError("mode-space parameters need an isotropic oscillator")
        return cls.from_physical(config.mass, config.omega_x, T,
                                 config.omega_L, config.hbar)


@dataclass(frozen=True)
class PropagatorValue:
    amplitude: complex
    caustics_crossed: int = 0
    phase_convention: str = "principal_branch"

    def __post_init__(self):
        if not np.isfinite(self.amplitude):
            raise ValueError("propagator amplitude is not finite")
        if self.phase_convention not in ("principal_branch", "maslov_tracked"):
            raise ValueError(f"unknown phase convention {self.phase_convention!r}")

    def __complex__(self):
        return complex(self.amplitude)


class SpectrumIndex(NamedTuple):
    n: int
    m: int
