"""Propagators, actions and spectra of a charged 2D oscillator in crossed E and B fields.

The closed forms live in :mod:`proplab.closed_form`, the zeta-regularized
mode-space pipeline in :mod:`proplab.zeta_reg`, and brute-force checks
(sliced path integral, classical BVP, basis diagonalization) in
:mod:`proplab.oracles`.
"""

from .core import (
    CAUSTIC_TOL,
    DerivedFrequencies,
    Endpoints,
    FourierParams,
    PhysicalConstants,
    PropagatorValue,
    SpectrumIndex,
    SystemConfig,
    derive_frequencies,
)
from .closed_form import energy_level, fluctuation_factor, general_classical_action, propagator
from .errors import ProplabError

__version__ = "0.1.0"
