"""Exception hierarchy shared by all proplab modules."""


class ProplabError(Exception):
    """Base class for every error raised by proplab."""


class CausticSingularity(ProplabError, ArithmeticError):
    """The duration sits on (or too close to) a zero of sin(omega_eff T)."""

    def __init__(self, message, axis=None):
        super().__init__(message)
        self.axis = axis


class AnisotropyError(ProplabError, ValueError):
    """An isotropic-only formula was called with omega_x != omega_y."""


class DegenerateShift(ProplabError, ValueError):
    """Electric field present along an axis with zero oscillator frequency."""


class PoleError(ProplabError, ArithmeticError):
    """Closed-form trace evaluated on a pole."""


class PoleOnLattice(ProplabError, ArithmeticError):
    """A lattice sum has a term with vanishing denominator."""


class PoleAtInteger(ProplabError, ArithmeticError):
    """Sine product evaluated at a nonzero integer."""


class ZeroAlpha(ProplabError, ValueError):
    pass


class DivergedExtrapolation(ProplabError, ArithmeticError):
    """Richardson extrapolants did not settle within the epsilon schedule."""


class UnsupportedArgument(ProplabError, ValueError):
    pass


class NonUniqueSolution(ProplabError, ArithmeticError):
    """Boundary-value problem is singular (caustic of the classical flow)."""


class SingularHessian(ProplabError, ArithmeticError):
    pass


class BasisTooSmall(ProplabError, ArithmeticError):
    pass


class CutoffTooSmall(ProplabError, ArithmeticError):
    pass
