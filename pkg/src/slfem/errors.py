"""Exception types raised by the solvers."""


class NumericalError(Exception):
    """Base class for failures detected while setting up or running a solve."""


class CoercivityError(NumericalError):
    """The diffusion coefficient is not strictly positive (or q < 0) at a
    sampled quadrature point, so the bilinear form is not coercive."""


class ConstantCoefficientRequired(NumericalError):
    """The posterior-corrected method needs constant beta and q == 0."""


class SingularSystemError(NumericalError):
    """The tridiagonal elimination hit a zero (or denormal) pivot."""
