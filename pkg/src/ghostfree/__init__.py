"""Numerical verification of the complex canonical map between the Pais-Uhlenbeck oscillator and two ordinary oscillators."""

from ghostfree.complex_oscillator import ComplexOscParams, PropagatorABC
from ghostfree.errors import (
    CausticError,
    ConfigError,
    DegenerateFormError,
    DegenerateFrequencyError,
    DomainError,
    GhostfreeError,
)
from ghostfree.gaussian import GaussianForm, gaussian_integral
from ghostfree.hermite import OperatorMatrix, QuadratureRule, gauss_hermite, ladder_matrices
from ghostfree.pais_uhlenbeck import PUParams, PUPropagatorCoeffs, TransformCoefficients, TwoModeBasis
from ghostfree.report import VerificationReport

__version__ = "0.1.0"
