"""
Higher-derivative free scalar field, reduced pointwise and mode by mode.

psi1 = i(a phi + b box phi), psi2 = c phi + b box phi, with (a, b, c) the
oscillator coefficients after replacing frequencies by masses. A plane wave of
wavenumber k is a Pais-Uhlenbeck oscillator with w_i = sqrt(k^2 + m_i^2)
(metric signature +,-,-,-).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ghostfree.errors import DegenerateFrequencyError, DomainError
from ghostfree.pais_uhlenbeck import PUParams, TransformCoefficients


@dataclass(frozen=True)
class FieldParams:
    m1: float
    m2: float

    def __post_init__(self):
        if self.m2 < 0:
            raise DomainError("masses must be nonnegative")
        if self.m1 == self.m2:
            raise DegenerateFrequencyError("degenerate masses: transformation singular")
        if self.m1 < self.m2:
            raise DomainError("ordering requires m1 > m2")


@dataclass(frozen=True)
class FieldSample:
    phi: complex
    box_phi: complex


def field_coefficients(fparams: FieldParams, sign: int = 1) -> TransformCoefficients:
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    b = sign / np.sqrt(fparams.m1**2 - fparams.m2**2)
    return TransformCoefficients(float(fparams.m2**2 * b), float(b), float(fparams.m1**2 * b), sign)


def mode_reduce(fparams: FieldParams, k: float) -> PUParams:
    return PUParams(float(np.hypot(k, fparams.m1)), float(np.hypot(k, fparams.m2)))


def psi_map(coeffs: TransformCoefficients, sample: FieldSample) -> tuple[complex, complex]:
    a, b, c = coeffs.a, coeffs.b, coeffs.c
    psi1 = 1j * (a * sample.phi + b * sample.box_phi)
    psi2 = c * sample.phi + b * sample.box_phi
    return psi1, psi2


def psi_inverse(coeffs: TransformCoefficients, psi1, psi2) -> FieldSample:
    """phi = b (psi2 + i psi1); box phi follows from psi2 = c phi + b box phi."""
    b, c = coeffs.b, coeffs.c
    phi = b * (psi2 + 1j * psi1)
    return FieldSample(complex(phi), complex((psi2 - c * phi) / b))


def real_sector_samples(coeffs: TransformCoefficients, rng, count: int, scale: float = 1.0) -> np.ndarray:
    """Random real (psi1, psi2) pairs, shape (count, 2)."""
    return scale * rng.standard_normal((count, 2))


def quartic_identity_check(coeffs: TransformCoefficients, samples) -> tuple[float, float]:
    """
    max |(phi phi*)^2 - sigma (c - a)^-4 (psi1^2 + psi2^2)^2| over real-sector samples,
    for sigma = +1 and sigma = -1.
    """
    a, c = coeffs.a, coeffs.c
    worst = {1: 0.0, -1: 0.0}
    for psi1, psi2 in np.asarray(samples, dtype=float).reshape(-1, 2):
        phi = psi_inverse(coeffs, psi1, psi2).phi
        lhs = (phi * np.conj(phi)) ** 2
        rhs = (c - a) ** -4 * (psi1**2 + psi2**2) ** 2
        for sigma in worst:
            worst[sigma] = max(worst[sigma], abs(lhs - sigma * rhs))
    return float(worst[1]), float(worst[-1])
