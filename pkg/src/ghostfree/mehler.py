"""
Harmonic-oscillator propagators (Mehler kernels), position and momentum representation.

For H = P^2/2 + omega^2 Q^2/2 (unit mass, hbar = 1):

    <x'|exp(-iHt)|x> = sqrt(omega / (2 pi i sin wt)) exp(i omega ((x^2 + x'^2) cos wt - 2 x x') / (2 sin wt))
    <p'|exp(-iHt)|p> = sqrt(1 / (2 pi i omega sin wt)) exp(i ((p^2 + p'^2) cos wt - 2 p p') / (2 omega sin wt))

The momentum form follows from the position form by the exchange Q -> P / omega,
P -> -omega Q, which leaves H invariant. The amplitude carries the Maslov phase
exp(-i pi/4 - i pi k/2) after k caustics (k = floor(omega t / pi)). These kernels
are the hermitian-side reference for both propagator relation checks.
"""

from __future__ import annotations

import numpy as np

from ghostfree.errors import CausticError, DomainError

CAUSTIC_TOL = 1e-12


def _amplitude(omega, t):
    if omega <= 0:
        raise DomainError("omega must be positive")
    if np.iscomplexobj(t) and np.imag(t) != 0:
        # Euclidean or damped time: principal branch, valid for 0 <= Re(wt) < pi
        return 1.0 / np.sqrt(2j * np.pi * np.sin(omega * t))
    t = float(np.real(t))
    s = np.sin(omega * t)
    if abs(s) < CAUSTIC_TOL:
        raise CausticError(f"caustic time: sin({omega:g} * {t:g}) = 0")
    k = np.floor(omega * t / np.pi)
    return np.exp(-1j * np.pi / 4 - 1j * np.pi * k / 2) / np.sqrt(2.0 * np.pi * abs(s))


def mehler_position(omega: float, t, x_out, x_in):
    """<x_out| exp(-iHt) |x_in> for the frequency-omega oscillator; complex arguments allowed."""
    amp = _amplitude(omega, t) * np.sqrt(omega)
    s, c = np.sin(omega * t), np.cos(omega * t)
    return amp * np.exp(1j * omega * ((x_in**2 + x_out**2) * c - 2 * x_in * x_out) / (2 * s))


def mehler_momentum(omega: float, t, p_out, p_in):
    """<p_out| exp(-iHt) |p_in> for the frequency-omega oscillator."""
    amp = _amplitude(omega, t) / np.sqrt(omega)
    s, c = np.sin(omega * t), np.cos(omega * t)
    return amp * np.exp(1j * ((p_in**2 + p_out**2) * c - 2 * p_in * p_out) / (2 * omega * s))


def mehler_momentum_quadratic(omega: float, t) -> np.ndarray:
    """
    Matrix Q with mehler_momentum = amplitude * exp(-1/2 v^T Q v), v = (p_out, p_in).

    Used to fold the kernel into a GaussianForm.
    """
    s, c = np.sin(omega * t), np.cos(omega * t)
    if abs(s) < CAUSTIC_TOL:
        raise CausticError(f"caustic time: sin({omega:g} * {t:g}) = 0")
    return (-1j / (omega * s)) * np.array([[c, -1.0], [-1.0, c]])


def mehler_momentum_amplitude(omega: float, t) -> complex:
    return complex(_amplitude(omega, t) / np.sqrt(omega))
