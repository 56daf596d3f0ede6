"""
Hermite functions, Gauss-Hermite quadrature and truncated ladder-operator algebra.

Conventions: physicists' Hermite polynomials (weight exp(-q^2)), hbar = 1,
unit mass. Oscillator eigenfunctions are real.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from ghostfree.errors import DomainError

MAX_DEGREE = 200
MAX_ORDER = 300


def hermite_poly(n: int, q):
    """Physicists' Hermite polynomial H_n(q) by the three-term recurrence."""
    if n < 0:
        raise DomainError("degree must be nonnegative")
    if n > MAX_DEGREE:
        raise DomainError(f"degree too large: {n} > {MAX_DEGREE}")
    q = np.asarray(q, dtype=float)
    h_prev = np.ones_like(q)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * q
    for k in range(1, n):
        h_prev, h = h, 2.0 * q * h - 2.0 * k * h_prev
    return h if h.ndim else float(h)


def _hermite_functions(nmax, y):
    out = np.empty((nmax + 1,) + y.shape)
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * y * y)
    if nmax >= 1:
        out[1] = np.sqrt(2.0) * y * out[0]
    for k in range(1, nmax):
        out[k + 1] = np.sqrt(2.0 / (k + 1)) * y * out[k] - np.sqrt(k / (k + 1)) * out[k - 1]
    return out


def ho_table(nmax: int, omega: float, q) -> np.ndarray:
    """
    Normalized oscillator eigenfunctions phi_0..phi_nmax evaluated at q.

    Uses the normalized recurrence so that no factorials are formed; stable
    up to nmax = MAX_DEGREE.

    Returns
    -------
    ndarray of shape (nmax + 1,) + q.shape
    """
    if omega <= 0:
        raise DomainError("omega must be positive")
    if nmax > MAX_DEGREE:
        raise DomainError(f"degree too large: {nmax} > {MAX_DEGREE}")
    q = np.asarray(q, dtype=float)
    return omega**0.25 * _hermite_functions(nmax, np.sqrt(omega) * q)


def ho_eigenfunction(n: int, omega: float, q):
    """phi_n^omega(q) = (omega/pi)^(1/4) (2^n n!)^(-1/2) H_n(sqrt(omega) q) exp(-omega q^2 / 2)."""
    if n < 0:
        raise DomainError("index must be nonnegative")
    vals = ho_table(n, omega, q)[n]
    return vals if vals.ndim else float(vals)


def ho_derivative_table(nmax: int, omega: float, q) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    phi_n, phi_n' and phi_n'' for n <= nmax, via the ladder relations
    phi_n' = sqrt(omega) (sqrt(n/2) phi_{n-1} - sqrt((n+1)/2) phi_{n+1}).
    """
    tab = ho_table(nmax + 2, omega, q)
    s = np.sqrt(omega)

    def deriv(f):
        d = np.zeros((f.shape[0] - 1,) + f.shape[1:])
        for n in range(f.shape[0] - 1):
            lower = np.sqrt(n / 2.0) * f[n - 1] if n > 0 else 0.0
            d[n] = s * (lower - np.sqrt((n + 1) / 2.0) * f[n + 1])
        return d

    d1 = deriv(tab)
    d2 = deriv(d1)
    return tab[: nmax + 1], d1[: nmax + 1], d2[: nmax + 1]


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Hermite rule for the weight exp(-q^2) on the real line."""

    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, f):
        """Approximate the integral of exp(-q^2) f(q); f is vectorized."""
        return np.sum(self.weights * f(self.nodes))

    def integrate_plain(self, f, center: float = 0.0, width: float = 1.0):
        """
        Approximate the unweighted integral of f(q) dq, using q = center + width * y.

        Exact when f(q) exp((q - center)^2 / width^2) is a polynomial of degree < 2 * order.
        """
        y = self.nodes
        q = center + width * y
        return width * np.sum(self.weights * np.exp(y * y) * f(q))


def gauss_hermite(order: int) -> QuadratureRule:
    """
    Gauss-Hermite rule from the eigen-decomposition of the Jacobi matrix.

    Nodes are the Jacobi eigenvalues, symmetrized. Weights use the Christoffel
    form w_i = 1 / sum_k p_k(x_i)^2 (orthonormal p_k), which keeps full relative
    accuracy in the tails where the squared eigenvector component does not.
    """
    if not 1 <= order <= MAX_ORDER:
        raise DomainError(f"order out of range: {order} not in [1, {MAX_ORDER}]")
    if order == 1:
        return QuadratureRule(1, np.array([0.0]), np.array([np.sqrt(np.pi)]))
    off = np.sqrt(np.arange(1, order) / 2.0)
    x = eigh_tridiagonal(np.zeros(order), off, eigvals_only=True)
    x = 0.5 * (x - x[::-1])
    # phi_k carries exp(-x^2/2), so sum phi_k^2 = exp(-x^2) * sum p_k^2
    phi = _hermite_functions(order - 1, x)
    w = np.exp(-x * x) / np.sum(phi * phi, axis=0)
    w = 0.5 * (w + w[::-1])
    return QuadratureRule(order, x, w)


@dataclass(frozen=True)
class OperatorMatrix:
    """An operator represented in a truncated oscillator basis."""

    entries: np.ndarray
    basis_frequency: float
    label: str = ""
    dim: int = field(init=False)

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError("operator matrix must be square")
        if m.shape[0] < 2:
            raise DomainError("operator matrix needs dim >= 2")
        if not np.all(np.isfinite(m)):
            raise DomainError(f"non-finite entries in {self.label or 'operator'}")
        if self.basis_frequency <= 0:
            raise DomainError("basis frequency must be positive")
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "dim", m.shape[0])

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.conj().T, self.basis_frequency, self.label + "^dagger")

    def block(self, index) -> np.ndarray:
        """Sub-matrix on the given index set (slice, count, or boolean mask)."""
        if isinstance(index, (int, np.integer)):
            index = slice(0, int(index))
        return self.entries[index][:, index]


def commutator(a, b) -> np.ndarray:
    a = a.entries if isinstance(a, OperatorMatrix) else a
    b = b.entries if isinstance(b, OperatorMatrix) else b
    return a @ b - b @ a


def anticommutator(a, b) -> np.ndarray:
    a = a.entries if isinstance(a, OperatorMatrix) else a
    b = b.entries if isinstance(b, OperatorMatrix) else b
    return a @ b + b @ a


def annihilation(n: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1)


def ladder_matrices(n: int, omega: float) -> tuple[OperatorMatrix, OperatorMatrix]:
    """
    Position and momentum in the first n eigenstates of the frequency-omega oscillator.

    q = (a + a^dagger) / sqrt(2 omega),  p = i sqrt(omega / 2) (a^dagger - a).
    [q, p] = i holds everywhere except the last diagonal entry.
    """
    if n < 2:
        raise DomainError("basis size must be at least 2")
    if omega <= 0:
        raise DomainError("omega must be positive")
    a = annihilation(n)
    ad = a.T
    q = (a + ad) / np.sqrt(2.0 * omega)
    p = 1j * np.sqrt(omega / 2.0) * (ad - a)
    return (
        OperatorMatrix(q, omega, f"q[omega={omega:g}]"),
        OperatorMatrix(p, omega, f"p[omega={omega:g}]"),
    )
