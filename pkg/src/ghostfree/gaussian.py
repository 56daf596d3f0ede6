"""
Closed-form Gaussian integrals over R^n with complex symmetric quadratic forms.

    I = int exp(-1/2 x^T M x + J^T x + c0) dx
      = (2 pi)^(n/2) det(M)^(-1/2) exp(1/2 J^T M^-1 J + c0)

The square root of the determinant is taken as the product of principal
square roots of the eigenvalues of M. When Re M is positive semi-definite
every eigenvalue lies in the closed right half-plane, and along the path
(1 - s) I + s M from the identity no eigenvalue crosses the negative real
axis, so this is the branch obtained by continuation from a real
positive-definite form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ghostfree.errors import DegenerateFormError

RICHARDSON_DELTAS = (1e-2, 1e-3, 1e-4)


@dataclass(frozen=True)
class GaussianForm:
    M: np.ndarray
    J: np.ndarray
    c0: complex = 0.0

    def __post_init__(self):
        M = np.atleast_2d(np.asarray(self.M, dtype=complex))
        J = np.atleast_1d(np.asarray(self.J, dtype=complex))
        if M.shape[0] != M.shape[1] or M.shape[0] != J.shape[0]:
            raise DegenerateFormError(f"shape mismatch: M {M.shape}, J {J.shape}")
        scale = max(1.0, np.abs(M).max())
        if np.abs(M - M.T).max() > 1e-12 * scale:
            raise DegenerateFormError("quadratic form must be symmetric")
        object.__setattr__(self, "M", 0.5 * (M + M.T))
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "c0", complex(self.c0))

    @property
    def n(self) -> int:
        return self.J.shape[0]

    def exponent(self, x):
        """Integrand exponent at points x of shape (..., n)."""
        x = np.asarray(x)
        quad = np.einsum("...i,ij,...j->...", x, self.M, x)
        return -0.5 * quad + x @ self.J + self.c0


def gaussian_integral(form: GaussianForm, delta: float = 0.0) -> complex:
    """
    Integral of exp(-1/2 x^T (M + delta I) x + J^T x + c0) over R^n.

    Raises DegenerateFormError when the regularized real part is indefinite
    (the integral diverges) or the regularized matrix is singular.
    """
    if delta < 0:
        raise DegenerateFormError("regularization delta must be nonnegative")
    n = form.n
    M = form.M + delta * np.eye(n)
    re = np.linalg.eigvalsh(M.real)
    scale = max(1.0, np.abs(M).max())
    if re.min() < -1e-12 * scale:
        raise DegenerateFormError(
            f"divergent Gaussian: real part has eigenvalue {re.min():.3e} < 0"
        )
    lam = np.linalg.eigvals(M)
    if np.abs(lam).min() < 1e-14 * scale:
        raise DegenerateFormError("degenerate quadratic form")
    sol = np.linalg.solve(M, form.J)
    expo = 0.5 * form.J @ sol + form.c0
    return complex((2.0 * np.pi) ** (n / 2) * np.prod(1.0 / np.sqrt(lam)) * np.exp(expo))


def richardson_zero(deltas, values) -> complex:
    """Polynomial extrapolation of values(delta) to delta = 0 (Neville form)."""
    deltas = np.asarray(deltas, dtype=float)
    total = 0.0
    for i, vi in enumerate(values):
        w = 1.0
        for j, dj in enumerate(deltas):
            if j != i:
                w *= dj / (dj - deltas[i])
        total = total + w * vi
    return total


def gaussian_integral_limit(form: GaussianForm, deltas=RICHARDSON_DELTAS, relative: bool = False) -> complex:
    """
    delta -> 0+ limit of gaussian_integral by Richardson extrapolation.

    With relative=True the deltas are multiplied by the smallest eigenvalue
    modulus of M (capped at 1), so that the expansion parameter delta / |lambda|
    stays small for nearly degenerate forms.
    """
    deltas = np.asarray(deltas, dtype=float)
    if relative:
        lam_min = np.abs(np.linalg.eigvals(form.M)).min()
        deltas = deltas * min(1.0, lam_min)
    return complex(richardson_zero(deltas, [gaussian_integral(form, d) for d in deltas]))
