"""
The complex harmonic oscillator L = qdot^2/2 - q^2/2 - i eps q qdot.

Its Hamiltonian

    H_C = p^2/2 + (1 - eps^2) q^2/2 + (i eps/2) {p, q}

is non-hermitian on L^2(R, dq) but similar to the ordinary oscillator through
exp(eps q^2/2). Everything here is evaluated in the frequency-1 oscillator
basis or on quadrature grids built from it.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ghostfree.errors import CausticError, CoarseGridWarning, DomainError
from ghostfree.gaussian import GaussianForm, gaussian_integral, gaussian_integral_limit
from ghostfree.hermite import (
    OperatorMatrix,
    anticommutator,
    gauss_hermite,
    ho_derivative_table,
    ho_table,
    ladder_matrices,
)
from ghostfree.mehler import mehler_momentum_amplitude, mehler_momentum_quadratic

CAUSTIC_TOL = 1e-12


@dataclass(frozen=True)
class ComplexOscParams:
    epsilon: float
    basis_size: int = 40
    quadrature_order: int | None = None

    def __post_init__(self):
        if self.basis_size < 2:
            raise DomainError("basis_size must be at least 2")
        if self.quadrature_order is None:
            object.__setattr__(self, "quadrature_order", max(2 * self.basis_size, 80))
        if self.quadrature_order < 2 * self.basis_size:
            raise DomainError("quadrature_order must be at least 2 * basis_size")

    def require_normalizable(self):
        if abs(self.epsilon) >= 1:
            raise DomainError(f"non-normalizable eigenfunction: |epsilon| = {abs(self.epsilon):g} >= 1")


@dataclass(frozen=True)
class PropagatorABC:
    t: float
    A: complex
    B: complex
    C: complex


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid on [-half_width, half_width] with the given spacing."""

    half_width: float = 10.0
    spacing: float = 1e-2

    @property
    def points(self) -> np.ndarray:
        n = int(round(2 * self.half_width / self.spacing))
        return np.linspace(-self.half_width, self.half_width, n + 1)

    @property
    def coarse(self) -> bool:
        return self.half_width < 8 or self.spacing > 1e-2


def _energy(n):
    return n + 0.5


# --- operator matrices ------------------------------------------------------


def hc_matrix(params: ComplexOscParams) -> OperatorMatrix:
    """
    Matrix of H_C in the first N oscillator states.

    Products are formed in an N + 2 basis and cropped, so every entry is the
    exact matrix element (no truncation artifacts at the edge).
    """
    n = params.basis_size
    if n < 4:
        raise DomainError("hc_matrix needs basis_size >= 4")
    eps = params.epsilon
    q, p = (m.entries for m in ladder_matrices(n + 2, 1.0))
    h = 0.5 * p @ p + 0.5 * (1 - eps**2) * q @ q + 0.5j * eps * anticommutator(p, q)
    return OperatorMatrix(h[:n, :n], 1.0, f"H_C[eps={eps:g}]")


def pq_anticommutator(n: int) -> np.ndarray:
    q, p = (m.entries for m in ladder_matrices(n + 2, 1.0))
    return anticommutator(p, q)[:n, :n]


def hc_low_spectrum(params: ComplexOscParams, count: int | None = None) -> np.ndarray:
    """
    Lowest eigenvalues of the truncated H_C, sorted by real part.

    Only the lowest N/4 are trusted: truncation of a non-normal matrix pollutes
    the top of the spectrum.
    """
    limit = params.basis_size // 4
    count = limit if count is None else count
    if count > limit:
        raise DomainError(f"only the lowest {limit} eigenvalues are reliable")
    ev = np.linalg.eigvals(hc_matrix(params).entries)
    return ev[np.argsort(ev.real)][:count]


# --- eigenfunctions ---------------------------------------------------------


def psi_n(params: ComplexOscParams, n: int, q):
    """psi_n(q) = exp(eps q^2 / 2) phi_n(q)."""
    params.require_normalizable()
    q = np.asarray(q, dtype=float)
    vals = np.exp(0.5 * params.epsilon * q * q) * ho_table(n, 1.0, q)[n]
    return vals if vals.ndim else float(vals)


def psi_table(params: ComplexOscParams, nmax: int, q):
    """psi_n, psi_n', psi_n'' for n <= nmax from analytic derivatives of phi_n."""
    params.require_normalizable()
    eps = params.epsilon
    q = np.asarray(q, dtype=float)
    phi, d1, d2 = ho_derivative_table(nmax, 1.0, q)
    g = np.exp(0.5 * eps * q * q)
    psi = g * phi
    dpsi = g * (eps * q * phi + d1)
    d2psi = g * (d2 + 2 * eps * q * d1 + (eps + eps**2 * q * q) * phi)
    return psi, dpsi, d2psi


def _central(psi, h, stride):
    k = stride
    d1 = (psi[2 * k :] - psi[: -2 * k]) / (2 * k * h)
    d2 = (psi[2 * k :] - 2 * psi[k:-k] + psi[: -2 * k]) / (k * h) ** 2
    return d1, d2


def schrodinger_residual(
    params: ComplexOscParams, n: int, grid: GridSpec = GridSpec(), energy=None, richardson: bool = False
) -> float:
    """
    max |psi'' - 2 eps q psi' - ((1 - eps^2) q^2 + eps - 2E) psi| over the grid interior.

    Derivatives are second-order central differences. With richardson=True the
    stencils of spacing h and 2h are combined as (4 D_h - D_2h) / 3, which
    cancels the O(h^2) term. E defaults to n + 1/2.
    """
    if grid.coarse:
        warnings.warn(
            f"grid L={grid.half_width:g}, h={grid.spacing:g} is too coarse (need L >= 8, h <= 1e-2)",
            CoarseGridWarning,
            stacklevel=2,
        )
    eps = params.epsilon
    e = _energy(n) if energy is None else energy
    q = grid.points
    h = q[1] - q[0]
    psi = psi_n(params, n, q)
    d1, d2 = _central(psi, h, 1)
    qi, mid = q[1:-1], psi[1:-1]
    if richardson:
        c1, c2 = _central(psi, h, 2)
        d1 = (4 * d1[1:-1] - c1) / 3
        d2 = (4 * d2[1:-1] - c2) / 3
        qi, mid = q[2:-2], psi[2:-2]
    res = d2 - 2 * eps * qi * d1 - ((1 - eps**2) * qi**2 + eps - 2 * e) * mid
    return float(np.abs(res).max())


# --- inner products -----------------------------------------------------------


def _rule(params):
    return gauss_hermite(params.quadrature_order)


def mu_gram(params: ComplexOscParams, nmax: int) -> np.ndarray:
    """G_nm = int exp(-eps q^2) psi_n* psi_m dq for n, m <= nmax, by quadrature."""
    params.require_normalizable()
    eps = params.epsilon
    rule = _rule(params)
    x = rule.nodes
    psi = psi_table(params, nmax, x)[0]
    w = rule.weights * np.exp(x * x) * np.exp(-eps * x * x)
    return (psi.conj() * w) @ psi.T


def mu_inner(params: ComplexOscParams, n: int, m: int) -> complex:
    return complex(mu_gram(params, max(n, m))[n, m])


def l2_gram(params: ComplexOscParams, nmax: int) -> tuple[np.ndarray, float]:
    """
    Gram matrix of psi_0..psi_nmax in the unweighted L^2(R, dq) and its smallest eigenvalue.

    The integrand exp(-(1 - eps) q^2) x polynomial is integrated exactly by a
    rescaled Gauss-Hermite rule.
    """
    params.require_normalizable()
    eps = params.epsilon
    rule = _rule(params)
    width = 1.0 / np.sqrt(1.0 - eps)
    q = width * rule.nodes
    psi = psi_table(params, nmax, q)[0]
    w = width * rule.weights * np.exp(rule.nodes**2)
    g = (psi * w) @ psi.T
    return g, float(np.linalg.eigvalsh(0.5 * (g + g.T)).min())


# --- similarity transformation ------------------------------------------------


def _apply_hc(eps, q, psi, dpsi, d2psi):
    # p = -i d/dq, so (i eps/2){p, q} = eps q d/dq + eps/2
    return -0.5 * d2psi + 0.5 * (1 - eps**2) * q * q * psi + eps * q * dpsi + 0.5 * eps * psi


def similarity_check(params: ComplexOscParams, test_indices, grid: GridSpec = GridSpec(), method: str = "analytic") -> float:
    """
    max_n of the grid L2 norm of exp(-eps q^2/2) H_C exp(eps q^2/2) phi_n - H_HO phi_n.

    method="analytic" applies both operators through exact derivatives of the
    basis functions; method="fd" uses central differences and measures the
    discretization error (O(h^2)).
    """
    params.require_normalizable()
    eps = params.epsilon
    idx = list(test_indices)
    nmax = max(idx)
    q = grid.points
    h = q[1] - q[0]
    phi, dphi, d2phi = ho_derivative_table(nmax, 1.0, q)
    if method == "analytic":
        psi, dpsi, d2psi = psi_table(params, nmax, q)
    elif method == "fd":
        psi = np.exp(0.5 * eps * q * q) * phi
        dpsi = np.gradient(psi, h, axis=1, edge_order=2)
        d2psi = np.zeros_like(psi)
        d2psi[:, 1:-1] = (psi[:, 2:] - 2 * psi[:, 1:-1] + psi[:, :-2]) / h**2
        d2phi = np.zeros_like(phi)
        d2phi[:, 1:-1] = (phi[:, 2:] - 2 * phi[:, 1:-1] + phi[:, :-2]) / h**2
        sl = slice(1, -1)
        q, psi, dpsi, d2psi, phi, d2phi = (a[..., sl] for a in (q, psi, dpsi, d2psi, phi, d2phi))
    else:
        raise ValueError(f"unknown method {method!r}")
    lhs = np.exp(-0.5 * eps * q * q) * _apply_hc(eps, q, psi, dpsi, d2psi)
    rhs = -0.5 * d2phi + 0.5 * q * q * phi
    norms = np.sqrt(h * np.sum(np.abs(lhs - rhs) ** 2, axis=1))
    return float(norms[idx].max())


# --- reality conditions ---------------------------------------------------------


def mu_adjoint(a: np.ndarray, gram: np.ndarray) -> np.ndarray:
    """Adjoint of a (coefficient-space matrix) with respect to the metric gram."""
    return np.linalg.solve(gram, a.conj().T @ gram)


def psi_basis_operators(params: ComplexOscParams):
    """
    (gram, q, p) in the psi basis: gram from the mu inner product, and the
    representation matrices of q and p = -i d/dq obtained by quadrature of
    <psi_m | A psi_n>_mu followed by gram^-1.
    """
    params.require_normalizable()
    eps = params.epsilon
    n = params.basis_size
    rule = _rule(params)
    x = rule.nodes
    psi, dpsi, _ = psi_table(params, n - 1, x)
    w = rule.weights * np.exp(x * x) * np.exp(-eps * x * x)
    gram = (psi.conj() * w) @ psi.T
    q_el = (psi.conj() * w) @ (x * psi).T
    p_el = (psi.conj() * w) @ (-1j * dpsi).T
    return gram, np.linalg.solve(gram, q_el), np.linalg.solve(gram, p_el)


def reality_conditions_check(params: ComplexOscParams) -> tuple[float, float]:
    """
    (max|q - q^adj|, max|p^adj - p - 2i eps q|) on the interior half-block,
    adjoints taken in L^2(R, exp(-eps q^2) dq).
    """
    if params.basis_size < 8:
        raise DomainError("reality_conditions_check needs basis_size >= 8")
    gram, q, p = psi_basis_operators(params)
    k = params.basis_size // 2
    qa = mu_adjoint(q, gram)
    pa = mu_adjoint(p, gram)
    r_q = np.abs(q - qa)[:k, :k].max()
    r_p = np.abs(pa - p - 2j * params.epsilon * q)[:k, :k].max()
    return float(r_q), float(r_p)


def naive_p_antihermiticity(params: ComplexOscParams) -> float:
    """max|p - p^dagger| on the interior half-block, plain conjugate transpose."""
    _, _, p = psi_basis_operators(params)
    k = params.basis_size // 2
    return float(np.abs(p - p.conj().T)[:k, :k].max())


# --- propagator -------------------------------------------------------------------


def propagator_abc(epsilon: float, t: float) -> PropagatorABC:
    s = (epsilon**2 + 1) * np.sin(t) + 2j * epsilon * np.cos(t)
    c = 2 * s
    if abs(c) < CAUSTIC_TOL:
        raise CausticError(f"caustic time t={t:g} for epsilon={epsilon:g}")
    a = 1 / np.sqrt(2j * np.pi) * np.sqrt(1 / s)
    b = np.cos(t) - 1j * epsilon * np.sin(t)
    return PropagatorABC(t, complex(a), complex(b), complex(c))


def propagator_kernel(epsilon: float, t: float, p_in, p_out):
    """<p_out*, t | p_in, 0> = A exp(i (B (p_in^2 + p_out^2) - 2 p_in p_out) / C)."""
    k = propagator_abc(epsilon, t)
    return k.A * np.exp(1j * (k.B * (p_in**2 + p_out**2) - 2 * p_in * p_out) / k.C)


def mirrored_propagator_kernel(epsilon: float, t: float, p_in, p_out):
    """propagator_kernel with eps -> -eps; diagnostic for the relation and group checks."""
    return propagator_kernel(-epsilon, t, p_in, p_out)


def basis_change_kernel(epsilon: float, p, P):
    """<P|p> = (2 pi eps)^(-1/2) exp(-(p - P)^2 / (2 eps))."""
    if epsilon <= 0:
        raise DomainError("basis change kernel needs epsilon > 0")
    return (2 * np.pi * epsilon) ** -0.5 * np.exp(-((p - P) ** 2) / (2 * epsilon))


def completeness_measure(epsilon: float, p):
    """mu(p, p*) = (pi eps)^(-1/2) exp((p - p*)^2 / (4 eps))."""
    if epsilon <= 0:
        raise DomainError("completeness measure needs epsilon > 0")
    p = np.asarray(p, dtype=complex)
    return (np.pi * epsilon) ** -0.5 * np.exp((p - p.conj()) ** 2 / (4 * epsilon))


def relation_form(epsilon: float, t: float, p_in, p_out) -> tuple[GaussianForm, complex]:
    """
    Gaussian form (over P_out, P_in) and prefactor for

        int dP dP' <p_out|P'> <P', t | P, 0> <P|p_in>

    with the frequency-1 momentum Mehler kernel on the hermitian side.
    """
    if epsilon <= 0:
        raise DomainError("relation needs epsilon > 0")
    m = mehler_momentum_quadratic(1.0, t) + np.eye(2) / epsilon
    j = np.array([p_out, p_in], dtype=complex) / epsilon
    c0 = -(p_out**2 + p_in**2) / (2 * epsilon)
    pref = mehler_momentum_amplitude(1.0, t) / (2 * np.pi * epsilon)
    return GaussianForm(m, j, c0), pref


def propagator_relation_rhs(epsilon: float, t: float, p_in, p_out) -> complex:
    form, pref = relation_form(epsilon, t, p_in, p_out)
    return pref * gaussian_integral(form)


def default_relation_samples(rng=None, count: int = 8) -> np.ndarray:
    rng = np.random.default_rng(0) if rng is None else rng
    return rng.uniform(-1.5, 1.5, size=(count, 2))


def propagator_relation_check(epsilon: float, t: float, samples=None, kernel=propagator_kernel) -> float:
    """
    max relative residual |K(p_in, p_out) - RHS| / |K| over sample pairs (p_in, p_out),
    RHS being the Gaussian contraction of the basis-change kernels with the
    hermitian-side Mehler propagator.
    """
    if not 0 < epsilon < 1:
        raise DomainError("relation check needs 0 < epsilon < 1")
    samples = default_relation_samples() if samples is None else np.asarray(samples)
    worst = 0.0
    for p_in, p_out in samples:
        lhs = kernel(epsilon, t, p_in, p_out)
        rhs = propagator_relation_rhs(epsilon, t, p_in, p_out)
        worst = max(worst, abs(lhs - rhs) / abs(lhs))
    return float(worst)


def equal_time_overlap(epsilon: float, p_out, p_in):
    """<p_out*|p_in> = int dP <p_out|P><P|p_in>: a heat kernel of variance 2 eps."""
    return (4 * np.pi * epsilon) ** -0.5 * np.exp(-((p_out - p_in) ** 2) / (4 * epsilon))


def delta_limit_error(epsilon: float, t: float, test_points=(-0.8, 0.0, 0.5, 1.1)) -> float:
    """
    max over p' of |int K(p'', p') f(p'') dp'' - f(p')| for f(p) = exp(-p^2),
    with the integral done by the Gaussian engine.
    """
    k = propagator_abc(epsilon, t)
    worst = 0.0
    for pp in test_points:
        form = GaussianForm([[2 - 2j * k.B / k.C]], [-2j * pp / k.C], 1j * k.B * pp**2 / k.C)
        val = k.A * gaussian_integral(form)
        worst = max(worst, abs(val - np.exp(-pp * pp)))
    return float(worst)


def completeness_form(epsilon: float, P_out: float) -> tuple[GaussianForm, float]:
    """
    Gaussian form over (u, v, P) for int du dv dP mu(p, p*) <P_out|p> <p*|P> exp(-P^2),
    with p = u + iv.
    """
    e = epsilon
    m = np.array(
        [
            [2 / e, 0.0, -1 / e],
            [0.0, 0.0, 1j / e],
            [-1 / e, 1j / e, 1 / e + 2],
        ]
    )
    j = np.array([P_out / e, 1j * P_out / e, 0.0])
    c0 = -(P_out**2) / (2 * e)
    pref = (np.pi * e) ** -0.5 / (2 * np.pi * e)
    return GaussianForm(m, j, c0), pref


def completeness_check(epsilon: float, test_points=(-1.0, -0.3, 0.0, 0.4, 1.2)) -> float:
    """
    max |contraction(P') - exp(-P'^2)| where the contraction resolves the identity
    with the measure mu(p, p*) d^2p applied to the test function exp(-P^2).

    The v direction is purely oscillatory, so the limit delta -> 0+ is taken
    by Richardson extrapolation.
    """
    if epsilon <= 0:
        raise DomainError("completeness check needs epsilon > 0")
    worst = 0.0
    for P_out in test_points:
        form, pref = completeness_form(epsilon, P_out)
        val = pref * gaussian_integral_limit(form)
        worst = max(worst, abs(val - np.exp(-P_out**2)))
    return float(worst)


def composition_form(epsilon: float, t1: float, t2: float, p_in, p_out, kernel_eps: float):
    """
    Gaussian form over (u, v) for int d^2p mu(p, p*) K_t2(p -> p_out) K_t1(p_in -> p*),
    where K uses kernel_eps in its closed form.
    """
    k1 = propagator_abc(kernel_eps, t1)
    k2 = propagator_abc(kernel_eps, t2)
    a2 = 1j * k2.B / k2.C
    a1 = 1j * k1.B / k1.C
    # a2 p^2 + a1 p*^2 with p = u + iv; mu contributes -v^2/eps
    m = -2 * np.array([[a2 + a1, 1j * (a2 - a1)], [1j * (a2 - a1), -(a2 + a1) - 1 / epsilon]])
    lin_p = -2j * p_out / k2.C
    lin_ps = -2j * p_in / k1.C
    j = np.array([lin_p + lin_ps, 1j * lin_p - 1j * lin_ps])
    c0 = a2 * p_out**2 + a1 * p_in**2
    pref = k1.A * k2.A * (np.pi * epsilon) ** -0.5
    return GaussianForm(m, j, c0), pref


def group_property_check(epsilon: float, t1: float, t2: float, samples=None, mirrored: bool = False) -> float:
    """
    max relative residual of K(t1 + t2) against the mu-weighted composition of
    K(t2) and K(t1). With the closed-form kernel (mirrored=False) the composition is a
    divergent Gaussian and DegenerateFormError is raised.
    """
    kernel_eps = -epsilon if mirrored else epsilon
    samples = default_relation_samples() if samples is None else np.asarray(samples)
    worst = 0.0
    for p_in, p_out in samples:
        form, pref = composition_form(epsilon, t1, t2, p_in, p_out, kernel_eps)
        comp = pref * gaussian_integral(form)
        direct = propagator_kernel(kernel_eps, t1 + t2, p_in, p_out)
        worst = max(worst, abs(comp - direct) / abs(direct))
    return float(worst)
