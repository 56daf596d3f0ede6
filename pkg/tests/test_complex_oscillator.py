import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghostfree import complex_oscillator as co
from ghostfree.errors import CausticError, CoarseGridWarning, DegenerateFormError, DomainError
from ghostfree.hermite import gauss_hermite, ho_eigenfunction
from ghostfree.mehler import mehler_momentum


def P(eps, n=40):
    return co.ComplexOscParams(eps, n)


def test_hc_matrix_hermitian_limit():
    h = co.hc_matrix(P(0.0, 12)).entries
    assert np.allclose(np.diag(h), np.arange(12) + 0.5, atol=1e-14)
    assert np.allclose(h, np.diag(np.diag(h)), atol=1e-14)


@pytest.mark.parametrize("eps", [0.1, 0.3, 0.6])
def test_low_spectrum_is_real_ladder(eps):
    ev = co.hc_low_spectrum(P(eps, 60), 10)
    tol = 1e-6 if eps < 0.5 else 1e-5
    assert np.abs(ev - (np.arange(10) + 0.5)).max() < tol


def test_low_spectrum_limit():
    with pytest.raises(DomainError):
        co.hc_low_spectrum(P(0.3, 40), 11)


def test_antihermitian_part_is_anticommutator_term():
    params = P(0.3, 20)
    h = co.hc_matrix(params).entries
    assert np.abs(0.5 * (h - h.conj().T) - 0.15j * co.pq_anticommutator(20)).max() < 1e-13


def test_psi_examples():
    q = np.linspace(-3, 3, 11)
    assert np.allclose(co.psi_n(P(0.0), 2, q), ho_eigenfunction(2, 1.0, q), atol=1e-14)
    assert co.psi_n(P(0.5), 0, 0.0) == pytest.approx(np.pi**-0.25)
    for eps in (1.0, -1.0, 1.5):
        with pytest.raises(DomainError, match="non-normalizable eigenfunction"):
            co.psi_n(P(eps), 0, 0.0)


def test_psi_table_derivatives_match_finite_differences():
    params = P(0.4)
    q = np.linspace(-2, 2, 9)
    h = 1e-4
    psi, d1, d2 = co.psi_table(params, 4, q)
    fp, fm = co.psi_table(params, 4, q + h)[0], co.psi_table(params, 4, q - h)[0]
    assert np.allclose(d1, (fp - fm) / (2 * h), atol=1e-7)
    assert np.allclose(d2, (fp - 2 * psi + fm) / h**2, atol=1e-5)


def test_schrodinger_residual_ground_state_hermitian():
    plain = co.schrodinger_residual(P(0.0), 0, co.GridSpec(10, 1e-2))
    # second-order stencils leave an O(h^2) error just above the 1e-5 target
    assert plain < 5e-5
    assert co.schrodinger_residual(P(0.0), 0, co.GridSpec(10, 1e-2), richardson=True) < 1e-5


def test_schrodinger_residual_second_order_convergence():
    r1 = co.schrodinger_residual(P(0.4), 1, co.GridSpec(10, 1e-2))
    r2 = co.schrodinger_residual(P(0.4), 1, co.GridSpec(10, 5e-3))
    assert r1 < 1e-4
    assert r1 / r2 == pytest.approx(4.0, rel=0.05)


def test_schrodinger_residual_off_eigenvalue_and_warning():
    assert co.schrodinger_residual(P(0.3), 3, energy=3.6, richardson=True) > 1e-2
    with pytest.warns(CoarseGridWarning):
        co.schrodinger_residual(P(0.3), 0, co.GridSpec(5, 1e-2))
    with pytest.warns(CoarseGridWarning):
        co.schrodinger_residual(P(0.3), 0, co.GridSpec(10, 0.05))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        co.schrodinger_residual(P(0.3), 0, co.GridSpec(10, 1e-2))


def test_mu_inner_examples():
    assert abs(co.mu_inner(P(0.3), 3, 5)) < 1e-10
    assert abs(co.mu_inner(P(0.3), 4, 4) - 1) < 1e-10
    assert np.abs(co.mu_gram(P(0.0), 10) - np.eye(11)).max() < 1e-12


@given(eps=st.floats(-0.7, 0.7))
@settings(max_examples=20, deadline=None)
def test_mu_gram_is_identity(eps):
    assert np.abs(co.mu_gram(P(eps), 15) - np.eye(16)).max() < 1e-10


def test_l2_gram():
    g0, lam0 = co.l2_gram(P(0.0), 10)
    assert np.abs(g0 - np.eye(11)).max() < 1e-12
    assert lam0 == pytest.approx(1.0)
    g, lam = co.l2_gram(P(0.3), 10)
    assert np.isrealobj(g)
    n = np.arange(11)
    assert np.abs(g - g.T).max() < 1e-12
    assert np.abs(g[(n[:, None] + n[None, :]) % 2 == 1]).max() < 1e-12
    assert np.isfinite(lam)
    with pytest.raises(DomainError):
        co.l2_gram(P(1.2), 5)


def test_similarity():
    assert co.similarity_check(P(0.0), range(7)) < 1e-12
    assert co.similarity_check(P(0.4), range(7)) < 1e-6
    coarse = co.similarity_check(P(0.4), range(4), co.GridSpec(10, 2e-2), method="fd")
    fine = co.similarity_check(P(0.4), range(4), co.GridSpec(10, 1e-2), method="fd")
    assert coarse / fine == pytest.approx(4.0, rel=0.1)


def test_reality_conditions():
    r_q, r_p = co.reality_conditions_check(P(0.0))
    assert r_q < 1e-12 and r_p < 1e-12
    r_q, r_p = co.reality_conditions_check(P(0.3))
    assert r_q < 1e-8 and r_p < 1e-8
    # the naive conjugate transpose does not see the modified measure
    assert co.naive_p_antihermiticity(P(0.3)) > 1e-2


def test_mu_adjoint_with_identity_metric_is_dagger():
    a = np.arange(9).reshape(3, 3) * (1 + 1j)
    assert np.allclose(co.mu_adjoint(a, np.eye(3)), a.conj().T)


def test_propagator_abc_examples():
    k = co.propagator_abc(0.0, np.pi / 2)
    assert abs(k.B) < 1e-15
    assert k.C == pytest.approx(2.0)
    assert k.A == pytest.approx(1 / np.sqrt(2j * np.pi))
    with pytest.raises(CausticError, match="caustic time"):
        co.propagator_abc(0.0, np.pi)
    for eps in (0.1, 0.3, 0.9):
        k0 = co.propagator_abc(eps, 0.0)
        assert k0.B == 1 and k0.C == pytest.approx(4j * eps)


def test_kernel_matches_mehler_oracle_at_zero_epsilon():
    rng = np.random.default_rng(3)
    for t in rng.uniform(0.1, 3.0, 20):
        p_in, p_out = rng.uniform(-2, 2, 2)
        assert abs(co.propagator_kernel(0.0, t, p_in, p_out) - mehler_momentum(1.0, t, p_out, p_in)) < 1e-10


@given(
    eps=st.floats(0.05, 0.9), t=st.floats(0.05, 3.0), a=st.floats(-2, 2), b=st.floats(-2, 2)
)
@settings(max_examples=50, deadline=None)
def test_kernel_symmetric_in_arguments(eps, t, a, b):
    assert co.propagator_kernel(eps, t, a, b) == pytest.approx(co.propagator_kernel(eps, t, b, a), rel=1e-12)


def test_delta_limit_trend_monotone():
    errs = [co.delta_limit_error(eps, t) for t, eps in [(0.4, 0.04), (0.2, 0.01), (0.1, 0.0025), (0.05, 0.000625)]]
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_basis_change_kernel():
    rule = gauss_hermite(60)
    for eps in (0.05, 0.3):
        val = rule.integrate_plain(lambda Pv: co.basis_change_kernel(eps, 0.7, Pv), center=0.7, width=np.sqrt(2 * eps))
        assert abs(val - 1) < 1e-12
    with pytest.raises(DomainError):
        co.basis_change_kernel(0.0, 0.1, 0.1)
    # narrowing width: smearing of a smooth test function tends to the point value
    f = lambda x: np.cos(x)
    errs = []
    for eps in (0.1, 0.01, 0.001):
        val = rule.integrate_plain(lambda Pv: co.basis_change_kernel(eps, 0.4, Pv) * f(Pv), center=0.4, width=np.sqrt(2 * eps))
        errs.append(abs(val - f(0.4)))
    assert errs[0] > errs[1] > errs[2]


def test_relation_contraction_against_direct_quadrature():
    eps, t = 0.3, 0.7
    rule = gauss_hermite(80)
    width = np.sqrt(2 * eps)
    w = width * rule.weights
    for p_in, p_out in [(0.2, -0.4), (1.0, 0.5)]:
        Po, Pi = np.meshgrid(p_out + width * rule.nodes, p_in + width * rule.nodes, indexing="ij")
        brute = np.sum(w[:, None] * w[None, :] * mehler_momentum(1.0, t, Po, Pi)) / (2 * np.pi * eps)
        assert abs(brute - co.propagator_relation_rhs(eps, t, p_in, p_out)) / abs(brute) < 1e-8


def test_relation_holds_for_mirrored_kernel():
    assert co.propagator_relation_check(0.3, 0.7, kernel=co.mirrored_propagator_kernel) < 1e-10


@pytest.mark.parametrize("eps", [0.1, 0.3, 0.5])
def test_completeness(eps):
    assert co.completeness_check(eps) < 1e-6


def test_completeness_measure_real_on_real_axis():
    assert co.completeness_measure(0.3, 0.7) == pytest.approx((0.3 * np.pi) ** -0.5)
    with pytest.raises(DomainError):
        co.completeness_measure(-0.1, 0.0)


def test_group_property():
    samples = co.default_relation_samples(np.random.default_rng(1), 5)
    assert co.group_property_check(0.3, 0.4, 0.5, samples, mirrored=True) < 1e-10
    with pytest.raises(DegenerateFormError):
        co.group_property_check(0.3, 0.4, 0.5, samples)
