import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gamma

from ghostfree.errors import DomainError
from ghostfree.hermite import (
    MAX_DEGREE,
    OperatorMatrix,
    commutator,
    gauss_hermite,
    hermite_poly,
    ho_derivative_table,
    ho_eigenfunction,
    ladder_matrices,
)


def test_hermite_low_degree_values():
    assert hermite_poly(0, 1.3) == 1.0
    assert hermite_poly(1, 0.5) == 1.0
    assert hermite_poly(2, 1.0) == 2.0


def test_hermite_matches_explicit_polynomials():
    rng = np.random.default_rng(1)
    q = rng.uniform(-2, 2, 20)
    explicit = [
        np.ones_like(q),
        2 * q,
        4 * q**2 - 2,
        8 * q**3 - 12 * q,
        16 * q**4 - 48 * q**2 + 12,
        32 * q**5 - 160 * q**3 + 120 * q,
    ]
    for n, ref in enumerate(explicit):
        assert np.allclose(hermite_poly(n, q), ref, rtol=0, atol=1e-12)


def test_hermite_degree_ceiling():
    hermite_poly(MAX_DEGREE, 0.1)
    with pytest.raises(DomainError, match="degree too large"):
        hermite_poly(MAX_DEGREE + 1, 0.1)


def test_ho_eigenfunction_examples():
    assert ho_eigenfunction(0, 1, 0) == pytest.approx(np.pi**-0.25, abs=1e-12)
    assert ho_eigenfunction(1, 1, 0) == 0.0
    rule = gauss_hermite(40)
    assert rule.integrate_plain(lambda q: ho_eigenfunction(3, 1.0, q) ** 2) == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(DomainError):
        ho_eigenfunction(0, 0.0, 0.1)


def test_ho_eigenfunction_against_closed_form():
    from math import factorial

    q = np.linspace(-3, 3, 13)
    for omega in (0.5, 2.0):
        for n in range(6):
            ref = (omega / np.pi) ** 0.25 / np.sqrt(2.0**n * factorial(n)) * hermite_poly(n, np.sqrt(omega) * q)
            ref *= np.exp(-omega * q * q / 2)
            assert np.allclose(ho_eigenfunction(n, omega, q), ref, atol=1e-13)


def test_derivative_table_against_finite_differences():
    q = np.linspace(-2, 2, 9)
    h = 1e-4
    phi, d1, d2 = ho_derivative_table(5, 1.7, q)
    fp, fm = ho_derivative_table(5, 1.7, q + h)[0], ho_derivative_table(5, 1.7, q - h)[0]
    assert np.allclose(d1, (fp - fm) / (2 * h), atol=1e-7)
    assert np.allclose(d2, (fp - 2 * phi + fm) / h**2, atol=1e-5)


def test_gauss_hermite_small_orders():
    r1 = gauss_hermite(1)
    assert r1.nodes.tolist() == [0.0] and r1.weights[0] == pytest.approx(np.sqrt(np.pi))
    r2 = gauss_hermite(2)
    assert np.allclose(r2.nodes, [-1 / np.sqrt(2), 1 / np.sqrt(2)], atol=1e-14)
    assert np.allclose(r2.weights, np.sqrt(np.pi) / 2, atol=1e-14)
    assert gauss_hermite(40).integrate(lambda q: q**4) == pytest.approx(3 * np.sqrt(np.pi) / 4, abs=1e-12)
    with pytest.raises(DomainError):
        gauss_hermite(0)
    with pytest.raises(DomainError):
        gauss_hermite(301)


def test_gauss_hermite_matches_numpy_reference():
    x, w = np.polynomial.hermite.hermgauss(60)
    rule = gauss_hermite(60)
    assert np.allclose(rule.nodes, x, atol=1e-12)
    assert np.allclose(rule.weights, w, rtol=1e-10, atol=0)


@pytest.mark.parametrize("order", [1, 2, 7, 40, 100, 300])
def test_rule_invariants(order):
    rule = gauss_hermite(order)
    assert np.all(np.diff(rule.nodes) > 0)
    assert np.allclose(rule.nodes, -rule.nodes[::-1], atol=1e-12)
    assert np.all(rule.weights > 0)
    assert abs(rule.weights.sum() - np.sqrt(np.pi)) < 1e-12


def test_quadrature_exactness_all_orders_up_to_40():
    for order in range(1, 41):
        rule = gauss_hermite(order)
        for k in range(order):
            exact = gamma(k + 0.5)
            assert abs(rule.integrate(lambda q: q ** (2 * k)) - exact) / exact < 1e-10


def test_ladder_matrix_examples():
    q, _ = ladder_matrices(4, 1.0)
    assert q.entries[0, 1] == pytest.approx(1 / np.sqrt(2))
    q4, _ = ladder_matrices(4, 4.0)
    assert q4.entries[0, 1] == pytest.approx(np.sqrt(1 / 8))
    with pytest.raises(DomainError):
        ladder_matrices(1, 1.0)


@given(n=st.integers(2, 60), omega=st.sampled_from([0.5, 1.0, 2.0, 4.0]))
@settings(max_examples=40, deadline=None)
def test_ladder_commutator_interior(n, omega):
    q, p = ladder_matrices(n, omega)
    assert np.allclose(q.entries, q.entries.conj().T)
    assert np.allclose(p.entries, p.entries.conj().T)
    com = commutator(q, p)[: n - 1, : n - 1]
    assert np.abs(com - 1j * np.eye(n - 1)).max() < 1e-12


def test_operator_matrix_invariants():
    with pytest.raises(DomainError):
        OperatorMatrix(np.ones((1, 1)), 1.0)
    with pytest.raises(DomainError):
        OperatorMatrix(np.array([[1, np.nan], [0, 1]]), 1.0)
    with pytest.raises(DomainError):
        OperatorMatrix(np.ones((2, 3)), 1.0)
    m = OperatorMatrix(np.arange(9).reshape(3, 3), 2.0, "m")
    assert m.dim == 3
    assert np.array_equal(m.block(2), m.entries[:2, :2])
    assert np.array_equal(m.dagger().entries, m.entries.T)
