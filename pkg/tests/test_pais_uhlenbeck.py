import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghostfree import pais_uhlenbeck as pu
from ghostfree.classical import jet_to_xi
from ghostfree.errors import CausticError, DegenerateFrequencyError, DomainError
from ghostfree.mehler import mehler_position

P21 = pu.PUParams(2.0, 1.0)
BASIS = pu.TwoModeBasis(16, 16)

pairs = st.tuples(st.floats(0.2, 3.0), st.floats(0.05, 3.0)).map(lambda t: (t[0] + t[1], t[0]))


def test_params_validation():
    with pytest.raises(DegenerateFrequencyError, match="degenerate frequencies: transformation singular"):
        pu.PUParams(1.0, 1.0)
    with pytest.raises(DomainError):
        pu.PUParams(1.0, 2.0)
    with pytest.raises(DomainError):
        pu.PUParams(1.0, 0.0)
    assert P21.ground_energy == 1.5


def test_coefficients_reference_values():
    c = pu.solve_coefficients(P21)
    assert (c.a, c.b, c.c) == pytest.approx((0.5773503, 0.5773503, 2.3094011), abs=1e-7)
    closed = pu.closed_form_coefficients(P21)
    assert max(abs(c.a - closed.a), abs(c.b - closed.b), abs(c.c - closed.c)) < 1e-12
    neg = pu.solve_coefficients(P21, sign=-1)
    assert neg.b == pytest.approx(-closed.b)


def test_matching_solve_against_closed_form_random_pairs():
    rng = np.random.default_rng(11)
    w2 = rng.uniform(0.2, 3.0, 50)
    for w1, w2 in zip(w2 + rng.uniform(0.05, 3.0, 50), w2):
        params = pu.PUParams(w1, w2)
        (a, b, c), kappa, res = pu.matching_solution(params)
        closed = pu.closed_form_coefficients(params)
        assert max(abs(a - closed.a), abs(b - closed.b), abs(c - closed.c)) < 1e-10
        assert kappa == 1.0
        assert res < 1e-10


def test_matching_system_inconsistent_with_opposite_surface_term():
    # with the opposite surface-term coefficient the matching system has no exact root
    _, _, res = pu.matching_solution(P21, kappa=-1.0)
    assert res > 1e-2


@given(pairs)
@settings(max_examples=50, deadline=None)
def test_closed_form_identities(pair):
    params = pu.PUParams(*pair)
    for sign in (1, -1):
        res = pu.closed_form_coefficients(params, sign).identity_residuals(*pair)
        scale = max(1.0, params.sum_sq)
        assert max(res.values()) < 1e-11 * scale


def test_lagrangian_values_zero_jet():
    coeffs = pu.solve_coefficients(P21)
    assert pu.lagrangian_values(P21, coeffs, (0, 0, 0, 0)) == (0, 0, 0)


def test_jet_identity_holds_with_plus_surface_term():
    coeffs = pu.solve_coefficients(P21)
    jets = pu.random_jets(np.random.default_rng(0), 1000)
    assert pu.jet_identity_residual(P21, coeffs, jets, f_sign=1) < 1e-12
    assert pu.jet_identity_residual(P21, coeffs, jets, f_sign=-1) > 1.0


def test_ostrogradski_examples():
    assert pu.ostrogradski_map(P21, (1, 0, 0, 0))[:4] == (1, 0, 0, 0)
    _, _, pi_x, _, _ = pu.ostrogradski_map(P21, (0, 1, 0, 0))
    assert pi_x == 5


@given(st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False), min_size=4, max_size=4))
@settings(max_examples=100, deadline=None)
def test_canonical_map_round_trip(v):
    coeffs = pu.closed_form_coefficients(P21)
    back = pu.xi_from_canonical(coeffs, *pu.canonical_from_xi(coeffs, *v))
    assert np.allclose(back, v, atol=1e-12)


@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), min_size=4, max_size=4))
@settings(max_examples=100, deadline=None)
def test_classical_hamiltonians_agree_on_jets(jet):
    coeffs = pu.closed_form_coefficients(P21)
    x, z, pi_x, pi_z, _ = pu.ostrogradski_map(P21, jet)
    h_pu = pu.classical_hpu(P21, x, pi_x, z, pi_z)
    h_xi = pu.classical_hxi(P21, *jet_to_xi(coeffs, np.array(jet)))
    assert abs(h_pu - h_xi) < 1e-11 * max(1.0, abs(h_pu))


def test_commutators_and_decoupling():
    coeffs = pu.solve_coefficients(P21)
    assert max(pu.commutator_residuals(P21, coeffs, BASIS).values()) < 1e-12
    assert pu.decoupling_residual(P21, coeffs, BASIS) < 1e-10


def test_hxi_sorted_levels():
    d = np.sort(pu.hxi_matrix(P21, BASIS).entries.diagonal().real)[:7]
    assert d == pytest.approx([1.5, 2.5, 3.5, 3.5, 4.5, 4.5, 5.5])


def test_spectrum_reference_values():
    evs, max_imag = pu.pu_spectrum(P21, BASIS, 6)
    assert np.abs(evs - [1.5, 2.5, 3.5, 3.5, 4.5, 4.5]).max() < 1e-8
    assert max_imag < 1e-8
    evs, _ = pu.pu_spectrum(pu.PUParams(3.0, 0.5), BASIS, 3)
    assert np.abs(evs - [1.75, 2.25, 2.75]).max() < 1e-8
    with pytest.raises(DomainError):
        pu.pu_spectrum(P21, BASIS, BASIS.dim // 4 + 1)


def test_propagator_coefficients():
    k0 = pu.pu_propagator_coeffs(P21, 0.0).as_dict()
    k0.pop("t")
    assert max(abs(v) for v in k0.values()) == 0.0
    assert pu.pu_propagator_coeffs(P21, np.pi / 2).F == pytest.approx(1.0)
    assert abs(pu.pu_propagator_coeffs(P21, np.pi).D) < 1e-12
    with pytest.raises(CausticError, match="caustic time"):
        pu.pu_propagator_kernel(P21, np.pi, 0.1, 0.2, 0.3, 0.4)


def test_kernel_finite_and_symmetric():
    rng = np.random.default_rng(4)
    for a, b, c, d in rng.standard_normal((10, 4)) + 1j * rng.standard_normal((10, 4)):
        k1 = pu.pu_propagator_kernel(P21, 0.7, a, b, c, d)
        assert np.isfinite(k1)
        assert abs(k1 - pu.pu_propagator_kernel(P21, 0.7, c, d, a, b)) < 1e-12 * abs(k1)
    k = pu.pu_propagator_kernel(P21, 0.7, 0.3, -0.2, 0.5, 0.1)
    assert abs(k) == pytest.approx(1.0)


def test_basis_change():
    coeffs = pu.solve_coefficients(P21)
    assert pu.pu_basis_change(coeffs, 0.0, 0.0, 0.7, -0.4) == 1
    x, piz = 0.3 + 0.1j, -0.2 + 0.5j
    bra = pu.pu_basis_change_bra(coeffs, np.conj(x), np.conj(piz), 0.7, -0.4)
    assert bra == pytest.approx(np.conj(pu.pu_basis_change(coeffs, x, piz, 0.7, -0.4)))


def test_measure_support_gives_real_oscillator_labels():
    coeffs = pu.solve_coefficients(P21)
    for al, be in np.random.default_rng(2).standard_normal((10, 2)):
        xi1, xi2 = pu.ket_xi(coeffs, *pu.pu_measure_support(coeffs, al, be))
        assert abs(xi1.imag) < 1e-14 and abs(xi2.imag) < 1e-14


def test_decoupled_kernel_is_product_of_mehler_kernels():
    coeffs = pu.solve_coefficients(P21)
    x, piz = pu.pu_measure_support(coeffs, 0.3, -0.4)
    xi1, xi2 = pu.ket_xi(coeffs, x, piz)
    xo, pzo = pu.pu_measure_support(coeffs, -0.1, 0.2)
    xo1, xo2 = pu.ket_xi(coeffs, xo, pzo)
    val = pu.decoupled_kernel(P21, coeffs, 0.7, x, piz, np.conj(xo), np.conj(pzo))
    ref = (2 * np.pi) ** 2 * mehler_position(2.0, 0.7, xo1, xi1) * mehler_position(1.0, 0.7, xo2, xi2)
    assert val == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("t", [0.4, 0.7, 1.1])
def test_decoupled_relation(t):
    assert pu.pu_propagator_relation_check(P21, t, kernel="decoupled") < 1e-5


def test_relation_engine_against_brute_quadrature():
    for omega in (2.0, 1.0):
        for xo, xi in ((0.3, -0.5), (0.8, 0.1), (-0.6, -0.2)):
            brute = pu.brute_mode_contraction(omega, 0.7, xo, xi, delta=1.0)
            engine = pu.engine_mode_contraction(omega, 0.7, xo, xi, delta=1.0)
            assert abs(brute - engine) / abs(brute) < 1e-6


def test_completeness_and_small_time_trend():
    coeffs = pu.solve_coefficients(P21)
    assert pu.pu_completeness_check(coeffs, [(0.0, 0.0), (0.5, -0.3), (-1.0, 0.2)]) < 1e-6
    errs = pu.small_time_trend(P21)
    assert errs[0] > errs[1] > errs[2]


def test_unknown_kernel_name():
    with pytest.raises(ValueError):
        pu.pu_propagator_relation_check(P21, 0.7, kernel="other")
