import numpy as np
import pytest

from ghostfree import classical as cl
from ghostfree import pais_uhlenbeck as pu
from ghostfree.errors import DomainError

P21 = pu.PUParams(2.0, 1.0)
COEFFS = pu.closed_form_coefficients(P21)


def test_spec_validation():
    with pytest.raises(DomainError):
        cl.TrajectorySpec(10.0, 0.2, (1, 0, 0, 0))
    with pytest.raises(DomainError):
        cl.TrajectorySpec(0.0, 1e-3, (1, 0, 0, 0))
    with pytest.raises(DomainError):
        cl.TrajectorySpec(10.0, 1e-3, (1, 0, 0))


@pytest.mark.parametrize("omega", [2.0, 1.0])
def test_pure_mode_oracle(omega):
    traj = cl.integrate_pu(P21, cl.TrajectorySpec(10.0, 1e-3, (1, 0, -(omega**2), 0)))
    assert np.abs(traj.x - np.cos(omega * traj.times)).max() < 1e-8


def test_analytic_solution_unit_position():
    t = np.linspace(0, 10, 101)
    x = cl.analytic_solution(P21, (1, 0, 0, 0), t)
    assert np.abs(x - (4 * np.cos(t) - np.cos(2 * t)) / 3).max() < 1e-13
    # derivatives are consistent with the jet at t = 0
    jet = (0.3, -0.1 + 0.2j, 0.5, 1.1)
    assert [complex(cl.analytic_solution(P21, jet, 0.0, k)) for k in range(4)] == pytest.approx(jet)


def test_rk4_fourth_order():
    errs = []
    for h in (2e-3, 1e-3):
        traj = cl.integrate_pu(P21, cl.TrajectorySpec(10.0, h, (1, 0, 0, 0)))
        errs.append(np.abs(traj.x - cl.analytic_solution(P21, (1, 0, 0, 0), traj.times)).max())
    assert errs[0] / errs[1] == pytest.approx(16, rel=0.2)


def test_rk4_matches_analytic_for_complex_data():
    jet = (0.3 + 0.1j, -0.5, 0.2j, 1.0)
    traj = cl.integrate_pu(P21, cl.TrajectorySpec(10.0, 1e-3, jet))
    ana = cl.analytic_trajectory(P21, cl.TrajectorySpec(10.0, 1e-3, jet))
    assert np.abs(traj.jets - ana.jets).max() < 1e-8


def test_xi_round_trip_and_imaginary_position():
    data = np.random.default_rng(0).uniform(-1, 1, (100, 4))
    jets = cl.invert_xi(COEFFS, *data.T)
    assert np.abs(cl.jet_to_xi(COEFFS, jets) - data).max() < 1e-12
    assert np.allclose(jets[:, 0].imag, COEFFS.b * data[:, 0], atol=1e-14)
    assert np.all(cl.invert_xi(COEFFS, 0, 0, 0, 0) == 0)


def test_pure_mode_annihilates_second_channel():
    omega = P21.omega1
    traj = cl.map_to_xi(COEFFS, cl.integrate_pu(P21, cl.TrajectorySpec(5.0, 1e-3, (1, 0, -(omega**2), 0))))
    assert np.abs(traj.xi[:, 1]).max() < 1e-8


def _real_run(step=1e-3):
    spec = cl.real_sector_spec(COEFFS, [0.4, -0.7, 0.2, 0.5], 10.0, step)
    return cl.map_to_xi(COEFFS, cl.integrate_pu(P21, spec))


def test_real_sector_channels():
    traj = _real_run()
    assert np.abs(traj.xi.imag).max() < 1e-10
    drift, equality = cl.energy_check(P21, COEFFS, traj)
    assert drift < 1e-8
    assert equality < 1e-10
    r1, r2 = cl.ho_equation_residual(P21, traj)
    assert max(r1, r2) < 1e-6


def test_ho_residual_second_order_in_step():
    coarse = cl.ho_equation_residual(P21, _real_run(2e-3))
    fine = cl.ho_equation_residual(P21, _real_run(1e-3))
    for a, b in zip(coarse, fine):
        assert a / b == pytest.approx(4, rel=0.1)


def test_ho_residual_requires_xi():
    traj = cl.integrate_pu(P21, cl.TrajectorySpec(1.0, 1e-3, (1, 0, 0, 0)))
    with pytest.raises(DomainError):
        cl.ho_equation_residual(P21, traj)


def test_csv_export(tmp_path):
    traj = _real_run()
    path = tmp_path / "traj.csv"
    cl.export_csv(path, P21, COEFFS, traj, stride=100)
    lines = path.read_text().splitlines()
    assert lines[0].split(",") == list(cl.TRAJECTORY_COLUMNS)
    assert len(lines) == 1 + len(traj.times[::100])
    assert len(cl.TRAJECTORY_COLUMNS) == 21
    assert b"\r" not in path.read_bytes()
