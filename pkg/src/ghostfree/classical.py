"""
Classical Pais-Uhlenbeck trajectories and their oscillator channels.

The fourth-order equation x'''' + (w1^2 + w2^2) x'' + w1^2 w2^2 x = 0 is
integrated as a first-order system in the jet (x, x', x'', x''') with fixed-step
RK4. Complex initial data are allowed; real oscillator data give complex x.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ghostfree.errors import DegenerateFrequencyError, DomainError
from ghostfree.pais_uhlenbeck import (
    PUParams,
    TransformCoefficients,
    classical_hpu,
    classical_hxi,
    ostrogradski_map,
)
from ghostfree.report import write_csv


@dataclass(frozen=True)
class TrajectorySpec:
    duration: float
    step: float
    initial_jet: tuple

    def __post_init__(self):
        if self.duration <= 0:
            raise DomainError("duration must be positive")
        if self.step <= 0 or self.step > self.duration / 100:
            raise DomainError("step must be positive and at most duration/100")
        if len(self.initial_jet) != 4:
            raise DomainError("initial jet needs four entries (x, x', x'', x''')")

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.step))


@dataclass
class Trajectory:
    """times (n,), jets (n, 4) complex; xi channels (n, 4) = (xi1, xi2, P1, P2) once mapped."""

    times: np.ndarray
    jets: np.ndarray
    xi: np.ndarray | None = field(default=None)

    @property
    def x(self):
        return self.jets[:, 0]


def _system_matrix(params: PUParams) -> np.ndarray:
    a = np.zeros((4, 4))
    a[0, 1] = a[1, 2] = a[2, 3] = 1.0
    a[3, 0] = -params.prod_sq
    a[3, 2] = -params.sum_sq
    return a


def integrate_pu(params: PUParams, spec: TrajectorySpec) -> Trajectory:
    """Classic RK4 on y' = A y with y the jet; global error O(step^4)."""
    a = _system_matrix(params)
    h = spec.step
    n = spec.n_steps
    y = np.empty((n + 1, 4), dtype=complex)
    y[0] = np.asarray(spec.initial_jet, dtype=complex)
    f = lambda v: a @ v
    for i in range(n):
        v = y[i]
        k1 = f(v)
        k2 = f(v + 0.5 * h * k1)
        k3 = f(v + 0.5 * h * k2)
        k4 = f(v + h * k3)
        y[i + 1] = v + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    if not np.all(np.isfinite(y)):
        raise DomainError("non-finite values in trajectory")
    return Trajectory(h * np.arange(n + 1), y)


def mode_amplitudes(params: PUParams, initial_jet) -> tuple[np.ndarray, np.ndarray]:
    """Exponents lambda = (i w1, -i w1, i w2, -i w2) and amplitudes matching the jet at t = 0."""
    if params.omega1 == params.omega2:
        raise DegenerateFrequencyError("degenerate frequencies: transformation singular")
    lam = np.array([1j * params.omega1, -1j * params.omega1, 1j * params.omega2, -1j * params.omega2])
    vander = np.vander(lam, 4, increasing=True).T
    amps = np.linalg.solve(vander, np.asarray(initial_jet, dtype=complex))
    return lam, amps


def analytic_solution(params: PUParams, initial_jet, t, derivative: int = 0):
    """Exact x^(derivative)(t) as a superposition of exp(+-i w1 t), exp(+-i w2 t)."""
    lam, amps = mode_amplitudes(params, initial_jet)
    t = np.asarray(t, dtype=float)
    return np.sum(amps * lam**derivative * np.exp(np.multiply.outer(t, lam)), axis=-1)


def analytic_trajectory(params: PUParams, spec: TrajectorySpec) -> Trajectory:
    times = spec.step * np.arange(spec.n_steps + 1)
    jets = np.stack([analytic_solution(params, spec.initial_jet, times, k) for k in range(4)], axis=1)
    return Trajectory(times, jets)


def jet_to_xi(coeffs: TransformCoefficients, jets) -> np.ndarray:
    """(xi1, xi2, P1, P2) with xi1 = i(a x + b x''), xi2 = c x + b x'' and P_i their time derivatives."""
    jets = np.asarray(jets)
    x, xd, xdd, x3 = (jets[..., k] for k in range(4))
    a, b, c = coeffs.a, coeffs.b, coeffs.c
    return np.stack([1j * (a * x + b * xdd), c * x + b * xdd, 1j * (a * xd + b * x3), c * xd + b * x3], axis=-1)


def map_to_xi(coeffs: TransformCoefficients, trajectory: Trajectory) -> Trajectory:
    return Trajectory(trajectory.times, trajectory.jets, jet_to_xi(coeffs, trajectory.jets))


def invert_xi(coeffs: TransformCoefficients, xi1, xi2, P1, P2) -> np.ndarray:
    """Jet (x, x', x'', x''') from oscillator data; x = i b xi1 + b xi2."""
    a, b, c = coeffs.a, coeffs.b, coeffs.c
    x = 1j * b * xi1 + b * xi2
    xdd = (xi2 - c * x) / b
    xd = 1j * b * P1 + b * P2
    x3 = (P2 - c * xd) / b
    return np.stack(np.broadcast_arrays(x, xd, xdd, x3), axis=-1).astype(complex)


def energies(params: PUParams, coeffs: TransformCoefficients, trajectory: Trajectory):
    """(H_xi, H_PU) along the trajectory."""
    traj = trajectory if trajectory.xi is not None else map_to_xi(coeffs, trajectory)
    xi1, xi2, P1, P2 = (traj.xi[:, k] for k in range(4))
    h_xi = classical_hxi(params, xi1, xi2, P1, P2)
    x, z, pi_x, pi_z, _ = ostrogradski_map(params, tuple(traj.jets[:, k] for k in range(4)))
    h_pu = classical_hpu(params, x, pi_x, z, pi_z)
    return h_xi, h_pu


def energy_check(params: PUParams, coeffs: TransformCoefficients, trajectory: Trajectory) -> tuple[float, float]:
    """(max |H_xi(t) - H_xi(0)|, max |H_PU - H_xi|)."""
    h_xi, h_pu = energies(params, coeffs, trajectory)
    return float(np.abs(h_xi - h_xi[0]).max()), float(np.abs(h_pu - h_xi).max())


def ho_equation_residual(params: PUParams, trajectory: Trajectory) -> tuple[float, float]:
    """
    Relative residual of xi_i'' + w_i^2 xi_i = 0 per channel, with xi'' from second-order
    central differences; normalized by w_i^2 max|xi_i| (zero channels report 0).
    """
    if trajectory.xi is None:
        raise DomainError("trajectory has no xi channels; call map_to_xi first")
    h = trajectory.times[1] - trajectory.times[0]
    out = []
    for k, omega in ((0, params.omega1), (1, params.omega2)):
        xi = trajectory.xi[:, k]
        d2 = (xi[2:] - 2 * xi[1:-1] + xi[:-2]) / h**2
        res = np.abs(d2 + omega**2 * xi[1:-1]).max()
        scale = omega**2 * np.abs(xi).max()
        out.append(float(res / scale) if scale > 0 else float(res))
    return out[0], out[1]


def real_sector_spec(coeffs: TransformCoefficients, xi_data, duration: float = 10.0, step: float = 1e-3) -> TrajectorySpec:
    """Trajectory spec whose oscillator data (xi1, xi2, P1, P2) are the given reals."""
    jet = invert_xi(coeffs, *np.asarray(xi_data, dtype=float))
    return TrajectorySpec(duration, step, tuple(jet))


TRAJECTORY_COLUMNS = ("t",) + tuple(
    f"{part}_{name}"
    for name in ("x", "xdot", "xddot", "x3dot", "xi1", "xi2", "P1", "P2", "H_xi", "H_PU")
    for part in ("re", "im")
)


def trajectory_table(params: PUParams, coeffs: TransformCoefficients, trajectory: Trajectory) -> np.ndarray:
    """Rows matching TRAJECTORY_COLUMNS."""
    traj = trajectory if trajectory.xi is not None else map_to_xi(coeffs, trajectory)
    h_xi, h_pu = energies(params, coeffs, traj)
    cplx = np.column_stack([traj.jets, traj.xi, h_xi, h_pu])
    parts = np.empty((cplx.shape[0], 2 * cplx.shape[1]))
    parts[:, 0::2] = cplx.real
    parts[:, 1::2] = cplx.imag
    return np.column_stack([traj.times, parts])


def export_csv(path, params: PUParams, coeffs: TransformCoefficients, trajectory: Trajectory, stride: int = 1):
    rows = trajectory_table(params, coeffs, trajectory)[::stride]
    write_csv(path, TRAJECTORY_COLUMNS, rows)
