"""Free Schroedinger evolution, Duhamel quadrature, and Picard iteration.

The integral equation solved on the symmetric window [-T, T] is

    u(t) = exp(i*t*d_xx) u0 + integral_0^t exp(i*(t-t')*d_xx) F(u)(t') dt'

where F is the forcing of the selected equation written on the right-hand
side of  d_t u - i*d_xx u = F,  i.e. F = -i * G for an equation
i*d_t u + d_xx u = G.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .fields import SpectralField, Trajectory
from .gauge import GaugeContext, gauge, gauge_field, gauge_inv
from .nonlinear import cubic_physical, dnls_forcing, mean_shifted_cubic, quintic_physical


class Equation(str, Enum):
    FREE = "free"
    DNLS = "dnls"
    GAUGED = "gauged"
    SHIFTED_NLS = "shifted-nls"


@dataclass(frozen=True)
class SolveConfig:
    cutoff: int
    horizon: float
    steps: int
    equation: Equation = Equation.DNLS
    max_iter: int = 100
    tol: float = 1e-10
    cross_check: bool = False

    def __post_init__(self):
        if not (0.0 < self.horizon <= 1.0):
            raise ValueError("time horizon must lie in (0, 1]")
        if self.steps % 2 != 0 or self.steps < 2:
            raise ValueError("steps must be even and >= 2")
        if self.tol <= 0.0:
            raise ValueError("tolerance must be positive")
        object.__setattr__(self, "equation", Equation(self.equation))


@dataclass(frozen=True)
class SolveReport:
    trajectory: Trajectory
    equation: Equation
    converged: bool
    iterations: int
    residual: float
    residual_history: tuple[float, ...]
    mass_drift: float
    integral_residual: float
    truncated_tail_mass: float
    gauge_residual: float | None = None
    cross_check_gap: float | None = None

    def to_json_dict(self) -> dict:
        return {
            "equation": self.equation.value,
            "converged": self.converged,
            "iterations": self.iterations,
            "residual": self.residual,
            "residual_history": list(self.residual_history),
            "mass_drift": self.mass_drift,
            "integral_residual": self.integral_residual,
            "truncated_tail_mass": self.truncated_tail_mass,
            "gauge_residual": self.gauge_residual,
            "cross_check_gap": self.cross_check_gap,
            "cutoff": self.trajectory.cutoff,
            "window": self.trajectory.window,
            "steps": self.trajectory.steps,
        }


def free_evolution(u0: SpectralField, t: float) -> SpectralField:
    """Coefficient-wise multiplication by exp(-i*t*xi^2); exact and unitary."""
    return SpectralField(np.exp(-1j * t * u0.xi.astype(float) ** 2) * u0.coeffs, u0.cutoff)


def forcing_field(u: SpectralField, equation: Equation, out_cutoff: int | None = None) -> SpectralField:
    """Right-hand side F for d_t u = i*d_xx u + F of the selected equation."""
    if out_cutoff is None:
        out_cutoff = u.cutoff
    if equation is Equation.FREE:
        return SpectralField.zeros(out_cutoff)
    if equation is Equation.DNLS:
        return dnls_forcing(u, out_cutoff)
    if equation is Equation.GAUGED:
        return -1.0 * cubic_physical(u, out_cutoff) + 0.5j * quintic_physical(u, out_cutoff)
    if equation is Equation.SHIFTED_NLS:
        return -1j * mean_shifted_cubic(u, out_cutoff)
    raise ValueError(f"unknown equation {equation}")


def forcing_band(equation: Equation, cutoff: int) -> int:
    """Band of the exact (untruncated) forcing for band-limited input."""
    return {Equation.FREE: cutoff, Equation.DNLS: 3 * cutoff,
            Equation.GAUGED: 5 * cutoff, Equation.SHIFTED_NLS: 3 * cutoff}[equation]


# ---------------------------------------------------------------------------
# Duhamel quadrature
# ---------------------------------------------------------------------------

def _segment_weights(n_cells: int, dt: float) -> np.ndarray:
    """Composite Simpson weights on n_cells uniform cells (n_cells + 1 nodes).

    An odd cell count gets Simpson on the leading even block and a trapezoid
    on the final cell (the one adjacent to the evaluation time).
    """
    w = np.zeros(n_cells + 1)
    if n_cells == 0:
        return w
    even = n_cells if n_cells % 2 == 0 else n_cells - 1
    if even >= 2:
        w[0] += 1.0
        w[even] += 1.0
        w[1:even:2] += 4.0
        w[2:even:2] += 2.0
        w[: even + 1] *= dt / 3.0
    if even != n_cells:
        w[-2] += 0.5 * dt
        w[-1] += 0.5 * dt
    return w


def duhamel(forcing: Trajectory, t_index: int) -> SpectralField:
    """integral_0^{t_k} exp(i*(t_k - t')*d_xx) F(t') dt' by composite Simpson.

    The forcing trajectory must be sampled on the solver grid (t = 0 at the
    middle index); negative target times integrate with the signed measure.
    """
    if forcing.steps % 2 != 0:
        raise ValueError("forcing grid must have an even step count (t = 0 on grid)")
    mid = forcing.steps // 2
    if not 0 <= t_index <= forcing.steps:
        raise ValueError("t_index outside the grid")
    times = forcing.times
    xi_sq = forcing.samples[0].xi.astype(float) ** 2
    lo, hi = sorted((mid, t_index))
    n_cells = hi - lo
    w = _segment_weights(n_cells, forcing.dt)
    if t_index < mid:
        w = w[::-1] * -1.0
    t_k = times[t_index]
    acc = np.zeros(2 * forcing.cutoff + 1, dtype=complex)
    for offset, weight in enumerate(w):
        if weight == 0.0:
            continue
        j = lo + offset
        acc += weight * np.exp(-1j * (t_k - times[j]) * xi_sq) * forcing.samples[j].coeffs
    return SpectralField(acc, forcing.cutoff)


def _duhamel_all(forcing_mat: np.ndarray, times: np.ndarray, cutoff: int, dt: float) -> np.ndarray:
    """Duhamel integrals at every grid time; returns an array like forcing_mat."""
    m = forcing_mat.shape[0] - 1
    mid = m // 2
    xi_sq = np.arange(-cutoff, cutoff + 1, dtype=float) ** 2
    # integrating-factor form: phases relative to t = 0
    up = np.exp(1j * times[:, None] * xi_sq[None, :]) * forcing_mat
    out = np.zeros_like(forcing_mat)
    for k in range(m + 1):
        lo, hi = sorted((mid, k))
        w = _segment_weights(hi - lo, dt)
        if k < mid:
            w = w[::-1] * -1.0
        if hi > lo:
            out[k] = w @ up[lo : hi + 1]
    out *= np.exp(-1j * times[:, None] * xi_sq[None, :])
    return out


# ---------------------------------------------------------------------------
# Picard iteration
# ---------------------------------------------------------------------------

def _solver_times(cfg: SolveConfig) -> np.ndarray:
    dt = 2.0 * cfg.horizon / cfg.steps
    return -cfg.horizon + dt * np.arange(cfg.steps + 1)


def picard_solve(
    u0: SpectralField, cfg: SolveConfig, initial: Trajectory | None = None
) -> SolveReport:
    """Global-in-time Picard iteration of the integral equation on [-T, T].

    The default first iterate is the free evolution of the datum; a perturbed
    initial trajectory can be supplied to probe uniqueness of the fixed point.
    """
    if u0.cutoff != cfg.cutoff:
        u0 = u0.truncate(cfg.cutoff)
    times = _solver_times(cfg)
    dt = times[1] - times[0]
    xi_sq = np.arange(-cfg.cutoff, cfg.cutoff + 1, dtype=float) ** 2
    linear = np.exp(-1j * times[:, None] * xi_sq[None, :]) * u0.coeffs[None, :]

    if initial is not None:
        if initial.steps != cfg.steps or initial.cutoff != cfg.cutoff:
            raise ValueError("initial iterate must live on the solver grid")
        current = initial.coeff_matrix()
    else:
        current = linear.copy()
    history: list[float] = []
    converged = False
    iterations = 0
    for iterations in range(1, cfg.max_iter + 1):
        forcing = np.array(
            [forcing_field(SpectralField(row, cfg.cutoff), cfg.equation).coeffs for row in current]
        )
        nxt = linear + _duhamel_all(forcing, times, cfg.cutoff, dt)
        residual = float(np.max(np.linalg.norm(nxt - current, axis=1)))
        history.append(residual)
        if not np.isfinite(residual) or residual > 1e8:
            break  # blow-up: report the divergent history, keep the last finite iterate
        current = nxt
        if residual <= cfg.tol:
            converged = True
            break

    samples = tuple(SpectralField(row, cfg.cutoff) for row in current)
    traj = Trajectory(samples, cfg.horizon)
    mass0 = u0.l2_norm()
    drift = max(abs(s.l2_norm() - mass0) for s in samples)
    int_res = integral_residual(traj, cfg.equation)
    tail = _max_forcing_tail(traj, cfg.equation)
    cross_gap = None
    if cfg.cross_check:
        cross_gap = traj.sup_l2_distance(rk4_solve(u0, cfg))
    return SolveReport(
        trajectory=traj,
        equation=cfg.equation,
        converged=converged,
        iterations=iterations,
        residual=history[-1] if history else 0.0,
        residual_history=tuple(history),
        mass_drift=drift,
        integral_residual=int_res,
        truncated_tail_mass=tail,
        cross_check_gap=cross_gap,
    )


def _max_forcing_tail(traj: Trajectory, equation: Equation) -> float:
    """Largest l2 mass the forcing truncation discards over the trajectory."""
    band = forcing_band(equation, traj.cutoff)
    worst = 0.0
    for s in traj.samples:
        full = forcing_field(s, equation, out_cutoff=band)
        worst = max(worst, full.tail_l2(traj.cutoff))
    return worst


def integral_residual(traj: Trajectory, equation: Equation) -> float:
    """sup over grid times of the L^2 defect in the integral equation."""
    if traj.steps % 2 != 0:
        raise ValueError("trajectory must have an even step count")
    mid = traj.steps // 2
    u0 = traj.samples[mid]
    times = traj.times
    xi_sq = traj.samples[0].xi.astype(float) ** 2
    forcing = np.array([forcing_field(s, equation).coeffs for s in traj.samples])
    integ = _duhamel_all(forcing, times, traj.cutoff, traj.dt)
    worst = 0.0
    for k, t in enumerate(times):
        lin = np.exp(-1j * t * xi_sq) * u0.coeffs
        defect = traj.samples[k].coeffs - lin - integ[k]
        worst = max(worst, float(np.linalg.norm(defect)))
    return worst


# ---------------------------------------------------------------------------
# independent cross-check integrator
# ---------------------------------------------------------------------------

def rk4_solve(u0: SpectralField, cfg: SolveConfig, substeps: int = 4) -> Trajectory:
    """Classical RK4 on the integrating-factor form, marched from t = 0 both ways.

    With w(t) = exp(-i*t*d_xx) u(t) the equation becomes
    w'(t) = exp(-i*t*d_xx) F(exp(i*t*d_xx) w), which RK4 integrates directly.
    """
    if u0.cutoff != cfg.cutoff:
        u0 = u0.truncate(cfg.cutoff)
    times = _solver_times(cfg)
    mid = cfg.steps // 2
    xi_sq = np.arange(-cfg.cutoff, cfg.cutoff + 1, dtype=float) ** 2

    def rhs(t: float, w: np.ndarray) -> np.ndarray:
        u = SpectralField(np.exp(-1j * t * xi_sq) * w, cfg.cutoff)
        f = forcing_field(u, cfg.equation)
        return np.exp(1j * t * xi_sq) * f.coeffs

    rows: list[np.ndarray | None] = [None] * (cfg.steps + 1)
    rows[mid] = u0.coeffs.copy()
    for direction in (+1, -1):
        w = u0.coeffs.copy()
        k = mid
        end = cfg.steps if direction > 0 else 0
        while k != end:
            h = direction * (times[1] - times[0]) / substeps
            t = times[k]
            for _ in range(substeps):
                k1 = rhs(t, w)
                k2 = rhs(t + h / 2, w + h / 2 * k1)
                k3 = rhs(t + h / 2, w + h / 2 * k2)
                k4 = rhs(t + h, w + h * k3)
                w = w + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
                t += h
            k += direction
            rows[k] = w.copy()
    samples = tuple(
        SpectralField(np.exp(-1j * t * xi_sq) * row, cfg.cutoff)
        for t, row in zip(times, rows)
    )
    return Trajectory(samples, cfg.horizon)


# ---------------------------------------------------------------------------
# solving the raw equation through the gauge
# ---------------------------------------------------------------------------

def solve_via_gauge(u0: SpectralField, cfg: SolveConfig) -> SolveReport:
    """Gauge the datum, solve the transformed equation, and ungauge.

    Returns a report for the raw-equation solution, including its own
    integral-equation residual and the gap between the gauged representation
    and the directly transformed trajectory.
    """
    if cfg.equation is not Equation.DNLS:
        raise ValueError("the gauge pipeline solves the raw derivative equation")
    ctx = GaugeContext.for_cutoff(cfg.cutoff)
    v0 = gauge_field(u0.truncate(cfg.cutoff), 0.0, ctx)
    inner = SolveConfig(
        cutoff=cfg.cutoff,
        horizon=cfg.horizon,
        steps=cfg.steps,
        equation=Equation.GAUGED,
        max_iter=cfg.max_iter,
        tol=cfg.tol,
        cross_check=False,
    )
    gauged_report = picard_solve(v0, inner)
    u_traj = gauge_inv(gauged_report.trajectory, ctx)
    mass0 = u0.l2_norm()
    drift = max(abs(s.l2_norm() - mass0) for s in u_traj.samples)
    int_res = integral_residual(u_traj, Equation.DNLS)
    gauge_res = gauge(u_traj, ctx).sup_l2_distance(gauged_report.trajectory)
    return SolveReport(
        trajectory=u_traj,
        equation=Equation.DNLS,
        converged=gauged_report.converged,
        iterations=gauged_report.iterations,
        residual=gauged_report.residual,
        residual_history=gauged_report.residual_history,
        mass_drift=drift,
        integral_residual=int_res,
        truncated_tail_mass=gauged_report.truncated_tail_mass,
        gauge_residual=gauge_res,
    )


def plane_wave_solution(
    cutoff: int, n: int, amplitude: float, horizon: float, steps: int
) -> Trajectory:
    """Exact single-frequency solution of the raw equation.

    A*exp(i*(n*x + theta*t)) solves it exactly when theta = n*|A|^2 - n^2.
    """
    from .fields import plane_wave

    theta = n * amplitude**2 - n**2
    dt = 2.0 * horizon / steps
    times = -horizon + dt * np.arange(steps + 1)
    samples = tuple(
        plane_wave(cutoff, n, amplitude * np.exp(1j * theta * t)) for t in times
    )
    return Trajectory(samples, horizon)
