"""Gaussian phase-space states and their exact propagation.

States are described by the means and covariances of the dimensionless
quadratures x = (a + a^dag)/sqrt(2), y = -i(a - a^dag)/sqrt(2).  The channel
acts on the characteristic function as

    chi_tau(xi) = exp(-Delta_Gamma(tau) |xi|^2) * chi_0(e^(-Gamma/2) e^(-i w0 tau) xi)

which on second moments reads

    mean(tau) = e^(-Gamma/2) R(-w0 tau) mean(0)
    cov(tau)  = e^(-Gamma)   R(-w0 tau) cov(0) R(-w0 tau)^T + Delta_Gamma * I

with R the 2x2 rotation.  This is the "lab frame": the free oscillator
rotation is included.  Squeezing is a corotating-frame notion (the frame in
which that rotation is undone), so the interval detector below works on
corotating variances; `GaussianState.rotated` converts between frames.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .coefficients import (
    DEFAULT_TOL,
    CoefficientSample,
    PhysicalParams,
    big_gamma,
    coefficient_grid,
    delta_big_gamma,
)

# Tolerance slack on the uncertainty bound det(cov) >= 1/4.
PHYSICALITY_TOL = 1e-9

# Variance threshold below which a quadrature counts as squeezed (vacuum = 1/2,
# exactly 1/2 counts as non-squeezed).
SQUEEZING_THRESHOLD = 0.5


def _rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class GaussianState:
    """Mean vector and 2x2 covariance matrix of a Gaussian state.

    ``mean`` is (<x>, <y>); ``cov`` is [[var_x, cov_xy], [cov_xy, var_y]].
    Construction enforces symmetry and positive variances only; the
    uncertainty bound det(cov) >= 1/4 is checked by `is_physical` and by the
    operations whose contracts require a physical state, so that deliberately
    unphysical covariances remain constructible for testing.
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self) -> None:
        mean = np.asarray(self.mean, dtype=float).reshape(2).copy()
        cov = np.asarray(self.cov, dtype=float).reshape(2, 2).copy()
        if not np.all(np.isfinite(mean)) or not np.all(np.isfinite(cov)):
            raise ValueError("state moments must be finite")
        if abs(cov[0, 1] - cov[1, 0]) > 1e-12 * max(1.0, abs(cov[0, 1])):
            raise ValueError(f"covariance must be symmetric, got {cov!r}")
        if cov[0, 0] <= 0.0 or cov[1, 1] <= 0.0:
            raise ValueError(f"variances must be positive, got {cov!r}")
        cov[0, 1] = cov[1, 0] = 0.5 * (cov[0, 1] + cov[1, 0])
        mean.flags.writeable = False
        cov.flags.writeable = False
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def var_x(self) -> float:
        return float(self.cov[0, 0])

    @property
    def var_y(self) -> float:
        return float(self.cov[1, 1])

    @property
    def cov_xy(self) -> float:
        return float(self.cov[0, 1])

    def det_cov(self) -> float:
        return float(self.cov[0, 0] * self.cov[1, 1] - self.cov[0, 1] ** 2)

    def is_physical(self, tol: float = PHYSICALITY_TOL) -> bool:
        """Uncertainty bound det(cov) >= 1/4 within ``tol``."""
        return self.det_cov() >= 0.25 - tol

    def rotated(self, theta: float) -> "GaussianState":
        """State with phase space rotated by ``theta`` (counterclockwise)."""
        rot = _rotation(theta)
        return GaussianState(rot @ self.mean, rot @ self.cov @ rot.T)


def make_coherent(alpha0: complex) -> GaussianState:
    """Coherent state |alpha0>: displaced vacuum, isotropic covariance 1/2."""
    alpha0 = complex(alpha0)
    mean = np.array([math.sqrt(2.0) * alpha0.real, math.sqrt(2.0) * alpha0.imag])
    return GaussianState(mean, 0.5 * np.eye(2))


def make_squeezed(alpha0: complex, s: float, phi: float = 0.0) -> GaussianState:
    """Displaced squeezed state with squeeze magnitude ``s`` and angle ``phi``.

    For phi = 0 the covariance is diag(e^(-2s)/2, e^(2s)/2): the x quadrature
    is squeezed.  General phi rotates that covariance by phi/2.
    """
    if s < 0.0:
        raise ValueError(f"squeeze magnitude must be >= 0, got {s!r}")
    alpha0 = complex(alpha0)
    mean = np.array([math.sqrt(2.0) * alpha0.real, math.sqrt(2.0) * alpha0.imag])
    cov0 = np.diag([0.5 * math.exp(-2.0 * s), 0.5 * math.exp(2.0 * s)])
    rot = _rotation(0.5 * phi)
    return GaussianState(mean, rot @ cov0 @ rot.T)


def squeeze_from_sigma2(sigma2: float) -> float:
    """Squeeze magnitude s such that the squeezed variance is sigma2/2.

    sigma2 = e^(-2s) is the squeezed-variance ratio to vacuum; sigma2 < 1
    squeezes, sigma2 = 1 is the vacuum, sigma2 > 1 anti-squeezes x.
    """
    if sigma2 <= 0.0:
        raise ValueError(f"sigma2 must be > 0, got {sigma2!r}")
    return -0.5 * math.log(sigma2)


def propagate(
    state0: GaussianState, p: PhysicalParams, tau: float, tol: float = DEFAULT_TOL
) -> GaussianState:
    """Evolve a Gaussian state to time ``tau`` (lab frame), single shot.

    Quadrature-convergence failures from the Delta_Gamma integral propagate
    as IntegrationError.
    """
    tau = float(tau)
    if tau < 0.0:
        raise ValueError(f"tau must be >= 0, got {tau!r}")
    gt = big_gamma(p, tau)
    dg = delta_big_gamma(p, tau, tol=tol)
    rot = _rotation(-p.omega0 * tau)
    decay = math.exp(-gt)
    mean = math.sqrt(decay) * (rot @ state0.mean)
    cov = decay * (rot @ state0.cov @ rot.T) + dg * np.eye(2)
    return GaussianState(mean, cov)


def mean_quanta(state: GaussianState) -> float:
    """Mean excitation number <n> = [var_x + var_y + <x>^2 + <y>^2 - 1]/2."""
    if not state.is_physical():
        raise ValueError(
            f"state is unphysical: det(cov) = {state.det_cov()!r} < 1/4"
        )
    mx, my = state.mean
    return 0.5 * (state.var_x + state.var_y + mx * mx + my * my - 1.0)


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled evolution of a Gaussian state (lab frame).

    ``states[k]`` is the state at ``times[k]``; ``n_mean[k]`` its mean quantum
    number; ``coeffs[k]`` the coefficient sample.  ``params`` is kept so the
    free rotation can be undone when corotating-frame variances are needed.
    """

    times: np.ndarray
    states: list[GaussianState]
    n_mean: np.ndarray
    coeffs: list[CoefficientSample]
    params: PhysicalParams

    def __post_init__(self) -> None:
        n = len(self.times)
        if not (n == len(self.states) == len(self.n_mean) == len(self.coeffs)):
            raise ValueError("trajectory field lengths differ")
        if np.any(np.diff(self.times) <= 0.0):
            raise ValueError("trajectory times must be strictly increasing")

    def variances(self, frame: str = "lab") -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(var_x, var_y, cov_xy) arrays in the requested frame.

        ``frame`` is "lab" (as propagated) or "corotating" (free rotation
        e^(-i w0 tau) undone; the frame in which squeezing is defined).
        """
        if frame not in ("lab", "corotating"):
            raise ValueError(f"frame must be 'lab' or 'corotating', got {frame!r}")
        states = self.states
        if frame == "corotating":
            w0 = self.params.omega0
            states = [s.rotated(w0 * t) for s, t in zip(states, self.times)]
        vx = np.array([s.var_x for s in states])
        vy = np.array([s.var_y for s in states])
        cxy = np.array([s.cov_xy for s in states])
        return vx, vy, cxy

    def means(self, frame: str = "lab") -> tuple[np.ndarray, np.ndarray]:
        """(mean_x, mean_y) arrays in the requested frame."""
        if frame not in ("lab", "corotating"):
            raise ValueError(f"frame must be 'lab' or 'corotating', got {frame!r}")
        states = self.states
        if frame == "corotating":
            w0 = self.params.omega0
            states = [s.rotated(w0 * t) for s, t in zip(states, self.times)]
        mx = np.array([s.mean[0] for s in states])
        my = np.array([s.mean[1] for s in states])
        return mx, my


def evolve_trajectory(
    state0: GaussianState,
    p: PhysicalParams,
    tau_max: float,
    n_steps: int,
    tol: float = DEFAULT_TOL,
) -> Trajectory:
    """Propagate on a uniform grid of ``n_steps`` points over [0, tau_max].

    Delta_Gamma is accumulated incrementally across the grid (O(n) quadrature
    cost); each state is otherwise identical to a single-shot `propagate`.
    """
    if n_steps < 2:
        raise ValueError(f"n_steps must be >= 2, got {n_steps!r}")
    if not (tau_max > 0.0 and math.isfinite(tau_max)):
        raise ValueError(f"tau_max must be finite and > 0, got {tau_max!r}")
    times = np.linspace(0.0, tau_max, n_steps)
    coeffs = coefficient_grid(p, times, tol=tol)
    eye = np.eye(2)
    states: list[GaussianState] = []
    n_mean = np.empty(n_steps)
    for k, cs in enumerate(coeffs):
        rot = _rotation(-p.omega0 * cs.tau)
        decay = math.exp(-cs.big_gamma)
        mean = math.sqrt(decay) * (rot @ state0.mean)
        cov = decay * (rot @ state0.cov @ rot.T) + cs.delta_gamma * eye
        state = GaussianState(mean, cov)
        states.append(state)
        n_mean[k] = mean_quanta(state)
    return Trajectory(times, states, n_mean, coeffs, p)


def detect_squeezing_intervals(
    traj: Trajectory, quadrature_axis: str = "x"
) -> list[tuple[float, float]]:
    """Intervals of tau where the chosen corotating variance drops below 1/2.

    Threshold crossings are located by linear interpolation between grid
    samples; a variance exactly at 1/2 counts as non-squeezed.  Variances are
    taken in the corotating frame, where squeezing is meaningful — in the lab
    frame the free rotation shuffles the squeezed axis continuously.
    """
    if quadrature_axis not in ("x", "y"):
        raise ValueError(f"quadrature_axis must be 'x' or 'y', got {quadrature_axis!r}")
    vx, vy, _ = traj.variances(frame="corotating")
    vals = vx if quadrature_axis == "x" else vy
    times = traj.times
    thr = SQUEEZING_THRESHOLD

    def cross(i: int) -> float:
        # Interpolated tau where vals crosses thr between samples i-1 and i.
        t0, t1 = times[i - 1], times[i]
        v0, v1 = vals[i - 1], vals[i]
        return float(t0 + (thr - v0) * (t1 - t0) / (v1 - v0))

    intervals: list[tuple[float, float]] = []
    inside = bool(vals[0] < thr)
    start = float(times[0]) if inside else 0.0
    for i in range(1, len(times)):
        now = bool(vals[i] < thr)
        if now and not inside:
            start = cross(i)
            inside = True
        elif inside and not now:
            intervals.append((start, cross(i)))
            inside = False
    if inside:
        intervals.append((start, float(times[-1])))
    return intervals


def oscillation_period(samples: Iterable[Sequence[float]]) -> float | None:
    """Mean spacing of downward zero crossings of a detrended signal.

    The trend is a moving average with time window equal to one-third of the
    sampled span.  Crossings (detrended value passing from > 0 to <= 0) are
    located by linear interpolation, and only count once the detrended signal
    has risen above a small fraction of its own amplitude — without that
    hysteresis, trend-dominated signals (e.g. monotone ramps) register their
    floating-point ripple as oscillations.  Returns None when fewer than two
    crossings are found.
    """
    pts = np.asarray(list(samples), dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
        raise ValueError("need at least 3 (tau, value) samples")
    t = pts[:, 0]
    v = pts[:, 1]
    if np.any(np.diff(t) <= 0.0):
        raise ValueError("sample times must be strictly increasing")

    window = (t[-1] - t[0]) / 3.0
    half = 0.5 * window
    # Boxcar average over the time window [t_i - half, t_i + half] using
    # prefix sums; near the edges the window is clipped to the sampled span.
    csum = np.concatenate([[0.0], np.cumsum(v)])
    lo = np.searchsorted(t, t - half, side="left")
    hi = np.searchsorted(t, t + half, side="right")
    trend = (csum[hi] - csum[lo]) / (hi - lo)
    d = v - trend

    eps = 1e-9 * float(np.max(np.abs(d)))
    crossings: list[float] = []
    armed = False
    for i in range(len(d) - 1):
        if d[i] > eps:
            armed = True
        if armed and d[i] > 0.0 >= d[i + 1]:
            # Linear interpolation for the zero of d on [t_i, t_i+1].
            frac = d[i] / (d[i] - d[i + 1])
            crossings.append(float(t[i] + frac * (t[i + 1] - t[i])))
            armed = False
    if len(crossings) < 2:
        return None
    return float((crossings[-1] - crossings[0]) / (len(crossings) - 1))
