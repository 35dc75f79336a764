"""Model parameters and time-dependent rate coefficients.

A harmonic oscillator (frequency omega_0) is weakly coupled to a
high-temperature Ohmic reservoir with exponential cutoff omega_c.  Everything
is nondimensionalized: hbar = 1, times are tau = omega_c * t, rates are in
units of omega_c, and the temperature enters only through kT/(hbar*omega_c).

The reduced dynamics is governed by a diffusion coefficient Delta(tau), a
dissipation coefficient gamma(tau), and their integrated forms

    Gamma(tau)       = 2 * integral_0^tau gamma(s) ds          (closed form)
    Delta_Gamma(tau) = exp(-Gamma(tau)) *
                       integral_0^tau exp(Gamma(s)) Delta(s) ds (quadrature)

Both Delta and gamma are linear combinations of 1, e^(-tau)cos(tau/r) and
e^(-tau)sin(tau/r), so Gamma has an elementary antiderivative; Delta_Gamma
does not, hence the adaptive quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .quadrature import IntegrationError, integrate_adaptive

# Default relative tolerance for the Delta_Gamma quadrature.
DEFAULT_TOL = 1e-10

# Width (in tau) to which sign-change boundaries are refined by bisection.
_BISECT_WIDTH = 1e-9


@dataclass(frozen=True)
class PhysicalParams:
    """Dimensionless parameters of the oscillator-reservoir model.

    Attributes
    ----------
    g : float
        System-reservoir coupling constant, g >= 0.
    r : float
        Cutoff-to-oscillator frequency ratio omega_c/omega_0, r > 0.
    kt_over_wc : float
        Reservoir temperature kT/(hbar*omega_c), > 0.

    The high-temperature regime (kT >> hbar*omega_c, hbar*omega_0) is assumed
    by the coefficient formulas but deliberately not enforced; they stay
    well-defined for any admissible parameter values.
    """

    g: float
    r: float
    kt_over_wc: float

    def __post_init__(self) -> None:
        # g = 0 (zero coupling) is allowed: it is the exactly-solvable
        # identity channel used as a sanity anchor throughout the tests.
        if not (self.g >= 0.0 and math.isfinite(self.g)):
            raise ValueError(f"g must be finite and >= 0, got {self.g!r}")
        if not (self.r > 0.0 and math.isfinite(self.r)):
            raise ValueError(f"r must be finite and > 0, got {self.r!r}")
        if not (self.kt_over_wc > 0.0 and math.isfinite(self.kt_over_wc)):
            raise ValueError(
                f"kt_over_wc must be finite and > 0, got {self.kt_over_wc!r}"
            )

    @property
    def omega0(self) -> float:
        """Oscillator frequency in units of omega_c (= 1/r)."""
        return 1.0 / self.r


@dataclass(frozen=True)
class CoefficientSample:
    """Coefficient values at a single dimensionless time."""

    tau: float
    delta: float
    gamma: float
    big_gamma: float
    delta_gamma: float


@dataclass(frozen=True)
class LindbladClassification:
    """Sign analysis of the combinations Delta(tau) +/- gamma(tau).

    The generator has Lindblad structure with time-dependent rates
    Delta + gamma and Delta - gamma; it is of Lindblad type on an interval
    iff both stay non-negative there.  An endpoint sitting exactly at zero
    counts as non-negative.
    """

    is_lindblad_type: bool
    negative_intervals: dict[str, list[tuple[float, float]]]


def _check_tau(tau: float) -> float:
    tau = float(tau)
    if not (tau >= 0.0 and math.isfinite(tau)):
        raise ValueError(f"tau must be finite and >= 0, got {tau!r}")
    return tau


def delta_coeff(p: PhysicalParams, tau: float) -> float:
    """Diffusion coefficient Delta(tau) in units of omega_c.

    Delta(tau) = 2 g^2 (kT/omega_c) r^2/(1+r^2)
                 * {1 - e^(-tau) [cos(tau/r) - (1/r) sin(tau/r)]}.

    Starts at 0, oscillates with period 2*pi*r (transiently negative for
    r << 1), and relaxes to the positive asymptote as the e^(-tau) transient
    dies out.
    """
    tau = _check_tau(tau)
    w = 1.0 / p.r
    pref = 2.0 * (p.g * p.g) * p.kt_over_wc * ((p.r * p.r) / (1.0 + p.r * p.r))
    return pref * (
        1.0 - math.exp(-tau) * (math.cos(w * tau) - w * math.sin(w * tau))
    )


def gamma_coeff(p: PhysicalParams, tau: float) -> float:
    """Dissipation coefficient gamma(tau) in units of omega_c.

    gamma(tau) = g^2 r/(1+r^2)
                 * [1 - e^(-tau) cos(tau/r) - r e^(-tau) sin(tau/r)].
    """
    tau = _check_tau(tau)
    w = 1.0 / p.r
    pref = (p.g * p.g) * (p.r / (1.0 + p.r * p.r))
    e = math.exp(-tau)
    return pref * (1.0 - e * math.cos(w * tau) - p.r * e * math.sin(w * tau))


def big_gamma(p: PhysicalParams, tau: float) -> float:
    """Integrated dissipation Gamma(tau) = 2 * integral_0^tau gamma, closed form.

    Uses the elementary antiderivatives
        integral_0^tau e^(-s) cos(ws) ds = [1 - e^(-tau)(cos - w sin)] / (1+w^2)
        integral_0^tau e^(-s) sin(ws) ds = [w - e^(-tau)(sin + w cos)] / (1+w^2)
    with w = 1/r; no quadrature is involved.
    """
    tau = _check_tau(tau)
    w = 1.0 / p.r
    pref = (p.g * p.g) * (p.r / (1.0 + p.r * p.r))
    e = math.exp(-tau)
    c = math.cos(w * tau)
    s = math.sin(w * tau)
    denom = 1.0 + w * w
    int_cos = (1.0 - e * (c - w * s)) / denom
    int_sin = (w - e * (s + w * c)) / denom
    return 2.0 * pref * (tau - int_cos - p.r * int_sin)


def _exp_gamma_delta(p: PhysicalParams, shift: float):
    """Integrand s -> exp(Gamma(s) - shift) * Delta(s)."""

    def f(s: float) -> float:
        return math.exp(big_gamma(p, s) - shift) * delta_coeff(p, s)

    return f


def delta_big_gamma(p: PhysicalParams, tau: float, tol: float = DEFAULT_TOL) -> float:
    """Damped integrated diffusion Delta_Gamma(tau).

    Computed as exp(-Gamma(tau)) * integral_0^tau exp(Gamma(s)) Delta(s) ds
    by adaptive quadrature with relative tolerance ``tol``; the damping factor
    is folded into the integrand so it stays O(Delta) at large tau.

    Raises
    ------
    IntegrationError
        If the adaptive quadrature hits its subdivision limit.
    """
    tau = _check_tau(tau)
    if tau == 0.0:
        return 0.0
    res = integrate_adaptive(_exp_gamma_delta(p, big_gamma(p, tau)), 0.0, tau, tol=tol)
    if not res.converged:
        raise IntegrationError(
            f"Delta_Gamma quadrature did not converge at tau={tau!r} "
            f"(error estimate {res.error_estimate:.3e} after {res.evaluations} evaluations)"
        )
    return res.value


def coefficient_grid(
    p: PhysicalParams, taus: Sequence[float], tol: float = DEFAULT_TOL
) -> list[CoefficientSample]:
    """Evaluate all four coefficients on an increasing time grid.

    Delta_Gamma is accumulated incrementally: the raw integral
    I(tau) = integral_0^tau exp(Gamma) Delta is carried forward between grid
    points so the total quadrature cost is O(n), not O(n^2).
    """
    taus = [float(t) for t in taus]
    if not taus:
        return []
    if taus[0] < 0.0:
        raise ValueError(f"grid times must be >= 0, got {taus[0]!r}")
    if any(b <= a for a, b in zip(taus, taus[1:])):
        raise ValueError("grid times must be strictly increasing")

    samples: list[CoefficientSample] = []
    raw_integral = 0.0  # I(tau) = integral_0^tau exp(Gamma(s)) Delta(s) ds
    prev = 0.0
    integrand = _exp_gamma_delta(p, 0.0)
    for t in taus:
        if t > prev:
            res = integrate_adaptive(integrand, prev, t, tol=tol)
            if not res.converged:
                raise IntegrationError(
                    f"Delta_Gamma quadrature did not converge on segment "
                    f"[{prev!r}, {t!r}]"
                )
            raw_integral += res.value
            prev = t
        gt = big_gamma(p, t)
        samples.append(
            CoefficientSample(
                tau=t,
                delta=delta_coeff(p, t),
                gamma=gamma_coeff(p, t),
                big_gamma=gt,
                delta_gamma=math.exp(-gt) * raw_integral if t > 0.0 else 0.0,
            )
        )
    return samples


def _refine_crossing(f, lo: float, hi: float) -> float:
    """Bisect a sign change of f to an interval of width <= _BISECT_WIDTH.

    Maintains f(lo) and f(hi) of opposite sign classes (one >= 0, one < 0);
    returns the midpoint of the final bracket.
    """
    f_lo_neg = f(lo) < 0.0
    while hi - lo > _BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        if (f(mid) < 0.0) == f_lo_neg:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def classify_lindblad(
    p: PhysicalParams, tau_max: float, n_samples: int
) -> LindbladClassification:
    """Classify the generator as Lindblad-type or not on [0, tau_max].

    Samples Delta + gamma and Delta - gamma on a uniform grid of
    ``n_samples`` points, groups runs of strictly negative values, and
    refines each run boundary by bisection to width 1e-9 in tau.  Negativity
    narrower than the grid spacing can go undetected; use enough samples for
    the oscillation period 2*pi*r of the coefficients.
    """
    if not (tau_max > 0.0 and math.isfinite(tau_max)):
        raise ValueError(f"tau_max must be finite and > 0, got {tau_max!r}")
    if n_samples < 2:
        raise ValueError(f"n_samples must be >= 2, got {n_samples!r}")

    step = tau_max / (n_samples - 1)
    grid = [i * step for i in range(n_samples - 1)] + [tau_max]

    combos = {
        "delta_plus_gamma": lambda t: delta_coeff(p, t) + gamma_coeff(p, t),
        "delta_minus_gamma": lambda t: delta_coeff(p, t) - gamma_coeff(p, t),
    }
    negative_intervals: dict[str, list[tuple[float, float]]] = {}
    for name, f in combos.items():
        vals = [f(t) for t in grid]
        intervals: list[tuple[float, float]] = []
        i = 0
        n = len(grid)
        while i < n:
            if vals[i] < 0.0:
                j = i
                while j + 1 < n and vals[j + 1] < 0.0:
                    j += 1
                start = 0.0 if i == 0 else _refine_crossing(f, grid[i - 1], grid[i])
                end = tau_max if j == n - 1 else _refine_crossing(f, grid[j], grid[j + 1])
                intervals.append((start, end))
                i = j + 1
            else:
                i += 1
        negative_intervals[name] = intervals

    is_lindblad = all(not v for v in negative_intervals.values())
    return LindbladClassification(is_lindblad, negative_intervals)
