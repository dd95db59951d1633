"""Exact Gaussian forecastability profiles and a seeded simulator.

For a stationary Gaussian process the forecastability at horizon h given a
p-lag window is ``-0.5*log(1 - R_h^2)``, where ``R_h^2`` is the population
R-squared from regressing the future value on the window.  The AR(1) case
collapses to the closed form ``-0.5*log(1 - phi^(2h))``; anything else is
reached through the autocorrelation function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .core import ForecastabilityProfile, TimeSeries
from .errors import CoverageError, DomainError, SingularSystem

__all__ = [
    "GaussianProcessSpec",
    "GaussianEntropySummary",
    "ar1_profile",
    "seasonal_ar_acf",
    "gaussian_profile_from_acf",
    "gaussian_entropy_summary",
    "simulate",
]

_ACF_RELATIVE_TOL = 1e-12


@dataclass(frozen=True)
class GaussianProcessSpec:
    """A stationary Gaussian process description.

    kind is one of ``"ar1"`` (phi), ``"seasonal_ar"`` (phi, Phi, s) for the
    multiplicative model ``y[t] = phi*y[t-1] + Phi*y[t-s] - phi*Phi*y[t-s-1] + e[t]``,
    or ``"explicit_acf"`` (rho, the autocorrelations at lags 1..L).
    """

    kind: str
    phi: float | None = None
    Phi: float | None = None
    s: int | None = None
    rho: tuple[float, ...] | None = None
    innovation_variance: float = 1.0

    def __post_init__(self):
        if self.innovation_variance <= 0:
            raise DomainError("innovation_variance must be positive")
        if self.kind == "ar1":
            if self.phi is None or abs(self.phi) >= 1:
                raise DomainError("ar1 requires |phi| < 1")
        elif self.kind == "seasonal_ar":
            if self.phi is None or self.Phi is None or self.s is None:
                raise DomainError("seasonal_ar requires phi, Phi and s")
            if abs(self.phi) >= 1 or abs(self.Phi) >= 1:
                raise DomainError("seasonal_ar requires |phi| < 1 and |Phi| < 1")
            if self.s < 1:
                raise DomainError("seasonal period s must be >= 1")
        elif self.kind == "explicit_acf":
            if not self.rho:
                raise DomainError("explicit_acf requires a nonempty rho sequence")
            rho = tuple(float(r) for r in self.rho)
            if any(abs(r) >= 1 for r in rho):
                raise DomainError("explicit_acf requires |rho_h| < 1 at every lag")
            object.__setattr__(self, "rho", rho)
        else:
            raise DomainError(f"unknown process kind {self.kind!r}")

    @classmethod
    def ar1(cls, phi: float, innovation_variance: float = 1.0) -> "GaussianProcessSpec":
        return cls(kind="ar1", phi=phi, innovation_variance=innovation_variance)

    @classmethod
    def seasonal_ar(
        cls, phi: float, Phi: float, s: int, innovation_variance: float = 1.0
    ) -> "GaussianProcessSpec":
        return cls(
            kind="seasonal_ar", phi=phi, Phi=Phi, s=s,
            innovation_variance=innovation_variance,
        )

    @classmethod
    def explicit_acf(cls, rho, innovation_variance: float = 1.0) -> "GaussianProcessSpec":
        return cls(
            kind="explicit_acf", rho=tuple(rho),
            innovation_variance=innovation_variance,
        )


@dataclass(frozen=True)
class GaussianEntropySummary:
    """Marginal entropy, entropy rate and their difference, all in nats.

    The one-step forecastability is stored as the exact float difference
    ``marginal_entropy_nats - entropy_rate_nats`` so the defining identity
    holds bit-for-bit.
    """

    marginal_entropy_nats: float
    entropy_rate_nats: float
    one_step_forecastability_nats: float

    def __post_init__(self):
        if self.one_step_forecastability_nats != (
            self.marginal_entropy_nats - self.entropy_rate_nats
        ):
            raise ValueError(
                "one_step_forecastability_nats must equal "
                "marginal_entropy_nats - entropy_rate_nats exactly"
            )


def _check_horizons(horizons) -> tuple[int, ...]:
    horizons = tuple(int(h) for h in horizons)
    if not horizons or horizons[0] < 1 or any(
        b <= a for a, b in zip(horizons, horizons[1:])
    ):
        raise ValueError("horizons must be strictly ascending positive integers")
    return horizons


def ar1_profile(phi: float, horizons) -> ForecastabilityProfile:
    """Exact profile of a stationary AR(1): F(h) = -0.5*log(1 - phi^(2h))."""
    if abs(phi) >= 1:
        raise DomainError(f"AR(1) requires |phi| < 1, got {phi}")
    horizons = _check_horizons(horizons)
    values = tuple(-0.5 * math.log1p(-(phi ** (2 * h))) for h in horizons)
    return ForecastabilityProfile(horizons=horizons, values_nats=values, source="analytic")


def seasonal_ar_acf(phi: float, Phi: float, s: int, max_lag: int) -> np.ndarray:
    """Stationary autocorrelations rho_1..rho_max_lag of the multiplicative
    seasonal model ``(1 - phi*B)(1 - Phi*B^s) y = e``.

    Computed from the moving-average representation ``psi_j = sum(phi^a * Phi^b
    over a + s*b = j)`` with ``gamma(h) = sum_j psi_j psi_{j+h}``; the expansion
    is extended until the autocovariances are stable to 1e-12 relative.
    """
    if abs(phi) >= 1 or abs(Phi) >= 1:
        raise DomainError("stationarity requires |phi| < 1 and |Phi| < 1")
    if s < 1:
        raise DomainError("seasonal period s must be >= 1")
    if max_lag < 1:
        raise ValueError("max_lag must be >= 1")

    decay = max(abs(phi), abs(Phi) ** (1.0 / s))
    if decay == 0.0:
        return np.zeros(max_lag)
    # start beyond the point where psi weights drop under 1e-16, then verify
    n_terms = max(4 * s, max_lag + 1, int(math.ceil(-37.0 / math.log(decay))) + s)
    gammas = _gammas_from_psi(phi, Phi, s, n_terms, max_lag)
    while True:
        n_terms *= 2
        refined = _gammas_from_psi(phi, Phi, s, n_terms, max_lag)
        if np.max(np.abs(refined - gammas)) <= _ACF_RELATIVE_TOL * refined[0]:
            gammas = refined
            break
        gammas = refined
        if n_terms > 50_000_000:  # pragma: no cover - unreachable for |.|<1
            raise DomainError("autocovariance expansion failed to converge")
    return gammas[1:] / gammas[0]


def _gammas_from_psi(phi, Phi, s, n_terms, max_lag) -> np.ndarray:
    j = np.arange(n_terms + 1)
    psi = np.zeros(n_terms + 1)
    phi_pow = phi ** j.astype(float)
    for b in range(n_terms // s + 1):
        psi[s * b:] += (Phi ** b) * phi_pow[: n_terms + 1 - s * b]
    return np.array(
        [psi[: n_terms + 1 - h] @ psi[h:] for h in range(max_lag + 1)]
    )


def _nested_cholesky(matrix: np.ndarray) -> np.ndarray:
    """Unblocked lower Cholesky; the factor of each leading block equals the
    corresponding block of the full factor bit-for-bit, which makes nested
    lag-window R^2 values monotone by construction."""
    p = matrix.shape[0]
    L = np.zeros((p, p))
    for i in range(p):
        for j in range(i):
            L[i, j] = (matrix[i, j] - float(L[i, :j] @ L[j, :j])) / L[j, j]
        d = matrix[i, i] - float(L[i, :i] @ L[i, :i])
        if d <= 0.0 or not math.isfinite(d):
            raise SingularSystem(
                f"lag-window correlation matrix is not positive definite "
                f"(pivot {i} has value {d})"
            )
        L[i, i] = math.sqrt(d)
    return L


def gaussian_profile_from_acf(rho, p: int, horizons) -> ForecastabilityProfile:
    """Profile of a Gaussian process with the given autocorrelations, under a
    p-lag window: F(h) = -0.5*log(1 - R_h^2).

    ``rho`` lists the autocorrelations at lags 1, 2, ... and must reach lag
    ``max(horizons) + p - 1``.  For each horizon the Toeplitz system
    ``R beta = r_h`` with ``r_h = (rho_h, ..., rho_{h+p-1})`` is solved through
    an unblocked Cholesky factorisation, and ``R_h^2 = r_h . beta`` is
    accumulated term by term so that enlarging the window can never shrink it.
    """
    if p < 1:
        raise ValueError("lag order p must be >= 1")
    horizons = _check_horizons(horizons)
    rho = np.asarray(rho, dtype=float)
    if rho.ndim != 1:
        raise ValueError("rho must be a 1-d sequence of autocorrelations")
    needed = horizons[-1] + p - 1
    if rho.size < needed:
        raise CoverageError(
            f"need autocorrelations up to lag {needed}, got {rho.size}"
        )
    full = np.concatenate([[1.0], rho])
    L = _nested_cholesky(_toeplitz_from(full, p))
    values = []
    for h in horizons:
        z = _forward_solve(L, full[h: h + p])
        r2 = 0.0
        for zi in z:  # sequential sum: adding a lag can only raise R^2
            r2 += zi * zi
        if r2 >= 1.0:
            raise SingularSystem(
                f"implied R^2 >= 1 at horizon {h}; the autocorrelation "
                "sequence is not consistent with a nondegenerate process"
            )
        values.append(-0.5 * math.log1p(-r2))
    return ForecastabilityProfile(
        horizons=horizons, values_nats=tuple(values), source="analytic"
    )


def _toeplitz_from(full: np.ndarray, p: int) -> np.ndarray:
    idx = np.abs(np.arange(p)[:, None] - np.arange(p)[None, :])
    return full[idx]


def _forward_solve(L: np.ndarray, b: np.ndarray) -> np.ndarray:
    z = np.zeros(len(b))
    for i in range(len(b)):
        z[i] = (b[i] - float(L[i, :i] @ z[:i])) / L[i, i]
    return z


def gaussian_entropy_summary(spec: GaussianProcessSpec) -> GaussianEntropySummary:
    """Marginal entropy, entropy rate and one-step forecastability of an AR(1).

    Only the AR(1) case has the closed-form entropy rate ``0.5*log(2*pi*e*s2)``;
    other kinds are rejected (their profiles go through the ACF route, which
    never needs the entropy rate).
    """
    if spec.kind != "ar1":
        raise DomainError("entropy summary is only available for ar1 specs")
    phi, s2 = spec.phi, spec.innovation_variance
    marginal = 0.5 * math.log(2.0 * math.pi * math.e * s2 / (1.0 - phi * phi))
    rate = 0.5 * math.log(2.0 * math.pi * math.e * s2)
    return GaussianEntropySummary(
        marginal_entropy_nats=marginal,
        entropy_rate_nats=rate,
        one_step_forecastability_nats=marginal - rate,
    )


def simulate(
    spec: GaussianProcessSpec, n: int, seed: int, burn_in: int = 1000
) -> TimeSeries:
    """Simulate a sample path by running the AR recursion from zero initial
    conditions, discarding ``burn_in`` transient observations.

    Deterministic in (spec, n, seed, burn_in).  Explicit-ACF specs have no
    finite recursion and are rejected.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if burn_in < 0:
        raise ValueError("burn_in must be >= 0")
    if spec.kind == "ar1":
        poles = np.array([1.0, -spec.phi])
        name = f"ar1(phi={spec.phi:g})"
        period = None
    elif spec.kind == "seasonal_ar":
        poles = np.zeros(spec.s + 2)
        poles[0] = 1.0
        poles[1] = -spec.phi
        poles[spec.s] += -spec.Phi
        poles[spec.s + 1] += spec.phi * spec.Phi
        name = f"seasonal_ar(phi={spec.phi:g}, Phi={spec.Phi:g}, s={spec.s})"
        period = spec.s
    else:
        raise DomainError(
            "simulate supports ar1 and seasonal_ar specs only; an explicit "
            "autocorrelation sequence defines no finite recursion"
        )
    rng = np.random.default_rng(seed)
    innovations = rng.standard_normal(n + burn_in) * math.sqrt(spec.innovation_variance)
    path = lfilter([1.0], poles, innovations)[burn_in:]
    return TimeSeries(values=path, name=name, period_hint=period)
