"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s``.  Expected values marked
"corrected" in comments were re-derived from the governing closed forms and
certified by independent oracles (spectral integration and a 1e7-sample
simulated ACF); the full derivations live in the project notes.  Criterion 6's
estimated-budget check at the seasonal horizon is implemented exactly as
specified and is expected to fail: the population budget at h=12 is ~2e-8
nats (the single most recent lag is almost sufficient there), so the required
positivity is unresolvable, and the 14-dimensional neighbour estimate carries
a documented -0.1 to -0.15 finite-sample bias at n=20000.
"""

import math

import numpy as np
import pytest

from forecastability import (
    EstimatorConfig,
    GaussianProcessSpec,
    InformationSetSpec,
    ProbeEvaluation,
    ar1_profile,
    decompose_loss,
    estimate_profile,
    fano_bound,
    finite_window_budget,
    gaussian_profile_from_acf,
    ksg_mutual_information,
    permutation_test,
    pinsker_bound,
    seasonal_ar_acf,
    simulate,
)

SEASONAL = dict(phi=0.5, Phi=0.8, s=12)


def _report(number: int, ok: bool, label: str):
    status = "PASS" if ok else "FAIL"
    print(f"[acceptance] criterion {number}: {status} - {label}")
    assert ok, f"criterion {number} failed: {label}"


def _sample_acf(values: np.ndarray, lags) -> dict[int, float]:
    y = values - values.mean()
    denom = float(y @ y)
    return {h: float(y[:-h] @ y[h:]) / denom for h in lags}


def test_criterion_1_analytic_ar1():
    prof = ar1_profile(0.3, (1, 2))
    # exact value of the closed form at phi=0.3, h=1; the prose level is 0.047
    ok = (
        abs(prof.value_at(1) - 0.047155339735620645) <= 1e-6
        and prof.value_at(2) < 0.005
        and round(prof.value_at(1), 3) == 0.047
    )
    _report(1, ok, "AR(1) phi=0.3: F(1)=0.0471553 +/- 1e-6, F(2) < 0.005")


def test_criterion_2_analytic_seasonal_profile():
    horizons = tuple(range(1, 37))
    rho = seasonal_ar_acf(**SEASONAL, max_lag=36)
    prof = gaussian_profile_from_acf(rho, 1, horizons)

    def f_of(r):
        return -0.5 * math.log1p(-r * r)

    # cross-validation oracle: sample ACF of a 1e7-observation simulated path
    sim = simulate(GaussianProcessSpec.seasonal_ar(**SEASONAL), 10_000_000, seed=1)
    acf_hat = _sample_acf(sim.values, (1, 6, 12, 24, 36))

    checks = {
        "F(1) = 0.14 +/- 0.02": abs(prof.value_at(1) - 0.14) <= 0.02,
        "minimum <= 0.005 in h=[5,9]": min(
            prof.value_at(h) for h in range(5, 10)
        ) <= 0.005,
        # 0.49 / 0.13 in the source prose are refuted by the model's exact ACF
        # (certified by this oracle); targets pinned to the closed-form values
        "F(12) = 0.511021 +/- 0.02": abs(prof.value_at(12) - 0.511021) <= 0.02,
        "F(24) = 0.25 +/- 0.02": abs(prof.value_at(24) - 0.25) <= 0.02,
        "F(36) = 0.152042 +/- 0.02": abs(prof.value_at(36) - 0.152042) <= 0.02,
        "oracle agreement": all(
            abs(f_of(acf_hat[h]) - prof.value_at(h)) <= 0.005
            for h in (1, 12, 24, 36)
        )
        and f_of(acf_hat[6]) <= 0.005,
    }
    for label, ok in checks.items():
        if not ok:
            _report(2, False, f"seasonal profile: {label}")
    _report(2, True, "seasonal profile values + 1e7-simulation ACF oracle")


def test_criterion_3_ksg_accuracy():
    for rho in (0.3, 0.6, 0.9):
        truth = -0.5 * math.log1p(-rho * rho)
        errors = []
        for seed in range(20):
            rng = np.random.default_rng(seed)
            z = rng.standard_normal((2000, 2))
            x = z[:, 0]
            y = rho * z[:, 0] + math.sqrt(1 - rho * rho) * z[:, 1]
            errors.append(abs(ksg_mutual_information(x, y, k=5) - truth))
        median = float(np.median(errors))
        if median > 0.03:
            _report(3, False, f"KSG rho={rho}: median error {median:.4f} > 0.03")
    _report(3, True, "KSG bivariate Gaussian: median |error| <= 0.03 per rho")


def test_criterion_4_estimation_vs_closed_form():
    horizons = (1, 2, 3, 4, 5)
    closed = ar1_profile(0.95, horizons)
    spec = InformationSetSpec(1, horizons)
    config = EstimatorConfig()
    errors = np.array(
        [
            [
                abs(prof.value_at(h) - closed.value_at(h))
                for h in horizons
            ]
            for prof in (
                estimate_profile(
                    simulate(GaussianProcessSpec.ar1(0.95), 5000, seed=s),
                    spec,
                    config,
                )
                for s in range(10)
            )
        ]
    )
    medians = np.median(errors, axis=0)
    ok = bool(np.all(medians <= 0.08))
    _report(4, ok, f"AR(1) end-to-end: median errors {np.round(medians, 3)} <= 0.08")


def test_criterion_5_dpi_monotonicity():
    rho = seasonal_ar_acf(**SEASONAL, max_lag=40)
    horizons = tuple(range(1, 25))
    profiles = [gaussian_profile_from_acf(rho, p, horizons) for p in range(1, 7)]
    ok = all(
        large.value_at(h) >= small.value_at(h)
        for small, large in zip(profiles, profiles[1:])
        for h in horizons
    )
    _report(5, ok, "window-compression monotonicity, p=1..6, h<=24, exact")


def test_criterion_6_analytic_budget_nonnegative():
    rho = seasonal_ar_acf(**SEASONAL, max_lag=48)
    horizons = tuple(range(1, 37))
    small = gaussian_profile_from_acf(rho, 1, horizons)
    large = gaussian_profile_from_acf(rho, 13, horizons)
    deltas = {h: large.value_at(h) - small.value_at(h) for h in horizons}
    ok = all(d >= 0.0 for d in deltas.values())
    _report(
        6,
        ok,
        "analytic truncation budget p=13 vs p=1 nonnegative at h=1..36 "
        f"(large away from seasonal lags: delta(1)={deltas[1]:.3f}, "
        f"near zero at them: delta(12)={deltas[12]:.2e})",
    )


def test_criterion_6_estimated_budget_at_h12_as_stated():
    """Implemented exactly as specified; fails for verified structural reasons.

    The population budget at h=12 is ~1.9e-8 nats, not large: the lag-12
    autocorrelation makes the single most recent observation essentially
    sufficient at the seasonal echo, so the required positivity asks the
    estimator to resolve a 2e-8 signal.  The 13-lag window estimate at
    n=20000 additionally carries a -0.1..-0.15 dimensional bias (14-d joint
    space), placing the difference outside the 0.1 tolerance for every seed
    and neighbour count tried.  See the project notes for the full analysis;
    the budget estimator itself is validated where the population budget is
    estimable (criterion 6a above and the module tests: the AR(1) budget is
    within 0.05 of zero, and the seasonal h=1 budget, population 0.51 nats,
    is detected at > 0.1)."""
    rho = seasonal_ar_acf(**SEASONAL, max_lag=48)
    analytic_delta = (
        gaussian_profile_from_acf(rho, 13, (12,)).value_at(12)
        - gaussian_profile_from_acf(rho, 1, (12,)).value_at(12)
    )
    series = simulate(GaussianProcessSpec.seasonal_ar(**SEASONAL), 20_000, seed=0)
    budget = finite_window_budget(series, 1, 13, (12,), EstimatorConfig())
    estimated = budget.delta_nats[0]
    ok = estimated > 0.0 and abs(estimated - analytic_delta) <= 0.1
    _report(
        6,
        ok,
        f"estimated budget at h=12, n=20000: delta_hat={estimated:+.4f} vs "
        f"analytic {analytic_delta:.2e} (criterion requires positive and "
        "within 0.1; expected FAIL, see module docstring and project notes)",
    )


def test_criterion_7_periodicity():
    base = [0.6 * math.cos(2 * math.pi * h / 12) for h in range(1, 13)]
    rho = np.array(base + base)  # exact periodic extension of the floats
    prof = gaussian_profile_from_acf(rho, 1, tuple(range(1, 25)))
    ok = all(prof.value_at(h) == prof.value_at(h + 12) for h in range(1, 13))
    _report(7, ok, "periodic ACF rho_h = 0.6 cos(2 pi h / 12): F(h) == F(h+12)")


def test_criterion_8_permutation_calibration():
    spec = InformationSetSpec(1, (1,))
    config = EstimatorConfig()
    rejections = 0
    for trial in range(200):
        series = simulate(GaussianProcessSpec.ar1(0.0), 1000, seed=1000 + trial)
        (res,) = permutation_test(series, spec, config, replicates=99, seed=trial)
        rejections += res.p_value <= 0.05
    rate = rejections / 200
    if not 0.01 <= rate <= 0.12:
        _report(8, False, f"white-noise rejection rate {rate:.3f} outside [0.01, 0.12]")
    saturated = []
    for trial in range(10):
        series = simulate(GaussianProcessSpec.ar1(0.95), 1000, seed=2000 + trial)
        (res,) = permutation_test(series, spec, config, replicates=99, seed=trial)
        saturated.append(res.p_value)
    ok = all(p == 0.01 for p in saturated)
    _report(
        8,
        ok,
        f"null calibration rate {rate:.3f} in [0.01, 0.12]; "
        "AR(1) phi=0.95 gives p = 0.01 on every seed",
    )


def test_criterion_9_loss_decomposition():
    series = simulate(GaussianProcessSpec.ar1(0.95), 5000, seed=11)
    y = series.values
    config = EstimatorConfig()
    fhat = estimate_profile(series, InformationSetSpec(1, (1,)), config)
    idx = np.arange(1, len(y))
    resid = y[idx] - 0.95 * y[idx - 1]
    oracle = ProbeEvaluation(
        1, -0.5 * np.log(2 * np.pi) - resid ** 2 / 2.0, idx
    )
    mv = 1.0 / (1.0 - 0.95 ** 2)
    marginal = ProbeEvaluation(
        1, -0.5 * np.log(2 * np.pi * mv) - y[idx] ** 2 / (2 * mv), idx
    )
    dec_oracle = decompose_loss(oracle, series, fhat, config)
    dec_marginal = decompose_loss(marginal, series, fhat, config)

    wn = simulate(GaussianProcessSpec.ar1(0.0), 2000, seed=5)
    fhat_wn = estimate_profile(wn, InformationSetSpec(1, (1,)), config)
    widx = np.arange(1, len(wn))
    wn_marginal = ProbeEvaluation(
        1, -0.5 * np.log(2 * np.pi) - wn.values[widx] ** 2 / 2.0, widx
    )
    dec_wn = decompose_loss(wn_marginal, wn, fhat_wn, config)

    bound_ok = all(
        d.exploitability_nats <= d.forecastability_nats + 0.08
        for d in (dec_oracle, dec_marginal, dec_wn)
    )
    ok = (
        0.85 <= dec_oracle.exploitation_ratio <= 1.1
        and abs(dec_marginal.exploitability_nats) <= 0.05
        and bound_ok
    )
    _report(
        9,
        ok,
        f"oracle probe chi={dec_oracle.exploitation_ratio:.3f} in [0.85, 1.1]; "
        f"marginal probe |X|={abs(dec_marginal.exploitability_nats):.3f} <= 0.05; "
        "X <= F + 0.08 on every fixture",
    )


def test_criterion_10_bounds():
    pinsker = pinsker_bound(0.02).pinsker_tv_bound
    ln8 = math.log(8.0)
    fano = fano_bound(0.0, ln8, 8)
    vacuous_cases = [
        fano_bound(0.0, math.log(2.0), 2).fano_vacuous,
        fano_bound(ln8, ln8, 8).fano_vacuous,
        not fano.fano_vacuous,
    ]
    ok = (
        pinsker == 0.1
        and abs(fano.fano_min_error - (ln8 - 1.0) / ln8) <= 1e-12
        and all(vacuous_cases)
    )
    _report(
        10,
        ok,
        "pinsker(0.02) == 0.1 exactly; fano(0, ln 8, 8) == (ln8-1)/ln8; "
        "vacuous flag on nonpositive values",
    )
