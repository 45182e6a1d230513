"""Seeded check suites behind the ``verify`` command.

Each suite runs a fixed battery of named checks and returns a
:class:`SuiteReport`; every check serializes to one record of the form
``{"check", "params", "observed", "bound", "pass"}``.  Most checks pass
when the observed figure stays inside its bound.  A few are deliberately
inverted: they assert that a documented violation of the naive averaging
bound is still reproducible (see the eta >= d-1 validity notes in
:mod:`hyperdet.locc`), so a healthy run reports them as passing while
keeping the offending value visible in the output.

Default seeds and batch sizes are pinned so that ``verify <suite>`` gives
identical numbers run to run; ``--trials`` rescales the sampled batches.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .cayley import hdet_even, hdet_naive
from .convexroof import (
    DensityMatrix,
    convex_roof_estimate,
    eigen_ensemble,
    mix_density,
    separable_mixture,
)
from .hypermatrix import multilinear_multiply, outer_product
from .locc import (
    lemma1_critical_value,
    lemma1_f,
    lemma1_optimizer_weights,
    monotonicity_trial,
)
from .qstate import (
    PureState,
    apply_local_unitaries,
    concurrence_qubits,
    hdet_quadratic_form,
    measure_hdet,
    measure_tangle,
    ntangle_qubits,
    product_state,
    random_haar_state,
    random_unitary,
)

SUITES = ("props", "locc", "lemma1", "roof")

DEFAULT_SEEDS = {"props": 7, "locc": 1, "lemma1": 777, "roof": 9000}

# Inputs outside the eta >= d-1 validity range on which the averaging bound
# demonstrably fails.  The frozen values were cross-checked against a plain
# log-domain evaluation; the suite re-derives f and only asserts that the
# violation is still there.
BOUND_BREAKERS = (
    (1.0, (0.2, 0.6, 0.7), (0.96, 0.02, 0.02), 1.9245128302812535),
    (0.5, (0.05, 0.6), (0.98, 0.02), 4.139499201196192),
    (2.0, (0.04, 0.6, 0.7, 0.5), (0.97, 0.01, 0.01, 0.01), 1.8680359173902854),
)


@dataclass(frozen=True)
class CheckResult:
    """One named check with its observed value, bound, and verdict."""

    check: str
    params: dict
    observed: float
    bound: float
    passed: bool

    def record(self) -> dict:
        return {
            "check": self.check,
            "params": dict(self.params),
            "observed": self.observed,
            "bound": self.bound,
            "pass": self.passed,
        }


def _at_most(check: str, params: dict, observed, bound) -> CheckResult:
    return CheckResult(check, params, float(observed), float(bound), bool(observed <= bound))


def _at_least(check: str, params: dict, observed, bound) -> CheckResult:
    return CheckResult(check, params, float(observed), float(bound), bool(observed >= bound))


def _breaks_above(check: str, params: dict, observed, bound) -> CheckResult:
    # inverted: the check passes only when the bound is genuinely exceeded
    return CheckResult(check, params, float(observed), float(bound), bool(observed > bound))


def _breaks_below(check: str, params: dict, observed, bound) -> CheckResult:
    return CheckResult(check, params, float(observed), float(bound), bool(observed < bound))


@dataclass(frozen=True)
class SuiteReport:
    """Outcome of one suite: per-check records plus raw samples for plots."""

    suite: str
    seed: int
    checks: tuple[CheckResult, ...]
    elapsed: float
    extras: dict

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def records(self) -> list[dict]:
        return [c.record() for c in self.checks]


def _ginibre(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _rel_gap(value, reference) -> float:
    # relative when the reference is O(1) or larger, absolute below that,
    # so near-zero references cannot inflate the quotient
    return abs(value - reference) / max(1.0, abs(reference))


def _scaled(count: int, trials, base: int) -> int:
    if trials is None:
        return count
    return max(1, count * int(trials) // base)


def suite_props(seed: int = 7, trials: int | None = None) -> SuiteReport:
    """Algebraic identity battery for the hyperdeterminant core.

    Covers the determinant reduction at order 2, agreement of the reduced
    and full signed sums, multiplicativity under per-axis matrix action and
    under outer products, vanishing on product states, local-unitary
    invariance, the qubit quadratic form, and the concurrence and n-tangle
    identities with the GHZ anchor value 1/2.
    """
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    checks: list[CheckResult] = []
    extras: dict = {}

    n_det = _scaled(500, trials, 500)
    errs = np.empty(n_det)
    for i in range(n_det):
        d = 2 + i % 5
        m = _ginibre(rng, (d, d))
        errs[i] = _rel_gap(hdet_even(m, shortcut_order2=False), complex(np.linalg.det(m)))
    extras["order2_errors"] = errs
    checks.append(_at_most("order2_matches_det", {"trials": n_det, "sides": "2..6"}, errs.max(), 1e-10))

    for d, order in ((2, 4), (2, 6), (3, 4)):
        cnt = _scaled(100, trials, 500)
        worst = 0.0
        for _ in range(cnt):
            arr = _ginibre(rng, (d,) * order)
            worst = max(worst, _rel_gap(hdet_even(arr), hdet_naive(arr)))
        checks.append(
            _at_most(
                f"reduced_equals_full_d{d}o{order}",
                {"side": d, "order": order, "trials": cnt},
                worst,
                1e-10,
            )
        )

    for d in (2, 3):
        cnt = _scaled(100, trials, 500)
        worst_mul = 0.0
        worst_out = 0.0
        for _ in range(cnt):
            arr = _ginibre(rng, (d,) * 4)
            mats = [_ginibre(rng, (d, d)) for _ in range(4)]
            lhs = hdet_even(multilinear_multiply(mats, arr))
            rhs = hdet_even(arr) * np.prod([np.linalg.det(m) for m in mats])
            worst_mul = max(worst_mul, _rel_gap(lhs, rhs))

            a2 = _ginibre(rng, (d, d))
            b2 = _ginibre(rng, (d, d))
            lhs = hdet_even(outer_product(a2, b2))
            rhs = math.factorial(d) * np.linalg.det(a2) * np.linalg.det(b2)
            worst_out = max(worst_out, _rel_gap(lhs, rhs))
        checks.append(
            _at_most(f"det_multiplicativity_d{d}", {"side": d, "order": 4, "trials": cnt}, worst_mul, 1e-9)
        )
        checks.append(
            _at_most(f"outer_product_rule_d{d}", {"side": d, "factor_order": 2, "trials": cnt}, worst_out, 1e-9)
        )

    shapes = ((2, 2), (2, 3), (4, 2))
    cnt = _scaled(200, trials, 500)
    vals = np.empty(cnt)
    for i in range(cnt):
        n, d = shapes[i % 3]
        factors = []
        for _ in range(n):
            v = _ginibre(rng, d)
            factors.append(v / np.linalg.norm(v))
        vals[i] = measure_hdet(product_state(factors))
    extras["product_values"] = vals
    checks.append(
        _at_most(
            "product_states_vanish",
            {"shapes": "(n,d) in (2,2),(2,3),(4,2)", "trials": cnt},
            vals.max(),
            1e-12,
        )
    )

    drift = np.empty(cnt)
    for i in range(cnt):
        n, d = shapes[i % 3]
        psi = random_haar_state(n, d, rng)
        mats = [random_unitary(d, rng) for _ in range(n)]
        drift[i] = abs(measure_hdet(apply_local_unitaries(psi, mats)) - measure_hdet(psi))
    extras["lu_drift"] = drift
    checks.append(
        _at_most(
            "local_unitary_invariance",
            {"shapes": "(n,d) in (2,2),(2,3),(4,2)", "trials": cnt},
            drift.max(),
            1e-10,
        )
    )

    sy = np.array([[0.0, -1.0j], [1.0j, 0.0]])
    for nq in (2, 4, 6):
        ref = ((-1.0) ** (nq // 2) / 2.0) * reduce(np.kron, [sy] * nq).real
        gap = np.max(np.abs(hdet_quadratic_form(nq) - ref))
        checks.append(_at_most(f"quadratic_form_matrix_{nq}q", {"qubits": nq}, gap, 1e-14))

    cnt = _scaled(100, trials, 500)
    worst = 0.0
    for i in range(cnt):
        nq = (2, 4, 6)[i % 3]
        psi = random_haar_state(nq, 2, rng)
        qv = psi.amplitudes @ hdet_quadratic_form(nq) @ psi.amplitudes
        hv = hdet_even(psi.amplitudes.reshape((2,) * nq))
        worst = max(worst, abs(qv - hv))
    checks.append(_at_most("quadratic_form_value", {"qubits": "2,4,6", "trials": cnt}, worst, 1e-12))

    cnt = _scaled(200, trials, 500)
    worst_c = 0.0
    worst_t = 0.0
    for i in range(cnt):
        nq = (2, 4, 6)[i % 3]
        psi = random_haar_state(nq, 2, rng)
        worst_c = max(worst_c, abs(concurrence_qubits(psi) - 2.0 * measure_hdet(psi)))
        worst_t = max(worst_t, abs(ntangle_qubits(psi) - 4.0 * measure_tangle(psi)))
    checks.append(_at_most("concurrence_twice_hdet", {"qubits": "2,4,6", "trials": cnt}, worst_c, 1e-10))
    checks.append(_at_most("ntangle_four_times_squared", {"qubits": "2,4,6", "trials": cnt}, worst_t, 1e-10))

    for nq in (2, 4, 6):
        amps = np.zeros(2**nq, dtype=np.complex128)
        amps[0] = amps[-1] = 1.0 / math.sqrt(2.0)
        gap = abs(measure_hdet(PureState(nq, 2, amps)) - 0.5)
        checks.append(_at_most(f"ghz_value_{nq}q", {"qubits": nq}, gap, 1e-12))

    return SuiteReport("props", seed, tuple(checks), time.perf_counter() - t0, extras)


def suite_locc(seed: int = 1, trials: int = 1000) -> SuiteReport:
    """Measurement-averaging battery across (n, d) slices for both measures.

    The |hdet| average and the d <= 2 squared-measure averages are expected
    to stay above -1e-9; the (n=1, d=3) squared-measure slice lies outside
    the averaging bound's validity range, and its check is inverted: it
    passes when at least one sampled margin is genuinely negative.
    """
    t0 = time.perf_counter()
    checks: list[CheckResult] = []
    extras: dict = {}
    full = max(1, int(trials))
    half = max(1, full // 2)
    slices = (
        ("hdet", 1, 2, full, False),
        ("hdet", 2, 2, full, False),
        ("hdet", 1, 3, half, False),
        ("tangle", 1, 2, full, False),
        ("tangle", 2, 2, full, False),
        ("tangle", 1, 3, half, True),
    )
    for k, (which, n, d, cnt, expect_violation) in enumerate(slices):
        base = seed * 1_000_000 + k * 100_000
        margins = np.array([monotonicity_trial(base + i, n, d, which).margin for i in range(cnt)])
        extras[f"margins_{which}_n{n}d{d}"] = margins
        params = {"which": which, "n": n, "d": d, "trials": cnt, "seed_base": base}
        if expect_violation:
            checks.append(_breaks_below(f"average_violated_{which}_n{n}d{d}", params, margins.min(), -1e-9))
        else:
            checks.append(_at_least(f"average_monotone_{which}_n{n}d{d}", params, margins.min(), -1e-9))
    return SuiteReport("locc", seed, tuple(checks), time.perf_counter() - t0, extras)


def suite_lemma1(seed: int = 777, trials: int = 100_000) -> SuiteReport:
    """Averaging-bound battery on its validity range, plus pinned violations.

    Samples f only on the (d, eta) combinations with eta >= d-1, where the
    bound is sound; re-derives the three pinned out-of-range violations;
    and checks the critical value's grid dominance at (d=2, eta=2), its
    global <= 1 bound, and equality with f at the feasible stationary point.
    """
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    checks: list[CheckResult] = []
    extras: dict = {}

    combos = ((2, 1.0), (2, 2.0), (3, 2.0))
    cnt = max(1, int(trials))
    worst = 0.0
    sample = np.empty(min(cnt, 4096))
    for i in range(cnt):
        d, eta = combos[int(rng.integers(len(combos)))]
        a = rng.uniform(0.0, 1.0, d)
        p = rng.dirichlet(np.ones(d))
        f = lemma1_f(a, p, eta)
        worst = max(worst, f)
        if i < sample.size:
            sample[i] = f
    extras["bound_samples"] = sample
    checks.append(
        _at_most(
            "averaging_bound_validity_range",
            {"combos": "(d=2,eta=1) (d=2,eta=2) (d=3,eta=2)", "trials": cnt},
            worst,
            1.0 + 1e-12,
        )
    )

    for eta, alphas, weights, frozen in BOUND_BREAKERS:
        f = lemma1_f(np.array(alphas), np.array(weights), eta)
        params = {
            "eta": eta,
            "alphas": list(alphas),
            "weights": list(weights),
            "frozen_value": frozen,
        }
        checks.append(_breaks_above(f"averaging_bound_violated_d{len(alphas)}_eta{eta:g}", params, f, 1.0 + 1e-9))

    grid_n = 10_000
    tgrid = np.linspace(1.0 / (grid_n + 1), 1.0 - 1.0 / (grid_n + 1), grid_n)
    gaps = np.empty(_scaled(50, trials, 100_000))
    for j in range(gaps.size):
        a = rng.uniform(0.0, 1.0, 2)
        crit = lemma1_critical_value(a, 2.0)
        gmax = max(lemma1_f(a, (t, 1.0 - t), 2.0) for t in tgrid)
        gaps[j] = gmax - crit
    extras["dominance_gaps"] = gaps
    checks.append(
        _at_most(
            "critical_value_dominance_d2_eta2",
            {"alpha_draws": int(gaps.size), "grid_points": grid_n, "eta": 2.0},
            gaps.max(),
            1e-9,
        )
    )

    worst = 0.0
    crit_cnt = _scaled(1000, trials, 100_000)
    for i in range(crit_cnt):
        d = 2 + int(rng.integers(5))
        worst = max(worst, lemma1_critical_value(rng.uniform(0.0, 1.0, d), (0.5, 1.0, 2.0)[i % 3]))
    checks.append(
        _at_most("critical_value_at_most_one", {"trials": crit_cnt, "sides": "2..6"}, worst, 1.0 + 1e-12)
    )

    worst = 0.0
    found = 0
    attempts = 0
    target = _scaled(200, trials, 100_000)
    while found < target and attempts < 100 * target:
        attempts += 1
        d = 2 + int(rng.integers(5))
        a = rng.uniform(0.0, 1.0, d)
        w = lemma1_optimizer_weights(a)
        if w is None:
            continue
        eta = (0.5, 1.0, 2.0)[found % 3]
        worst = max(worst, abs(lemma1_f(a, w, eta) - lemma1_critical_value(a, eta)))
        found += 1
    checks.append(_at_most("stationary_point_equality", {"feasible_draws": found}, worst, 1e-10))

    return SuiteReport("lemma1", seed, tuple(checks), time.perf_counter() - t0, extras)


def _rank_two(rng) -> DensityMatrix:
    w = rng.dirichlet(np.ones(2))
    mat = np.zeros((4, 4), dtype=np.complex128)
    for wi in w:
        v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        v /= np.linalg.norm(v)
        mat += wi * np.outer(v, v.conj())
    return DensityMatrix(2, 2, mat)


def suite_roof(seed: int = 9000, trials: int | None = None) -> SuiteReport:
    """Roof-estimator battery: recovery, separability, convexity, bounds.

    ``trials`` overrides the number of separable instances (default 20);
    the remaining checks are fixed.  Every estimate computed here also
    feeds the reconstruction-residual and eigen-average upper-bound checks.
    """
    t0 = time.perf_counter()
    checks: list[CheckResult] = []
    extras: dict = {}
    recon: list[float] = []
    excess: list[float] = []
    measures = {"hdet": measure_hdet, "tangle": measure_tangle}

    def estimate(rho, which, rseed):
        res = convex_roof_estimate(rho, which, seed=rseed)
        rebuilt = res.best.density_matrix().matrix
        recon.append(float(np.max(np.abs(rebuilt - rho.matrix))))
        excess.append(res.value - eigen_ensemble(rho).average_measure(measures[which]))
        return res

    psi = random_haar_state(2, 2, np.random.default_rng(seed))
    rho_pure = DensityMatrix.from_pure(psi)
    gap = max(
        abs(estimate(rho_pure, "hdet", seed).value - measure_hdet(psi)),
        abs(estimate(rho_pure, "tangle", seed).value - measure_tangle(psi)),
    )
    checks.append(_at_most("pure_state_recovery", {"subsystems": 2, "levels": 2}, gap, 1e-8))

    count = 20 if trials is None else max(1, int(trials))
    values = np.empty(count)
    for i in range(count):
        rng = np.random.default_rng(seed + i)
        k = int(rng.integers(2, 6))
        fsets = []
        for _ in range(k):
            fs = []
            for _ in range(2):
                v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
                fs.append(v / np.linalg.norm(v))
            fsets.append(fs)
        res = estimate(separable_mixture(fsets, rng.dirichlet(np.ones(k))), "hdet", seed + i)
        values[i] = res.value
        if i == 0:
            extras["separable_history"] = np.array(res.history)
    extras["separable_values"] = values
    checks.append(
        _at_most("separable_mixtures_near_zero", {"instances": count, "seed_base": seed}, values.max(), 1e-6)
    )

    mm = DensityMatrix(2, 2, np.eye(4, dtype=np.complex128) / 4.0)
    checks.append(_at_most("maximally_mixed_near_zero", {"levels": 2}, estimate(mm, "hdet", seed + 100).value, 1e-6))

    rng = np.random.default_rng(seed + 500)
    worst = -np.inf
    for j, lam in enumerate((0.3, 0.5, 0.7)):
        rho1 = _rank_two(rng)
        rho2 = _rank_two(rng)
        e1 = estimate(rho1, "hdet", seed + 600 + j).value
        e2 = estimate(rho2, "hdet", seed + 700 + j).value
        emix = estimate(mix_density((rho1, rho2), (lam, 1.0 - lam)), "hdet", seed + 800 + j).value
        worst = max(worst, emix - (lam * e1 + (1.0 - lam) * e2))
    checks.append(_at_most("roof_convexity", {"lambdas": [0.3, 0.5, 0.7]}, worst, 2e-6))

    checks.append(_at_most("ensemble_reconstruction", {"estimates": len(recon)}, max(recon), 1e-8))
    checks.append(_at_most("eigen_average_upper_bound", {"estimates": len(excess)}, max(excess), 1e-12))

    return SuiteReport("roof", seed, tuple(checks), time.perf_counter() - t0, extras)


def run_suite(suite: str, seed: int | None = None, trials: int | None = None) -> SuiteReport:
    """Run one named suite, using its pinned default seed unless overridden."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {', '.join(SUITES)}")
    if seed is None:
        seed = DEFAULT_SEEDS[suite]
    if suite == "props":
        return suite_props(seed, trials)
    if suite == "locc":
        return suite_locc(seed, 1000 if trials is None else int(trials))
    if suite == "lemma1":
        return suite_lemma1(seed, 100_000 if trials is None else int(trials))
    return suite_roof(seed, trials)
