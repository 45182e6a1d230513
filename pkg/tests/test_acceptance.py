"""End-to-end acceptance run: every shipped claim at its stated tolerance.

Each suite is executed once through the CLI entry point (so these tests also
exercise the command path) and its per-check records are shared across the
criterion tests below.  Two claims are false as literally stated and carried
as strict xfails with pinned counterexamples: the measurement-average
monotonicity of the squared measure on qutrit pairs, and the averaging bound
outside its validated (length, eta) domain.  See the README's known
limitations section.
"""

import contextlib
import io
import json
import time

import numpy as np
import pytest

from hyperdet import cli, lemma1_f


def _run_verify(name):
    buf = io.StringIO()
    start = time.perf_counter()
    with contextlib.redirect_stdout(buf):
        rc = cli.main(["verify", name])
    wall = time.perf_counter() - start
    records = {}
    for line in buf.getvalue().splitlines():
        if line.startswith("{"):
            rec = json.loads(line)
            records[rec["check"]] = rec
    return {"rc": rc, "wall": wall, "records": records}


@pytest.fixture(scope="module")
def props():
    return _run_verify("props")


@pytest.fixture(scope="module")
def locc():
    return _run_verify("locc")


@pytest.fixture(scope="module")
def lemma1():
    return _run_verify("lemma1")


@pytest.fixture(scope="module")
def roof():
    return _run_verify("roof")


@pytest.fixture(scope="module")
def full_range_max_f():
    # unrestricted re-draw of the averaging-bound inputs: any vector length
    # up to six, any eta in {1/2, 1, 2}; infeasible draws are skipped
    rng = np.random.default_rng(1009)
    top = 0.0
    for _ in range(2000):
        size = int(rng.integers(1, 7))
        alphas = rng.uniform(0.0, 1.0, size=size)
        weights = rng.dirichlet(np.ones(size))
        eta = float(rng.choice([0.5, 1.0, 2.0]))
        try:
            val = lemma1_f(alphas, weights, eta)
        except ValueError:
            continue
        top = max(top, val)
    return top


def _line(num, ok, text):
    print(f"{'PASS' if ok else 'FAIL'} criterion {num}: {text}")


def _observed(run, check):
    rec = run["records"][check]
    return rec["observed"], rec["pass"]


def test_criterion_01_order_two_matches_determinant(props):
    obs, passed = _observed(props, "order2_matches_det")
    ok = passed and obs <= 1e-10 and props["wall"] < 5.0
    _line(1, ok, f"500 matrix hyperdeterminants vs det, max rel err {obs:.3e} <= 1e-10")
    assert passed
    assert obs <= 1e-10
    assert props["wall"] < 5.0


def test_criterion_02_reduced_sum_matches_full_sum(props):
    worst = 0.0
    for check in ("reduced_equals_full_d2o4", "reduced_equals_full_d2o6", "reduced_equals_full_d3o4"):
        obs, passed = _observed(props, check)
        worst = max(worst, obs)
        assert passed, check
    ok = worst <= 1e-10 and props["wall"] < 60.0
    _line(2, ok, f"reduced vs all-permutation sum on 300 cuboids, max rel err {worst:.3e} <= 1e-10")
    assert worst <= 1e-10
    assert props["wall"] < 60.0


def test_criterion_03_multiplicativity_and_outer_rule(props):
    worst = 0.0
    for check in (
        "det_multiplicativity_d2",
        "det_multiplicativity_d3",
        "outer_product_rule_d2",
        "outer_product_rule_d3",
    ):
        obs, passed = _observed(props, check)
        worst = max(worst, obs)
        assert passed, check
    _line(3, worst <= 1e-9, f"multiplicativity and outer rule, max rel err {worst:.3e} <= 1e-9")
    assert worst <= 1e-9


def test_criterion_04_product_states_vanish(props):
    obs, passed = _observed(props, "product_states_vanish")
    _line(4, passed, f"600 product states, max |hdet| {obs:.3e} < 1e-12")
    assert passed
    assert obs < 1e-12


def test_criterion_05_local_unitary_invariance(props):
    obs, passed = _observed(props, "local_unitary_invariance")
    _line(5, passed, f"200 local-unitary pairs, max drift {obs:.3e} <= 1e-10")
    assert passed
    assert obs <= 1e-10


def test_criterion_06_quadratic_form(props):
    worst_m = 0.0
    for check in ("quadratic_form_matrix_2q", "quadratic_form_matrix_4q", "quadratic_form_matrix_6q"):
        obs, passed = _observed(props, check)
        worst_m = max(worst_m, obs)
        assert passed, check
    obs_v, passed_v = _observed(props, "quadratic_form_value")
    ok = worst_m <= 1e-14 and passed_v and obs_v <= 1e-12
    _line(6, ok, f"quadratic form: matrix err {worst_m:.3e} <= 1e-14, value err {obs_v:.3e} <= 1e-12")
    assert worst_m <= 1e-14
    assert passed_v
    assert obs_v <= 1e-12


def test_criterion_07_concurrence_tangle_ghz(props):
    obs_c, passed_c = _observed(props, "concurrence_twice_hdet")
    obs_t, passed_t = _observed(props, "ntangle_four_times_squared")
    worst_g = 0.0
    for check in ("ghz_value_2q", "ghz_value_4q", "ghz_value_6q"):
        obs, passed = _observed(props, check)
        worst_g = max(worst_g, obs)
        assert passed, check
    ok = passed_c and passed_t and obs_c <= 1e-10 and obs_t <= 1e-10 and worst_g <= 1e-12
    _line(
        7,
        ok,
        f"concurrence/tangle identities err {max(obs_c, obs_t):.3e} <= 1e-10,"
        f" GHZ anchor err {worst_g:.3e} <= 1e-12",
    )
    assert passed_c and obs_c <= 1e-10
    assert passed_t and obs_t <= 1e-10
    assert worst_g <= 1e-12


def test_criterion_08_measurement_average_sound_slices(locc):
    worst = 0.0
    for check in (
        "average_monotone_hdet_n1d2",
        "average_monotone_hdet_n2d2",
        "average_monotone_hdet_n1d3",
        "average_monotone_tangle_n1d2",
        "average_monotone_tangle_n2d2",
    ):
        obs, passed = _observed(locc, check)
        worst = min(worst, obs)
        assert passed, check
    ok = worst >= -1e-9 and locc["wall"] < 300.0
    _line(8, ok, f"measurement averages on sound slices, min margin {worst:.3e} >= -1e-9")
    assert worst >= -1e-9
    assert locc["wall"] < 300.0


@pytest.mark.xfail(
    strict=True,
    reason="the squared measure's average genuinely rises for some qutrit-pair"
    " measurements; kept honest instead of loosening the tolerance",
)
def test_criterion_08_full_claim(locc):
    obs, _ = _observed(locc, "average_violated_tangle_n1d3")
    _line(8, obs >= -1e-9, f"squared-measure average on qutrit pairs, min margin {obs:.3e} >= -1e-9")
    assert obs >= -1e-9


def test_criterion_08_qutrit_tangle_counterexample(locc):
    obs, passed = _observed(locc, "average_violated_tangle_n1d3")
    _line(8, passed, f"counterexample confirmed: qutrit-pair squared-measure margin {obs:.3e} < -1e-9")
    assert passed
    assert obs < -1e-9


def test_criterion_09_bound_on_validated_domain(lemma1):
    obs, passed = _observed(lemma1, "averaging_bound_validity_range")
    ok = passed and obs <= 1.0 + 1e-12 and lemma1["wall"] < 300.0
    _line(9, ok, f"averaging bound on validated domain, max f {obs:.15g} <= 1 + 1e-12")
    assert passed
    assert obs <= 1.0 + 1e-12
    assert lemma1["wall"] < 300.0


def test_criterion_09_critical_value_checks(lemma1):
    obs_d, passed_d = _observed(lemma1, "critical_value_dominance_d2_eta2")
    obs_o, passed_o = _observed(lemma1, "critical_value_at_most_one")
    obs_s, passed_s = _observed(lemma1, "stationary_point_equality")
    ok = passed_d and passed_o and passed_s
    _line(
        9,
        ok,
        f"critical value: grid excess {obs_d:.3e} <= 1e-9, max {obs_o:.10g} <= 1,"
        f" stationary gap {obs_s:.3e} <= 1e-10",
    )
    assert passed_d and obs_d <= 1e-9
    assert passed_o and obs_o <= 1.0 + 1e-12
    assert passed_s and obs_s <= 1e-10


@pytest.mark.xfail(
    strict=True,
    reason="the averaging bound fails for short vectors with small eta;"
    " the unrestricted claim is carried red with pinned counterexamples",
)
def test_criterion_09_full_claim(full_range_max_f):
    _line(9, full_range_max_f <= 1.0 + 1e-12, f"unrestricted sampling, max f {full_range_max_f:.6g} <= 1 + 1e-12")
    assert full_range_max_f <= 1.0 + 1e-12


def test_criterion_09_bound_violations_pinned(lemma1, full_range_max_f):
    for check in (
        "averaging_bound_violated_d3_eta1",
        "averaging_bound_violated_d2_eta0.5",
        "averaging_bound_violated_d4_eta2",
    ):
        obs, passed = _observed(lemma1, check)
        assert passed, check
        assert obs > 1.0 + 1e-9
    _line(9, full_range_max_f > 1.0 + 1e-9, f"violations confirmed: unrestricted max f {full_range_max_f:.6g} > 1")
    assert full_range_max_f > 1.0 + 1e-9


def test_criterion_10_roof_estimator(roof):
    obs_p, passed_p = _observed(roof, "pure_state_recovery")
    obs_s, passed_s = _observed(roof, "separable_mixtures_near_zero")
    obs_m, passed_m = _observed(roof, "maximally_mixed_near_zero")
    obs_c, passed_c = _observed(roof, "roof_convexity")
    obs_r, passed_r = _observed(roof, "ensemble_reconstruction")
    obs_e, passed_e = _observed(roof, "eigen_average_upper_bound")
    ok = all((passed_p, passed_s, passed_m, passed_c, passed_r, passed_e)) and roof["wall"] < 600.0
    _line(
        10,
        ok,
        f"roof estimator: pure gap {obs_p:.3e} <= 1e-8, separable max {obs_s:.3e} <= 1e-6,"
        f" mixed {obs_m:.3e}, convexity excess {obs_c:.3e}, wall {roof['wall']:.0f}s < 600s",
    )
    assert passed_p and obs_p <= 1e-8
    assert passed_s and obs_s <= 1e-6
    assert passed_m and obs_m <= 1e-6
    assert passed_c
    assert passed_r and obs_r <= 1e-8
    assert passed_e and obs_e <= 1e-12
    assert roof["wall"] < 600.0


def test_criterion_11_cli_exit_codes(props, locc, lemma1, roof):
    codes = {name: run["rc"] for name, run in (("props", props), ("locc", locc), ("lemma1", lemma1), ("roof", roof))}
    ok = all(rc == 0 for rc in codes.values())
    _line(11, ok, f"verify suites via the CLI all exit 0: {codes}")
    assert codes == {"props": 0, "locc": 0, "lemma1": 0, "roof": 0}
