"""Acceptance suite: one test per exit criterion, at the stated tolerances.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
pass lines and timings. Budgets assume the compiled kernel backend (the
default after installation).
"""

import time

import numpy as np
import pytest

import qcorr as q
from qcorr.cluster import FAMILY_KNOWN_T3

SEED = 20260810


def _scan_csv(family, varying, lo, hi, steps):
    """Run a scan and hand back the rows parsed from the CSV text."""
    import csv
    import io

    text = q.scan_to_csv(q.scan_grid(family, varying, lo, hi, steps))
    rows = []
    for row in csv.DictReader(io.StringIO(text)):
        rows.append({k: (v if k == "family" else float(v)) for k, v in row.items()})
    return rows


def _grid_lookup(rows, **coords):
    hits = [
        r for r in rows if all(abs(r[k] - v) < 1e-12 for k, v in coords.items())
    ]
    assert len(hits) == 1, f"grid point {coords} not unique: {len(hits)} hits"
    return hits[0]


def test_criterion_1_counterexample_reproduction():
    start = time.perf_counter()
    record = q.reproduce_counterexample()
    elapsed = time.perf_counter() - start
    assert record.max_error <= 1e-4
    assert record.values["m_A"] == pytest.approx(0.5643, abs=1e-4)
    assert record.values["m_C"] == pytest.approx(0.2915, abs=1e-4)
    assert record.values["delta_m_C"] == pytest.approx(-0.1151, abs=1e-4)
    assert record.values["delta_tau3_BCD"] == pytest.approx(-0.1964, abs=1e-4)
    assert record.values["delta_tau4"] == pytest.approx(0.08127, abs=1e-4)
    assert elapsed < 1.0
    print(f"\nPASS criterion 1: counterexample reproduced, max error "
          f"{record.max_error:.2e} in {elapsed:.3f}s")


def test_criterion_2_table_equivalence():
    start = time.perf_counter()
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for tag in ("f1", "f2", "f3"):
        n_coeffs = 2 if tag == "f3" else 4
        for _ in range(10_000):
            co = tuple(rng.standard_normal(n_coeffs) + 1j * rng.standard_normal(n_coeffs))
            family = q.ClusterFamily(tag, co)
            closed = q.closed_form_measures(family)
            report = q.correlation_report(q.family_state(family), FAMILY_KNOWN_T3[tag])
            worst = max(worst, abs(closed.tau4 - report.t4), abs(closed.e_ms - report.e_ms))
            for t, v in closed.tau3.items():
                worst = max(worst, abs(v - report.t3[t]))
            for p, v in closed.tau2.items():
                worst = max(worst, abs(v - report.c2_pairs[p]))
            assert worst <= 1e-9, f"{tag} entry off by {worst:.3e} at {co}"
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    print(f"\nPASS criterion 2: 3x10^4 tuples, worst closed-vs-numeric "
          f"{worst:.2e} in {elapsed:.1f}s")


def test_criterion_3_delta_closed_form_identity():
    rng = np.random.default_rng(SEED + 1)
    worst = 0.0
    for _ in range(1000):
        co = tuple(rng.standard_normal(4) + 1j * rng.standard_normal(4))
        alpha, beta = rng.uniform(1e-3, 1 - 1e-3, size=2)
        state = q.family_state(q.ClusterFamily("f2", co))
        for target in ("A", "C"):
            closed = q.delta_ems_closed_family2(co, alpha, beta, target)
            numeric = q.monotonicity_delta("ems", state, target, q.PovmPair(alpha, beta)).delta
            assert closed >= 0.0
            worst = max(worst, abs(closed - numeric))
            assert worst <= 1e-10
    print(f"\nPASS criterion 3: closed-form deltas match numeric within "
          f"{worst:.2e}, all non-negative")


def test_criterion_4_monotonicity_suites():
    start = time.perf_counter()
    monotone = [
        ("ems", "f1"), ("ems", "f2"), ("ems", "f3"), ("ems", "f6"), ("ems", "ghzn"),
        ("m_A", "f1"), ("tau4:f2", "f2"),
    ]
    for measure, generator in monotone:
        report = q.fuzz_campaign(q.FuzzConfig(measure, generator, trials=10_000, seed=SEED))
        assert report.violations == 0, report.summary()
        assert report.min_delta >= -1e-9, report.summary()
        print(f"  {report.summary()}")
    witness = q.fuzz_campaign(q.FuzzConfig("m_C", "f2", trials=10_000, seed=SEED))
    assert witness.violations >= 1, witness.summary()
    print(f"  {witness.summary()}")
    elapsed = time.perf_counter() - start
    assert elapsed < 600.0
    print(f"PASS criterion 4: 8 campaigns of 10^4 trials in {elapsed:.1f}s")


def test_criterion_5_scan_checkpoints():
    rows = _scan_csv(q.ClusterFamily("f1", (0, 0.5, 0.5, 0)), ("a", "d"), 0.0, 5.0, 11)
    point = _grid_lookup(rows, a=0.5, d=0.5)
    assert point["e_ms"] == pytest.approx(1.0, abs=1e-9)

    rows = _scan_csv(q.ClusterFamily("f2", (0, 0.5, 0.5, 0)), ("a", "d"), 0.0, 5.0, 11)
    point = _grid_lookup(rows, a=0.5, d=0.5)
    assert point["e_ms"] == pytest.approx(1.0, abs=1e-9)

    rows = _scan_csv(q.ClusterFamily("f2", (0, 0, 0.5, 0.5)), ("a", "b"), 0.0, 0.7, 2)
    for a_val, b_val in ((0.0, 0.7), (0.7, 0.0)):
        point = _grid_lookup(rows, a=a_val, b=b_val)
        assert point["tau2_ac"] == pytest.approx(0.4999, abs=1e-4)
    print("\nPASS criterion 5: CSV scan checkpoints (cluster maxima, tau2_AC = 0.4999)")


def test_criterion_6_roof_minimizer():
    start = time.perf_counter()
    rng = np.random.default_rng(SEED + 2)
    config = q.RoofConfig(m_values=(2, 3, 4), restarts=7, seed=SEED)  # 21 restarts
    worst_err = worst_spread = 0.0
    for _ in range(1000):
        co = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        state = q.family_state(q.ClusterFamily("f2", tuple(co)))
        a, b, c, d = np.abs(co) / np.linalg.norm(co)
        for keep, closed in (("ABD", 4 * (a * d - b * c) ** 2), ("BCD", 4 * (a * b - c * d) ** 2)):
            result = q.roof_minimize(q.partial_trace(state, keep), "three_tangle", config)
            worst_err = max(worst_err, abs(result.value - closed))
            worst_spread = max(worst_spread, result.spread)
            assert worst_err <= 1e-6
            assert worst_spread <= 1e-6
    psi1, _ = q.make_pure(4, [("0000", 1), ("1111", 1)])
    psi2, _ = q.make_pure(4, [("0011", 1), ("1100", 1)])
    mixture_roof = q.tau4_roof_restricted(q.mixture([psi1, psi2], [0.5, 0.5]), config)
    assert mixture_roof.value <= 1e-8
    elapsed = time.perf_counter() - start
    assert elapsed < 300.0
    print(f"\nPASS criterion 6: 2000 roofs, worst |err| {worst_err:.2e}, "
          f"worst spread {worst_spread:.2e}, mixture roof {mixture_roof.value:.2e}, "
          f"{elapsed:.1f}s")


def test_criterion_7_monogamy_on_haar_states():
    rng = np.random.default_rng(SEED + 3)
    worst = np.inf
    for _ in range(10_000):
        z = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        state = q.PureState(4, z / np.linalg.norm(z))
        worst = min(worst, min(q.residual_correlation(state, k) for k in "ABCD"))
        assert worst >= -1e-9
    print(f"\nPASS criterion 7: 10^4 Haar-random states, min M_k = {worst:.3e}")


def test_criterion_8_haar4_campaign_reported_not_asserted():
    report = q.fuzz_campaign(q.FuzzConfig("ems", "haar4", trials=2000, seed=SEED))
    print(f"\nREPORT criterion 8 (exploratory, no assertion): {report.summary()}")
    assert report.trials == 2000  # ran to completion; the outcome itself is not a target
