"""Acceptance suite: one test per criterion, each printing a PASS/FAIL
line with its measured slack and runtime.

Criterion 1 (the external-field counterexample gap) is currently expected
to fail: the target gap is not attained by the best Bethe value under any
of the four convention flags.  The test asserts the stated criterion
anyway and reports the measured gaps; see the project notes for the
analysis.
"""

import time

from zbounds import verify


def report(capsys, number, ok, text, elapsed):
    with capsys.disabled():
        status = "PASS" if ok else "FAIL"
        print(f"ACCEPTANCE {number:2d} [{status}] {text} ({elapsed:.1f}s)")


def test_01_counterexample_gap(capsys):
    start = time.perf_counter()
    rep = verify.verify_counterexample(restarts=64, seed=0)
    elapsed = time.perf_counter() - start
    conv = rep.details["convention"]
    gap = rep.details["conventions"][conv]["gap"]
    all_gaps = {
        key: round(val["gap"], 3) for key, val in rep.details["conventions"].items()
    }
    report(
        capsys,
        1,
        rep.ok,
        f"counterexample gap {gap:.3f} vs target {rep.details['target_gap']} "
        f"(all conventions: {all_gaps})",
        elapsed,
    )
    assert elapsed < 30.0
    assert rep.ok, (
        f"best Bethe-vs-exact gap {gap:.3f} is not within 1% of "
        f"{rep.details['target_gap']}; gaps per convention: {all_gaps}"
    )


def test_02_potts_rc_identity(capsys):
    start = time.perf_counter()
    rep = verify.verify_potts_rc_identity(trials=50, seed=20)
    elapsed = time.perf_counter() - start
    report(capsys, 2, rep.ok, rep.summary(), elapsed)
    assert elapsed < 10.0
    assert rep.ok


def test_03_hom_edge_identity(capsys):
    start = time.perf_counter()
    rep = verify.verify_hom_edge_identity(trials=50, seed=21)
    elapsed = time.perf_counter() - start
    report(capsys, 3, rep.ok, rep.summary(), elapsed)
    assert elapsed < 10.0
    assert rep.ok


def test_04_cover_bound_property(capsys):
    start = time.perf_counter()
    rep = verify.verify_cover_bound(trials=100, seed=22)
    elapsed = time.perf_counter() - start
    report(capsys, 4, rep.ok, rep.summary(), elapsed)
    assert elapsed < 60.0
    assert rep.passes == rep.trials == 100


def test_05_component_inequalities(capsys):
    start = time.perf_counter()
    rep_a = verify.verify_component_inequality(seed=23)
    rep_b = verify.verify_field_weight_inequality(trials=1000, seed=23)
    elapsed = time.perf_counter() - start
    ok = rep_a.ok and rep_b.ok
    report(capsys, 5, ok, f"{rep_a.summary()}; {rep_b.summary()}", elapsed)
    assert elapsed < 30.0
    assert rep_a.trials == 512 and rep_a.ok
    assert rep_b.trials == 1000 and rep_b.ok


def test_06_rank_inequality(capsys):
    start = time.perf_counter()
    rep = verify.verify_rank_inequality(seed=24)
    elapsed = time.perf_counter() - start
    report(capsys, 6, rep.ok, rep.summary(), elapsed)
    assert elapsed < 30.0
    assert rep.ok


def test_07_variational_orderings(capsys):
    start = time.perf_counter()
    reps = [
        verify.verify_potts_ordering(trials=30, seed=25, with_field=False),
        verify.verify_potts_ordering(trials=30, seed=26, with_field=True),
        verify.verify_matroid_ordering(trials=30, seed=27),
        verify.verify_hom_ordering(trials=30, seed=28),
    ]
    elapsed = time.perf_counter() - start
    ok = all(r.ok for r in reps)
    passes = sum(r.passes for r in reps)
    trials = sum(r.trials for r in reps)
    worst = min(r.worst_slack for r in reps)
    report(
        capsys, 7, ok,
        f"orderings Z_MF <= Z_B <= Z: {passes}/{trials}, worst slack {worst:.2e}",
        elapsed,
    )
    assert elapsed < 300.0
    assert passes == trials == 120


def test_08_weight_enumerator(capsys):
    start = time.perf_counter()
    rep = verify.verify_weight_enumerator(seed=29)
    elapsed = time.perf_counter() - start
    report(capsys, 8, rep.ok, rep.summary(), elapsed)
    assert elapsed < 10.0
    assert rep.ok


def test_09_tree_exactness_and_gradient(capsys):
    start = time.perf_counter()
    rep_t = verify.verify_tree_exactness(trials=30, seed=30)
    rep_g = verify.verify_gradient(points=20, seed=31)
    elapsed = time.perf_counter() - start
    ok = rep_t.ok and rep_g.ok
    report(capsys, 9, ok, f"{rep_t.summary()}; {rep_g.summary()}", elapsed)
    assert elapsed < 60.0
    assert rep_t.passes == 30
    assert rep_g.passes == 20


def test_10_structure_suites(capsys):
    start = time.perf_counter()
    rep = verify.verify_structure_suites(seed=32)
    elapsed = time.perf_counter() - start
    report(capsys, 10, rep.ok, rep.summary(), elapsed)
    assert elapsed < 60.0
    assert rep.failures == 0
