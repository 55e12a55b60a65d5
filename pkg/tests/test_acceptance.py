"""Acceptance criteria at full size.

Each test records one PASS/FAIL line, printed in the pytest terminal
summary under "acceptance criteria".
"""

import time
from fractions import Fraction

import numpy as np
import pytest

from blackwell_inmi.blackwell import Relation, dominates
from blackwell_inmi.cli import main
from blackwell_inmi.experiments import dichotomy
from blackwell_inmi.harness import CampaignConfig, Theorem, report_to_json, run_campaign
from blackwell_inmi.inmi import InmiRelation, d_inmi, inmi_compare

from .conftest import ACCEPTANCE_LINES

pytestmark = pytest.mark.slow


def record(number, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {title} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def timed_campaign(theorem, **kw):
    t0 = time.perf_counter()
    report = run_campaign(CampaignConfig(theorem, **kw))
    return report, time.perf_counter() - t0


def test_representation_campaign():
    r, dt = timed_campaign(Theorem.REPRESENTATION, trials=10_000, seed=0, size_range=(2, 4))
    ok = r.violations == 0 and r.trials_run == 10_000 and dt < 10
    record(1, "score never worsens under garbling of straightforward A", ok,
           f"violations={r.violations}, max d(A)-d(B)={r.worst_statistic:.3g}, {dt:.1f}s")


def test_contraction_campaign():
    r, dt = timed_campaign(Theorem.CONTRACTION, trials=10_000, seed=0)
    per_kind = {k: v for k, v in r.notes["counts"].items() if k.startswith("violated_")}
    ok = r.violations == 0 and not any(per_kind.values()) and len(per_kind) == 4 and dt < 30
    record(2, "garbling contracts differences in all four norms", ok,
           f"violations={r.violations}, max excess={r.worst_statistic:.3g}, {dt:.1f}s")


def test_translation_campaign():
    r, dt = timed_campaign(Theorem.TRANSLATION, trials=10_000, seed=0)
    frac = r.notes["fractions"]["gamma2_nonstochastic"]
    ok = (
        r.violations == 0
        and r.notes["maxima"]["diagram_residual"] <= 1e-9
        and r.notes["maxima"]["similarity_gap"] <= 1e-8
        and dt < 10
    )
    record(3, "translated garbling commutes and stays similar", ok,
           f"violations={r.violations}, max residual={r.notes['maxima']['diagram_residual']:.2g}, "
           f"max charpoly gap={r.notes['maxima']['similarity_gap']:.2g}, "
           f"non-stochastic gamma2 fraction={frac:.4f}, {dt:.1f}s")


def test_oracle_lp_agreement():
    r, dt = timed_campaign(Theorem.ORACLE_VS_LP, trials=10_000, seed=0)
    ok = r.violations == 0 and dt < 60
    record(4, "inverse oracle and LP agree on dominance", ok,
           f"disagreements={r.violations}, dominated verdicts={r.notes['counts']['dominated_verdict']}, {dt:.1f}s")


def test_dichotomy_closed_form_grid():
    t0 = time.perf_counter()
    worst = 0.0
    for i in range(101):
        for j in range(101):
            a1, a2 = i / 100, j / 100
            worst = max(worst, abs(d_inmi(dichotomy(a1, a2)) - (2 - a1 - a2)))
    dt = time.perf_counter() - t0
    record(5, "dichotomy score equals 2 - a1 - a2 on a 101x101 grid", worst <= 1e-15 and dt < 1,
           f"max deviation={worst:.2g}, {dt:.2f}s")


def test_known_pairs():
    # exact 2x2 adjugate: B inv(A) with det A = 7/10
    a = [[Fraction(9, 10), Fraction(2, 10)], [Fraction(1, 10), Fraction(8, 10)]]
    b = [[Fraction(7, 10), Fraction(4, 10)], [Fraction(3, 10), Fraction(6, 10)]]
    det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
    inv = [[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]]
    exact = np.array([[float(sum(b[i][k] * inv[k][j] for k in range(2))) for j in range(2)] for i in range(2)])
    np.testing.assert_array_equal(exact, np.array([[26, 11], [9, 24]]) / 35)

    v = dominates(dichotomy(0.9, 0.8), dichotomy(0.7, 0.6))
    witness_err = float(np.abs(v.witness.mat - exact).max())
    fwd = dominates(dichotomy(0.9, 0.6), dichotomy(0.6, 0.9))
    back = dominates(dichotomy(0.6, 0.9), dichotomy(0.9, 0.6))
    cmp = inmi_compare(dichotomy(0.9, 0.6), dichotomy(0.6, 0.9))
    ok = (
        v.relation is Relation.DOMINATES
        and witness_err <= 1e-9
        and fwd.relation is Relation.NOT_DOMINATED
        and back.relation is Relation.NOT_DOMINATED
        and cmp.relation is InmiRelation.TIE
        and abs(cmp.score_a - 0.5) <= 1e-12
        and abs(cmp.score_b - 0.5) <= 1e-12
    )
    record(6, "known dominating and unranked dichotomy pairs", ok,
           f"witness error={witness_err:.2g}, unranked pair scores={cmp.score_a:.12g}/{cmp.score_b:.12g}")


def test_limits_campaign():
    r, dt = timed_campaign(Theorem.LIMITS, trials=100, seed=0, steps=200)
    spread = r.notes["maxima"]["final_spread"]
    ok = r.violations == 0 and spread <= 1e-6 and dt < 5
    record(7, "positive garbling chains converge to equal columns", ok,
           f"max spread after 200 steps={spread:.2g}, {dt:.1f}s")


def test_kron_report():
    r, dt = timed_campaign(Theorem.KRON, trials=10_000, seed=0)
    text = report_to_json(r)
    ok = r.trials_run == 10_000 and '"max_violation"' in text and r.notes["informational"] and dt < 60
    record(8, "Kronecker order report generated", ok,
           f"max |d(A(x)B) - d(B(x)A)|={r.worst_statistic:.3g}, {dt:.1f}s")


def test_frobenius_closed_form():
    r, dt = timed_campaign(Theorem.FROBENIUS, trials=10_000, seed=0)
    readings = r.notes["closed_form_readings_matching_direct"]
    ok = r.violations == 0 and bool(readings)
    record(9, "direct Frobenius gap nonnegative and matching closed form identified", ok,
           f"violations={r.violations}, min direct gap={-r.worst_statistic:.3g}, "
           f"matching readings={readings}, {dt:.1f}s")


def test_verify_determinism(tmp_path):
    mismatched = []
    for theorem in Theorem:
        outs = []
        for k, workers in enumerate(("1", "1", "2")):
            p = tmp_path / f"{theorem.value}-{k}.json"
            main(["verify", "--theorem", theorem.value, "--trials", "200", "--seed", "42",
                  "--steps", "50", "--workers", workers, "-o", str(p)])
            outs.append(p.read_bytes())
        if len(set(outs)) != 1:
            mismatched.append(theorem.value)
    record(10, "repeated verify runs give byte-identical JSON", not mismatched,
           f"{len(Theorem)} claims x 3 runs, mismatches={mismatched or 'none'}")
