import math

import numpy as np
import pytest

from isocov import (
    CriterionSpec,
    DecisionProblem,
    Method,
    Nature,
    ResolvedCriterion,
    normalize,
    rank_isocov,
    resolve,
    satisfaction_degree,
    satisfaction_matrix,
    score,
    weighted_matrix,
)
from isocov.engine import DEGENERATE_CLOSENESS, InvariantError, RankingReport, ScoreRow, check_report

from conftest import read_expected
from oracles import degree_oracle

# case-study hop counts, a1..a27
HOPS = [7, 6, 5, 5, 5, 4, 5, 4, 3, 5, 6, 4, 4, 5, 6, 4, 3, 4, 6, 7, 5, 5, 5, 4, 3, 4, 5]


def _rc(nature, a, b, lo, hi):
    return ResolvedCriterion(CriterionSpec("q", nature, 1.0), lo, hi, a, b)


@pytest.mark.parametrize(
    "nature, d, a, b, lo, hi, expected",
    [
        (Nature.BENEFIT, 1571.428571, 1600, 2025, 1500, 2025, 0.7171),
        (Nature.COST, 5, 3, 5, 3, 7, 1 / 3),
        (Nature.COST, 7, 3, 5, 3, 7, 1.0),
        (Nature.COST, 0.001944, 0.002, 0.004, 0.001874, 0.004643, 0.0871),
    ],
)
def test_degree_matches_table3_cells(nature, d, a, b, lo, hi, expected):
    crit = _rc(nature, a, b, lo, hi)
    got = satisfaction_degree(d, crit)
    assert got == pytest.approx(expected, abs=5e-5)
    assert got == degree_oracle(d, nature is Nature.BENEFIT, a, b, lo, hi)


def test_degree_inside_branches():
    assert satisfaction_degree(1800, _rc(Nature.BENEFIT, 1600, 2025, 1500, 2025)) == 1.0
    assert satisfaction_degree(4, _rc(Nature.COST, 3, 7, 3, 7)) == 1.0
    assert satisfaction_degree(4, _rc(Nature.BENEFIT, 3, 7, 3, 7)) == 1.0


def test_degree_boundaries_are_inside():
    crit = _rc(Nature.COST, 3, 5, 3, 7)
    assert satisfaction_degree(5, crit) == satisfaction_degree(3, crit) == pytest.approx(1 / 3)


def test_degree_rejects_out_of_range_rating():
    with pytest.raises(ValueError):
        satisfaction_degree(8, _rc(Nature.COST, 3, 5, 3, 7))


def test_satisfaction_matrix_table3(case_study):
    F = satisfaction_matrix(case_study, resolve(case_study))
    expected = read_expected("expected_table3.csv")
    names = [c.name for c in case_study.criteria]
    table = np.array([[float(row[n]) for n in names] for row in expected])
    assert np.max(np.abs(F.degrees - table)) < 1e-3
    flagged = [a for a, v in zip(case_study.alternatives, F.v_flags) if v]
    assert flagged == ["a4", "a9", "a23", "a24"]
    assert [int(r["V"]) for r in expected] == [int(v) for v in F.v_flags]


def test_satisfaction_matrix_open_constraints(case_study):
    open_problem = case_study.with_open_constraints()
    F = satisfaction_matrix(open_problem, resolve(open_problem))
    assert np.all(F.degrees == 1.0)
    assert F.v_flags.all()


def test_satisfaction_matrix_single_route():
    crit = [CriterionSpec("d", Nature.COST, 0.5), CriterionSpec("r", Nature.BENEFIT, 0.5)]
    p = DecisionProblem(["only"], crit, [[3.0, 10.0]])
    F = satisfaction_matrix(p, resolve(p))
    assert F.degrees.shape == (1, 2)
    assert F.v_flags.tolist() == [True]


def test_normalize_hop_count_column(case_study):
    assert sum(h * h for h in HOPS) == 647
    N = normalize(case_study)
    assert N[0, 0] == pytest.approx(7 / math.sqrt(647), abs=1e-15)
    assert N[0, 0] == pytest.approx(0.27520, abs=5e-6)


def test_normalize_degenerate_columns():
    crit = [CriterionSpec("c", Nature.COST, 0.5), CriterionSpec("z", Nature.COST, 0.5)]
    p = DecisionProblem(["a", "b", "c", "d"], crit, [[2.0, 0.0]] * 4)
    N = normalize(p)
    assert np.allclose(N[:, 0], 1 / math.sqrt(4), atol=1e-15)
    assert np.all(N[:, 1] == 0)


def test_weighted_matrix_table4_and_ideals(case_study):
    resolved = resolve(case_study)
    F = satisfaction_matrix(case_study, resolved)
    wm = weighted_matrix(case_study, resolved, F)
    names = [c.name for c in case_study.criteria]
    table = np.array([[float(r[n]) for n in names] for r in read_expected("expected_table4.csv")])
    assert np.max(np.abs(wm.weighted - table)) < 1e-4
    a4 = case_study.alternatives.index("a4")
    assert wm.weighted[a4] == pytest.approx([0.0033, 0.009, 0.004, 0.0313, 0.063, 0.0429], abs=1e-4)
    assert wm.pis == pytest.approx([0.002, 0.0114, 0.0021, 0.0467, 0.0009, 0.0022], abs=1e-4)
    assert wm.nis == pytest.approx([0.0138, 0.00008, 0.0583, 0.0002, 0.0874, 0.0502], abs=1e-4)
    np.testing.assert_array_equal(wm.weighted, wm.normalized * case_study.weights * F.degrees)


def test_weighted_matrix_zero_weight_column():
    crit = [CriterionSpec("a", Nature.COST, 0.0), CriterionSpec("b", Nature.BENEFIT, 1.0)]
    p = DecisionProblem(["x", "y", "z"], crit, [[1.0, 2.0], [2.0, 3.0], [3.0, 1.0]])
    wm = weighted_matrix(p, resolve(p), satisfaction_matrix(p, resolve(p)))
    assert np.all(wm.weighted[:, 0] == 0)
    assert wm.pis[0] == wm.nis[0] == 0


def test_score_a4_against_printed_tables(case_study):
    # straight Euclidean recomputation from the printed (rounded) P row and R+/R-
    p = [0.0033, 0.009, 0.004, 0.0313, 0.063, 0.0429]
    r_plus = [0.002, 0.0114, 0.0021, 0.0467, 0.0009, 0.0022]
    r_minus = [0.0138, 0.00008, 0.0583, 0.0002, 0.0874, 0.0502]
    s_plus = math.sqrt(sum((a - b) ** 2 for a, b in zip(r_plus, p)))
    s_minus = math.sqrt(sum((a - b) ** 2 for a, b in zip(p, r_minus)))
    row = rank_isocov(case_study, hard=True).by_alternative()["a4"]
    assert row.s_plus == pytest.approx(s_plus, abs=1e-4)
    assert row.s_minus == pytest.approx(s_minus, abs=1e-4)
    assert row.closeness == pytest.approx(s_minus / (s_minus + s_plus), abs=1e-3)
    assert row.closeness == pytest.approx(0.4757, abs=5e-5)


def test_hard_and_soft_headline_rows(case_study):
    hard = rank_isocov(case_study, hard=True).by_alternative()
    assert hard["a1"].score == pytest.approx(-0.792, abs=5e-4) and hard["a1"].rank == 27
    assert hard["a9"].score == pytest.approx(0.6008, abs=5e-5) and hard["a9"].rank == 1
    soft = rank_isocov(case_study, hard=False).by_alternative()
    assert soft["a25"].score == pytest.approx(0.945, abs=5e-4) and soft["a25"].rank == 1
    assert soft["a9"].score == pytest.approx(0.6008, abs=5e-5) and soft["a9"].rank == 11


def test_hard_flag_taken_from_problem(case_study):
    assert rank_isocov(case_study).method is Method.ISOCOV_HARD
    assert rank_isocov(case_study.with_hard(False)).method is Method.ISOCOV_SOFT


def test_all_satisfied_hard_equals_soft(case_study):
    open_problem = case_study.with_open_constraints()
    hard = rank_isocov(open_problem, hard=True)
    soft = rank_isocov(open_problem, hard=False)
    assert [(r.alternative, r.score, r.rank) for r in hard.rows] == [
        (r.alternative, r.score, r.rank) for r in soft.rows
    ]


def test_single_alternative_uses_degenerate_closeness():
    p = DecisionProblem(["only"], [CriterionSpec("d", Nature.COST, 1.0)], [[5.0]], hard=True)
    report = rank_isocov(p)
    (row,) = report.rows
    assert row.rank == 1
    assert row.closeness == DEGENERATE_CLOSENESS
    assert row.score == DEGENERATE_CLOSENESS
    assert row.v_flag


def test_identical_rows_tie_in_input_order():
    crit = [CriterionSpec("d", Nature.COST, 0.5), CriterionSpec("r", Nature.BENEFIT, 0.5)]
    p = DecisionProblem(["b", "a", "c"], crit, [[2.0, 5.0]] * 3)
    report = rank_isocov(p, hard=False)
    assert [r.alternative for r in report.rows] == ["b", "a", "c"]
    assert all(r.closeness == 0.5 for r in report.rows)


def test_score_returns_input_order(case_study):
    resolved = resolve(case_study)
    F = satisfaction_matrix(case_study, resolved)
    rows = score(case_study, weighted_matrix(case_study, resolved, F), F, hard=True)
    assert [r.alternative for r in rows] == list(case_study.alternatives)


def test_report_rows_sorted_and_intermediates_kept(case_study):
    report = rank_isocov(case_study)
    assert [r.rank for r in report.rows] == list(range(1, 28))
    assert report.best.alternative == "a9"
    assert report.intermediates.degrees.shape == (27, 6)
    assert [r.alternative for r in report.in_input_order()] == list(case_study.alternatives)


def test_check_report_catches_bad_ranks():
    rows = (
        ScoreRow("a", 0.1, 0.1, 0.5, 0.5, True, 2),
        ScoreRow("b", 0.1, 0.1, 0.5, 0.5, True, 1),
    )
    with pytest.raises(InvariantError):
        check_report(RankingReport(Method.ISOCOV_SOFT, rows))


def test_check_report_catches_hard_score_out_of_class():
    rows = (ScoreRow("a", 0.1, 0.1, 0.5, 0.5, False, 1),)
    with pytest.raises(InvariantError):
        check_report(RankingReport(Method.ISOCOV_HARD, rows))


def test_rank_isocov_is_deterministic(case_study):
    first = rank_isocov(case_study)
    second = rank_isocov(case_study)
    assert first.rows == second.rows


def test_hard_tie_at_zero_goes_to_satisfying_route():
    # r0 violates and has closeness 1 -> score 0; r1 satisfies with closeness 0 -> score 0
    crit = [CriterionSpec("c0", Nature.BENEFIT, 0.5), CriterionSpec("c1", Nature.COST, 0.5, 1.0, None)]
    p = DecisionProblem(["r0", "r1"], crit, [[0.0, 0.0], [0.0, 1.0]])
    hard = rank_isocov(p, hard=True)
    assert [r.score for r in hard.rows] == [0.0, 0.0]
    assert [(r.alternative, r.v_flag) for r in hard.rows] == [("r1", True), ("r0", False)]
    soft = rank_isocov(p, hard=False)
    assert [r.alternative for r in soft.rows] == ["r0", "r1"]
