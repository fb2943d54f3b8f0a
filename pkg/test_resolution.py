from fractions import Fraction

import pytest

from errors import WindowError
from pe2_core import Weight
from quiver_algebra import Presentation, QuiverAlgebra
from resolution import (
    GradedProjectiveSum,
    ResolutionStep,
    _m_set,
    check_linear_strand,
    coefficient_ratio_report,
    default_algebra,
    ext_agreement,
    ext_dims,
    ext_formula,
    ext_grid_markdown,
    ext_table,
    expected_coefficients,
    formula_support,
    koszul_check,
    koszul_mutation_check,
    linear_strand,
    required_region,
    resolution_to_json,
    resolve,
    strand_equals_resolution,
)


@pytest.fixture(scope="module")
def algebra():
    return QuiverAlgebra(Presentation())


def test_m_set():
    assert _m_set(0) == [0]
    assert _m_set(2) == [4, 0, -4]
    assert _m_set(-1) == []


def test_ext_formula_low_degrees():
    mu = Weight(5, 0)
    assert ext_formula(mu, mu, 0) == 1
    for lam in [(7, 1), (3, 1), (-7, 0)]:
        assert ext_formula(mu, lam, 1) == 1
    assert ext_formula(mu, (5, 1), 1) == 0
    # the zero relation qp at mu
    assert ext_formula(mu, mu, 2) == 1
    assert ext_formula((-1, 0), (-3, 1), 1) == 1
    assert ext_formula((-1, 0), (1, 1), 1) == 0


def test_formula_support():
    assert formula_support((5, 0), 0) == [Weight(5, 0)]
    assert Weight(-7, 0) in formula_support((5, 0), 1)


def test_first_step_follows_the_arrows(algebra):
    steps = resolve(algebra, (5, 0), 1)
    p1 = steps[1].projectives
    assert len(p1) == 3
    for lam in [(7, 1), (3, 1), (-7, 0)]:
        assert p1.count(lam, shift=1) == 1
        assert ext_dims(steps, lam, 1) == 1


def test_minus_one_has_a_single_arrow(algebra):
    steps = resolve(algebra, (-1, 0), 1)
    assert steps[1].projectives.summands == [(Weight(-3, 1), 1)]
    doc = resolution_to_json(steps, (-1, 0))
    assert doc["steps"][1]["projectives"] == [{"vertex": [-3, 1], "shift": 1}]
    assert doc["steps"][1]["boundary"] == [[{"summand": 0, "path": "f'", "source": [-1, 0], "coeff": "1"}]]


@pytest.mark.parametrize("mu", [(5, 0), (3, 0), (1, 0), (-1, 0), (-3, 0), (-5, 0)])
def test_resolutions_are_linear(algebra, mu):
    steps = resolve(algebra, mu, 3)
    assert koszul_check(steps) == (True, None)
    assert strand_equals_resolution(steps)
    assert check_linear_strand(algebra, linear_strand(steps)) == []


@pytest.mark.parametrize("mu", [(5, 0), (1, 0), (-1, 0), (-5, 0)])
def test_ext_table_matches_the_closed_form(algebra, mu):
    rows = ext_table(algebra, mu, 3)
    assert rows
    assert all(r["status"] == "ok" for r in rows), [r for r in rows if r["status"] != "ok"]


def test_dropping_qp_breaks_linearity(algebra):
    koszul, failure = koszul_mutation_check(algebra, (5, 0), n_max=2, relation="qp")
    assert not koszul
    assert failure["n"] == 2
    assert algebra.with_dropped_relation("qp").top_degree == algebra.top_degree
    assert failure["cutoff_reachable"] == (failure["degree"] > algebra.top_degree)


def test_koszul_check_marks_offenders_the_cutoff_can_explain():
    def steps(top_generator_degree):
        return [
            ResolutionStep(0, GradedProjectiveSum([(Weight(5, 0), 0)])),
            ResolutionStep(1, GradedProjectiveSum([(Weight(7, 1), 1)])),
            ResolutionStep(2, GradedProjectiveSum([(Weight(5, 2), 2), (Weight(5, 0), top_generator_degree)])),
        ]

    assert koszul_check(steps(2), 4) == (True, None)
    assert koszul_check(steps(5), 4) == (False, {"n": 2, "vertex": "5,0", "degree": 5, "cutoff_reachable": True})
    assert koszul_check(steps(3), 4)[1]["cutoff_reachable"] is False
    assert "cutoff_reachable" not in koszul_check(steps(3))[1]


def test_required_region():
    assert required_region((5, 0), 3) == (-23, 21, 0, 8)
    algebra = default_algebra([(5, 0)], 1)
    assert algebra.presentation.window == (-19, 17, 0, 6)
    steps = resolve(algebra, (5, 0), 1)
    assert len(steps[1].projectives) == 3


def test_small_window_is_reported():
    small = QuiverAlgebra(Presentation((-3, 3, 0, 2)))
    with pytest.raises(WindowError):
        resolve(small, (1, 0), 2)
    with pytest.raises(WindowError):
        ext_table(small, (1, 0), 2)
    rows = ext_agreement(small, [(1, 0)], 2)
    assert [r["status"] for r in rows] == ["window-limited"] * 3


def test_bad_degrees(algebra):
    with pytest.raises(ValueError):
        resolve(algebra, (5, 0), -1)
    steps = resolve(algebra, (5, 0), 1)
    with pytest.raises(ValueError):
        ext_dims(steps, (5, 0), 4)


def test_expected_coefficients():
    out = expected_coefficients(-7, 3)
    assert out[("mu", 6, 3)] == {("mu", 4, 2): 1}
    assert out[("mu", 2, 3)] == {("mu", 4, 2): 1, ("mu", 0, 2): Fraction(1, 9)}
    assert out[("mu", -2, 3)] == {("mu", 0, 2): 4, ("mu", -4, 2): Fraction(9, 25)}
    assert out[("dual", 0, 2)] == {("mu", 0, 2): 1, ("dual", -2, 1): -6, ("dual", 2, 1): Fraction(-3, 2)}
    assert out[("dual", -4, 2)] == {("mu", 4, 2): 1, ("dual", -2, 1): -2}
    with pytest.raises(ValueError):
        expected_coefficients(1, 2)


def test_coefficient_report_first_step(algebra):
    steps = resolve(algebra, (-7, 0), 1)
    rows = coefficient_ratio_report(steps, (-7, 0))
    assert len(rows) == 3
    assert all(r["status"] == "ok" for r in rows)
    edge = coefficient_ratio_report(resolve(algebra, (-1, 0), 1), (-1, 0))
    assert [r["status"] for r in edge] == ["outside-range"]


def test_ext_grid_markdown(algebra):
    rows = ext_table(algebra, (-1, 0), 1)
    grid = ext_grid_markdown(rows, (-1, 0))
    assert "### n = 0" in grid
    assert "### n = 1" in grid


def test_graded_projective_sum_counts():
    s = GradedProjectiveSum([(Weight(1, 0), 1), (Weight(1, 0), 2), (Weight(3, 1), 1)])
    assert len(s) == 3
    assert s.count((1, 0)) == 2
    assert s.count((1, 0), shift=2) == 1
    assert s.vertices() == [Weight(1, 0), Weight(1, 0), Weight(3, 1)]


def test_third_ext_of_minus_seven():
    mu = (-7, 0)
    rows = [r for r in ext_table(default_algebra([mu], 3), mu, 3) if r["n"] == 3]
    assert len(rows) == 7
    assert all(r["computed"] == r["formula"] == 1 for r in rows)


@pytest.mark.slow
@pytest.mark.parametrize("a", range(-9, 10, 2))
def test_ext_and_koszul_across_nine(a):
    mu = (a, 0)
    algebra = default_algebra([mu], 4)
    steps = resolve(algebra, mu, 4)
    assert koszul_check(steps) == (True, None)
    rows = ext_table(algebra, mu, 4, steps)
    assert rows
    assert all(r["status"] == "ok" for r in rows), [r for r in rows if r["status"] != "ok"]
