from fractions import Fraction

import pytest

from errors import BlockError
from pe2_core import (
    BRACKET_TABLE,
    GENERATORS,
    Weight,
    arrow_target,
    arrows_out,
    block_of,
    bracket,
    check_arrow_blocks,
    check_root_additivity,
    check_super_antisymmetry,
    check_super_jacobi,
    dual,
    in_odd_block,
    parse_weight,
    parity,
    require_odd,
    weight_of_word,
)


def test_table_is_complete():
    assert len(BRACKET_TABLE) == len(GENERATORS) ** 2


@pytest.mark.parametrize("g1, g2, expected", [
    ("h", "x", {"x": 2}),
    ("h", "y", {"y": -2}),
    ("x", "y", {"h": 1}),
    ("x", "y_minus", {"h_minus": 1}),
    ("h", "x_minus", {"x_minus": 2}),
    ("xi_dxi", "x_minus", {"x_minus": 1}),
    ("xi_dxi", "d_xi", {"d_xi": -1}),
    ("d_xi", "x_minus", {"x": 1}),
    ("h_minus", "d_xi", {"h": 1}),
    ("d_xi", "d_xi", {}),
    ("x_minus", "y_minus", {}),
])
def test_brackets(g1, g2, expected):
    assert bracket(g1, g2) == {k: Fraction(v) for k, v in expected.items()}


def test_unknown_generator():
    with pytest.raises(KeyError):
        bracket("x", "z")


def test_structure_checks_pass():
    assert check_super_antisymmetry() == []
    assert check_super_jacobi() == []
    assert check_root_additivity() == []


def test_parity_and_roots():
    assert parity("d_xi") == 1
    assert parity("xi_dxi") == 0
    assert weight_of_word(["y_minus", "x_minus"]) == Weight(0, -2)


@pytest.mark.parametrize("w, block", [
    ((1, 0), "odd0"),
    ((1, 1), "odd1"),
    ((3, 1), "odd0"),
    ((-1, 1), "odd0"),
    ((2, 0), "even"),
])
def test_block_of(w, block):
    assert block_of(w) == block
    assert in_odd_block(w) == (block == "odd0")


def test_require_odd_and_parse():
    assert require_odd((5, 0)) == Weight(5, 0)
    assert parse_weight("-3,2") == Weight(-3, 2)
    with pytest.raises(BlockError):
        require_odd((2, 0))
    with pytest.raises(BlockError):
        parse_weight("five")


def test_dual_is_an_involution():
    w = Weight(5, 3)
    assert dual(w) == Weight(-7, 3)
    assert dual(dual(w)) == w
    assert w.dual() == dual(w)


def test_arrows_by_class():
    assert [t for t, _ in arrows_out((5, 0))] == ["f", "g", "p"]
    assert [t for t, _ in arrows_out((1, 0))] == ["f", "p"]
    assert [t for t, _ in arrows_out((-1, 0))] == ["fprime"]
    assert [t for t, _ in arrows_out((-5, 0))] == ["q", "fprime", "gprime"]
    assert arrow_target("g", (1, 0)) is None
    assert arrow_target("q", (-3, 2)) == Weight(1, 2)


def test_arrows_stay_in_their_block():
    weights = [(a, b) for a in range(-11, 12, 2) for b in range(-2, 3)]
    assert check_arrow_blocks(weights) == []
