import pytest

from errors import BlockError, WindowError
from pe2_core import Weight
from rep_modules import (
    NO_ODD,
    ModuleVector,
    base_apply,
    base_kernel_dim,
    build_proj0,
    build_verma0,
    check_d_squared,
    check_proj0_extension,
    check_representation,
    dump_module,
    endomorphism_dim,
    format_vector,
    induce,
    ker_im_partial,
    projective,
    verma,
)

Y_MINUS = (1, 0, 0)
H_MINUS = (0, 1, 0)
X_MINUS = (0, 0, 1)


def test_module_vector_cancels_to_zero():
    v = ModuleVector({(NO_ODD, ("w", 0)): 3})
    assert not (v - v)
    assert format_vector(v - v) == "0"
    assert format_vector(v) == "3 1 (x) w0"


def test_verma_weight_spaces():
    m = verma((3, 0))
    assert m.basis_at((3, 0)) == [(NO_ODD, ("w", 0))]
    # y_minus (x) w0, h_minus (x) w1, x_minus (x) w2
    assert len(m.basis_at((1, -1))) == 3
    assert m.basis_at((5, 0)) == []


def test_proj0_top_weight_has_two_vectors():
    m = projective((-3, 0))
    assert m.kind == "projective"
    assert m.basis_at((-3, 0)) == [(NO_ODD, ("u", 0)), (NO_ODD, ("v", 0))]


def test_x_on_proj0_generator_lands_in_the_submodule():
    m = projective((-3, 0))
    image = m.act("x", m.generator())
    assert image == ModuleVector({(NO_ODD, ("v", -1)): 1})


def test_odd_lowering_anticommutes():
    m = verma((3, 0))
    v = m.act("h_minus", m.generator())
    assert m.act("x_minus", v) == ModuleVector({((0, 1, 1), ("w", 0)): -1})
    assert not m.act("h_minus", v)


def test_from_pbw_evaluates_outermost_first():
    m = verma((3, 0))
    v = m.from_pbw(("y", "h_minus"))
    assert v == ModuleVector({(Y_MINUS, ("w", 0)): 2, (H_MINUS, ("w", 1)): 1})


def test_d_xi_squares_to_zero():
    m = verma((3, 0))
    weights = [(a, b) for a in range(-3, 6, 2) for b in range(-3, 1)]
    assert check_d_squared(m, weights) == []


@pytest.mark.parametrize("lam, weights", [
    ((1, 0), [(1, 0), (-1, 0), (1, -1), (-1, -1)]),
    ((-3, 0), [(-3, 0), (-5, 0), (-3, -1), (-1, -1)]),
])
def test_module_axioms(lam, weights):
    assert check_representation(projective(lam), weights) == []


def test_ker_equals_image_at_the_top():
    # d_xi kills the generator; d_xi(h_minus (x) w0) = 3 w0 spans the image
    assert ker_im_partial(verma((3, 0)), (3, 0)) == (1, 1)


def test_truncation_raises_window_error():
    m = induce(build_verma0((1, 0), 2))
    with pytest.raises(WindowError):
        m.basis_at((-5, 0))


def test_builders_validate_weights():
    with pytest.raises(BlockError):
        build_verma0((2, 0), 4)
    with pytest.raises(BlockError):
        build_proj0((-1, 0), 4)
    with pytest.raises(ValueError):
        induce(build_verma0((1, 0), 4), weight=(3, 0))


def test_projective_is_verma_above_minus_three():
    assert projective((-1, 0)).kind == "verma"
    assert projective((5, 2)).weight == Weight(5, 2)


def test_dump_module_lists_basis_and_actions():
    doc = dump_module(verma((1, 0)), [(1, 0)])
    assert doc["kind"] == "verma"
    assert doc["basis"] == [{"key": "1 (x) w0", "weight": [1, 0]}]
    assert doc["actions"]["h"] == [["1 (x) w0", "1 (x) w0", "1"]]
    assert doc["actions"]["d_xi"] == []


@pytest.mark.parametrize("lam", [(1, 0), (-5, 0), (3, 0)])
def test_ker_equals_image_at_interior_weights(lam):
    m = projective(lam)
    a, b = lam
    for mu_a in range(a - 12, a + 7, 2):
        for mu_b in range(b - 3, b + 1):
            kernel, image = ker_im_partial(m, (mu_a, mu_b))
            assert kernel == image, (mu_a, mu_b)


@pytest.mark.parametrize("lam", [(-3, 0), (-5, 0), (-7, 1)])
def test_d_xi_squares_to_zero_on_projectives(lam):
    a, b = lam
    weights = [(mu_a, mu_b) for mu_a in range(a - 8, a + 5, 2) for mu_b in range(b - 3, b + 1)]
    assert check_d_squared(projective(lam), weights) == []


@pytest.mark.parametrize("lam", [(-3, 0), (-5, 0), (-9, 2)])
def test_proj0_is_an_extension_of_two_vermas(lam):
    assert check_proj0_extension(build_proj0(lam, 12)) == []


@pytest.mark.parametrize("lam", [(-3, 0), (-5, 0), (-11, 1)])
def test_proj0_has_two_endomorphisms(lam):
    p0 = build_proj0(lam, 16)
    assert base_apply(p0, ("x",) * -lam[0], {("u", 0): 1}) == {}
    assert endomorphism_dim(p0) == 2
    with pytest.raises(ValueError):
        endomorphism_dim(build_verma0((1, 0), 4))


def test_xyx_kernel_on_proj0():
    p0 = build_proj0((-5, 0), 12)
    assert base_kernel_dim(p0, ("x", "y", "x"), (-5, 0)) == 2
    assert base_kernel_dim(p0, ("x", "y", "x"), (-3, 0)) == 0
