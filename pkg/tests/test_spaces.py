"""Point construction, norms, and arithmetic for the space models."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from banachdiff.errors import EvalFailureError, MalformedPointError
from banachdiff.spaces import (
    Space,
    constant_fn,
    eval_norm,
    linear_combine,
    point_from_dict,
    point_from_json,
    point_to_dict,
    point_to_json,
    pw_from_values,
    pw_point,
    scale,
    seq_point,
    sig,
    step_fn,
    subtract,
    value_at,
    zeros_like,
)

from conftest import GRID, lattice, midpoint_knots

# dyadic rationals with small numerators/denominators: exactly representable
dyadics = st.integers(-256, 256).map(lambda k: k * GRID)


def test_sig_convention():
    assert sig(3.5) == 1.0
    assert sig(-0.25) == -1.0
    assert sig(0.0) == 0.0
    assert sig(-0.0) == 0.0


def test_l1_norm_is_exact_on_the_lattice(rng):
    for _ in range(200):
        coords = lattice(rng, -2.0, 2.0, rng.integers(1, 65))
        x = seq_point(Space.L1_SEQ, coords)
        got = eval_norm(x)
        # independent accumulations; all are exact for lattice data
        assert got.value == math.fsum(abs(c) for c in coords)
        assert got.value == sum(sorted(abs(c) for c in coords))
        assert got.witness is None


def test_sup_norm_witness_is_one_based(rng):
    x = seq_point(Space.LINF_SEQ, [0.5, -3.0, 1.0])
    got = eval_norm(x)
    assert got.value == 3.0
    assert got.witness == 2
    assert eval_norm(seq_point(Space.RT, [0.25])).witness == 1


def test_seq_point_rejects_bad_input():
    with pytest.raises(MalformedPointError):
        seq_point(Space.L1_SEQ, [1.0, float("nan")])
    with pytest.raises(MalformedPointError):
        seq_point(Space.L1_SEQ, [float("inf")])
    with pytest.raises(MalformedPointError):
        seq_point(Space.C_AB, [1.0, 2.0])
    with pytest.raises(MalformedPointError):
        seq_point(Space.L1_SEQ, [])


def test_pl_from_values_round_trips_knot_values(rng):
    for _ in range(50):
        bp = midpoint_knots(rng, int(rng.integers(1, 5)))
        knots = [0.0] + bp + [1.0]
        vals = lattice(rng, -2.0, 2.0, len(knots))
        f = pw_from_values(Space.C_AB, knots, vals)
        for t, v in zip(knots, vals):
            assert value_at(f, t) == v
        # linear interpolation at a segment midpoint is exact too:
        # power-of-two gaps make (v0 + v1)/2 the attained value
        for i in range(len(knots) - 1):
            mid = knots[i] + (knots[i + 1] - knots[i]) / 2.0
            assert value_at(f, mid) == (vals[i] + vals[i + 1]) / 2.0


def test_pl_sup_norm_attained_at_a_knot(rng):
    for _ in range(50):
        bp = midpoint_knots(rng, 3)
        knots = [0.0] + bp + [1.0]
        vals = lattice(rng, -2.0, 2.0, len(knots))
        f = pw_from_values(Space.C_AB, knots, vals)
        got = eval_norm(f)
        assert got.value == max(abs(v) for v in vals)
        assert abs(value_at(f, got.witness)) == got.value


def test_continuity_is_validated_exactly():
    # two segments meeting at 0.5 with a mismatch of one lattice unit
    with pytest.raises(MalformedPointError):
        pw_point(Space.C_AB, 0.0, 1.0, [0.5], [1.0, 1.0], [0.0, GRID])


def test_pw_point_rejects_malformed_domains():
    with pytest.raises(MalformedPointError):
        pw_point(Space.C_AB, 1.0, 0.0, [], [0.0], [0.0])
    with pytest.raises(MalformedPointError):
        pw_point(Space.C_AB, 0.0, 1.0, [0.75, 0.25], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0])
    with pytest.raises(MalformedPointError):
        pw_point(Space.C_AB, 0.0, 1.0, [0.5], [0.0], [0.0])  # length mismatch


def test_window_norm_sees_the_constant_tails():
    # inside the window the function is small; the right tail constant wins
    f = pw_point(Space.LINF_R, 0.0, 1.0, [0.5], [0.0, 0.0], [0.25, -2.0])
    assert eval_norm(f).value == 2.0
    assert value_at(f, 37.0) == -2.0  # constant extension to the right
    assert value_at(f, -5.0) == 0.25


def test_compact_domain_rejects_outside_evaluation():
    f = constant_fn(Space.C_AB, 0.0, 1.0, 1.0)
    with pytest.raises(EvalFailureError):
        value_at(f, 1.5)


def test_value_at_is_right_continuous_at_jumps():
    f = step_fn(Space.LINF_R, 0.0, 1.0, 0.5, -1.0, 2.0)
    assert value_at(f, 0.5) == 2.0
    assert value_at(f, 0.5 - GRID) == -1.0


def test_variation_norm_adds_slopes_and_jumps():
    # f(0)=0, rises with slope 2 to 0.5 (value 1), jumps down to -1,
    # then stays flat: variation = 2*0.5 + |(-1) - 1| = 3
    f = pw_point(Space.NBV_AB, 0.0, 1.0, [0.5], [2.0, 0.0], [0.0, -1.0])
    got = eval_norm(f)
    assert got.value == 3.0
    assert got.witness is None
    assert f.jumps().tolist() == [-2.0]


def test_variation_points_are_anchored_at_zero():
    with pytest.raises(MalformedPointError):
        constant_fn(Space.NBV_AB, 0.0, 1.0, 1.0)
    # anchored constant is fine and has norm 0
    z = constant_fn(Space.NBV_AB, 0.0, 1.0, 0.0)
    assert eval_norm(z).value == 0.0


def test_linear_combine_is_exact_on_lattice_coords(rng):
    for _ in range(100):
        n = int(rng.integers(1, 33))
        xs = lattice(rng, -2.0, 2.0, n)
        ys = lattice(rng, -2.0, 2.0, n)
        x = seq_point(Space.L1_SEQ, xs)
        y = seq_point(Space.L1_SEQ, ys)
        z = linear_combine(1.0, x, -0.5, y)
        assert np.array_equal(z.coords, xs - 0.5 * ys)
    assert eval_norm(subtract(x, x)).value == 0.0


def test_linear_combine_aligns_mismatched_knots():
    # knot gaps are powers of two, so both slopes and pointwise values are
    # exact and the sum can be compared bitwise
    f = pw_from_values(Space.C_AB, [0.0, 0.5, 1.0], [0.0, 1.0, 0.0])
    g = pw_from_values(Space.C_AB, [0.0, 0.25, 0.75, 1.0], [1.0, 0.0, 0.0, 1.0])
    s = linear_combine(1.0, f, 1.0, g)
    for t in (0.0, 0.25, 0.375, 0.5, 0.625, 0.75, 1.0):
        assert value_at(s, t) == value_at(f, t) + value_at(g, t)
    assert set(s.breakpoints.tolist()) == {0.25, 0.5, 0.75}


def test_linear_combine_rejects_space_mixes():
    from banachdiff.errors import SpaceMismatchError

    x = seq_point(Space.L1_SEQ, [1.0])
    y = seq_point(Space.LINF_SEQ, [1.0])
    with pytest.raises(SpaceMismatchError):
        linear_combine(1.0, x, 1.0, y)


def test_zeros_like_and_scale():
    x = seq_point(Space.LINF_SEQ, [1.0, -2.0])
    assert eval_norm(zeros_like(x)).value == 0.0
    assert np.array_equal(scale(-0.5, x).coords, [-0.5, 1.0])
    f = step_fn(Space.NBV_AB, 0.0, 1.0, 0.5, 0.0, 1.0)
    assert eval_norm(scale(4.0, f)).value == 4.0


@pytest.mark.parametrize(
    "point",
    [
        seq_point(Space.L1_SEQ, [1.0, -0.5, 0.0]),
        seq_point(Space.RT, [0.25]),
        pw_from_values(Space.C_AB, [0.0, 0.5, 1.0], [0.0, 1.5, -0.5]),
        pw_point(Space.LINF_R, -1.0, 1.0, [0.0], [1.0, 0.0], [0.5, -2.0]),
        pw_point(Space.NBV_AB, 0.0, 2.0, [1.0], [0.5, 0.0], [0.0, 3.0]),
    ],
)
def test_dict_and_json_round_trips(point):
    assert point_from_dict(point_to_dict(point)) == point
    assert point_from_json(point_to_json(point)) == point


def test_point_from_dict_rejects_garbage():
    with pytest.raises(MalformedPointError):
        point_from_dict({"space": "L1_SEQ"})
    with pytest.raises(MalformedPointError):
        point_from_dict({"space": "NOT_A_SPACE", "coords": [1.0]})
    with pytest.raises(MalformedPointError):
        point_from_json("[not json")


@given(st.lists(dyadics, min_size=1, max_size=20))
def test_seq_round_trip_is_bitwise(coords):
    x = seq_point(Space.LINF_SEQ, coords)
    back = point_from_json(point_to_json(x))
    assert np.array_equal(back.coords, x.coords)


@given(st.lists(dyadics, min_size=1, max_size=20), st.integers(-4, 4))
def test_power_of_two_homogeneity(coords, k):
    # ||c x|| = |c| ||x|| holds bitwise when c is a power of two
    c = 2.0 ** k
    x = seq_point(Space.L1_SEQ, coords)
    assert eval_norm(scale(c, x)).value == c * eval_norm(x).value


@given(
    st.lists(dyadics, min_size=1, max_size=20),
    st.lists(dyadics, min_size=1, max_size=20),
)
def test_triangle_inequality(xs, ys):
    n = min(len(xs), len(ys))
    x = seq_point(Space.L1_SEQ, xs[:n])
    y = seq_point(Space.L1_SEQ, ys[:n])
    lhs = eval_norm(linear_combine(1.0, x, 1.0, y)).value
    assert lhs <= eval_norm(x).value + eval_norm(y).value + 1e-12
