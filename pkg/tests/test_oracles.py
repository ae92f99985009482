"""Closed-form derivative representations and failure witnesses."""

import numpy as np
import pytest

from banachdiff.errors import (
    NoDoubleMaxError,
    NotInComplementError,
    PreconditionFailedError,
)
from banachdiff.oracles import (
    RepKind,
    apply_rep,
    coeff_rep,
    oracle_Linf,
    oracle_csup,
    oracle_l1,
    oracle_linf,
    point_mass_rep,
    signed_index_rep,
    witness_Linf,
    witness_linf,
    witness_nbv,
    zero_rep,
)
from banachdiff.spaces import (
    Space,
    constant_fn,
    eval_norm,
    pw_from_values,
    pw_point,
    seq_point,
    step_fn,
)

from conftest import GRID, lattice


def test_rep_kinds_police_their_fields():
    with pytest.raises(ValueError):
        signed_index_rep(0, 1.0)
    with pytest.raises(ValueError):
        signed_index_rep(1, 0.5)
    with pytest.raises(ValueError):
        coeff_rep([])
    with pytest.raises(ValueError):
        point_mass_rep(0.5, 1.0, gap=-1.0)


def test_apply_rep_matches_hand_sums():
    h = seq_point(Space.LINF_SEQ, [0.5, -1.0, 2.0])
    assert apply_rep(coeff_rep([1.0, -0.25, 0.5]), h) == 0.5 + 0.25 + 1.0
    assert apply_rep(signed_index_rep(3, -1.0), h) == -2.0
    assert apply_rep(zero_rep(), h) == 0.0
    step = step_fn(Space.LINF_R, 0.0, 1.0, 0.5, -1.0, 3.0)
    assert apply_rep(point_mass_rep(0.75, 1.0), step) == 3.0
    with pytest.raises(PreconditionFailedError):
        apply_rep(signed_index_rep(4, 1.0), h)


def test_sum_norm_oracle_is_the_sign_pattern():
    x = seq_point(Space.L1_SEQ, [1.0, -0.5, 2.0])
    rep = oracle_l1(x)
    assert rep.kind is RepKind.COEFF_SEQ
    assert rep.coeffs == (1.0, -1.0, 1.0)
    assert oracle_l1(seq_point(Space.L1_SEQ, [1.0, 0.0])) is None


def test_max_norm_oracle_requires_strict_dominance():
    x = seq_point(Space.LINF_SEQ, [3.0, 1.0, 0.5])
    rep = oracle_linf(x, 0.25)
    assert (rep.kind, rep.p, rep.sigma, rep.gap) == (RepKind.SIGNED_INDEX, 1, 1.0, 0.25)
    # margin is exactly eps: not strict, no certificate
    assert oracle_linf(seq_point(Space.LINF_SEQ, [1.0, 0.75]), 0.25) is None
    # sign travels with the dominant coordinate
    assert oracle_linf(seq_point(Space.RT, [0.5, -3.0]), 1.0).sigma == -1.0
    with pytest.raises(PreconditionFailedError):
        oracle_linf(x, 0.0)


def test_max_norm_oracle_single_coordinate():
    assert oracle_linf(seq_point(Space.RT, [0.5]), 0.25).p == 1
    assert oracle_linf(seq_point(Space.RT, [0.125]), 0.25) is None


def test_unique_peak_oracle_is_a_point_evaluation():
    f = pw_from_values(Space.C_AB, [0.0, 0.5, 1.0], [0.0, -2.0, 0.0])
    rep = oracle_csup(f, 0.25)
    assert (rep.kind, rep.t0, rep.sigma) == (RepKind.POINT_MASS, 0.5, -1.0)
    assert rep.gap > 0.0
    # the certified first-order identity: removing the remainder exactly
    h = pw_from_values(Space.C_AB, [0.0, 0.5, 1.0], [0.25, 0.125, -0.25])
    t = rep.gap / 4.0
    from banachdiff.spaces import linear_combine

    lhs = eval_norm(linear_combine(1.0, f, t, h)).value
    assert lhs - eval_norm(f).value - t * apply_rep(rep, h) == 0.0


def test_unique_peak_oracle_refuses_ties_and_flat_tops():
    tie = pw_from_values(Space.C_AB, [0.0, 0.25, 0.5, 0.75, 1.0], [0.0, 1.0, 0.0, 1.0, 0.0])
    assert oracle_csup(tie, 0.125) is None
    flat = constant_fn(Space.C_AB, 0.0, 1.0, 1.0)
    assert oracle_csup(flat, 0.125) is None


def test_window_norm_oracle_rejects_edge_peaks():
    interior = pw_from_values(Space.LINF_R, [0.0, 0.5, 1.0], [0.0, 2.0, 0.0])
    assert oracle_Linf(interior, 0.25).t0 == 0.5
    edge = pw_from_values(Space.LINF_R, [0.0, 1.0], [2.0, 0.0])
    assert oracle_Linf(edge, 0.25) is None
    jumpy = step_fn(Space.LINF_R, 0.0, 1.0, 0.5, 0.0, 1.0)
    with pytest.raises(PreconditionFailedError):
        oracle_Linf(jumpy, 0.25)


def test_tie_witness_pushes_one_peak_out_one_in():
    x = seq_point(Space.LINF_SEQ, [2.0, -2.0, 1.0])
    w = witness_linf(x)
    assert w.coords.tolist() == [1.0, 1.0, 0.0]
    with pytest.raises(NotInComplementError):
        witness_linf(seq_point(Space.LINF_SEQ, [2.0, 1.0]))
    # tie_tol widens what counts as tied
    assert witness_linf(seq_point(Space.LINF_SEQ, [2.0, 1.875]), tie_tol=0.25) is not None


def test_tie_witness_at_the_origin_defaults_to_plus_one():
    w = witness_linf(seq_point(Space.LINF_SEQ, [0.0, 0.0]))
    assert w.coords.tolist() == [1.0, -1.0]


def test_double_peak_witness_splits_between_the_peaks():
    f = pw_from_values(
        Space.LINF_R, [0.0, 0.25, 0.5, 0.75, 1.0], [0.0, 2.0, 0.0, -2.0, 0.0]
    )
    w = witness_Linf(f)
    assert w.breakpoints.tolist() == [0.5]  # midpoint of 0.25 and 0.75
    assert (w.intercepts[0], w.intercepts[1]) == (1.0, 1.0)  # +sig, -(-sig)
    with pytest.raises(NoDoubleMaxError):
        witness_Linf(pw_from_values(Space.LINF_R, [0.0, 0.5, 1.0], [0.0, 2.0, 0.0]))
    with pytest.raises(NoDoubleMaxError):
        witness_Linf(constant_fn(Space.LINF_R, 0.0, 1.0, 0.0))


def test_variation_witness_is_a_fresh_unit_jump():
    f = pw_point(Space.NBV_AB, 0.0, 1.0, [0.5], [1.0, 0.0], [0.0, 2.0])
    w = witness_nbv(f)
    assert w.space is Space.NBV_AB
    assert w.breakpoints.shape == (1,)
    at = float(w.breakpoints[0])
    assert 0.0 < at < 1.0 and at != 0.5  # lands where f is continuous
    assert w.jumps().tolist() == [1.0]
    # the anchored constant has no structure but still admits the witness
    assert witness_nbv(constant_fn(Space.NBV_AB, 0.0, 1.0, 0.0)) is not None


def test_witnesses_enforce_their_space(rng):
    with pytest.raises(PreconditionFailedError):
        witness_linf(seq_point(Space.L1_SEQ, lattice(rng, -1.0, 1.0, 4)))
    with pytest.raises(PreconditionFailedError):
        witness_nbv(constant_fn(Space.C_AB, 0.0, 1.0, 0.0))
