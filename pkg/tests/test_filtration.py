import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import display_frames, dual, relative
from wittdisp.displays import display_build, identity_datum, random_datum
from wittdisp.errors import NotAdmissible
from wittdisp.filtration import Lifting, admissible_check, display_lift, hodge_fil
from wittdisp.frames import frame_relative
from wittdisp.ring import Ideal, RingHom

FRAMES = display_frames()


def lift_vec(S, x):
    return S.from_vector(list(x.vec) + [0] * (S.dim - len(x.vec)))


def hodge_as_lifting(P):
    S = P.frame.S
    fil = hodge_fil(P)
    steps = [[[lift_vec(S, x) for x in v] for v in fil.basis(i)] for i in range(P.i_max + 1)]
    return Lifting(S, P.level(0).rank, steps)


def zero_kernel_frame():
    S = dual(2)
    return frame_relative(RingHom(S, S, {"e": "e"}), Ideal(S, [], pd="trivial"), 3)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, len(FRAMES) - 1), st.integers(0, 3), st.integers(0, 10 ** 6))
def test_hodge_ranks_are_tail_sums(k, d, seed):
    rng = random.Random(seed)
    ranks = tuple(rng.randrange(0, 3) for _ in range(d + 1))
    if not sum(ranks):
        ranks = (1,) + ranks[1:]
    P = display_build(random_datum(FRAMES[k], d, ranks, rng))
    fil = hodge_fil(P)
    assert fil.ranks() == [sum(ranks[i:]) for i in range(d + 1)] + [0]
    assert fil.is_summand_chain()


def test_rank_one_one_example():
    P = display_build(identity_datum(FRAMES[1], 1, (1, 1)))
    fil = hodge_fil(P)
    assert fil.ranks() == [2, 1, 0]
    assert fil.basis(2) == []


@pytest.mark.parametrize("frame", [FRAMES[1], zero_kernel_frame()], ids=["square-zero", "zero ideal"])
@pytest.mark.parametrize("d", [1, 2])
def test_hodge_filtration_itself_lifts(frame, d):
    rng = random.Random(d)
    P = display_build(random_datum(frame, d, (1,) * (d + 1), rng))
    E = hodge_as_lifting(P)
    assert admissible_check(E, P).ok
    L = display_lift(P, E)
    assert L.round_trip_a().ok
    assert L.round_trip_b().ok


def test_every_square_zero_lifting_in_degree_one():
    F = FRAMES[1]
    S = F.S
    P = display_build(random_datum(F, 1, (1, 1), random.Random(7)))
    for a in F.ideal.elements():
        E = Lifting(S, 2, [[[S.one, S.zero], [S.zero, S.one]], [[a, S.one]]])
        assert admissible_check(E, P).ok
        L = display_lift(P, E)
        assert L.round_trip_a().ok and L.round_trip_b().ok


def test_zero_ideal_admits_only_the_hodge_filtration():
    F = zero_kernel_frame()
    S = F.S
    P = display_build(identity_datum(F, 1, (1, 1)))
    E = Lifting(S, 2, [[[S.one, S.zero], [S.zero, S.one]], [[S.gen("e"), S.one]]])
    res = admissible_check(E, P)
    assert not res.ok and res.failures
    with pytest.raises(NotAdmissible):
        display_lift(P, E)


def test_liftings_outside_the_images_are_rejected():
    F = FRAMES[1]
    S = F.S
    P = display_build(identity_datum(F, 1, (1, 1)))
    wrong_rank = Lifting(S, 2, [[[S.one, S.zero], [S.zero, S.one]], []])
    assert not admissible_check(wrong_rank, P).ok
    not_summand = Lifting(S, 2, [[[S.one, S.zero], [S.zero, S.one]], [[S.zero, S.gen("e")]]])
    assert not admissible_check(not_summand, P).ok
    wrong_residue = Lifting(S, 2, [[[S.one, S.zero], [S.zero, S.one]], [[S.one, S.zero]]])
    assert not admissible_check(wrong_residue, P).ok
