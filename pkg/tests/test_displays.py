import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import display_frames, dual
from wittdisp.abelian import (adjunction_counts, cokernel, hom_enumerate, kernel, kernel_inclusion,
                              level_elements)
from wittdisp.displays import (StandardDatum, base_change, display_build, identity_datum,
                               identity_morphism, morphism_check, predisplay_check,
                               predisplay_dsum, pullback, random_datum, scalar_morphism,
                               tilde_extend)
from wittdisp.errors import DatumInvalid, ShapeMismatch
from wittdisp.frames import frame_hom_make, frame_relative, frame_witt
from wittdisp.ring import Ideal, RingHom, ring_make
from wittdisp.witt import WittEl

FRAMES = display_frames()


def shapes():
    return st.integers(0, 3).flatmap(
        lambda d: st.tuples(st.just(d), st.lists(st.integers(0, 2), min_size=d + 1, max_size=d + 1)
                            .filter(lambda r: sum(r) > 0).map(tuple)))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, len(FRAMES) - 1), shapes(), st.integers(0, 10 ** 6))
def test_random_data_give_predisplays(k, shape, seed):
    d, ranks = shape
    F = FRAMES[k]
    datum = random_datum(F, d, ranks, random.Random(seed))
    rep = predisplay_check(display_build(datum), samples=3, seed=seed)
    assert rep.ok, rep.lines()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, len(FRAMES) - 1), st.integers(1, 3), st.integers(0, 10 ** 6))
def test_single_entry_faults_are_detected(k, d, seed):
    rng = random.Random(seed)
    F = FRAMES[k]
    ranks = (1,) * (d + 1)
    P = display_build(random_datum(F, d, ranks, rng))
    i = rng.randrange(1, d + 1)
    j = rng.randrange(0, i + 1)
    P.inject_fault(i, j, rng.randrange(d + 1), 0, WittEl.one(F.S, F.prec))
    rep = predisplay_check(P, samples=4, seed=seed)
    assert not rep.ok
    assert all(r.witness for r in rep.failures())


def test_tilde_extension():
    F = FRAMES[0]
    zero = tilde_extend(F, lambda m: (WittEl.zero(F.S, F.prec - 1),))
    rng = random.Random(0)
    eta = F.j_random(rng)
    assert zero(eta, None)[0].is_zero()
    one = WittEl.one(F.S, F.prec - 1)
    v1 = F.j(xi=one)
    img = (WittEl(F.S, [1, "e"]), )
    f = tilde_extend(F, lambda m: img)
    assert f(v1, None) == img
    w = F.W.random(rng)
    assert f(F.j_scale(w, eta), None)[0] == F.sigma(w) * f(eta, None)[0]


def test_divided_frobenius_of_identity_datum():
    F = frame_witt(ring_make(2, 1), 3)
    P = display_build(identity_datum(F, 1, (1, 1)))
    rng = random.Random(1)
    for _ in range(10):
        x0, x1 = F.W.random(rng), F.W.random(rng)
        got = P.F(0, (x0, x1))
        assert got == (F.sigma(x0), F.sigma(x1) * 2)
    Q = display_build(identity_datum(F, 1, (1, 1)), i_max=0)
    assert len(Q.levels) == 1 and Q.level(0).slots == [(0, 0), (1, 0)]


def test_invalid_data_are_rejected():
    F = FRAMES[1]
    e = WittEl(F.S, ["e", 0, 0])
    with pytest.raises(DatumInvalid) as info:
        StandardDatum(F, 1, (1, 1), [[[e], [0]], [[0], [1]]])
    assert info.value.witness
    with pytest.raises(ShapeMismatch):
        StandardDatum(F, 1, (1, 1), [[[1]], [[0], [1]]])


def test_direct_sum_and_identity_morphism():
    F = FRAMES[1]
    rng = random.Random(2)
    P = display_build(random_datum(F, 1, (1, 1), rng))
    Q = display_build(random_datum(F, 1, (1, 0), rng))
    assert predisplay_dsum(P, Q).check(samples=4).ok
    assert morphism_check(identity_morphism(P)).ok
    # only Frobenius-fixed scalars commute with the divided Frobenius
    assert morphism_check(scalar_morphism(P, F.W.from_int(3))).ok


def small_display():
    F = frame_witt(ring_make(2, 1), 2)
    return F, display_build(identity_datum(F, 0, (1,)))


def test_kernels_and_cokernels():
    F, P = small_display()
    K = kernel(identity_morphism(P))
    assert all(lv.size == 1 for lv in K.levels)
    zero = scalar_morphism(P, F.W.zero())
    K0 = kernel(zero)
    assert [lv.size for lv in K0.levels] == [len(level_elements(lv)) for lv in P.levels]
    Kp = kernel(scalar_morphism(P, F.W.from_int(2)))
    assert predisplay_check(Kp, samples=4).ok
    assert morphism_check(kernel_inclusion(scalar_morphism(P, F.W.from_int(2)))).ok
    C = cokernel(identity_morphism(P))
    assert all(lv.size == 1 for lv in C.levels)


def test_morphism_count_matches_scalar_enumeration():
    # every endomorphism of a rank one display with d = 0 is a scalar
    F, P = small_display()
    scalars = [w for w in F.W.elements() if morphism_check(scalar_morphism(P, w), samples=4).ok]
    assert len(hom_enumerate(P, P)) == len(scalars) == 4


def test_pullback_and_base_change():
    S = dual(2)
    F2 = ring_make(2, 1)
    WS, WF = frame_witt(S, 2), frame_witt(F2, 2)
    rng = random.Random(4)
    ident = frame_hom_make("sub_relative", WS, frame_relative(
        RingHom(S, S, {"e": "e"}), Ideal(S, [], pd="trivial"), 2))
    D = random_datum(WS, 1, (1, 1), rng)
    assert base_change(ident, D).Phi == D.Phi
    red = frame_hom_make("witt_functorial", WS, WF, RingHom(S, F2, {"e": 0}))
    E = base_change(red, D)
    for MS, MF in zip(D.Phi, E.Phi):
        for rs, rf in zip(MS, MF):
            assert [x.comps[k].vec[0] for x in rs for k in range(2)] == \
                   [y.comps[k].vec[0] for y in rf for k in range(2)]
    assert predisplay_check(display_build(E), samples=4).ok
    Q = display_build(random_datum(WF, 1, (1, 1), rng))
    assert predisplay_check(pullback(red, Q), samples=4).ok
    P = display_build(D)
    same = pullback(ident, display_build(base_change(ident, D)))
    assert [lv.slots for lv in same.levels] == [lv.slots for lv in P.levels]


@pytest.mark.parametrize("d", [0, 1])
def test_adjunction_counts_agree(d):
    S = dual(2)
    F2 = ring_make(2, 1)
    WS, WF = frame_witt(S, 2), frame_witt(F2, 2)
    u = frame_hom_make("witt_functorial", WS, WF, RingHom(S, F2, {"e": 0}))
    rng = random.Random(5)
    ranks = (1,) * (d + 1)
    left, right = adjunction_counts(u, random_datum(WS, d, ranks, rng), random_datum(WF, d, ranks, rng))
    assert left == right > 0
