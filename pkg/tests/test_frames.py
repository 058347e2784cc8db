import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import dual, relative
from wittdisp.errors import NotAFrameHom, NotInIdeal
from wittdisp.frames import frame_check, frame_hom_make, frame_relative, frame_witt, verj_check
from wittdisp.ring import Ideal, RingHom, ring_make
from wittdisp.witt import WittEl, random_witt


def square_zero():
    return relative(dual(2), ring_make(2, 1), {"e": 0}, "trivial", 3)


def p_adic():
    return relative(ring_make(2, 2), ring_make(2, 1), {}, "p-adic", 3)


FRAMES = {"witt": lambda: frame_witt(dual(2), 3), "square-zero": square_zero, "p-adic": p_adic}


@pytest.mark.parametrize("name", sorted(FRAMES))
def test_axioms_and_theta(name):
    F = FRAMES[name]()
    assert F.theta == WittEl.from_int(F.S, F.p, F.prec - 1)
    rep = frame_check(F, samples=60, seed=1)
    assert rep.ok, rep.lines()
    rep = verj_check(F, samples=60, seed=1, exhaustive=False)
    assert rep.ok, rep.lines()
    assert any("sampled" in r.detail for r in rep.results)


def test_witt_frame_over_truncated_polynomials():
    F = frame_witt(ring_make(2, 1, ["t"], [{"t": 2}]), 3)
    assert frame_check(F, seed=0).ok
    assert verj_check(F, seed=0).ok


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(FRAMES)), st.integers(0, 10 ** 6))
def test_structure_maps_on_random_elements(name, seed):
    F = FRAMES[name]()
    rng = random.Random(seed)
    xi = random_witt(F.S, F.prec - 1, rng)
    e = F.j(xi=xi)
    assert F.sigma_dot(e) == xi
    e1, e2 = F.j_random(rng), F.j_random(rng)
    n = F.nu(e1, e2)
    assert F.raw(n) == F.embed(e1.a * e2.a) + (e1.xi * e2.xi).verschiebung(cap=F.prec)
    assert F.raw(F.pi(e1)) == F.embed(e1.a) + (e1.xi * F.p).verschiebung(cap=F.prec)
    assert F.raw(F.pi(n)) == F.raw(e1) * F.raw(e2)
    w = F.W.random(rng)
    assert F.sigma_dot(F.j_scale(w, e1)) == F.sigma(w) * F.sigma_dot(e1)
    assert F.sigma(F.raw(e1)) == F.sigma_dot(e1) * F.p


def test_corrupted_divided_frobenius_is_caught():
    F = square_zero()
    F.sigma_dot_scale = 2
    rep = frame_check(F, samples=40, seed=0)
    bad = {r.name for r in rep.failures()}
    assert "sigma = theta * sigma_dot on J" in bad
    wit = next(r for r in rep.failures() if r.name == "sigma = theta * sigma_dot on J").witness
    assert wit


def test_zero_ideal_gives_the_witt_frame():
    S = dual(2)
    ident = RingHom(S, S, {"e": "e"})
    F = frame_relative(ident, Ideal(S, [], pd="trivial"), 3)
    G = frame_witt(S, 3)
    rng = random.Random(0)
    for _ in range(30):
        w = F.W.random(rng)
        assert F.sigma(w) == G.sigma(w)
        e = F.j_random(rng)
        assert e.a.is_zero()
        assert F.raw(e) == G.raw(e) and F.sigma_dot(e) == G.sigma_dot(e)
    assert F.j_size == G.j_size


def test_divided_ideal_powers_for_square_zero_kernel():
    F = square_zero()
    assert F.j_power(1) == F.j_gens()
    J2 = F.j_power(2)
    assert J2 and all(e.a.is_zero() for e in J2)
    assert F.j_power_parts(2).is_zero()
    J1 = F.j_group(F.j_power(1))
    for k in (2, 3):
        for e in F.j_power(k):
            assert e in J1


def test_ideal_membership_is_enforced():
    F = square_zero()
    with pytest.raises(NotInIdeal):
        F.j(a=F.S.one)


def test_frame_homomorphisms():
    S = dual(2)
    W = frame_witt(S, 3)
    rel = relative(S, ring_make(2, 1), {"e": 0}, "trivial", 3)
    other = relative(dual(2), ring_make(2, 1), {"e": 0}, "trivial", 3)
    with pytest.raises(NotAFrameHom):
        frame_hom_make("sub_relative", W, other)
    u = frame_hom_make("sub_relative", W, rel)
    assert u.check(seed=2).ok
    A = ring_make(2, 1, ["t"], [{"t": 4}])
    B = ring_make(2, 1, ["t"], [{"t": 2}])
    red = RingHom(A, B, {"t": "t"})
    v = frame_hom_make("witt_functorial", frame_witt(A, 3), frame_witt(B, 3), red)
    rng = random.Random(5)
    for _ in range(20):
        x = random_witt(A, 3, rng)
        assert v.w(x.frobenius()) == v.w(x).frobenius()
        assert v.w(x.truncate(2).verschiebung(cap=3)) == v.w(x).truncate(2).verschiebung(cap=3)
