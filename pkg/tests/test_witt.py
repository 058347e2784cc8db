import json
from fractions import Fraction
from itertools import product
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from wittdisp import witt
from wittdisp.errors import InsufficientPrecision, NotInIdeal, NotInVImage
from wittdisp.ghostlift import oracle_add, oracle_frobenius, oracle_mul, oracle_neg
from wittdisp.ring import Ideal, rational_mod, ring_make
from wittdisp.witt import (WittEl, ideal_embed, pd_gamma_witt, random_witt, teichmuller, witt_exp,
                           witt_log, witt_structure_polys)

SMALL = [
    ring_make(2, 2),
    ring_make(3, 1),
    ring_make(2, 1, ["t"], [{"t": 2}]),
]
MEDIUM = [
    ring_make(2, 3),
    ring_make(3, 2),
    ring_make(5, 2),
    ring_make(2, 1, ["t"], [{"t": 3}]),
    ring_make(2, 1, ["t"], [{"t": 4}]),
    ring_make(3, 1, ["t"], [{"t": 2}]),
    ring_make(5, 1, ["t"], [{"t": 2}]),
    ring_make(2, 2, ["t"], [{"t": 2}]),
]


def comps(x):
    return list(x.comps)


@pytest.mark.parametrize("p,n", [(p, n) for p in (2, 3, 5) for n in (1, 2, 3, 4)])
def test_structure_polynomials_satisfy_ghost_identities(p, n):
    ok, where = witt_structure_polys(p, n).verify_ghost_identities()
    assert ok, where


def test_low_structure_polynomials():
    W = witt_structure_polys(2, 2)
    x0, x1, y0, y1 = W.ctx.gens()
    assert W.sum_polys == [x0 + y0, x1 + y1 - x0 * y0]
    W = witt_structure_polys(3, 2)
    x0, x1, y0, y1 = W.ctx.gens()
    assert W.sum_polys[1] == x1 + y1 - (x0 ** 2 * y0 + x0 * y0 ** 2)
    for p in (2, 3, 5):
        W = witt_structure_polys(p, 1)
        x0, y0 = W.ctx.gens()
        assert W.sum_polys == [x0 + y0] and W.prod_polys == [x0 * y0]


def test_frozen_values_over_z4():
    Z4 = ring_make(2, 2)
    one = WittEl(Z4, [1, 0])
    assert comps(one + one) == [Z4(2), Z4(3)]
    assert WittEl(Z4, [1, 1]).ghost() == [Z4(1), Z4(3)]
    assert comps(WittEl(Z4, [0, 1]).frobenius()) == [Z4(2)]
    assert teichmuller(Z4.zero, 2).verschiebung().is_zero()


def test_precision_errors():
    Z4 = ring_make(2, 2)
    with pytest.raises(InsufficientPrecision):
        WittEl(Z4, [1]).frobenius()
    with pytest.raises(NotInVImage):
        WittEl(Z4, [1, 0]).shift()


@pytest.mark.parametrize("R", SMALL, ids=lambda R: R.describe())
def test_arithmetic_matches_ghost_oracle_exhaustively(R):
    els = list(R.elements())
    n = 2
    vecs = list(product(els, repeat=n))
    for xs in vecs:
        a = WittEl(R, xs, n)
        assert comps(-a) == oracle_neg(R, list(xs))
        assert comps(a.frobenius()) == oracle_frobenius(R, list(xs))
        for ys in vecs:
            b = WittEl(R, ys, n)
            assert comps(a + b) == oracle_add(R, list(xs), list(ys))
            assert comps(a * b) == oracle_mul(R, list(xs), list(ys))


def witt_pairs(rings, max_prec=4):
    def build(R):
        el = st.lists(st.integers(0, R.q - 1), min_size=R.dim, max_size=R.dim).map(R.from_vector)
        return st.integers(1, max_prec).flatmap(
            lambda n: st.tuples(st.just(R), st.lists(el, min_size=n, max_size=n),
                                st.lists(el, min_size=n, max_size=n)))
    return st.sampled_from(rings).flatmap(build)


@settings(max_examples=120, deadline=None)
@given(witt_pairs(MEDIUM, 3))
def test_arithmetic_matches_ghost_oracle_sampled(data):
    R, xs, ys = data
    a, b = WittEl(R, xs), WittEl(R, ys)
    assert comps(a + b) == oracle_add(R, xs, ys)
    assert comps(a * b) == oracle_mul(R, xs, ys)
    assert comps(-a) == oracle_neg(R, xs)
    if len(xs) > 1:
        assert comps(a.frobenius()) == oracle_frobenius(R, xs)


@settings(max_examples=100, deadline=None)
@given(witt_pairs(MEDIUM, 4))
def test_ring_laws_and_ghost_map(data):
    R, xs, ys = data
    a, b = WittEl(R, xs), WittEl(R, ys)
    zero = WittEl.zero(R, a.prec)
    assert a + zero == a and a - a == zero
    assert a * b == b * a
    ga, gb = a.ghost(), b.ghost()
    assert (a + b).ghost() == [x + y for x, y in zip(ga, gb)]
    assert (a * b).ghost() == [x * y for x, y in zip(ga, gb)]


@settings(max_examples=100, deadline=None)
@given(witt_pairs(MEDIUM, 3))
def test_frobenius_verschiebung_identities(data):
    R, xs, ys = data
    a, b = WittEl(R, xs), WittEl(R, ys)
    n = a.prec
    va = a.verschiebung()
    assert va.frobenius() == a * R.p
    g = va.ghost()
    assert g[0].is_zero()
    assert g[1:] == [R.p * w for w in a.ghost()[:n]]
    assert teichmuller(xs[0], n) * teichmuller(ys[0], n) == teichmuller(xs[0] * ys[0], n)
    assert teichmuller(xs[0], n).ghost() == [xs[0] ** (R.p ** i) for i in range(n)]
    # V(x) * y = V(x * F(y))
    if n >= 1:
        y = WittEl(R, ys + [R.zero])
        assert va * y == (a * y.frobenius()).verschiebung()


def test_unit_inverse():
    R = ring_make(3, 1, ["t"], [{"t": 2}])
    import random
    rng = random.Random(3)
    for _ in range(30):
        a = random_witt(R, 3, rng)
        if a.is_unit():
            assert a * a.inverse() == WittEl.one(R, 3)


TRIVIAL = [
    Ideal(ring_make(2, 1, ["e"], [{"e": 2}]), ["e"], pd="trivial"),
    Ideal(ring_make(3, 1, ["e"], [{"e": 2}]), ["e"], pd="trivial"),
]
PADIC = [Ideal(ring_make(2, 3), [2], pd="p-adic"), Ideal(ring_make(3, 2), [3], pd="p-adic")]


@pytest.mark.parametrize("I", TRIVIAL + PADIC, ids=lambda I: f"{I.parent.describe()} {I.pd}")
def test_log_is_additive_and_inverted_by_exp(I):
    R = I.parent
    els = list(I.elements())
    prec = 3
    vecs = list(product(els, repeat=prec))[:64]
    for xs in vecs:
        a = WittEl(R, xs)
        assert witt_exp(witt_log(a, I), I, prec) == a
        for ys in vecs[:16]:
            b = WittEl(R, ys)
            assert witt_log(a + b, I) == [x + y for x, y in zip(witt_log(a, I), witt_log(b, I))]


@pytest.mark.parametrize("I", TRIVIAL, ids=lambda I: I.parent.describe())
def test_log_of_first_component_for_trivial_pd(I):
    R = I.parent
    for x in I.elements():
        assert witt_log(WittEl(R, [x, R.zero, R.zero]), I) == [x, R.zero, R.zero]
    assert witt_log(WittEl.zero(R, 3), I) == [R.zero] * 3
    with pytest.raises(NotInIdeal):
        witt_log(WittEl(R, [R.one, R.zero]), I)


@pytest.mark.parametrize("I", TRIVIAL + PADIC, ids=lambda I: f"{I.parent.describe()} {I.pd}")
def test_embedded_ideal_elements(I):
    R = I.parent
    prec = 3
    for x in I.elements():
        e = ideal_embed(x, I, prec)
        assert e.frobenius().is_zero()
        for xi in product(list(R.elements())[:6], repeat=prec - 1):
            v = WittEl(R, [R.zero] + list(xi))
            assert (e * v).is_zero()
    assert ideal_embed(R.zero, I, prec).is_zero()


def divided_power_oracle(xi, m):
    """gamma_m(V xi) from the rational coefficient p^(m-1)/m! and V(xi^m)."""
    R = xi.base
    p = R.p
    c = Fraction(p ** (m - 1), factorial(m))
    cw = WittEl.from_int(R, rational_mod(c, p, R.N + xi.prec + 1), xi.prec)
    return WittEl(R, [R.zero] + comps(cw * xi ** m))


@pytest.mark.parametrize("R", [ring_make(2, 1), ring_make(2, 2), ring_make(3, 1),
                               ring_make(2, 1, ["t"], [{"t": 2}])], ids=lambda R: R.describe())
def test_divided_powers_of_verschiebung_image(R):
    prec = 3
    for xi_c in product(list(R.elements()), repeat=prec - 1):
        xi = WittEl(R, xi_c)
        v = xi.verschiebung(cap=prec)
        assert pd_gamma_witt(v, 1) == v
        acc = WittEl.one(R, prec)
        for m in range(1, 5):
            acc = acc * v
            g = pd_gamma_witt(v, m)
            assert g * factorial(m) == acc
            assert g == divided_power_oracle(xi, m)


def test_structure_cache_round_trip(tmp_path, monkeypatch):
    monkeypatch.setenv("WITTDISP_CACHE", str(tmp_path))
    monkeypatch.setattr(witt, "_memory", {})
    first = witt.term_lists(3, 3, "add")
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    monkeypatch.setattr(witt, "_memory", {})
    assert witt.term_lists(3, 3, "add") == first
    data = json.loads(files[0].read_text())
    data["polys"][0][0][0] += 1
    files[0].write_text(json.dumps(data))
    monkeypatch.setattr(witt, "_memory", {})
    assert witt.term_lists(3, 3, "add") == first
