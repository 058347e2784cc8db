from fractions import Fraction
from itertools import product
from math import factorial

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from wittdisp.errors import BadPrime, InputError, NoPD, NonFinite, NotAUnit, RelationViolated
from wittdisp.ring import (Ideal, RingHom, image_summand, is_invertible, kernel_gens, pd_gamma,
                           rational_mod, ring_make, solve_linear)

RINGS = [
    ring_make(2, 2),
    ring_make(2, 3),
    ring_make(3, 1, ["t"], [{"t": 2}]),
    ring_make(2, 1, ["t"], [{"t": 4}]),
    ring_make(2, 2, ["t"], [{"t": 2}]),
    ring_make(2, 1, ["x", "y"], [{"x": 2}, {"y": 2}]),
    ring_make(3, 2, ["x", "y"], [{"x": 2}, {"x": 1, "y": 1}, {"y": 2}]),
    ring_make(2, 1, [], [], f=2),
]


def elements(R):
    return st.lists(st.integers(0, R.q - 1), min_size=R.dim, max_size=R.dim).map(R.from_vector)


ring_and_three = st.sampled_from(RINGS).flatmap(
    lambda R: st.tuples(st.just(R), elements(R), elements(R), elements(R)))


def sympy_product(R, a, b):
    """Multiply as integer polynomials, then reduce by the truncation and p^N."""
    syms = sympy.symbols(list(R.vars)) if R.vars else []
    if not isinstance(syms, (list, tuple)):
        syms = [syms]

    def to_poly(x):
        return sum((c * sympy.prod([s ** e for s, e in zip(syms, m)])
                    for (_, m), c in zip(R.basis, x.vec)), sympy.Integer(0))
    prod = sympy.expand(to_poly(a) * to_poly(b))
    vec = [0] * R.dim
    index = {m: i for i, (_, m) in enumerate(R.basis)}
    terms = sympy.Poly(prod, *syms).terms() if syms else [((), prod)]
    for mono, c in terms:
        if tuple(mono) in index:
            vec[index[tuple(mono)]] = int(c) % R.q
    return R.from_vector(vec)


def test_construction_examples():
    Z4 = ring_make(2, 2)
    assert Z4.size() == 4 and Z4.dim == 1
    D = ring_make(3, 1, ["t"], [{"t": 2}])
    assert D.monomials == ((0,), (1,))
    with pytest.raises(NonFinite):
        ring_make(2, 1, ["t"], [])
    with pytest.raises(BadPrime):
        ring_make(4, 1)
    with pytest.raises(InputError):
        ring_make(2, 2, [], [], f=2)


def test_arithmetic_examples():
    Z4 = ring_make(2, 2)
    D = ring_make(3, 1, ["t"], [{"t": 2}])
    t = D.gen("t")
    assert (t * t).is_zero()
    assert Z4(3) + Z4(3) == Z4(2)
    assert (Z4(2) * Z4(2)).is_zero()
    assert Z4(3).inverse() == Z4(3)
    assert not Z4(2).is_unit()
    with pytest.raises(NotAUnit):
        Z4(2).inverse()
    assert (D.one + t).inverse() == D.one - t


@settings(max_examples=150, deadline=None)
@given(ring_and_three)
def test_ring_axioms(data):
    R, a, b, c = data
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + (-a) == R.zero and a * R.one == a


@settings(max_examples=150, deadline=None)
@given(ring_and_three)
def test_multiplication_matches_polynomial_oracle(data):
    R, a, b, _ = data
    if R.f > 1:
        return
    assert a * b == sympy_product(R, a, b)


@settings(max_examples=150, deadline=None)
@given(ring_and_three)
def test_unit_or_nilpotent(data):
    R, a, _, _ = data
    if a.is_unit():
        assert a * a.inverse() == R.one
    else:
        x = a
        for _ in range(R.dim * R.N + 1):
            x = x * a
        assert x.is_zero()


def test_solve_examples():
    Z4 = ring_make(2, 2)
    assert solve_linear(Z4, [[Z4(1)]], [Z4(3)]).x == [Z4(3)]
    assert not solve_linear(Z4, [[Z4(2)]], [Z4(1)]).ok
    s = solve_linear(Z4, [[Z4(2)]], [Z4(2)])
    assert s.ok and s.x[0] in (Z4(1), Z4(3))


def brute_solutions(R, M, b):
    els = list(R.elements())
    n = len(M[0])
    return [x for x in product(els, repeat=n)
            if all(sum((M[i][j] * x[j] for j in range(n)), R.zero) == b[i] for i in range(len(M)))]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(RINGS[:3]).flatmap(
    lambda R: st.tuples(st.just(R), st.lists(elements(R), min_size=4, max_size=4),
                        st.lists(elements(R), min_size=2, max_size=2))))
def test_solve_agrees_with_enumeration(data):
    R, m, b = data
    M = [m[:2], m[2:]]
    s = solve_linear(R, M, b)
    sols = brute_solutions(R, M, b)
    assert s.ok == bool(sols)
    if s.ok:
        assert tuple(s.x) in sols


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(RINGS[:3]).flatmap(
    lambda R: st.tuples(st.just(R), st.lists(elements(R), min_size=4, max_size=4))))
def test_kernel_generators_span_the_enumerated_kernel(data):
    R, m = data
    M = [m[:2], m[2:]]
    gens = kernel_gens(R, M, 2)
    for g in gens:
        assert all(x.is_zero() for x in (M[0][0] * g[0] + M[0][1] * g[1], M[1][0] * g[0] + M[1][1] * g[1]))
    brute = brute_solutions(R, M, [R.zero, R.zero])
    span = {tuple(R.zero for _ in range(2))}
    for g in gens:
        span = {tuple(a + c * x for a, x in zip(v, g)) for v in span for c in R.elements()}
    assert {tuple(x.vec for x in v) for v in span} == {tuple(x.vec for x in v) for v in brute}


def test_summand_examples():
    Z4 = ring_make(2, 2)
    info = image_summand(Z4, [[Z4(1), Z4(0)], [Z4(0), Z4(2)]], 2)
    assert info.unit_rank == 1 and not info.is_direct_summand
    assert is_invertible(Z4, [[Z4(1), Z4(0)], [Z4(0), Z4(1)]])
    D = ring_make(3, 1, ["t"], [{"t": 2}])
    t = D.gen("t")
    info = image_summand(D, [[D.one + t, t]], 2)
    assert info.unit_rank == 1 and info.is_direct_summand


def test_pd_examples():
    Z8 = ring_make(2, 3)
    I = Ideal(Z8, [2], pd="p-adic")
    assert pd_gamma(I, 2, Z8(2)) == Z8(2)
    assert pd_gamma(I, 3, Z8(2)) == Z8(4)
    D = ring_make(3, 1, ["t"], [{"t": 2}])
    J = Ideal(D, [D.gen("t")], pd="trivial")
    assert pd_gamma(J, 2, D.gen("t")).is_zero()
    with pytest.raises(NoPD):
        pd_gamma(Ideal(D, [D.gen("t")]), 2, D.gen("t"))
    with pytest.raises(InputError):
        Ideal(ring_make(2, 1, ["t"], [{"t": 3}]), ["t"], pd="trivial")


def test_rational_mod_reduces_exactly():
    assert rational_mod(Fraction(8, 6), 2, 3) == 4
    with pytest.raises(ArithmeticError):
        rational_mod(Fraction(1, 2), 2, 3)


PD_IDEALS = [
    Ideal(ring_make(2, 3), [2], pd="p-adic"),
    Ideal(ring_make(3, 2), [3], pd="p-adic"),
    Ideal(ring_make(5, 2), [5], pd="p-adic"),
    Ideal(ring_make(2, 1, ["e"], [{"e": 2}]), ["e"], pd="trivial"),
    Ideal(ring_make(3, 1, ["x", "y"], [{"x": 2}, {"x": 1, "y": 1}, {"y": 2}]), ["x", "y"], pd="trivial"),
]


def _product_ideal():
    R = ring_make(2, 2, ["e"], [{"e": 2}])
    I1 = Ideal(R, [2], pd="p-adic")
    I2 = Ideal(R, ["e"], pd="trivial")
    return Ideal(R, [2, "e"], pd="product", parts=[I1, I2])


PD_IDEALS.append(_product_ideal())


@pytest.mark.parametrize("I", PD_IDEALS, ids=lambda I: f"{I.parent.describe()} {I.pd}")
def test_divided_powers_on_every_element(I):
    for x in I.elements():
        for m in range(0, 7):
            assert pd_gamma(I, m, x) * factorial(m) == x ** m


def test_reduction_maps_and_kernels():
    D = ring_make(3, 1, ["t"], [{"t": 2}])
    F3 = ring_make(3, 1)
    red = RingHom(D, F3, {"t": 0})
    assert red(D.gen("t") + 2) == F3(2)
    K = red.kernel()
    assert K.contains(D.gen("t")) and not K.contains(D.one)
    Z4, F2 = ring_make(2, 2), ring_make(2, 1)
    K = RingHom(Z4, F2, {}).kernel()
    assert {x.vec for x in K.elements()} == {(0,), (2,)}
    A = ring_make(2, 1, ["t"], [{"t": 4}])
    S = ring_make(2, 1, ["t"], [{"t": 2}])
    K = RingHom(A, S, {"t": "t"}).kernel()
    assert K.contains(A.gen("t") ** 2) and not K.contains(A.gen("t"))
    with pytest.raises(RelationViolated):
        RingHom(S, A, {"t": "t"})
