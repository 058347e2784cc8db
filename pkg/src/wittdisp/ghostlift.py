"""Witt vector arithmetic through ghost components, used as a cross-check.

For ``R = (Z/p^N)[vars]/(monomials)`` with prime residue field, components are
lifted to the torsion-free ring ``Z[vars]/(monomials)``.  There the ghost map
is injective, so the result of an operation is recovered from its ghost
components by the recursion ``x_k = (w_k - sum_{i<k} p^i x_i^(p^(k-i))) / p^k``
and then reduced.  No structure polynomials are involved.
"""

from .errors import InputError


class Poly:
    """Integer polynomials modulo a monomial ideal, as {exponent tuple: int}."""

    def __init__(self, trunc, terms=None):
        self.trunc = trunc
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    def _dead(self, m):
        return any(all(a >= b for a, b in zip(m, t)) for t in self.trunc)

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(self.trunc, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, k):
        return Poly(self.trunc, {m: c * k for m, c in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                if self._dead(m):
                    continue
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(self.trunc, out)

    def __pow__(self, e):
        result = Poly(self.trunc, {tuple(0 for _ in self.trunc[0]) if self.trunc else (): 1})
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def exact_div(self, k):
        out = {}
        for m, c in self.terms.items():
            if c % k:
                raise ArithmeticError("division is not exact")
            out[m] = c // k
        return Poly(self.trunc, out)


def _lift(R, x):
    if R.f != 1:
        raise InputError("the ghost oracle handles prime residue fields only")
    return Poly(R.trunc if R.trunc else [], {m: c for (k, m), c in zip(R.basis, x.vec)})


def _reduce(R, poly):
    vec = [0] * R.dim
    index = {m: i for i, (_, m) in enumerate(R.basis)}
    for m, c in poly.terms.items():
        if m in index:
            vec[index[m]] = c % R.q
    return R.from_vector(vec)


def _zero(R):
    return Poly(R.trunc, {})


def _one(R):
    return Poly(R.trunc, {tuple(0 for _ in R.vars): 1})


def ghost(comps, p):
    out = []
    for k in range(len(comps)):
        acc = comps[0] ** (p ** k)
        for i in range(1, k + 1):
            acc = acc + (comps[i] ** (p ** (k - i))).scale(p ** i)
        out.append(acc)
    return out


def unghost(ws, p):
    xs = []
    for k, w in enumerate(ws):
        acc = w
        for i in range(k):
            acc = acc - (xs[i] ** (p ** (k - i))).scale(p ** i)
        xs.append(acc.exact_div(p ** k))
    return xs


def _op(R, xs, ys, combine):
    p = R.p
    lx = [_lift(R, c) for c in xs]
    ly = [_lift(R, c) for c in ys]
    wx, wy = ghost(lx, p), ghost(ly, p)
    return [_reduce(R, c) for c in unghost([combine(a, b) for a, b in zip(wx, wy)], p)]


def oracle_add(R, xs, ys):
    return _op(R, xs, ys, lambda a, b: a + b)


def oracle_mul(R, xs, ys):
    return _op(R, xs, ys, lambda a, b: a * b)


def oracle_neg(R, xs):
    return _op(R, xs, xs, lambda a, b: a.scale(-1))


def oracle_frobenius(R, xs):
    """Frobenius drops one component: ghost components shift left."""
    p = R.p
    lx = [_lift(R, c) for c in xs]
    w = ghost(lx, p)
    return [_reduce(R, c) for c in unghost(w[1:], p)]
