"""Finite local rings (Z/p^N)[vars]/(monomials) and their elements.

A ring is stored as a free Z/p^N-module on a fixed basis together with a
table of structure constants.  For the default residue field F_p the basis is
the set of standard monomials; for F_{p^f} (only with N = 1) every monomial is
paired with the powers 1, z, ..., z^(f-1) of a field generator ``z``.
"""

import random
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import factorial

from flint import nmod_poly

from . import zlinalg
from .errors import (BadPrime, InputError, NoPD, NonFinite, NotAUnit,
                     NotInIdeal, ParentMismatch, RelationViolated)


def is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def field_modulus(p, f):
    """Least primitive monic polynomial of degree f over F_p (coefficients, low first)."""
    order = p ** f - 1
    prime_factors = [q for q in range(2, order + 1) if order % q == 0 and is_prime(q)]
    for tail in product(range(p), repeat=f):
        coeffs = list(tail) + [1]
        if coeffs[0] == 0:
            continue
        P = nmod_poly(coeffs, p)
        fac = P.factor()[1]
        if len(fac) != 1 or fac[0][1] != 1:
            continue
        x = nmod_poly([0, 1], p)
        if all(pow(x, order // q, P) != 1 for q in prime_factors):
            return tuple(coeffs)
    raise BadPrime(f"no primitive polynomial of degree {f} over F_{p}")


class ArtinRing:
    """The ring (Z/p^N)[vars]/(trunc), optionally with residue field F_{p^f}."""

    def __init__(self, p, N, vars=(), trunc=(), f=1, field_gen="z"):
        if not is_prime(p):
            raise BadPrime(f"{p} is not prime")
        if N < 1:
            raise InputError("N must be at least 1")
        if f < 1:
            raise InputError("residue field degree must be positive")
        if f > 1 and N != 1:
            raise InputError("residue field degree f > 1 is only supported with N = 1")
        self.p, self.N, self.f = p, N, f
        self.q = p ** N
        self.vars = tuple(vars)
        self.field_gen = field_gen
        self.trunc = tuple(tuple(t) for t in trunc)
        nv = len(self.vars)
        for t in self.trunc:
            if len(t) != nv:
                raise InputError("truncation monomial has wrong arity")
            if not any(t):
                raise InputError("truncation generator 1 makes the ring zero")
        bounds = []
        for i, v in enumerate(self.vars):
            pure = [t[i] for t in self.trunc
                    if all(e == 0 for k, e in enumerate(t) if k != i)]
            if not pure:
                raise NonFinite(f"no pure power of {v} among the truncation generators")
            bounds.append(min(pure))
        monos = [m for m in product(*[range(b) for b in bounds])
                 if not any(_divides(t, m) for t in self.trunc)]
        monos.sort(key=lambda m: (sum(m), tuple(-e for e in m)))
        self.monomials = tuple(monos)
        self.modulus = field_modulus(p, f) if f > 1 else None
        self.basis = tuple((k, m) for m in self.monomials for k in range(f))
        self.dim = len(self.basis)
        self._index = {b: i for i, b in enumerate(self.basis)}
        self._build_table()

    # structure constants -------------------------------------------------

    def _zeta_power(self, e):
        """Coordinates of z^e in the basis 1, z, ..., z^(f-1)."""
        f, p = self.f, self.p
        vec = [0] * f
        if f == 1:
            vec[0] = 1
            return vec
        P = nmod_poly(list(self.modulus), p)
        r = pow(nmod_poly([0, 1], p), e, P)
        for i, c in enumerate(r.coeffs()):
            vec[i] = int(c)
        return vec

    def _build_table(self):
        mono_index = {m: i for i, m in enumerate(self.monomials)}
        zp = [self._zeta_power(e) for e in range(2 * self.f - 1)]
        table = []
        for (k1, m1) in self.basis:
            row = []
            for (k2, m2) in self.basis:
                mm = tuple(a + b for a, b in zip(m1, m2))
                if mm not in mono_index:
                    row.append(())
                    continue
                terms = tuple((self._index[(k, mm)], c)
                              for k, c in enumerate(zp[k1 + k2]) if c)
                row.append(terms)
            table.append(row)
        self.table = table
        self.scalar_only = self.dim == 1

    # element construction ------------------------------------------------

    def __call__(self, x):
        if isinstance(x, RingEl):
            if x.parent is not self:
                raise ParentMismatch("element belongs to another ring")
            return x
        if isinstance(x, int):
            v = [0] * self.dim
            v[0] = x % self.q
            return RingEl(self, tuple(v))
        if isinstance(x, str):
            from .textio import parse_element
            return parse_element(self, x)
        raise InputError(f"cannot convert {x!r} into a ring element")

    def from_vector(self, v):
        return RingEl(self, tuple(int(c) % self.q for c in v))

    @cached_property
    def zero(self):
        return self(0)

    @cached_property
    def one(self):
        return self(1)

    def gen(self, name):
        if self.f > 1 and name == self.field_gen:
            return self.basis_element(self._index[(1, self.monomials[0])])
        i = self.vars.index(name)
        m = tuple(1 if k == i else 0 for k in range(len(self.vars)))
        if (0, m) not in self._index:
            return self.zero
        return self.basis_element(self._index[(0, m)])

    def gens(self):
        return [self.gen(v) for v in self.vars]

    def basis_element(self, i):
        v = [0] * self.dim
        v[i] = 1
        return RingEl(self, tuple(v))

    def size(self):
        return self.q ** self.dim

    def elements(self):
        for v in product(range(self.q), repeat=self.dim):
            yield RingEl(self, v)

    def random_element(self, rng):
        return RingEl(self, tuple(rng.randrange(self.q) for _ in range(self.dim)))

    def random_unit(self, rng):
        while True:
            x = self.random_element(rng)
            if x.is_unit():
                return x

    def random_nilpotent(self, rng):
        x = self.random_element(rng)
        return x - self.teichmuller_constant(x)

    def teichmuller_constant(self, x):
        """The part of x supported on the monomial 1 (a lift of its residue)."""
        v = [0] * self.dim
        for k in range(self.f):
            v[k] = x.vec[k]
        return RingEl(self, tuple(v))

    def describe(self):
        trunc = ",".join(monomial_str(self.vars, t) for t in self.trunc)
        s = f"ring p={self.p} N={self.N} vars={','.join(self.vars)} trunc={trunc}"
        if self.f > 1:
            s += f" f={self.f}"
        return s

    def __repr__(self):
        return f"<{self.describe()}>"

    def same_as(self, other):
        return (self.p, self.N, self.vars, self.trunc, self.f) == \
            (other.p, other.N, other.vars, other.trunc, other.f)

    def mult_matrix(self, a):
        """Matrix over Z/p^N of multiplication by a in the basis (columns = images)."""
        cols = [(a * self.basis_element(k)).vec for k in range(self.dim)]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def derivative(self, a, var):
        """Formal partial derivative on canonical representatives."""
        i = self.vars.index(var)
        out = [0] * self.dim
        for idx, c in enumerate(a.vec):
            if not c:
                continue
            k, m = self.basis[idx]
            if m[i] == 0:
                continue
            mm = tuple(e - 1 if j == i else e for j, e in enumerate(m))
            out[self._index[(k, mm)]] += c * m[i]
        return self.from_vector(out)


def monomial_str(names, m):
    parts = []
    for n, e in zip(names, m):
        if e == 1:
            parts.append(n)
        elif e > 1:
            parts.append(f"{n}^{e}")
    return "*".join(parts) if parts else "1"


class RingEl:
    """An element in canonical form: a coordinate vector in the ring basis."""

    __slots__ = ("parent", "vec")

    def __init__(self, parent, vec):
        self.parent = parent
        self.vec = vec

    @property
    def coeffs(self):
        """Sparse map basis label -> coefficient."""
        R = self.parent
        return {R.basis[i]: c for i, c in enumerate(self.vec) if c}

    def _coerce(self, other):
        if isinstance(other, RingEl):
            if other.parent is not self.parent:
                raise ParentMismatch("elements of different rings")
            return other
        if isinstance(other, int):
            return self.parent(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        q = self.parent.q
        return RingEl(self.parent, tuple((a + b) % q for a, b in zip(self.vec, o.vec)))

    __radd__ = __add__

    def __neg__(self):
        q = self.parent.q
        return RingEl(self.parent, tuple(-a % q for a in self.vec))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        q = self.parent.q
        return RingEl(self.parent, tuple((a - b) % q for a, b in zip(self.vec, o.vec)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        R = self.parent
        q = R.q
        if isinstance(other, int):
            return RingEl(R, tuple(a * other % q for a in self.vec))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if R.scalar_only:
            return RingEl(R, (self.vec[0] * o.vec[0] % q,))
        out = [0] * R.dim
        table = R.table
        ov = o.vec
        nz = [(j, b) for j, b in enumerate(ov) if b]
        for i, a in enumerate(self.vec):
            if not a:
                continue
            row = table[i]
            for j, b in nz:
                for k, c in row[j]:
                    out[k] += a * b * c
        return RingEl(R, tuple(x % q for x in out))

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.parent.one
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.parent(other)
        if not isinstance(other, RingEl):
            return NotImplemented
        return self.parent is other.parent and self.vec == other.vec

    def __hash__(self):
        return hash(self.vec)

    def is_zero(self):
        return not any(self.vec)

    def __bool__(self):
        return not self.is_zero()

    def residue_nonzero(self):
        p = self.parent.p
        return any(self.vec[k] % p for k in range(self.parent.f))

    def is_unit(self):
        return self.residue_nonzero()

    def inverse(self):
        """Inverse by inverting the constant part and a Newton iteration."""
        R = self.parent
        if not self.is_unit():
            raise NotAUnit(f"{self} is not a unit")
        c = R.teichmuller_constant(self)
        if R.f == 1:
            x = R(pow(c.vec[0], -1, R.q))
        else:
            x = c ** (R.p ** R.f - 2)
        # x_{k+1} = x_k (2 - a x_k) doubles the nilpotency order each step
        while True:
            e = R.one - self * x
            if e.is_zero():
                return x
            x = x * (R.one + e)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def is_nilpotent(self):
        return not self.is_unit()

    def __str__(self):
        R = self.parent
        if self.is_zero():
            return "0"
        terms = []
        by_mono = {}
        for i, c in enumerate(self.vec):
            if c:
                k, m = R.basis[i]
                by_mono.setdefault(m, []).append((k, c))
        for m in R.monomials:
            if m not in by_mono:
                continue
            parts = by_mono[m]
            if R.f == 1:
                coef = str(parts[0][1])
            else:
                inner = []
                for k, c in parts:
                    z = "" if k == 0 else (R.field_gen if k == 1 else f"{R.field_gen}^{k}")
                    if not z:
                        inner.append(str(c))
                    else:
                        inner.append(z if c == 1 else f"{c}*{z}")
                coef = inner[0] if len(inner) == 1 else "(" + "+".join(inner) + ")"
            ms = monomial_str(R.vars, m)
            if ms == "1":
                terms.append(coef)
            elif coef == "1":
                terms.append(ms)
            else:
                terms.append(f"{coef}*{ms}")
        return " + ".join(terms)

    def __repr__(self):
        return f"RingEl({self})"


def ring_make(p, N, vars=(), trunc=(), f=1):
    """Build a ring from variable names and truncation monomials given as dicts or tuples."""
    vars = tuple(vars)
    tr = []
    for t in trunc:
        if isinstance(t, dict):
            tr.append(tuple(t.get(v, 0) for v in vars))
        else:
            tr.append(tuple(t))
    return ArtinRing(p, N, vars, tr, f)


# ---------------------------------------------------------------------------
# Vectors and matrices over a ring


def expand_matrix(R, M, ncols):
    """Expand an R-matrix (list of rows) to a Z/p^N matrix on coordinates."""
    d = R.dim
    rows = len(M)
    A = [[0] * (ncols * d) for _ in range(rows * d)]
    for i in range(rows):
        for j in range(ncols):
            mm = R.mult_matrix(M[i][j])
            for a in range(d):
                for b in range(d):
                    A[i * d + a][j * d + b] = mm[a][b]
    return A


def flatten(vec):
    out = []
    for x in vec:
        out.extend(x.vec)
    return out


def unflatten(R, coords, n):
    d = R.dim
    return [R.from_vector(coords[i * d:(i + 1) * d]) for i in range(n)]


def mat_apply(M, x):
    R = x[0].parent if x else None
    out = []
    for row in M:
        acc = R.zero if R else 0
        for a, b in zip(row, x):
            acc = acc + a * b
        out.append(acc)
    return out


def mat_mul(A, B):
    n = len(B[0]) if B else 0
    out = []
    for row in A:
        new = []
        for j in range(n):
            acc = None
            for k, a in enumerate(row):
                t = a * B[k][j]
                acc = t if acc is None else acc + t
            new.append(acc)
        out.append(new)
    return out


def transpose(M):
    return [list(col) for col in zip(*M)] if M else []


class Solution:
    def __init__(self, ok, x=None, certificate=None):
        self.ok = ok
        self.x = x
        self.certificate = certificate

    def __bool__(self):
        return self.ok


def solve_linear(R, M, b):
    """Solve M x = b over R; on failure the certificate is a coordinate covector."""
    rows = len(M)
    if len(b) != rows:
        from .errors import ShapeMismatch
        raise ShapeMismatch("right-hand side length does not match the matrix")
    ncols = len(M[0]) if rows else 0
    A = expand_matrix(R, M, ncols)
    kind, val = zlinalg.solve(A, flatten(b), R.p, R.N, ncols * R.dim)
    if kind == "solution":
        return Solution(True, x=unflatten(R, val, ncols))
    return Solution(False, certificate=val)


def columns_of(M):
    return transpose(M)


def span_contains(R, gens, v):
    """Is the vector v in the R-span of the vectors gens?"""
    if not gens:
        return all(x.is_zero() for x in v)
    M = transpose(gens)
    return solve_linear(R, M, v).ok


def kernel_gens(R, M, ncols=None):
    """R-module generators of ker(M)."""
    ncols = ncols if ncols is not None else (len(M[0]) if M else 0)
    A = expand_matrix(R, M, ncols)
    gens = zlinalg.kernel(A, R.p, R.N, ncols * R.dim)
    return [unflatten(R, g, ncols) for g in gens]


class SummandInfo:
    def __init__(self, unit_rank, summand_basis, is_direct_summand, pivots, residual):
        self.unit_rank = unit_rank
        self.summand_basis = summand_basis
        self.is_direct_summand = is_direct_summand
        self.pivots = pivots
        self.residual = residual


def image_summand(R, cols, dim=None):
    """Unit-pivot column reduction of the vectors ``cols`` (each of length dim)."""
    cols = [list(c) for c in cols]
    if dim is None:
        dim = len(cols[0]) if cols else 0
    work = [list(c) for c in cols]
    pivots = []
    used_rows = set()
    remaining = list(range(len(work)))
    while True:
        found = None
        for j in remaining:
            for i in range(dim):
                if i not in used_rows and work[j][i].is_unit():
                    found = (j, i)
                    break
            if found:
                break
        if not found:
            break
        j, i = found
        inv = work[j][i].inverse()
        for k in range(len(work)):
            if k == j or work[k][i].is_zero():
                continue
            c = work[k][i] * inv
            work[k] = [a - c * b for a, b in zip(work[k], work[j])]
        pivots.append((j, i))
        used_rows.add(i)
        remaining.remove(j)
    residual = [work[j] for j in remaining]
    is_summand = all(x.is_zero() for c in residual for x in c)
    basis = [cols[j] for j, _ in sorted(pivots)]
    return SummandInfo(len(pivots), basis, is_summand, pivots, residual)


def complete_basis(R, vecs, dim):
    """Extend unit-independent vectors to a basis of R^dim with standard vectors."""
    info = image_summand(R, vecs, dim)
    if info.unit_rank != len(vecs):
        raise InputError("vectors are not part of a basis")
    used = {i for _, i in info.pivots}
    out = [list(v) for v in vecs]
    for i in range(dim):
        if i not in used:
            e = [R.zero] * dim
            e[i] = R.one
            out.append(e)
    return out


def is_invertible(R, M):
    n = len(M)
    if any(len(r) != n for r in M):
        return False
    return image_summand(R, columns_of(M), n).unit_rank == n


def mat_inverse(R, M):
    n = len(M)
    cols = []
    for j in range(n):
        e = [R.one if i == j else R.zero for i in range(n)]
        s = solve_linear(R, M, e)
        if not s.ok:
            raise NotAUnit("matrix is not invertible")
        cols.append(s.x)
    return transpose(cols)


# ---------------------------------------------------------------------------
# Ideals and divided powers


class Ideal:
    """An ideal given by generators, optionally carrying divided powers.

    ``pd`` is one of ``"none"``, ``"trivial"``, ``"p-adic"`` or ``"product"``;
    the product structure combines the divided powers of ``parts``.
    """

    def __init__(self, parent, gens, pd="none", parts=None):
        self.parent = parent
        self.gens = [parent(g) for g in gens]
        self.pd = pd
        self.parts = tuple(parts) if parts else ()
        for g in self.gens:
            if g.is_unit():
                raise InputError(f"ideal generator {g} is a unit")
        if pd == "trivial":
            for a in self.gens:
                for b in self.gens:
                    if not (a * b).is_zero():
                        raise InputError("trivial divided powers need a square-zero ideal")
        elif pd == "p-adic":
            if not self._same_ideal([parent(parent.p)]):
                raise InputError("p-adic divided powers live on the ideal (p)")
        elif pd == "product":
            if len(self.parts) != 2:
                raise InputError("product divided powers need two sub-ideals")
            combined = self.parts[0].gens + self.parts[1].gens
            if not self._same_ideal(combined):
                raise InputError("product ideal must be the sum of its parts")
        elif pd != "none":
            raise InputError(f"unknown divided power type {pd}")

    def _same_ideal(self, other_gens):
        other = Ideal(self.parent, other_gens)
        return all(other.contains(g) for g in self.gens) and \
            all(self.contains(g) for g in other.gens)

    @cached_property
    def zp_gens(self):
        """Generators of the ideal as a Z/p^N-module, in coordinates."""
        R = self.parent
        out = []
        for g in self.gens:
            for k in range(R.dim):
                out.append((g * R.basis_element(k)).vec)
        return out

    def contains(self, x):
        R = self.parent
        x = R(x)
        if not self.gens:
            return x.is_zero()
        kind, _ = zlinalg.solve([list(r) for r in zip(*self.zp_gens)], list(x.vec),
                                R.p, R.N, len(self.zp_gens))
        return kind == "solution"

    def express(self, x):
        """Coefficients r_k with x = sum r_k gens_k, or None."""
        R = self.parent
        s = solve_linear(R, [self.gens], [x])
        return s.x if s.ok else None

    def elements(self):
        R = self.parent
        for v in zlinalg.span_elements(self.zp_gens, R.dim, R.p, R.N):
            yield R.from_vector(v)

    def size(self):
        R = self.parent
        return zlinalg.span_size(self.zp_gens, R.dim, R.p, R.N)

    def random_element(self, rng):
        R = self.parent
        acc = R.zero
        for g in self.gens:
            acc = acc + R.random_element(rng) * g
        return acc

    def is_zero(self):
        return all(g.is_zero() for g in self.gens)

    def times(self, other):
        return Ideal(self.parent, [a * b for a in self.gens for b in other.gens])

    def annihilated_by_max(self):
        R = self.parent
        m = [R(R.p)] + R.gens()
        return all((g * x).is_zero() for g in self.gens for x in m)

    def divided_power_ideal(self, n, extra=12):
        """The ideal generated by products of divided powers of total degree >= n."""
        R = self.parent
        if n <= 1 or not self.gens:
            return Ideal(R, self.gens)
        if self.pd == "none":
            raise NoPD("ideal carries no divided powers")
        gens = []
        k = len(self.gens)
        gam = {}
        for i, g in enumerate(self.gens):
            for m in range(n + extra + 1):
                gam[(i, m)] = pd_gamma(self, m, g)
        for total in range(n, n + extra + 1):
            for ms in _compositions(total, k):
                acc = R.one
                for i, m in enumerate(ms):
                    acc = acc * gam[(i, m)]
                    if acc.is_zero():
                        break
                if not acc.is_zero():
                    gens.append(acc)
        return Ideal(R, _reduce_gens(R, gens))

    def __repr__(self):
        return f"Ideal({', '.join(map(str, self.gens))}; pd={self.pd})"


def _compositions(total, k):
    if k == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, k - 1):
            yield (first,) + rest


def _reduce_gens(R, gens):
    out = []
    for g in gens:
        if g.is_zero():
            continue
        if out and Ideal(R, out).contains(g):
            continue
        out.append(g)
    return out


def rational_mod(c, p, N):
    """Reduce a rational number with non-negative p-valuation modulo p^N."""
    c = Fraction(c)
    if c.denominator % p == 0:
        raise ArithmeticError(f"{c} has negative {p}-adic valuation")
    q = p ** N
    return c.numerator * pow(c.denominator, -1, q) % q


def pd_gamma(I, m, x):
    """The m-th divided power of x in the PD ideal I."""
    R = I.parent
    x = R(x)
    if I.pd == "none":
        raise NoPD("ideal carries no divided powers")
    if m < 0:
        raise InputError("divided power index must be non-negative")
    if not I.contains(x):
        raise NotInIdeal(f"{x} is not in {I}")
    if m == 0:
        return R.one
    if m == 1:
        return x
    if I.pd == "trivial":
        return R.zero
    if I.pd == "p-adic":
        s = solve_linear(R, [[R(R.p)]], [x])
        y = s.x[0]
        c = rational_mod(Fraction(R.p ** m, factorial(m)), R.p, R.N)
        return (y ** m) * c
    I1, I2 = I.parts
    s = solve_linear(R, [I1.gens + I2.gens], [x])
    coeffs = s.x
    a = R.zero
    for r, g in zip(coeffs[:len(I1.gens)], I1.gens):
        a = a + r * g
    b = x - a
    return sum((pd_gamma(I1, i, a) * pd_gamma(I2, m - i, b) for i in range(m + 1)),
               R.zero)


# ---------------------------------------------------------------------------
# Ring homomorphisms


class RingHom:
    """Evaluation homomorphism sending each variable of src to a given element of dst."""

    def __init__(self, src, dst, images):
        self.src, self.dst = src, dst
        self.images = {v: dst(images.get(v, 0)) for v in src.vars}
        if src.f > 1 and dst.f != src.f:
            raise RelationViolated("residue field extensions must match")
        if dst.N > src.N:
            raise RelationViolated(f"p^{src.N} = 0 in the source but not in the target")
        for t in src.trunc:
            if not self._mono_image(t).is_zero():
                raise RelationViolated(
                    f"relation {monomial_str(src.vars, t)} does not map to zero")
        self._basis_images = []
        for (k, m) in src.basis:
            z = dst.gen(dst.field_gen) ** k if k else dst.one
            self._basis_images.append(z * self._mono_image(m))

    def _mono_image(self, m):
        acc = self.dst.one
        for v, e in zip(self.src.vars, m):
            if e:
                acc = acc * self.images[v] ** e
        return acc

    def __call__(self, x):
        x = self.src(x)
        acc = [0] * self.dst.dim
        for c, img in zip(x.vec, self._basis_images):
            if c:
                for i, b in enumerate(img.vec):
                    acc[i] += c * b
        return self.dst.from_vector(acc)

    def compose(self, other):
        """self o other."""
        return RingHom(other.src, self.dst, {v: self(other.images[v]) for v in other.src.vars})

    def coordinate_matrix(self):
        return [[img.vec[i] for img in self._basis_images] for i in range(self.dst.dim)]

    def kernel(self, pd="none"):
        A = self.coordinate_matrix()
        src, dst = self.src, self.dst
        n = src.dim
        # coordinates in dst are only defined modulo p^(N_dst)
        if dst.N < src.N:
            for i in range(dst.dim):
                for j in range(dst.dim):
                    A[i].append(dst.q if i == j else 0)
        gens = zlinalg.kernel(A, src.p, src.N, len(A[0]) if A else n)
        els = [src.from_vector(g[:n]) for g in gens]
        return Ideal(src, _reduce_gens(src, els), pd=pd)

    def is_surjective(self):
        dst = self.dst
        cols = [list(img.vec) for img in self._basis_images]
        for i in range(dst.dim):
            e = [0] * dst.dim
            e[i] = 1
            A = [[c[r] for c in cols] for r in range(dst.dim)]
            kind, _ = zlinalg.solve(A, e, dst.p, dst.N, len(cols))
            if kind != "solution":
                return False
        return True

    def lift(self, y):
        """Some preimage of y (requires surjectivity)."""
        dst = self.dst
        cols = [list(img.vec) for img in self._basis_images]
        A = [[c[r] for c in cols] for r in range(dst.dim)]
        kind, x = zlinalg.solve(A, list(y.vec), dst.p, dst.N, len(cols))
        if kind != "solution":
            raise RelationViolated(f"{y} is not in the image")
        return self.src.from_vector(x)

    def __repr__(self):
        imgs = ", ".join(f"{v}->{self.images[v]}" for v in self.src.vars)
        return f"RingHom({self.src.describe()} -> {self.dst.describe()}; {imgs})"


def random_seeded(seed):
    return random.Random(seed)
