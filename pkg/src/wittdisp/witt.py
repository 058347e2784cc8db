"""Truncated p-typical Witt vectors over the rings of ``ring``.

Addition, multiplication, negation and Frobenius are evaluated through
universal integer polynomials.  They are produced once per (p, n) by the
ghost recursion with exact division in Z[x, y] (python-flint) and stored in a
JSON cache whose location is taken from ``WITTDISP_CACHE``.
"""

import hashlib
import json
import os
import threading
from fractions import Fraction
from math import factorial
from pathlib import Path

import flint

from .errors import (BaseMismatch, BudgetExceeded, InputError,
                     InsufficientPrecision, NotInIdeal, NotInVImage)
from .ring import Ideal, pd_gamma, rational_mod

CACHE_VERSION = 1
TERM_BUDGET = 250_000
DEFAULT_PREC_CAP = 4

_lock = threading.Lock()
_memory = {}


def cache_dir():
    d = os.environ.get("WITTDISP_CACHE")
    if d:
        return Path(d)
    return Path.home() / ".cache" / "wittdisp"


def _context(names):
    return flint.fmpz_mpoly_ctx.get(tuple(names), "lex")


def witt_polynomial(vs, p, i):
    return sum((p ** j * vs[j] ** (p ** (i - j)) for j in range(i + 1)), vs[0] * 0)


def _exact_div(ctx, poly, d):
    coeffs = poly.to_dict()
    out = {}
    for k, v in coeffs.items():
        if v % d:
            raise ArithmeticError("ghost recursion is not integral")
        out[k] = v // d
    return ctx.from_dict(out)


def _generate(p, n, kind):
    """Universal polynomials for one operation, as flint polynomials."""
    if kind == "frob":
        names = [f"x{i}" for i in range(n + 1)]
    else:
        names = [f"x{i}" for i in range(n)] + [f"y{i}" for i in range(n)]
    ctx = _context(names)
    g = ctx.gens()
    X = g[:n + 1] if kind == "frob" else g[:n]
    Y = g[n:] if kind != "frob" else None
    out = []
    total = 0
    for i in range(n):
        if kind == "add":
            t = witt_polynomial(X, p, i) + witt_polynomial(Y, p, i)
        elif kind == "mul":
            t = witt_polynomial(X, p, i) * witt_polynomial(Y, p, i)
        elif kind == "neg":
            t = -witt_polynomial(X, p, i)
        elif kind == "frob":
            t = witt_polynomial(X, p, i + 1)
        else:
            raise InputError(f"unknown polynomial kind {kind}")
        for j in range(i):
            t -= p ** j * out[j] ** (p ** (i - j))
        out.append(_exact_div(ctx, t, p ** i))
        total += len(out[-1])
        if total > TERM_BUDGET:
            raise BudgetExceeded(f"structure polynomials for p={p}, n={n} exceed {TERM_BUDGET} terms")
    return ctx, out


def _cache_path(p, n, kind):
    key = f"v{CACHE_VERSION}|p={p}|n={n}|kind={kind}"
    digest = hashlib.sha256(key.encode()).hexdigest()[:16]
    return cache_dir() / f"{kind}-p{p}-n{n}-{digest}.json"


def _payload_digest(polys):
    return hashlib.sha256(json.dumps(polys, sort_keys=True).encode()).hexdigest()


def _load(path, p, n, kind):
    try:
        data = json.loads(path.read_text())
    except (OSError, ValueError):
        return None
    if data.get("version") != CACHE_VERSION or (data.get("p"), data.get("n"), data.get("kind")) != (p, n, kind):
        return None
    if _payload_digest(data["polys"]) != data.get("sha256"):
        return None
    return data["polys"]


def _store(path, p, n, kind, polys):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp%d" % os.getpid())
        tmp.write_text(json.dumps({"version": CACHE_VERSION, "p": p, "n": n, "kind": kind,
                                   "sha256": _payload_digest(polys), "polys": polys}))
        os.replace(tmp, path)
    except OSError:
        pass


def term_lists(p, n, kind):
    """Polynomials as lists of (coefficient, exponent tuple), cached in memory and on disk."""
    key = (p, n, kind)
    got = _memory.get(key)
    if got is not None:
        return got
    with _lock:
        got = _memory.get(key)
        if got is not None:
            return got
        path = _cache_path(p, n, kind)
        polys = _load(path, p, n, kind)
        if polys is None:
            _, fl = _generate(p, n, kind)
            polys = [[[int(c), [int(k) for k in e]] for e, c in sorted(P.to_dict().items())] for P in fl]
            _store(path, p, n, kind, polys)
        compiled = [_compile(P) for P in polys]
        _memory[key] = compiled
        return compiled


def _compile(terms):
    out = []
    for c, e in terms:
        factors = tuple((i, k) for i, k in enumerate(e) if k)
        out.append((c, factors))
    return out


class WittStructurePolys:
    """Sum, product and negation polynomials for W_n, as flint polynomials over Z."""

    def __init__(self, p, n):
        self.p, self.n = p, n
        self.ctx, self.sum_polys = _generate(p, n, "add")
        _, self.prod_polys = _generate(p, n, "mul")
        _, self.neg_polys = _generate(p, n, "neg")
        self.frob_ctx, self.frob_polys = _generate(p, n, "frob")

    def verify_ghost_identities(self):
        """Check w_i(S) = w_i(x) + w_i(y) and the analogues identically over Z."""
        p, n = self.p, self.n
        g = self.ctx.gens()
        X, Y = g[:n], g[n:]
        for i in range(n):
            if witt_polynomial(self.sum_polys, p, i) != witt_polynomial(X, p, i) + witt_polynomial(Y, p, i):
                return False, ("add", i)
            if witt_polynomial(self.prod_polys, p, i) != witt_polynomial(X, p, i) * witt_polynomial(Y, p, i):
                return False, ("mul", i)
            if witt_polynomial(self.neg_polys, p, i) != -witt_polynomial(X, p, i):
                return False, ("neg", i)
        fg = self.frob_ctx.gens()
        for i in range(n):
            if witt_polynomial(self.frob_polys, p, i) != witt_polynomial(fg, p, i + 1):
                return False, ("frob", i)
        return True, None


def witt_structure_polys(p, n):
    return WittStructurePolys(p, n)


def _evaluate(R, compiled, inputs):
    """Evaluate compiled integer polynomials at ring elements."""
    if R.scalar_only:
        q = R.q
        vals = [x.vec[0] for x in inputs]
        powers = {}
        out = []
        for terms in compiled:
            acc = 0
            for c, factors in terms:
                t = c
                for i, k in factors:
                    key = (i, k)
                    pw = powers.get(key)
                    if pw is None:
                        pw = pow(vals[i], k, q)
                        powers[key] = pw
                    t = t * pw % q
                    if not t:
                        break
                acc += t
            out.append(R(acc % q))
        return out
    powers = {}
    zero_inputs = {i for i, x in enumerate(inputs) if x.is_zero()}
    out = []
    for terms in compiled:
        acc = [0] * R.dim
        for c, factors in terms:
            if any(i in zero_inputs for i, _ in factors):
                continue
            t = None
            for i, k in factors:
                key = (i, k)
                pw = powers.get(key)
                if pw is None:
                    pw = inputs[i] ** k
                    powers[key] = pw
                t = pw if t is None else t * pw
                if t.is_zero():
                    break
            if t is None:
                acc[0] += c
            elif not t.is_zero():
                for j, v in enumerate(t.vec):
                    if v:
                        acc[j] += c * v
        out.append(R.from_vector(acc))
    return out


class WittEl:
    """A Witt vector of length ``prec`` over the ring ``base``."""

    __slots__ = ("base", "comps", "prec")

    def __init__(self, base, comps, prec=None):
        comps = [base(c) for c in comps]
        if prec is None:
            prec = len(comps)
        if prec < 1:
            raise InsufficientPrecision("Witt vectors need precision at least 1")
        if len(comps) < prec:
            raise InputError("fewer components than the stated precision")
        self.base = base
        self.comps = tuple(comps[:prec])
        self.prec = prec

    # constructors --------------------------------------------------------

    @classmethod
    def zero(cls, base, prec):
        return cls(base, [base.zero] * prec, prec)

    @classmethod
    def one(cls, base, prec):
        return cls(base, [base.one] + [base.zero] * (prec - 1), prec)

    @classmethod
    def from_int(cls, base, n, prec):
        key = (id(base), n, prec)
        got = _int_cache.get(key)
        if got is not None and got.base is base:
            return got
        one = cls.one(base, prec)
        result = cls.zero(base, prec)
        m = abs(n)
        addend = one
        while m:
            if m & 1:
                result = result + addend
            m >>= 1
            if m:
                addend = addend + addend
        if n < 0:
            result = -result
        _int_cache[key] = result
        return result

    # basic structure -----------------------------------------------------

    def truncate(self, prec):
        if prec > self.prec:
            raise InsufficientPrecision(f"cannot raise precision {self.prec} to {prec}")
        return WittEl(self.base, self.comps[:prec], prec)

    def _check(self, other):
        if not isinstance(other, WittEl):
            raise InputError("expected a Witt vector")
        if other.base is not self.base:
            raise BaseMismatch("Witt vectors over different rings")
        return min(self.prec, other.prec)

    def key(self):
        return tuple(c.vec for c in self.comps)

    def __eq__(self, other):
        if isinstance(other, int):
            other = WittEl.from_int(self.base, other, self.prec)
        if not isinstance(other, WittEl):
            return NotImplemented
        n = min(self.prec, other.prec)
        return self.base is other.base and self.comps[:n] == other.comps[:n]

    def __hash__(self):
        return hash(self.comps[0])

    def is_zero(self):
        return all(c.is_zero() for c in self.comps)

    def _binary(self, other, kind):
        if isinstance(other, int):
            other = WittEl.from_int(self.base, other, self.prec)
        n = self._check(other)
        mk = (kind, id(self.base), tuple(c.vec for c in self.comps[:n]),
              tuple(c.vec for c in other.comps[:n]))
        got = _memo.get(mk)
        if got is not None:
            return got
        polys = term_lists(self.base.p, n, kind)
        comps = _evaluate(self.base, polys, list(self.comps[:n]) + list(other.comps[:n]))
        out = WittEl(self.base, comps, n)
        if len(_memo) > MEMO_LIMIT:
            _memo.clear()
        _memo[mk] = out
        return out

    def __add__(self, other):
        return self._binary(other, "add")

    __radd__ = __add__

    def __mul__(self, other):
        if hasattr(other, "parent") and not isinstance(other, WittEl):
            other = teichmuller(other, self.prec)
        return self._binary(other, "mul")

    __rmul__ = __mul__

    def __neg__(self):
        polys = term_lists(self.base.p, self.prec, "neg")
        x = list(self.comps)
        return WittEl(self.base, _evaluate(self.base, polys, x + x), self.prec)

    def __sub__(self, other):
        if isinstance(other, int):
            other = WittEl.from_int(self.base, other, self.prec)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __pow__(self, e):
        result = WittEl.one(self.base, self.prec)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def ghost(self):
        p = self.base.p
        return [sum((c ** (p ** (i - j)) * (p ** j) for j, c in enumerate(self.comps[:i + 1])),
                    self.base.zero) for i in range(self.prec)]

    def frobenius(self):
        if self.prec < 2:
            raise InsufficientPrecision("Frobenius needs precision at least 2")
        n = self.prec - 1
        polys = term_lists(self.base.p, n, "frob")
        x = list(self.comps)
        return WittEl(self.base, _evaluate(self.base, polys, x), n)

    def verschiebung(self, cap=None):
        cap = cap or max(DEFAULT_PREC_CAP, self.prec + 1)
        n = min(self.prec + 1, cap)
        return WittEl(self.base, [self.base.zero] + list(self.comps), n)

    def shift(self):
        """The xi with V(xi) = self, defined when the first component vanishes."""
        if not self.comps[0].is_zero():
            raise NotInVImage(f"{self} is not in the image of V")
        if self.prec < 2:
            raise InsufficientPrecision("no room to undo V at precision 1")
        return WittEl(self.base, self.comps[1:], self.prec - 1)

    def is_unit(self):
        return self.comps[0].is_unit()

    def inverse(self):
        """Inverse via the Teichmüller lift of the first component and Newton steps."""
        if not self.is_unit():
            from .errors import NotAUnit
            raise NotAUnit(f"{self} is not a unit")
        x = teichmuller(self.comps[0].inverse(), self.prec)
        one = WittEl.one(self.base, self.prec)
        for _ in range(4 * self.prec + 8):
            e = one - self * x
            if e.is_zero():
                return x
            x = x * (one + e)
        raise ArithmeticError("inverse iteration did not converge")

    def __str__(self):
        from .textio import format_witt
        return format_witt(self)

    __repr__ = __str__


_int_cache = {}
_memo = {}
MEMO_LIMIT = 400_000


def teichmuller(r, prec):
    R = r.parent
    return WittEl(R, [r] + [R.zero] * (prec - 1), prec)


def witt_elements(R, prec):
    from itertools import product
    els = list(R.elements())
    for comps in product(els, repeat=prec):
        yield WittEl(R, comps, prec)


def random_witt(R, prec, rng):
    return WittEl(R, [R.random_element(rng) for _ in range(prec)], prec)


# ---------------------------------------------------------------------------
# Logarithm on W(a) for a divided power ideal a


def _divided_coefficient(p, k):
    """(p^k - 1)!, so that x^(p^k) / p^k = (p^k - 1)! * gamma_{p^k}(x)."""
    return factorial(p ** k - 1)


def witt_log(a, I):
    """Divided Witt coordinates (w_i / p^i)(a) of a Witt vector with components in I."""
    R = a.base
    if I.parent is not R:
        raise BaseMismatch("ideal lives in another ring")
    for c in a.comps:
        if not I.contains(c):
            raise NotInIdeal(f"component {c} is not in {I}")
    p = R.p
    out = []
    for i in range(a.prec):
        acc = a.comps[i]
        for j in range(i):
            k = i - j
            acc = acc + pd_gamma(I, p ** k, a.comps[j]) * (_divided_coefficient(p, k) % R.q)
        out.append(acc)
    return out


def witt_exp(logs, I, prec=None):
    """Inverse of ``witt_log``."""
    R = I.parent
    prec = prec or len(logs)
    p = R.p
    comps = []
    for i in range(prec):
        if not I.contains(logs[i]):
            raise NotInIdeal(f"{logs[i]} is not in {I}")
        acc = logs[i]
        for j in range(i):
            k = i - j
            acc = acc - pd_gamma(I, p ** k, comps[j]) * (_divided_coefficient(p, k) % R.q)
        comps.append(acc)
    return WittEl(R, comps, prec)


def ideal_embed(x, I, prec):
    """The element of W(S) with logarithmic coordinates (x, 0, 0, ...)."""
    R = I.parent
    x = R(x)
    if not I.contains(x):
        raise NotInIdeal(f"{x} is not in {I}")
    return witt_exp([x] + [R.zero] * (prec - 1), I, prec)


def pd_gamma_witt(x, m):
    """gamma_m(V xi) = p^(m-1)/m! V(xi^m) on the image of Verschiebung."""
    if m < 1:
        raise InputError("m must be at least 1")
    xi = x.shift()
    R = x.base
    p = R.p
    c = rational_mod(Fraction(p ** (m - 1), factorial(m)), p, R.N + x.prec + 1)
    return (WittEl.from_int(R, c, xi.prec) * xi ** m).verschiebung(cap=x.prec)
