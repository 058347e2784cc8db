"""Witt frames, relative Witt frames, their Verjüngung and frame homomorphisms.

Ideal elements of a relative frame are kept as pairs ``(a, xi)`` standing for
``embed(a) + V(xi)``; ``a`` lies in the PD ideal of ``S`` and ``xi`` is a Witt
vector of one less component.  The plain Witt frame is the case of the zero
ideal, where ``a`` is always zero.
"""

import random
from dataclasses import dataclass, field

from .errors import (CheckFailed, InputError, InsufficientPrecision, KernelMismatch, NoPD,
                     NotAFrameHom, NotInIdeal)
from .finite import GrownGroup, span
from .ring import Ideal, RingHom
from .witt import WittEl, ideal_embed, teichmuller, witt_elements, random_witt

EXHAUSTIVE_LIMIT = 2 ** 16


class WittRing:
    """Truncated Witt vectors ``W_n(S)`` as a ring object."""

    def __init__(self, S, prec):
        if prec < 1:
            raise InsufficientPrecision("Witt precision must be at least 1")
        self.S = S
        self.prec = prec
        self.p = S.p

    def zero(self, prec=None):
        return WittEl.zero(self.S, prec or self.prec)

    def one(self, prec=None):
        return WittEl.one(self.S, prec or self.prec)

    def from_int(self, n, prec=None):
        return WittEl.from_int(self.S, n, prec or self.prec)

    def teich(self, r, prec=None):
        return teichmuller(self.S(r), prec or self.prec)

    @property
    def size(self):
        return self.S.size() ** self.prec

    def elements(self, prec=None):
        return witt_elements(self.S, prec or self.prec)

    def random(self, rng, prec=None):
        return random_witt(self.S, prec or self.prec, rng)

    def additive_gens(self, prec=None):
        """``V^k [b]`` over basis elements ``b``; these generate additively."""
        prec = prec or self.prec
        out = []
        for i in range(self.S.dim):
            x = teichmuller(self.S.basis_element(i), prec)
            for k in range(prec):
                out.append(x)
                if k + 1 < prec:
                    x = WittEl(self.S, [self.S.zero] + list(x.comps[:prec - 1]), prec)
        return out

    def group(self, gens, prec=None):
        prec = prec or self.prec
        return span(gens, self.zero(prec), lambda x, y: x + y, lambda x: x.key())


@dataclass(frozen=True)
class JEl:
    """``embed(a) + V(xi)``."""

    a: object
    xi: WittEl

    def key(self):
        return (self.a.vec, self.xi.key())

    def __str__(self):
        return f"({self.a}, {self.xi})"


@dataclass
class CheckResult:
    name: str
    ok: bool
    witness: str = ""
    detail: str = ""

    def line(self):
        status = "PASS" if self.ok else "FAIL"
        extra = f" witness: {self.witness}" if self.witness else ""
        info = f" ({self.detail})" if self.detail else ""
        return f"{status} {self.name}{info}{extra}"


@dataclass
class Report:
    title: str
    seed: int
    results: list = field(default_factory=list)

    def add(self, name, ok, witness="", detail=""):
        self.results.append(CheckResult(name, bool(ok), str(witness), detail))

    @property
    def ok(self):
        return all(r.ok for r in self.results)

    def failures(self):
        return [r for r in self.results if not r.ok]

    def lines(self):
        out = [f"# {self.title} seed={self.seed}"]
        out += [r.line() for r in sorted(self.results, key=lambda r: r.name)]
        return out

    def __str__(self):
        return "\n".join(self.lines())

    def raise_on_failure(self, exc=CheckFailed):
        bad = self.failures()
        if bad:
            raise exc(f"{bad[0].name} fails", bad[0].witness)


class Frame:
    """A frame ``(W, J, R, sigma, sigma_dot)`` with its Verjüngung."""

    def __init__(self, S, prec, alpha, ideal, kind):
        if prec < 2:
            raise InsufficientPrecision("frames need Witt precision at least 2")
        self.S = S
        self.prec = prec
        self.alpha = alpha
        self.R = alpha.dst
        self.ideal = ideal
        self.kind = kind
        self.W = WittRing(S, prec)
        self.p = S.p
        self._embed_cache = {}
        self.sigma_dot_scale = 1
        self.theta = self.derive_theta()

    def describe(self):
        gens = ",".join(str(g) for g in self.ideal.gens) or "0"
        return f"frame kind={self.kind} prec={self.prec} ideal={gens} pd={self.ideal.pd}"

    # W ----------------------------------------------------------------------

    def sigma(self, w):
        return w.frobenius()

    def to_R(self, w):
        return self.alpha(w.comps[0])

    # J ----------------------------------------------------------------------

    def embed(self, a):
        k = a.vec
        got = self._embed_cache.get(k)
        if got is None:
            got = ideal_embed(a, self.ideal, self.prec) if not a.is_zero() \
                else self.W.zero()
            self._embed_cache[k] = got
        return got

    def j(self, a=None, xi=None):
        a = self.S.zero if a is None else self.S(a)
        if not self.ideal.contains(a):
            raise NotInIdeal(f"{a} is not in the PD ideal")
        if xi is None:
            xi = self.W.zero(self.prec - 1)
        elif isinstance(xi, WittEl):
            xi = xi.truncate(self.prec - 1)
        else:
            raise InputError("xi must be a Witt vector")
        return JEl(a, xi)

    def j_zero(self):
        return self.j()

    def raw(self, eta):
        return self.embed(eta.a) + eta.xi.verschiebung(cap=self.prec)

    def decompose(self, x):
        """The pair of a raw Witt vector lying in J."""
        if x.prec < self.prec:
            raise InsufficientPrecision("element has lost precision")
        a = x.comps[0]
        if not self.ideal.contains(a):
            raise NotInIdeal(f"{x} is not in J")
        return JEl(a, (x - self.embed(a)).shift())

    def contains_raw(self, x):
        return self.ideal.contains(x.comps[0])

    def j_add(self, e1, e2):
        return JEl(e1.a + e2.a, e1.xi + e2.xi)

    def j_neg(self, e):
        return JEl(-e.a, -e.xi)

    def j_sub(self, e1, e2):
        return self.j_add(e1, self.j_neg(e2))

    def j_scale(self, w, e):
        return self.decompose(w * self.raw(e))

    def j_int(self, n, e):
        return JEl(e.a * n, e.xi * WittEl.from_int(self.S, n, e.xi.prec))

    def j_eq(self, e1, e2):
        return e1.a == e2.a and e1.xi == e2.xi

    def sigma_dot(self, e):
        xi = e.xi
        if self.sigma_dot_scale != 1:
            xi = xi * WittEl.from_int(self.S, self.sigma_dot_scale, xi.prec)
        return xi

    def nu(self, e1, e2):
        return JEl(e1.a * e2.a, e1.xi * e2.xi)

    def pi(self, e):
        return JEl(e.a, e.xi * WittEl.from_int(self.S, self.p, e.xi.prec))

    def j_gens(self):
        """Generators of J as a W-module."""
        out = [JEl(g, self.W.zero(self.prec - 1)) for g in self.ideal.gens]
        out += [JEl(self.S.zero, x) for x in self.W.additive_gens(self.prec - 1)]
        return out

    def j_additive_gens(self):
        out = [JEl(g, self.W.zero(self.prec - 1)) for g in self.ideal.zp_gens]
        out += [JEl(self.S.zero, x) for x in self.W.additive_gens(self.prec - 1)]
        return out

    @property
    def j_size(self):
        return self.ideal.size() * self.S.size() ** (self.prec - 1)

    def j_elements(self):
        xs = list(self.W.elements(self.prec - 1))
        return [JEl(a, x) for a in self.ideal.elements() for x in xs]

    def j_random(self, rng):
        return JEl(self.ideal.random_element(rng), self.W.random(rng, self.prec - 1))

    def j_ops(self):
        return (self.j_zero(), self.j_add, lambda e: e.key())

    def j_group(self, gens):
        """Additive closure of the W-span of ``gens``."""
        scalars = self.W.additive_gens()
        grp = GrownGroup(*self.j_ops())
        for g in gens:
            for b in scalars:
                grp.absorb(self.j_scale(b, g))
        return grp

    def j_power(self, k):
        """Generators of J_k, the image of the k-fold Verjüngung."""
        if k < 1:
            raise InputError("k must be at least 1")
        gens = self.j_gens()
        cur = gens
        for _ in range(k - 1):
            seen = {}
            for g in gens:
                for h in cur:
                    e = self.nu(g, h)
                    if not (e.a.is_zero() and e.xi.is_zero()):
                        seen.setdefault(e.key(), e)
            cur = list(seen.values())
        return cur

    def j_power_parts(self, k):
        """The S-ideal of first components of J_k."""
        gens = [e.a for e in self.j_power(k) if not e.a.is_zero()]
        return Ideal(self.S, gens)

    def derive_theta(self):
        """Pick b with sigma_dot(b) = 1 and return sigma(b)."""
        one = self.W.one(self.prec - 1)
        for b in [JEl(self.S.zero, one)] + self.j_gens():
            if self.sigma_dot(b) == one:
                return self.sigma(self.raw(b))
        return None

    def sigma_dot_hits_one(self):
        return self.derive_theta() is not None


def frame_witt(S, prec):
    ident = RingHom(S, S, {v: S.gen(v) for v in S.vars})
    return Frame(S, prec, ident, Ideal(S, [], pd="trivial"), "witt")


def frame_relative(alpha, ideal, prec):
    S = alpha.src
    if ideal.parent is not S:
        raise InputError("ideal must live in the source ring")
    if not alpha.is_surjective():
        raise InputError("the quotient map must be surjective")
    ker = alpha.kernel()
    if not (all(ker.contains(g) for g in ideal.gens) and all(ideal.contains(g) for g in ker.gens)):
        raise KernelMismatch(f"kernel {ker} differs from the ideal {ideal}")
    if ideal.gens and ideal.pd == "none":
        raise NoPD("the kernel needs divided powers")
    for g in ideal.gens:
        if not g.is_nilpotent():
            raise InputError(f"{g} is not nilpotent")
    kind = "relative" if ideal.gens else "witt"
    return Frame(S, prec, alpha, ideal, kind)


# checking ----------------------------------------------------------------------


def _samples(frame, rng, count):
    return [frame.j_random(rng) for _ in range(count)]


def frame_check(frame, samples=200, seed=0, exhaustive=True):
    """Frame axioms; with ``exhaustive`` small W and J are enumerated in full."""
    rng = random.Random(seed)
    rep = Report(f"{frame.describe()} axioms", seed)
    W, p = frame.W, frame.p
    full_w = exhaustive and W.size <= EXHAUSTIVE_LIMIT
    full_j = exhaustive and frame.j_size <= EXHAUSTIVE_LIMIT
    ws = list(W.elements()) if full_w else [W.random(rng) for _ in range(samples)]
    js = frame.j_elements() if full_j else frame.j_gens() + _samples(frame, rng, samples)
    if full_w and full_j and len(ws) * len(js) <= EXHAUSTIVE_LIMIT:
        pairs, how = [(e, w) for e in js for w in ws], "exhaustive"
    else:
        pairs = [(js[rng.randrange(len(js))], ws[rng.randrange(len(ws))])
                 for _ in range(max(samples, len(js)))]
        how = "sampled"
    wdet = "exhaustive" if full_w else "sampled"
    jdet = "exhaustive" if full_j else "sampled"

    bad = next((g for g in frame.j_gens() if not frame.to_R(frame.raw(g)).is_zero()), None)
    surj = frame.alpha.is_surjective()
    rep.add("quotient W/J=R", bad is None and surj, bad or ("" if surj else "W -> R not onto"))

    bad = None
    for e, w in pairs:
        x = W.one() + frame.raw(e) + w * p
        if not x.is_unit():
            bad = x
            break
    rep.add("frame (i) J+pW in radical", bad is None, bad or "", f"{how}, {len(pairs)} pairs")

    pw = W.group([x * p for x in W.additive_gens(frame.prec - 1)], frame.prec - 1)
    bad = None
    for w in ws + W.additive_gens():
        d = frame.sigma(w) - (w ** p).truncate(frame.prec - 1)
        if d not in pw:
            bad = w
            break
    rep.add("frame (ii) sigma(a) = a^p mod p", bad is None, bad or "", wdet)

    theta = frame.derive_theta()
    rep.add("frame (iii) sigma_dot(J) generates W", theta is not None,
            "" if theta is not None else "no b with sigma_dot(b)=1 among generators")
    ok_theta = theta is not None and theta == W.from_int(p, frame.prec - 1)
    rep.add("theta = p", ok_theta, "" if ok_theta else f"theta={theta}")

    bad = None
    for e in js:
        if frame.sigma(frame.raw(e)) != frame.sigma_dot(e) * p:
            bad = e
            break
    rep.add("sigma = theta * sigma_dot on J", bad is None, bad or "", jdet)

    bad = None
    for e, w in pairs:
        if frame.sigma_dot(frame.j_scale(w, e)) != frame.sigma(w) * frame.sigma_dot(e):
            bad = (w, e)
            break
    rep.add("sigma_dot is sigma-linear", bad is None, _fmt(bad), f"{how}, {len(pairs)} pairs")
    return rep


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, tuple):
        return "; ".join(str(t) for t in x)
    return str(x)


def verj_check(frame, samples=500, seed=0, exhaustive=True):
    """Verjungung axioms; all pairs of J are used when there are few enough."""
    rng = random.Random(seed)
    rep = Report(f"verjungung {frame.describe()}", seed)
    gens = frame.j_gens()
    if exhaustive and frame.j_size ** 2 <= EXHAUSTIVE_LIMIT:
        els = frame.j_elements()
        pairs, how = [(g, h) for g in els for h in els], "exhaustive"
    else:
        pairs = [(g, h) for g in gens for h in gens]
        pairs += [(frame.j_random(rng), frame.j_random(rng)) for _ in range(samples)]
        how = "sampled"
    det = f"{how}, {len(pairs)} pairs"

    bad = None
    for e1, e2 in pairs:
        lhs = frame.raw(frame.pi(frame.nu(e1, e2)))
        if lhs != frame.raw(e1) * frame.raw(e2):
            bad = (e1, e2)
            break
    rep.add("verjungung (i) pi(nu(x,y)) = xy", bad is None, _fmt(bad), det)

    bad = None
    for e1, e2 in pairs:
        if frame.sigma_dot(frame.nu(e1, e2)) != frame.sigma_dot(e1) * frame.sigma_dot(e2):
            bad = (e1, e2)
            break
    rep.add("verjungung (ii) sigma_dot(nu(x,y)) = sigma_dot(x)sigma_dot(y)", bad is None,
            _fmt(bad), det)

    bad = None
    singles = frame.j_elements() if how == "exhaustive" else [e for e, _ in pairs]
    for e in singles:
        if frame.sigma_dot(frame.pi(e)) != frame.sigma(frame.raw(e)):
            bad = e
            break
    rep.add("verjungung (iii) sigma_dot(pi(x)) = sigma(x)", bad is None, _fmt(bad), how)

    if frame.j_size <= EXHAUSTIVE_LIMIT:
        pool, how = frame.j_elements(), "exhaustive"
    else:
        pool, how = [frame.j_random(rng) for _ in range(max(1000, samples))], "sampled"
    bad = None
    for e in pool:
        if e.a.is_zero() and e.xi.is_zero():
            continue
        pe = frame.pi(e)
        if frame.sigma_dot(e).is_zero() and pe.a.is_zero() and pe.xi.is_zero():
            bad = e
            break
    rep.add("verjungung (iv) ker sigma_dot meets ker pi trivially", bad is None, _fmt(bad),
            f"{how}, {len(pool)} elements")
    return rep


# homomorphisms -----------------------------------------------------------------


class FrameHom:
    def __init__(self, src, dst, kind, ring_map=None):
        self.src = src
        self.dst = dst
        self.kind = kind
        self.ring_map = ring_map

    def w(self, x):
        if self.ring_map is None:
            return x
        return WittEl(self.dst.S, [self.ring_map(c) for c in x.comps], x.prec)

    def j(self, e):
        return self.dst.decompose(self.w(self.src.raw(e)))

    def check(self, samples=100, seed=0):
        rng = random.Random(seed)
        rep = Report(f"frame homomorphism {self.kind}", seed)
        F1, F2 = self.src, self.dst
        ws = F1.W.additive_gens() + [F1.W.random(rng) for _ in range(samples)]
        js = F1.j_gens() + _samples(F1, rng, samples)
        rep.add("u(1) = 1", self.w(F1.W.one()) == F2.W.one())
        bad = None
        for x, y in zip(ws, reversed(ws)):
            if self.w(x * y) != self.w(x) * self.w(y) or self.w(x + y) != self.w(x) + self.w(y):
                bad = (x, y)
                break
        rep.add("u is a ring map", bad is None, _fmt(bad))
        bad = None
        for e in js:
            if not F2.contains_raw(self.w(F1.raw(e))):
                bad = e
                break
        rep.add("u(J') in J", bad is None, _fmt(bad))
        bad = None
        for x in ws:
            if F2.sigma(self.w(x)) != self.w(F1.sigma(x)):
                bad = x
                break
        rep.add("sigma u = u sigma'", bad is None, _fmt(bad))
        bad = None
        if rep.ok:
            for e in js:
                if F2.sigma_dot(self.j(e)) != self.w(F1.sigma_dot(e)):
                    bad = e
                    break
        rep.add("sigma_dot u = u sigma_dot'", bad is None and rep.ok, _fmt(bad))
        return rep


def frame_hom_make(kind, src, dst, ring_map=None, validate=True):
    if kind == "sub_relative":
        if src.kind != "witt" or src.ideal.gens:
            raise NotAFrameHom("sub_relative needs a plain Witt frame as source")
        if not src.S.same_as(dst.S) or src.prec != dst.prec:
            raise NotAFrameHom("source and target Witt rings differ")
        if src.S is not dst.S:
            raise NotAFrameHom("source and target must share the ring object")
        u = FrameHom(src, dst, kind)
    elif kind == "witt_functorial":
        if ring_map is None or ring_map.src is not src.S or ring_map.dst is not dst.S:
            raise NotAFrameHom("witt_functorial needs a ring map between the base rings")
        if src.prec != dst.prec:
            raise NotAFrameHom("precisions differ")
        u = FrameHom(src, dst, kind, ring_map)
    else:
        raise InputError(f"unknown frame homomorphism kind {kind}")
    if validate:
        rep = u.check()
        bad = rep.failures()
        if bad:
            raise NotAFrameHom(f"{bad[0].name} fails", bad[0].witness)
    return u
