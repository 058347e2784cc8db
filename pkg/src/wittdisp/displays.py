"""Predisplays over a frame and the display attached to a standard datum.

Module elements are tuples of entries.  A block carrying a ``J_k`` twist
(``k >= 1``) has ideal pairs as entries; an untwisted block has Witt vectors.
Divided Frobenius values live in ``P_0`` one Witt component short, and
sigma-linear maps act as ``M * sigma(x)`` on coordinates.
"""

import random
from dataclasses import dataclass

from .errors import DatumInvalid, InputError, ShapeMismatch
from .finite import GrownGroup
from .frames import JEl, Report
from .ring import is_invertible
from .witt import WittEl


# ---------------------------------------------------------------------------
# standard data


@dataclass
class StandardDatum:
    frame: object
    d: int
    ranks: tuple
    Phi: list

    def __post_init__(self):
        self.ranks = tuple(self.ranks)
        if len(self.ranks) != self.d + 1 or any(r < 0 for r in self.ranks):
            raise DatumInvalid("need one nonnegative rank per degree 0..d")
        if len(self.Phi) != self.d + 1:
            raise DatumInvalid("need one Phi block per degree")
        n = sum(self.ranks)
        S, prec = self.frame.S, self.frame.prec
        blocks = []
        for j, M in enumerate(self.Phi):
            if len(M) != n or any(len(row) != self.ranks[j] for row in M):
                raise ShapeMismatch(f"Phi_{j} must be {n} x {self.ranks[j]}")
            blocks.append([[_as_witt(S, x, prec) for x in row] for row in M])
        self.Phi = blocks
        full = self.block_matrix()
        residue = [[x.comps[0] for x in row] for row in full]
        if n and not is_invertible(S, residue):
            raise DatumInvalid("the block matrix [Phi_0 | ... | Phi_d] is not invertible",
                               witness="; ".join(", ".join(str(c) for c in row) for row in residue))

    @property
    def rank(self):
        return sum(self.ranks)

    def block_matrix(self):
        return [sum((M[r] for M in self.Phi), []) for r in range(self.rank)]

    def offsets(self):
        out, acc = [], 0
        for r in self.ranks:
            out.append(acc)
            acc += r
        return out


def _as_witt(S, x, prec):
    if isinstance(x, WittEl):
        if x.base is not S:
            raise InputError("Phi entry over another ring")
        return x.truncate(prec) if x.prec > prec else x
    if isinstance(x, int):
        return WittEl.from_int(S, x, prec)
    raise InputError(f"cannot read Phi entry {x!r}")


def datum_from_columns(frame, d, ranks, full):
    """Split a square matrix into the column blocks Phi_0..Phi_d."""
    offs, out = 0, []
    for r in ranks:
        out.append([row[offs:offs + r] for row in full])
        offs += r
    return StandardDatum(frame, d, ranks, out)


def identity_datum(frame, d, ranks):
    n = sum(ranks)
    full = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    return datum_from_columns(frame, d, ranks, full)


def random_datum(frame, d, ranks, rng):
    n = sum(ranks)
    W = frame.W
    while True:
        full = [[W.random(rng) for _ in range(n)] for _ in range(n)]
        try:
            return datum_from_columns(frame, d, ranks, full)
        except DatumInvalid:
            continue


# ---------------------------------------------------------------------------
# modules


class BlockLevel:
    """A direct sum of blocks ``J_k L`` (twist ``k``) and ``L`` (twist 0)."""

    def __init__(self, frame, blocks):
        self.frame = frame
        self.blocks = tuple(blocks)
        self.slots = []
        for b, (k, r) in enumerate(self.blocks):
            self.slots += [(b, k)] * r
        self.rank = len(self.slots)
        self._jgroup = {}

    def _zero_entry(self, k):
        return self.frame.j_zero() if k else self.frame.W.zero()

    def zero(self):
        return tuple(self._zero_entry(k) for _, k in self.slots)

    def add(self, x, y):
        F = self.frame
        return tuple(F.j_add(a, b) if k else a + b for (_, k), a, b in zip(self.slots, x, y))

    def neg(self, x):
        F = self.frame
        return tuple(F.j_neg(a) if k else -a for (_, k), a in zip(self.slots, x))

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def scale(self, w, x):
        F = self.frame
        return tuple(F.j_scale(w, a) if k else w * a for (_, k), a in zip(self.slots, x))

    def key(self, x):
        return tuple(a.key() for a in x)

    def eq(self, x, y):
        return self.key(x) == self.key(y)

    def unit(self, pos, entry):
        z = list(self.zero())
        z[pos] = entry
        return tuple(z)

    def twist_gens(self, k):
        return self.frame.j_power(k)

    def twist_group(self, k):
        if k not in self._jgroup:
            self._jgroup[k] = self.frame.j_group(self.frame.j_power(k))
        return self._jgroup[k]

    def gens(self):
        """W-module generators, tagged with the block they come from."""
        out = []
        one = self.frame.W.one()
        for pos, (b, k) in enumerate(self.slots):
            if k:
                out += [(b, self.unit(pos, g)) for g in self.twist_gens(k)]
            else:
                out.append((b, self.unit(pos, one)))
        return out

    def additive_gens(self):
        out = []
        wg = self.frame.W.additive_gens()
        for pos, (b, k) in enumerate(self.slots):
            if k:
                out += [self.unit(pos, g) for g in self.twist_group(k).gens]
            else:
                out += [self.unit(pos, w) for w in wg]
        return out

    def group(self):
        return _group_of(self)

    def random(self, rng):
        F = self.frame
        out = []
        for _, k in self.slots:
            if k:
                acc = F.j_zero()
                for g in self.twist_gens(k):
                    acc = F.j_add(acc, F.j_scale(F.W.random(rng), g))
                out.append(acc)
            else:
                out.append(F.W.random(rng))
        return tuple(out)

    def format(self, x):
        return "(" + ", ".join(str(a) for a in x) + ")"


def _group_of(level):
    grp = GrownGroup(level.zero(), level.add, level.key)
    for g in level.additive_gens():
        grp.absorb(g)
    return grp


class VecSpace:
    """Free module of Witt vectors at a fixed precision (divided Frobenius values)."""

    def __init__(self, S, rank, prec):
        self.S = S
        self.rank = rank
        self.prec = prec

    def zero(self):
        return tuple(WittEl.zero(self.S, self.prec) for _ in range(self.rank))

    def add(self, u, v):
        return tuple(a + b for a, b in zip(u, v))

    def sub(self, u, v):
        return tuple(a - b for a, b in zip(u, v))

    def scale(self, w, u):
        return tuple(w * a for a in u)

    def eq(self, u, v):
        return all(a == b for a, b in zip(u, v))

    def format(self, u):
        return "(" + ", ".join(str(a) for a in u) + ")"


def sigma_apply(M, x, frame):
    """``M * sigma(x)`` for a Witt matrix ``M`` and a Witt column ``x``."""
    sx = [frame.sigma(a) for a in x]
    prec = frame.prec - 1
    out = []
    for row in M:
        acc = WittEl.zero(frame.S, prec)
        for m, s in zip(row, sx):
            acc = acc + m * s
        out.append(acc)
    return tuple(out)


def tilde_extend(frame, f):
    """The map ``eta (x) m -> sigma_dot(eta) f(m)`` built from a sigma-linear ``f``."""
    def ft(eta, m):
        return tuple(frame.sigma_dot(eta) * v for v in f(m))
    return ft


# ---------------------------------------------------------------------------
# predisplays


class Predisplay:
    """Levels ``P_0..P_imax`` with ``iota``, ``alpha`` and divided Frobenius maps.

    Subclasses provide ``levels``, ``fspace``, ``iota(i, x)``,
    ``alpha(i, eta, x)`` and ``F(i, x)``.
    """

    frame = None
    i_max = 0

    def level(self, i):
        return self.levels[i]

    def check(self, samples=20, seed=0, title=None):
        return predisplay_check(self, samples, seed, title)


def predisplay_check(P, samples=20, seed=0, title=None):
    rng = random.Random(seed)
    F = P.frame
    rep = Report(title or f"predisplay i_max={P.i_max} {F.describe()}", seed)
    fs = P.fspace
    jgens = F.j_gens()
    etas = jgens + [F.j_random(rng) for _ in range(max(2, samples // 4))]

    def tagged(i):
        lv = P.level(i)
        gens = list(lv.gens())
        gens += [(None, lv.random(rng)) for _ in range(samples)]
        return gens

    pools = [tagged(i) for i in range(P.i_max + 1)]

    def case_name(i, b):
        if b is None:
            return "sample"
        return "j<i" if b < i else ("j=i" if b == i else "j>i")

    for i in range(P.i_max):
        lv_i, lv_next = P.level(i), P.level(i + 1)
        bad = {}
        for b, x in pools[i]:
            for eta in etas:
                ax = P.alpha(i, eta, x)
                lhs = P.iota(i, ax)
                if not lv_i.eq(lhs, lv_i.scale(F.raw(eta), x)):
                    bad.setdefault("P2", (eta, lv_i.format(x)))
                if i >= 1:
                    rhs = P.alpha(i - 1, eta, P.iota(i - 1, x))
                    if not lv_i.eq(lhs, rhs):
                        bad.setdefault("P1", (eta, lv_i.format(x)))
                f_lhs = P.F(i + 1, ax)
                f_rhs = fs.scale(F.sigma_dot(eta), P.F(i, x))
                if not fs.eq(f_lhs, f_rhs):
                    bad.setdefault(f"P3 {case_name(i, b)}", (eta, lv_i.format(x)))
        for name in ("P1", "P2"):
            if name == "P1" and i == 0:
                continue
            rep.add(f"{name} level {i}", name not in bad, _fmt(bad.get(name)))
        p3 = [k for k in bad if k.startswith("P3")]
        rep.add(f"P3 level {i}", not p3, _fmt(bad[p3[0]]) if p3 else "",
                ",".join(sorted(p3)) if p3 else "")
        bad_c = None
        for _, y in pools[i + 1]:
            lhs = P.F(i, P.iota(i, y))
            rhs = fs.scale(F.W.from_int(F.p, F.prec - 1), P.F(i + 1, y))
            if not fs.eq(lhs, rhs):
                bad_c = lv_next.format(y)
                break
        rep.add(f"F_i iota_i = p F_(i+1) level {i}", bad_c is None, bad_c or "")
    for i in range(P.i_max + 1):
        lv = P.level(i)
        bad = None
        for _, x in pools[i][:samples]:
            w = F.W.random(rng)
            if not fs.eq(P.F(i, lv.scale(w, x)), fs.scale(F.sigma(w), P.F(i, x))):
                bad = lv.format(x)
                break
        rep.add(f"F_{i} sigma-linear", bad is None, bad or "")
    return rep


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, tuple):
        return "; ".join(str(t) for t in x)
    return str(x)


class DatumDisplay(Predisplay):
    """The predisplay built from a standard datum by the block recipe."""

    def __init__(self, datum, i_max=None):
        self.datum = datum
        self.frame = datum.frame
        self.i_max = datum.d if i_max is None else i_max
        if self.i_max < 0:
            raise InputError("i_max must be nonnegative")
        d, ranks = datum.d, datum.ranks
        self.levels = [BlockLevel(self.frame, [(max(i - j, 0), ranks[j]) for j in range(d + 1)])
                       for i in range(self.i_max + 1)]
        self.fspace = VecSpace(self.frame.S, datum.rank, self.frame.prec - 1)
        self.offsets = datum.offsets()
        # one copy of the Phi blocks per level, so single levels can be perturbed
        self.phi = [[[list(row) for row in M] for M in datum.Phi]
                    for _ in range(self.i_max + 1)]

    def _block_entries(self, x, j):
        o = self.offsets[j]
        return x[o:o + self.datum.ranks[j]]

    def iota(self, i, x):
        F = self.frame
        out = []
        for (b, k_next), (_, k_here), a in zip(self.levels[i + 1].slots, self.levels[i].slots, x):
            if k_next and k_here:
                out.append(F.pi(a))
            elif k_next:
                out.append(F.raw(a))
            else:
                out.append(a)
        return tuple(out)

    def alpha(self, i, eta, x):
        F = self.frame
        w = F.raw(eta)
        out = []
        for (b, k_here), a in zip(self.levels[i].slots, x):
            if k_here:
                out.append(F.nu(eta, a))
            elif b == i:
                out.append(F.j_scale(a, eta))
            else:
                out.append(w * a)
        return tuple(out)

    def F(self, i, x):
        fr = self.frame
        acc = self.fspace.zero()
        for j in range(self.datum.d + 1):
            if not self.datum.ranks[j]:
                continue
            M = self.phi[i][j]
            ent = self._block_entries(x, j)
            if j < i:
                vals = tuple(fr.sigma_dot(e) for e in ent)
                col = tuple(sum((m * v for m, v in zip(row, vals)),
                                WittEl.zero(fr.S, fr.prec - 1)) for row in M)
            else:
                col = sigma_apply(M, ent, fr)
                if j > i:
                    c = WittEl.from_int(fr.S, fr.p ** (j - i), fr.prec - 1)
                    col = tuple(c * v for v in col)
            acc = self.fspace.add(acc, col)
        return acc

    def inject_fault(self, level, block, row, col, delta):
        """Perturb one entry of the Phi block used by a single divided Frobenius."""
        M = self.phi[level][block]
        M[row][col] = M[row][col] + delta


def display_build(datum, i_max=None):
    return DatumDisplay(datum, i_max)


# ---------------------------------------------------------------------------
# morphisms


class PredisplayMorphism:
    """Maps ``psi_i: P_i -> Q_i`` and the induced map on divided Frobenius values."""

    def __init__(self, src, dst, psi, psi_f):
        if src.i_max != dst.i_max:
            raise InputError("predisplays truncated at different levels")
        self.src = src
        self.dst = dst
        self.psi = psi
        self.psi_f = psi_f

    def compose(self, other):
        """``self`` after ``other``."""
        return PredisplayMorphism(other.src, self.dst,
                                  [(lambda x, f=f, g=g: f(g(x))) for f, g in zip(self.psi, other.psi)],
                                  lambda u: self.psi_f(other.psi_f(u)))

    def check(self, samples=10, seed=0):
        return morphism_check(self, samples, seed)


def morphism_check(m, samples=10, seed=0):
    rng = random.Random(seed)
    P, Q = m.src, m.dst
    F = P.frame
    rep = Report("predisplay morphism", seed)
    etas = F.j_gens() + [F.j_random(rng) for _ in range(2)]
    pools = [[x for _, x in P.level(i).gens()] + [P.level(i).random(rng) for _ in range(samples)]
             for i in range(P.i_max + 1)]
    for i in range(P.i_max + 1):
        lvP, lvQ = P.level(i), Q.level(i)
        bad = None
        for x in pools[i]:
            w = F.W.random(rng)
            y = lvP.add(x, lvP.scale(w, pools[i][0]))
            lhs = m.psi[i](y)
            rhs = lvQ.add(m.psi[i](x), lvQ.scale(w, m.psi[i](pools[i][0])))
            if not lvQ.eq(lhs, rhs):
                bad = lvP.format(x)
                break
        rep.add(f"psi_{i} linear", bad is None, bad or "")
        bad = None
        for x in pools[i]:
            if not Q.fspace.eq(Q.F(i, m.psi[i](x)), m.psi_f(P.F(i, x))):
                bad = lvP.format(x)
                break
        rep.add(f"F square level {i}", bad is None, bad or "")
        if i == P.i_max:
            continue
        bad = None
        for y in pools[i + 1]:
            if not lvQ.eq(m.psi[i](P.iota(i, y)), Q.iota(i, m.psi[i + 1](y))):
                bad = P.level(i + 1).format(y)
                break
        rep.add(f"iota square level {i}", bad is None, bad or "")
        bad = None
        lvQn = Q.level(i + 1)
        for x in pools[i]:
            for eta in etas:
                if not lvQn.eq(m.psi[i + 1](P.alpha(i, eta, x)), Q.alpha(i, eta, m.psi[i](x))):
                    bad = (eta, lvP.format(x))
                    break
            if bad:
                break
        rep.add(f"alpha square level {i}", bad is None, _fmt(bad))
    return rep


def identity_morphism(P):
    return PredisplayMorphism(P, P, [lambda x: x] * (P.i_max + 1), lambda u: u)


def scalar_morphism(P, w):
    """Multiplication by a Witt vector on every level."""
    wf = w.truncate(P.frame.prec - 1)
    return PredisplayMorphism(P, P, [(lambda x, lv=lv: lv.scale(w, x)) for lv in P.levels],
                              lambda u: P.fspace.scale(wf, u))


# ---------------------------------------------------------------------------
# direct sums


class _PairLevel:
    def __init__(self, a, b):
        self.a, self.b = a, b
        self.frame = a.frame

    def zero(self):
        return (self.a.zero(), self.b.zero())

    def add(self, x, y):
        return (self.a.add(x[0], y[0]), self.b.add(x[1], y[1]))

    def neg(self, x):
        return (self.a.neg(x[0]), self.b.neg(x[1]))

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def scale(self, w, x):
        return (self.a.scale(w, x[0]), self.b.scale(w, x[1]))

    def key(self, x):
        return (self.a.key(x[0]), self.b.key(x[1]))

    def eq(self, x, y):
        return self.a.eq(x[0], y[0]) and self.b.eq(x[1], y[1])

    def gens(self):
        out = [(t, (g, self.b.zero())) for t, g in self.a.gens()]
        out += [(t, (self.a.zero(), g)) for t, g in self.b.gens()]
        return out

    def additive_gens(self):
        return [(g, self.b.zero()) for g in self.a.additive_gens()] + \
            [(self.a.zero(), g) for g in self.b.additive_gens()]

    def random(self, rng):
        return (self.a.random(rng), self.b.random(rng))

    def format(self, x):
        return f"[{self.a.format(x[0])} + {self.b.format(x[1])}]"


class _PairSpace:
    def __init__(self, a, b):
        self.a, self.b = a, b

    def zero(self):
        return (self.a.zero(), self.b.zero())

    def add(self, u, v):
        return (self.a.add(u[0], v[0]), self.b.add(u[1], v[1]))

    def sub(self, u, v):
        return (self.a.sub(u[0], v[0]), self.b.sub(u[1], v[1]))

    def scale(self, w, u):
        return (self.a.scale(w, u[0]), self.b.scale(w, u[1]))

    def eq(self, u, v):
        return self.a.eq(u[0], v[0]) and self.b.eq(u[1], v[1])

    def format(self, u):
        return f"[{self.a.format(u[0])} + {self.b.format(u[1])}]"


class DirectSum(Predisplay):
    def __init__(self, P, Q):
        if P.frame is not Q.frame:
            raise InputError("direct sum needs a common frame")
        if P.i_max != Q.i_max:
            raise InputError("direct sum needs a common truncation level")
        self.P, self.Q = P, Q
        self.frame = P.frame
        self.i_max = P.i_max
        self.levels = [_PairLevel(a, b) for a, b in zip(P.levels, Q.levels)]
        self.fspace = _PairSpace(P.fspace, Q.fspace)

    def iota(self, i, x):
        return (self.P.iota(i, x[0]), self.Q.iota(i, x[1]))

    def alpha(self, i, eta, x):
        return (self.P.alpha(i, eta, x[0]), self.Q.alpha(i, eta, x[1]))

    def F(self, i, x):
        return (self.P.F(i, x[0]), self.Q.F(i, x[1]))


def predisplay_dsum(P, Q):
    return DirectSum(P, Q)


# ---------------------------------------------------------------------------
# pullback and base change


class _RestrictedLevel:
    """A level viewed as a module over the source frame of ``u``."""

    def __init__(self, level, u):
        self.inner = level
        self.u = u
        self.frame = u.src

    def __getattr__(self, name):
        return getattr(self.inner, name)

    def scale(self, w, x):
        return self.inner.scale(self.u.w(w), x)

    def gens(self):
        return [(None, g) for g in self.inner.additive_gens()]

    def random(self, rng):
        return self.inner.random(rng)


class _RestrictedSpace:
    def __init__(self, space, u):
        self.inner = space
        self.u = u

    def __getattr__(self, name):
        return getattr(self.inner, name)

    def scale(self, w, v):
        return self.inner.scale(self.u.w(w), v)


class Pullback(Predisplay):
    """``u^*`` of a predisplay: same data, scalars and ideal act through ``u``."""

    def __init__(self, u, P):
        if P.frame is not u.dst:
            raise InputError("predisplay is not over the target frame")
        self.u = u
        self.base = P
        self.frame = u.src
        self.i_max = P.i_max
        if u.ring_map is None:
            self.levels = P.levels
            self.fspace = P.fspace
        else:
            self.levels = [_RestrictedLevel(lv, u) for lv in P.levels]
            self.fspace = _RestrictedSpace(P.fspace, u)

    def iota(self, i, x):
        return self.base.iota(i, x)

    def alpha(self, i, eta, x):
        return self.base.alpha(i, self.u.j(eta), x)

    def F(self, i, x):
        return self.base.F(i, x)


def pullback(u, P):
    return Pullback(u, P)


def base_change(u, datum):
    if datum.frame is not u.src:
        raise InputError("datum is not over the source frame")
    Phi = [[[u.w(x) for x in row] for row in M] for M in datum.Phi]
    return StandardDatum(u.dst, datum.d, datum.ranks, Phi)
