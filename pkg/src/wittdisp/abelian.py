"""Kernels, cokernels and morphism sets of predisplays with finite levels."""

from .displays import Predisplay, PredisplayMorphism, base_change, display_build, pullback
from .errors import InputError, NotFinite
from .finite import DEFAULT_LIMIT, GrownGroup, LinearMapSearch

ELEMENT_LIMIT = 20_000


def _ops(level):
    return (level.zero(), level.add, level.key)


def level_elements(level, limit=ELEMENT_LIMIT):
    grp = GrownGroup(*_ops(level), limit=limit)
    try:
        for g in level.additive_gens():
            grp.absorb(g)
    except Exception as exc:
        if exc.__class__.__name__ == "BudgetExceeded":
            raise NotFinite(f"module has more than {limit} elements") from exc
        raise
    return grp.elements()


class SubLevel:
    """A submodule given as an explicit set of elements of a parent level."""

    def __init__(self, parent, elements):
        self.parent = parent
        self.frame = parent.frame
        self.members = {parent.key(x): x for x in elements}
        ordered = sorted(self.members.items(), key=lambda kv: repr(kv[0]))
        scalars = self.frame.W.additive_gens()
        grp = GrownGroup(*_ops(parent))
        self._gens = []
        for _, x in ordered:
            if x in grp:
                continue
            self._gens.append(x)
            for b in scalars:
                grp.absorb(parent.scale(b, x))
        self._additive = list(grp.gens)

    def __getattr__(self, name):
        return getattr(self.parent, name)

    def gens(self):
        return [(None, g) for g in self._gens]

    def additive_gens(self):
        return list(self._additive)

    def random(self, rng):
        keys = sorted(self.members, key=repr)
        return self.members[keys[rng.randrange(len(keys))]]

    @property
    def size(self):
        return len(self.members)


class QuotLevel:
    """A level modulo a submodule; elements are representatives."""

    def __init__(self, parent, sub_elements):
        self.parent = parent
        self.frame = parent.frame
        sub = list(sub_elements)
        self._coset = {}
        n = 0
        for x in level_elements(parent):
            if parent.key(x) in self._coset:
                continue
            for h in sub:
                self._coset[parent.key(parent.add(x, h))] = n
            n += 1
        self.size = n

    def __getattr__(self, name):
        return getattr(self.parent, name)

    def key(self, x):
        return self._coset[self.parent.key(x)]

    def eq(self, x, y):
        return self.key(x) == self.key(y)


class QuotSpace:
    def __init__(self, parent, sub_vectors):
        self.parent = parent
        self._sub = {tuple(a.key() for a in v) for v in sub_vectors}

    def __getattr__(self, name):
        return getattr(self.parent, name)

    def eq(self, u, v):
        return tuple(a.key() for a in self.parent.sub(u, v)) in self._sub


class Kernel(Predisplay):
    def __init__(self, m):
        P = m.src
        self.base = P
        self.frame = P.frame
        self.i_max = P.i_max
        self.levels = []
        for i in range(P.i_max + 1):
            lvQ = m.dst.level(i)
            zero = lvQ.zero()
            els = [x for x in level_elements(P.level(i)) if lvQ.eq(m.psi[i](x), zero)]
            self.levels.append(SubLevel(P.level(i), els))
        self.fspace = P.fspace

    def iota(self, i, x):
        return self.base.iota(i, x)

    def alpha(self, i, eta, x):
        return self.base.alpha(i, eta, x)

    def F(self, i, x):
        return self.base.F(i, x)


class Cokernel(Predisplay):
    def __init__(self, m):
        P, Q = m.src, m.dst
        self.base = Q
        self.frame = Q.frame
        self.i_max = Q.i_max
        self.levels = []
        images0 = None
        for i in range(Q.i_max + 1):
            imgs = {}
            for x in level_elements(P.level(i)):
                y = m.psi[i](x)
                imgs[Q.level(i).key(y)] = y
            if i == 0:
                images0 = list(imgs.values())
            self.levels.append(QuotLevel(Q.level(i), imgs.values()))
        prec = Q.frame.prec - 1
        self.fspace = QuotSpace(Q.fspace, [tuple(a.truncate(prec) for a in y) for y in images0])

    def iota(self, i, x):
        return self.base.iota(i, x)

    def alpha(self, i, eta, x):
        return self.base.alpha(i, eta, x)

    def F(self, i, x):
        return self.base.F(i, x)


def kernel(m):
    return Kernel(m)


def cokernel(m):
    return Cokernel(m)


def kernel_inclusion(m):
    K = Kernel(m)
    return PredisplayMorphism(K, m.src, [lambda x: x] * (K.i_max + 1), lambda u: u)


# ---------------------------------------------------------------------------
# morphism enumeration


def hom_enumerate(P, Q, limit=DEFAULT_LIMIT):
    """Every predisplay morphism P -> Q, for finite levels and a free ``P_0``.

    ``P_0`` must be a block level without twists (true for displays built from
    standard data and their pullbacks), so that the map on divided Frobenius
    values is the matrix of ``psi_0``.
    """
    if P.i_max != Q.i_max:
        raise InputError("predisplays truncated at different levels")
    F = P.frame
    if any(k for _, k in P.level(0).slots):
        raise InputError("the source needs an untwisted P_0")
    scalars = F.W.additive_gens()
    etas = F.j_gens()
    prec = Q.frame.prec - 1 if hasattr(Q.frame, "prec") else F.prec - 1
    searches, targets, gens = [], [], []
    for i in range(P.i_max + 1):
        g = [x for _, x in P.level(i).gens()]
        gens.append(g)
        searches.append(LinearMapSearch(g, scalars, P.level(i).scale, _ops(P.level(i)), limit))
        targets.append(level_elements(Q.level(i)))
    found = []

    def psi_f_of(psi0):
        vecs = [tuple(a.truncate(prec) for a in psi0(e)) for e in gens[0]]

        def psi_f(u):
            acc = Q.fspace.zero()
            for c, v in zip(u, vecs):
                acc = Q.fspace.add(acc, Q.fspace.scale(c, v))
            return acc
        return psi_f

    def extend(i, maps, psi_f):
        if i > P.i_max:
            found.append(PredisplayMorphism(P, Q, list(maps), psi_f))
            return
        lvP, lvQ = P.level(i), Q.level(i)
        tgt = _ops(lvQ)
        if i == 0:
            pool = targets[0]
            for imgs in searches[0].search(pool, lvQ.scale, tgt):
                psi0 = searches[0].evaluator(imgs, lvQ.scale, tgt)
                pf = psi_f_of(psi0)
                if all(Q.fspace.eq(Q.F(0, y), pf(P.F(0, x))) for x, y in zip(gens[0], imgs)):
                    extend(1, [psi0], pf)
            return
        prev = maps[-1]
        by_iota = {}
        for y in targets[i]:
            by_iota.setdefault(Q.level(i - 1).key(Q.iota(i - 1, y)), []).append(y)
        cands = []
        for x in gens[i]:
            want = Q.level(i - 1).key(prev(P.iota(i - 1, x)))
            fx = psi_f(P.F(i, x))
            cands.append([y for y in by_iota.get(want, []) if Q.fspace.eq(Q.F(i, y), fx)])
        for imgs in searches[i].search(targets[i], lvQ.scale, tgt, candidates=lambda m: cands[m]):
            psi = searches[i].evaluator(imgs, lvQ.scale, tgt)
            ok = all(lvQ.eq(psi(P.alpha(i - 1, eta, x)), Q.alpha(i - 1, eta, prev(x)))
                     for eta in etas for x in gens[i - 1])
            if ok:
                extend(i + 1, maps + [psi], psi_f)

    extend(0, [], None)
    return found


def adjunction_counts(u, datum_src, datum_dst, i_max=None):
    """``|Hom(u_* D', E)|`` and ``|Hom(D', u^* E)|`` for data over the two frames."""
    Dp = display_build(datum_src, i_max)
    E = display_build(datum_dst, i_max)
    left = hom_enumerate(display_build(base_change(u, datum_src), i_max), E)
    right = hom_enumerate(Dp, pullback(u, E))
    return len(left), len(right)
