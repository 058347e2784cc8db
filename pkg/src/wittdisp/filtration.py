"""Hodge filtrations of displays, admissible liftings, and the lifted display."""

from dataclasses import dataclass, field

from .displays import (PredisplayMorphism, StandardDatum, base_change, display_build,
                       morphism_check)
from .errors import InputError, NotAdmissible, PrecisionExhausted
from .frames import Report, frame_hom_make, frame_witt
from .ring import image_summand, solve_linear, span_contains, transpose
from .witt import WittEl, teichmuller


def iota_down(P, i, x, stop=0):
    """Push an element of ``P_i`` down to ``P_stop`` along the iota maps."""
    for k in range(i - 1, stop - 1, -1):
        x = P.iota(k, x)
    return x


def same_span(R, gens1, gens2):
    return all(span_contains(R, gens2, v) for v in gens1) and \
        all(span_contains(R, gens1, v) for v in gens2)


@dataclass
class HodgeFiltration:
    ring: object
    rank: int
    steps: list

    def basis(self, i):
        if i >= len(self.steps):
            return []
        return self.steps[i].summand_basis

    def ranks(self):
        return [s.unit_rank for s in self.steps]

    def is_summand_chain(self):
        if not all(s.is_direct_summand for s in self.steps):
            return False
        return all(span_contains(self.ring, self.basis(i - 1), v)
                   for i in range(1, len(self.steps)) for v in self.basis(i))


def hodge_fil(P):
    """Images of the ``P_i`` in ``P_0`` modulo the frame ideal, over ``R``."""
    F = P.frame
    R = F.R
    r = P.level(0).rank
    steps = []
    for i in range(P.i_max + 1):
        vecs = []
        for _, x in P.level(i).gens():
            y = iota_down(P, i, x)
            vecs.append([F.to_R(w) for w in y])
        steps.append(image_summand(R, vecs, r))
    steps.append(image_summand(R, [], r))
    return HodgeFiltration(R, r, steps)


@dataclass
class Lifting:
    """Generators of ``E^0 ⊇ E^1 ⊇ ...`` inside ``S^rank``."""

    ring: object
    rank: int
    steps: list

    def step(self, i):
        if i < len(self.steps):
            return self.steps[i]
        return []


@dataclass
class AdmissibleResult:
    ok: bool
    failures: list = field(default_factory=list)
    preimages: dict = field(default_factory=dict)


def _reduce_to_S(P, i):
    out = []
    for _, x in P.level(i).gens():
        out.append([w.comps[0] for w in iota_down(P, i, x)])
    return out


def admissible_check(E, P):
    """Does ``E`` lift the Hodge filtration inside the images of the ``P_i``?"""
    F = P.frame
    S = F.S
    res = AdmissibleResult(True)
    fil = hodge_fil(P)
    for i in range(P.i_max + 1):
        gens = E.step(i)
        imgs = _reduce_to_S(P, i)
        M = transpose(imgs) if imgs else [[] for _ in range(E.rank)]
        for n, v in enumerate(gens):
            if not imgs:
                sol_ok = all(x.is_zero() for x in v)
                sol = None
            else:
                sol = solve_linear(S, M, v)
                sol_ok = sol.ok
            if not sol_ok:
                res.ok = False
                res.failures.append(f"E^{i} generator {n} is outside the image of P_{i}")
            else:
                res.preimages[(i, n)] = sol.x if sol else []
        info = image_summand(S, gens, E.rank)
        if not info.is_direct_summand:
            res.ok = False
            res.failures.append(f"E^{i} is not a direct summand")
        reduced = [[F.alpha(x) for x in v] for v in gens]
        if not same_span(F.R, reduced, fil.basis(i)):
            res.ok = False
            res.failures.append(f"E^{i} does not reduce to Fil^{i}")
        if info.unit_rank != fil.steps[i].unit_rank:
            res.ok = False
            res.failures.append(f"E^{i} has rank {info.unit_rank}, Fil^{i} has "
                                f"{fil.steps[i].unit_rank}")
    return res


# ---------------------------------------------------------------------------
# the lifted display


def _witt_matmul(A, B, S, prec):
    n = len(B[0]) if B else 0
    out = []
    for row in A:
        new = []
        for j in range(n):
            acc = WittEl.zero(S, prec)
            for k, a in enumerate(row):
                acc = acc + a * B[k][j]
            new.append(acc)
        out.append(new)
    return out


def _witt_matvec(A, v, S, prec):
    out = []
    for row in A:
        acc = WittEl.zero(S, prec)
        for a, x in zip(row, v):
            acc = acc + a * x
        out.append(acc)
    return tuple(out)


def _lift_coefficient(F, c, twist):
    """An element of J_twist whose first component is ``c``."""
    if c.is_zero():
        return F.j_zero()
    if twist == 1:
        if not F.ideal.contains(c):
            raise NotAdmissible(f"coefficient {c} is not in the PD ideal")
        return F.j(c)
    gens = [g for g in F.j_power(twist) if not g.a.is_zero()]
    if not gens:
        raise NotAdmissible(f"coefficient {c} needs a nonzero ideal part of J_{twist}")
    sol = solve_linear(F.S, [[g.a for g in gens]], [c])
    if not sol.ok:
        raise NotAdmissible(f"coefficient {c} is not reachable from J_{twist}")
    acc = F.j_zero()
    for s, g in zip(sol.x, gens):
        if not s.is_zero():
            acc = F.j_add(acc, F.j_scale(teichmuller(s, F.prec), g))
    return acc


class LiftedDisplay:
    """The datum over the Witt frame of ``S`` attached to an admissible lifting."""

    def __init__(self, P, E, datum, family, B, Binv, witt_frame):
        self.P = P
        self.E = E
        self.datum = datum
        self.family = family
        self.B = B
        self.Binv = Binv
        self.witt_frame = witt_frame

    # round trip (b): the Hodge filtration of the lifted display is E
    def round_trip_b(self):
        rep = Report("lift round trip: Hodge filtration equals the lifting", 0)
        S = self.witt_frame.S
        fil = hodge_fil(display_build(self.datum, self.P.i_max))
        B0 = [[w.comps[0] for w in row] for row in self.B]
        for i in range(self.P.i_max + 1):
            moved = [[sum((B0[r][c] * v[c] for c in range(len(v))), S.zero)
                      for r in range(len(B0))] for v in fil.basis(i)]
            ok = same_span(S, moved, self.E.step(i))
            rep.add(f"Fil^{i} = E^{i}", ok, "" if ok else f"step {i}")
        return rep

    # round trip (a): base change back to the relative frame recovers P
    def base_change_morphisms(self):
        P = self.P
        F = P.frame
        u = frame_hom_make("sub_relative", self.witt_frame, F)
        Q = display_build(base_change(u, self.datum), P.i_max)
        prec1 = F.prec - 1
        Bt = [[w.truncate(prec1) for w in row] for row in self.B]
        Bit = [[w.truncate(prec1) for w in row] for row in self.Binv]
        S = F.S

        back = {}
        for j in range(self.datum.d + 1):
            for k in range(self.datum.ranks[j]):
                col = self.datum.offsets()[j] + k
                entries = []
                for (blk, tw), row in zip(Q.level(j).slots, self.Binv):
                    w = row[col]
                    entries.append(F.decompose(w) if tw else w)
                back[(j, k)] = tuple(entries)

        def make(src, dst, fam):
            def psi_at(i):
                lvS, lvD = src.level(i), dst.level(i)
                offs = self.datum.offsets()

                def psi(x):
                    acc = lvD.zero()
                    for pos, ((j, tw), e) in enumerate(zip(lvS.slots, x)):
                        k = pos - offs[j]
                        b = fam[(j, k)]
                        if tw == 0:
                            acc = lvD.add(acc, lvD.scale(e, iota_down(dst, j, b, i)))
                        else:
                            part = []
                            for posd, ((blk, twd), y) in enumerate(zip(lvD.slots, b)):
                                if blk < j:
                                    part.append(F.nu(e, y))
                                elif posd == pos:
                                    part.append(e)
                                else:
                                    part.append(F.j_zero() if twd else WittEl.zero(S, F.prec))
                            acc = lvD.add(acc, tuple(part))
                    return acc
                return psi
            return [psi_at(i) for i in range(src.i_max + 1)]

        fwd_fam = {key: b for key, b in self.family.items()}
        psi = PredisplayMorphism(Q, P, make(Q, P, fwd_fam),
                                 lambda v: _witt_matvec(Bt, v, S, prec1))
        chi = PredisplayMorphism(P, Q, make(P, Q, back),
                                 lambda v: _witt_matvec(Bit, v, S, prec1))
        return Q, psi, chi

    def round_trip_a(self, samples=6, seed=0):
        rep = Report("lift round trip: base change recovers the display", seed)
        Q, psi, chi = self.base_change_morphisms()
        for name, m in (("psi", psi), ("inverse", chi)):
            sub = morphism_check(m, samples, seed)
            for r in sub.results:
                rep.add(f"{name}: {r.name}", r.ok, r.witness)
        for i in range(self.P.i_max + 1):
            bad = None
            for _, x in Q.level(i).gens():
                if not Q.level(i).eq(chi.psi[i](psi.psi[i](x)), x):
                    bad = Q.level(i).format(x)
                    break
            for _, y in self.P.level(i).gens():
                if bad:
                    break
                if not self.P.level(i).eq(psi.psi[i](chi.psi[i](y)), y):
                    bad = self.P.level(i).format(y)
            rep.add(f"inverse pair level {i}", bad is None, bad or "")
        return rep


def display_lift(P, E):
    """The lifted standard datum for an admissible lifting ``E`` of ``P``."""
    datum = getattr(P, "datum", None)
    if datum is None:
        raise InputError("lifting needs a display built from a standard datum")
    F = P.frame
    S = F.S
    if P.i_max < datum.d:
        raise InputError("lifting needs the display up to level d")
    if E.ring is not S or E.rank != datum.rank:
        raise InputError("lifting lives in a different module")
    adm = admissible_check(E, P)
    if not adm.ok:
        raise NotAdmissible(adm.failures[0])
    d, ranks, offs = datum.d, datum.ranks, datum.offsets()
    n = datum.rank
    family = {}
    for i in range(d + 1):
        gens = E.step(i)
        full = transpose(gens)
        hi = [r for r in range(n) if any(offs[j] <= r < offs[j] + ranks[j]
                                          for j in range(i, d + 1))]
        Mhi = [full[r] for r in hi]
        level = P.level(i)
        for k in range(ranks[i]):
            target = [S.one if r == offs[i] + k else S.zero for r in hi]
            sol = solve_linear(S, Mhi, target)
            if not sol.ok:
                raise NotAdmissible(f"E^{i} does not project onto the block of degree {i}")
            v = [sum((a * y for a, y in zip(full[r], sol.x)), S.zero) for r in range(n)]
            entries = []
            for pos, (blk, tw) in enumerate(level.slots):
                if blk < i:
                    entries.append(_lift_coefficient(F, v[pos], tw))
                elif pos == offs[i] + k:
                    entries.append(WittEl.one(S, F.prec))
                else:
                    entries.append(F.j_zero() if tw else WittEl.zero(S, F.prec))
            family[(i, k)] = tuple(entries)
    cols = []
    for i in range(d + 1):
        for k in range(ranks[i]):
            cols.append(iota_down(P, i, family[(i, k)]))
    B = transpose([list(c) for c in cols])
    one = WittEl.one(S, F.prec)
    zero = WittEl.zero(S, F.prec)
    N = [[B[r][c] - (one if r == c else zero) for c in range(n)] for r in range(n)]
    negN = [[-x for x in row] for row in N]
    ident = [[one if r == c else zero for c in range(n)] for r in range(n)]
    Binv, power = ident, ident
    for _ in range(d):
        power = _witt_matmul(power, negN, S, F.prec)
        Binv = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(Binv, power)]
    check = _witt_matmul(B, Binv, S, F.prec)
    if any(check[r][c] != (one if r == c else zero) for r in range(n) for c in range(n)):
        raise PrecisionExhausted("adapted basis change is not unipotent")
    prec1 = F.prec - 1
    Binv_t = [[w.truncate(prec1) for w in row] for row in Binv]
    Phi = []
    for i in range(d + 1):
        block_cols = []
        for k in range(ranks[i]):
            v = _witt_matvec(Binv_t, P.F(i, family[(i, k)]), S, prec1)
            block_cols.append([WittEl(S, list(x.comps) + [S.zero], F.prec) for x in v])
        Phi.append(transpose(block_cols) if block_cols else [[] for _ in range(n)])
    WS = frame_witt(S, F.prec)
    new = StandardDatum(WS, d, ranks, Phi)
    return LiftedDisplay(P, E, new, family, B, Binv, WS)
