"""The built-in suite behind ``wittdisp selftest``.

Every random choice flows from the seed, and reports carry no timings, so
the output is byte-identical for a fixed seed.
"""

import random

from .cy import classify, cy_make, point
from .displays import display_build, predisplay_check, random_datum
from .filtration import display_lift, hodge_fil
from .frames import Report, frame_check, frame_relative, frame_witt, verj_check
from .ghostlift import oracle_add, oracle_frobenius, oracle_mul
from .ring import Ideal, RingHom, ring_make
from .witt import WittEl, witt_structure_polys


def witt_suite(seed, quick=True):
    rep = Report("Witt vectors", seed)
    for p, n in ([(2, 3), (3, 2)] if quick else [(2, 4), (3, 4), (5, 3)]):
        ok, where = witt_structure_polys(p, n).verify_ghost_identities()
        rep.add(f"ghost identities p={p} n={n}", ok, "" if ok else str(where))
    rng = random.Random(seed)
    rings = [ring_make(2, 2), ring_make(2, 1, ["t"], [{"t": 3}]), ring_make(3, 1, ["t"], [{"t": 2}])]
    for R in rings:
        n = 3
        els = list(R.elements())
        bad = None
        for _ in range(40 if quick else 300):
            xs = [rng.choice(els) for _ in range(n)]
            ys = [rng.choice(els) for _ in range(n)]
            a, b = WittEl(R, xs, n), WittEl(R, ys, n)
            fr = a.frobenius()
            if list((a + b).comps[:n]) != oracle_add(R, xs, ys) or \
                    list((a * b).comps[:n]) != oracle_mul(R, xs, ys) or \
                    list(fr.comps[:fr.prec]) != oracle_frobenius(R, xs):
                bad = (xs, ys)
                break
        rep.add(f"arithmetic agrees with the ghost oracle over {R.describe()}", bad is None,
                "" if bad is None else f"x={[str(c) for c in bad[0]]} y={[str(c) for c in bad[1]]}")
    return [rep]


def _frames():
    S = ring_make(2, 1, ["e"], [{"e": 2}])
    F2 = ring_make(2, 1)
    Z4 = ring_make(2, 2)
    a1 = RingHom(S, F2, {"e": 0})
    a2 = RingHom(Z4, F2, {})
    return [frame_witt(S, 3), frame_relative(a1, a1.kernel(pd="trivial"), 3),
            frame_relative(a2, a2.kernel(pd="p-adic"), 3)]


def frame_suite(seed, quick=True):
    n = 50 if quick else 500
    out = []
    for k, F in enumerate(_frames()):
        out.append(frame_check(F, n, seed + k))
        out.append(verj_check(F, n, seed + k))
    return out


def display_suite(seed, quick=True):
    rng = random.Random(seed)
    frames = _frames()[1:]
    rep = Report("random standard data", seed)
    faults = Report("single-entry faults", seed)
    fil = Report("Hodge filtration ranks", seed)
    count = 6 if quick else 40
    for k in range(count):
        F = frames[k % len(frames)]
        d = rng.randrange(0, 3)
        ranks = tuple(rng.randrange(0, 3) for _ in range(d + 1))
        if not sum(ranks):
            ranks = (1,) + ranks[1:]
        datum = random_datum(F, d, ranks, rng)
        P = display_build(datum)
        r = predisplay_check(P, 4, seed + k)
        rep.add(f"datum {k:02d} d={d} ranks={ranks}", r.ok,
                "" if r.ok else r.failures()[0].name)
        h = hodge_fil(P).ranks()
        want = [sum(ranks[i:]) for i in range(d + 1)] + [0]
        fil.add(f"datum {k:02d} ranks {want}", h == want, "" if h == want else str(h))
        # with d = 0 a perturbed Phi_0 is just another datum, so faults go to levels >= 1
        if d == 0:
            continue
        i = rng.randrange(1, d + 1)
        j = rng.randrange(0, i + 1)
        if not ranks[j]:
            continue
        Q = display_build(datum)
        Q.inject_fault(i, j, rng.randrange(sum(ranks)), rng.randrange(ranks[j]),
                       WittEl.one(F.S, F.prec))
        r = predisplay_check(Q, 4, seed + k)
        faults.add(f"datum {k:02d} fault at level {i} block {j} detected", not r.ok,
                   "" if not r.ok else "no axiom failed")
    return [rep, faults, fil]


def lift_suite(seed, quick=True):
    rng = random.Random(seed)
    F = _frames()[1]
    rep = Report("lifting the Hodge filtration", seed)
    from .filtration import Lifting
    for d in ([1] if quick else [1, 2]):
        ranks = (1,) * (d + 1)
        datum = random_datum(F, d, ranks, rng)
        P = display_build(datum)
        fil = hodge_fil(P)
        S = F.S
        # the residue ring is F_2, so basis vectors lift coefficientwise
        steps = [[[S.from_vector(list(x.vec) + [0] * (S.dim - len(x.vec))) for x in v]
                  for v in fil.basis(i)] for i in range(d + 1)]
        L = display_lift(P, Lifting(S, sum(ranks), steps))
        a, b = L.round_trip_a(), L.round_trip_b()
        rep.add(f"d={d} round trip through base change", a.ok,
                "" if a.ok else a.failures()[0].name)
        rep.add(f"d={d} round trip on filtrations", b.ok, "" if b.ok else b.failures()[0].name)
    return [rep]


def cy_suite(seed, quick=True):
    out = []
    cases = [(2, 1), (3, 1)] + ([] if quick else [(2, 2)])
    for p, h in cases:
        S = ring_make(p, 1, ["e"], [{"e": 2}])
        C = cy_make(h, p)
        cert = classify(C, point(C, S, [0] * h), Ideal(S, [S.gen("e")], pd="trivial"),
                        title=f"classify h={h} over F_{p}[e]/(e^2)")
        cert.report.seed = seed
        out.append(cert.report)
    return out


def run_selftest(seed=0, quick=True):
    reports = []
    for suite in (witt_suite, frame_suite, display_suite, lift_suite, cy_suite):
        reports += suite(seed, quick)
    return reports
