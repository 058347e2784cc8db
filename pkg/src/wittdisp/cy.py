"""Abstract Calabi-Yau crystals and the classification of their deformations.

A crystal of Hodge numbers ``(1, h, h, 1)`` lives on the free module ``A^(2h+2)``
over ``A = (Z/p^N)[t_1..t_h]`` truncated in total degree ``order``.  The basis is
ordered ``u, v_1..v_h, w_1..w_h, z`` and the Hodge filtration is spanned by
prefixes: ``Fil^3 = <u>``, ``Fil^2 = <u, v>``, ``Fil^1 = <u, v, w>``.  The
connection is ``nabla_i = d/dt_i + N_i`` with ``N_i`` an ``A``-matrix.

Points of the base are ring maps ``A -> S``.  Parallel transport between two
points ``f, g`` that agree modulo a PD ideal is the Taylor series

    Psi_{f,g}(f^* x) = sum_m gamma_m(f(t) - g(t)) g^*(nabla^m x)

over multi-indices ``m``; it is finite because the ``N_i`` shift the filtration
and ``A`` is truncated.
"""

import random
from dataclasses import dataclass, field
from itertools import product

from .errors import (BijectionFailure, CoefficientExtractionFailed, CrystalInvalid,
                     InputError, NotALift, NotEqualOverR, NoPD, RelationViolated)
from .frames import Report
from .ring import (Ideal, RingEl, RingHom, image_summand, is_invertible, kernel_gens, pd_gamma,
                   ring_make, solve_linear, span_contains, transpose)

TRANSPORT_NOTE = ("transport sums gamma_m(f-g) g^*(nabla^m x) over all multi-indices "
                  "until the terms vanish")


def _levels(h):
    return [3] + [2] * h + [1] * h + [0]


def _compositions(total, k):
    if k == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, k - 1):
            yield (first,) + rest


def _matvec(M, x, zero):
    out = []
    for row in M:
        acc = zero
        for a, b in zip(row, x):
            acc = acc + a * b
        out.append(acc)
    return out


def _pair(G, x, y, zero):
    acc = zero
    for i, a in enumerate(x):
        if a.is_zero():
            continue
        for j, b in enumerate(y):
            acc = acc + a * G[i][j] * b
    return acc


def _vkey(v):
    return tuple(x.vec for x in v)


# ---------------------------------------------------------------------------
# the crystal


class CYCrystal:
    """A filtered module with connection and pairing over a truncated power series ring."""

    def __init__(self, h, A, N, gram):
        self.h = h
        self.A = A
        self.n = 2 * h + 2
        self.N = N
        self.gram = gram
        self.levels = _levels(h)
        self.order = max(sum(m) for m in A.monomials) + 1

    @property
    def fil_ranks(self):
        return (1, self.h + 1, 2 * self.h + 1, self.n)

    def fil_indices(self, j):
        """Basis positions spanning ``Fil^j``."""
        return [k for k, lv in enumerate(self.levels) if lv >= j]

    def u_index(self):
        return 0

    def v_index(self, i):
        return 1 + i

    def w_index(self, i):
        return 1 + self.h + i

    def z_index(self):
        return self.n - 1

    def basis_vector(self, k, R=None):
        R = R or self.A
        return [R.one if i == k else R.zero for i in range(self.n)]

    def var(self, i):
        return self.A.vars[i]

    def nabla(self, i, x):
        """``nabla_i`` on a vector over ``A``."""
        A = self.A
        dx = [A.derivative(c, self.var(i)) for c in x]
        nx = _matvec(self.N[i], x, A.zero)
        return [a + b for a, b in zip(dx, nx)]

    def pairing(self, x, y):
        return _pair(self.gram, x, y, self.A.zero)

    def describe(self):
        return f"CY crystal h={self.h} over {self.A.describe()}"


def standard_gram(A, h):
    n = 2 * h + 2
    G = [[A.zero] * n for _ in range(n)]
    G[0][n - 1] = A.one
    G[n - 1][0] = -A.one
    for i in range(h):
        G[1 + i][1 + h + i] = A.one
        G[1 + h + i][1 + i] = -A.one
    return G


def yukawa_matrices(A, h, yukawa):
    """``N_i`` from a symmetric cubic form: u -> v_i, v_j -> sum_k c_ijk w_k, w_i -> -z."""
    n = 2 * h + 2
    out = []
    for i in range(h):
        M = [[A.zero] * n for _ in range(n)]
        M[1 + i][0] = A.one
        for j in range(h):
            for k in range(h):
                M[1 + h + k][1 + j] = A(yukawa(i, j, k))
        M[n - 1][1 + h + i] = -A.one
        out.append(M)
    return out


def _yukawa_fn(yukawa, h):
    if yukawa is None:
        return lambda i, j, k: 1 if i == j == k else 0
    if callable(yukawa):
        return yukawa
    table = dict(yukawa)

    def get(i, j, k):
        return table.get(tuple(sorted((i, j, k))), 0)
    return get


def cy_ring(h, p, N=2, order=4):
    names = [f"t{i + 1}" for i in range(h)]
    trunc = [m for m in product(range(order + 1), repeat=h) if sum(m) == order]
    return ring_make(p, N, names, trunc)


def cy_validate(C):
    """Run every invariant; basis pairs are checked exhaustively."""
    rep = Report(C.describe(), 0)
    A, h, n, G = C.A, C.h, C.n, C.gram
    anti = all((G[a][b] + G[b][a]).is_zero() for a in range(n) for b in range(n)) and \
        all(G[a][a].is_zero() for a in range(n))
    rep.add("pairing antisymmetric (exhaustive)", anti, "" if anti else "Gram + Gram^T != 0")
    perfect = is_invertible(A, G)
    rep.add("pairing perfect", perfect, "" if perfect else "Gram determinant is not a unit")
    bad = [(a, b) for a in range(n) for b in range(n)
           if not G[a][b].is_zero() and C.levels[a] + C.levels[b] != 3]
    rep.add("pairing only between complementary graded pieces (exhaustive)", not bad,
            f"entry {bad[0]}" if bad else "")
    bad = []
    for i in range(h):
        for a in range(n):
            col = C.nabla(i, C.basis_vector(a))
            for b, c in enumerate(col):
                if not c.is_zero() and C.levels[b] < C.levels[a] - 1:
                    bad.append((i, a, b))
    rep.add("Griffiths transversality (exhaustive)", not bad,
            f"nabla_{bad[0][0] + 1} sends basis {bad[0][1]} to basis {bad[0][2]}" if bad else "")
    bad = []
    for i in range(h):
        for a in range(n):
            for b in range(n):
                ea, eb = C.basis_vector(a), C.basis_vector(b)
                lhs = C.pairing(C.nabla(i, ea), eb) + C.pairing(ea, C.nabla(i, eb))
                rhs = A.derivative(G[a][b], C.var(i))
                if lhs != rhs:
                    bad.append((i, a, b))
    rep.add("horizontality of the pairing (exhaustive on basis pairs)", not bad,
            f"nabla_{bad[0][0] + 1} on basis pair {bad[0][1:]}" if bad else "")
    bad = []
    for i in range(h):
        for j in range(i + 1, h):
            for a in range(n):
                e = C.basis_vector(a)
                x = C.nabla(i, C.nabla(j, e))
                y = C.nabla(j, C.nabla(i, e))
                if x != y:
                    bad.append((i, j, a))
    rep.add("flatness (exhaustive)", not bad,
            f"[nabla_{bad[0][0] + 1}, nabla_{bad[0][1] + 1}] on basis {bad[0][2]}" if bad else "")
    u = C.basis_vector(0)
    M = [[C.nabla(i, u)[C.v_index(j)] for i in range(h)] for j in range(h)]
    residue = [[A.from_vector([x.vec[0]] + [0] * (A.dim - 1)) for x in row] for row in M]
    vers = is_invertible(A, residue)
    rep.add("versality: nabla_i(u) span gr^2 at the origin", vers,
            "" if vers else "Kodaira-Spencer matrix singular mod the maximal ideal")
    return rep


def cy_make(h, p, N=2, order=4, yukawa=None, nablas=None, gram=None, validate=True):
    """Build and validate a crystal; ``nablas`` overrides the Yukawa construction."""
    if h < 1:
        raise InputError("h must be positive")
    A = cy_ring(h, p, N, order)
    G = gram if gram is not None else standard_gram(A, h)
    Ns = nablas if nablas is not None else yukawa_matrices(A, h, _yukawa_fn(yukawa, h))
    n = 2 * h + 2
    if len(G) != n or any(len(r) != n for r in G) or len(Ns) != h or \
            any(len(M) != n or any(len(r) != n for r in M) for M in Ns):
        raise InputError("matrix sizes do not match 2h+2")
    def conv(x):
        if isinstance(x, RingEl) and x.parent is not A:
            if not x.parent.same_as(A):
                raise InputError("matrix entry over another ring")
            return A.from_vector(x.vec)
        return A(x)

    C = CYCrystal(h, A, [[[conv(x) for x in r] for r in M] for M in Ns],
                  [[conv(x) for x in r] for r in G])
    if validate:
        rep = cy_validate(C)
        if not rep.ok:
            first = rep.failures()[0]
            raise CrystalInvalid(f"{first.name}: {first.witness}", witness=first)
        C.report = rep
    return C


# ---------------------------------------------------------------------------
# fibers


def point(C, S, images):
    """The ring map ``A -> S`` sending ``t_i`` to ``images[i]``; images must be nilpotent."""
    imgs = [S(x) for x in images]
    for x in imgs:
        if not x.is_nilpotent():
            raise InputError(f"{x} is not in the maximal ideal")
    try:
        return RingHom(C.A, S, {v: x for v, x in zip(C.A.vars, imgs)})
    except RelationViolated as exc:
        raise InputError(f"point does not respect the truncation of A: {exc}") from exc


def point_values(C, f):
    return [f.images[v] for v in C.A.vars]


def _fmt(vec):
    return "(" + ", ".join(str(x) for x in vec) + ")"


@dataclass
class Fiber:
    """The crystal pulled back along ``f: A -> S``."""

    crystal: object
    f: object
    N: list
    gram: list

    @property
    def S(self):
        return self.f.dst

    @property
    def n(self):
        return self.crystal.n

    def nabla(self, i, x):
        return _matvec(self.N[i], x, self.S.zero)

    def residue_nabla(self, i, x):
        """``nabla_i`` reduced to the residue fiber, as vectors of Teichmuller constants."""
        S = self.S
        y = self.nabla(i, x)
        return [S.teichmuller_constant(c) for c in y]

    def pairing(self, x, y):
        return _pair(self.gram, x, y, self.S.zero)

    def fil(self, j):
        return [self.crystal.basis_vector(k, self.S) for k in self.crystal.fil_indices(j)]

    def gram_is_perfect(self):
        return is_invertible(self.S, self.gram)


def specialize(C, f):
    S = f.dst
    return Fiber(C, f, [[[f(x) for x in r] for r in M] for M in C.N],
                 [[f(x) for x in r] for r in C.gram])


def perp(fib, vecs):
    """``{x : <v, x> = 0 for all v}`` as a list of generators."""
    S = fib.S
    if not vecs:
        return [fib.crystal.basis_vector(k, S) for k in range(fib.n)]
    rows = [[_pair(fib.gram, v, fib.crystal.basis_vector(k, S), S.zero) for k in range(fib.n)]
            for v in vecs]
    gens = kernel_gens(S, rows, fib.n)
    return [g for g in gens if any(not x.is_zero() for x in g)]


def nabla_span(fib, e):
    return [fib.nabla(i, e) for i in range(fib.crystal.h)]


def same_span(S, a, b):
    return all(span_contains(S, b, v) for v in a) and all(span_contains(S, a, v) for v in b)


# ---------------------------------------------------------------------------
# transport


class _NablaPowers:
    """``nabla^m`` of the basis vectors over ``A``, memoised by multi-index."""

    def __init__(self, C):
        self.C = C
        self.cache = {}

    def get(self, m, k):
        key = (m, k)
        if key in self.cache:
            return self.cache[key]
        C = self.C
        if not any(m):
            val = C.basis_vector(k)
        else:
            i = next(j for j, e in enumerate(m) if e)
            prev = self.get(tuple(e - (j == i) for j, e in enumerate(m)), k)
            if all(x.is_zero() for x in prev):
                val = prev
            else:
                val = C.nabla(i, prev)
        self.cache[key] = val
        return val


def _powers(C):
    cache = C.__dict__.setdefault("_nabla_powers", _NablaPowers(C))
    return cache


def transport_matrix(C, f, g, ideal):
    """Columns are ``Psi_{f,g}`` of the basis vectors of the ``f``-fiber."""
    S = f.dst
    if ideal.parent is not S or g.dst is not S:
        raise InputError("points and ideal must live over the same ring")
    deltas = []
    for v in C.A.vars:
        d = f.images[v] - g.images[v]
        if not ideal.contains(d):
            raise NotEqualOverR(f"{f.images[v]} and {g.images[v]} differ outside the ideal",
                                witness=v)
        deltas.append(d)
    if any(not d.is_zero() for d in deltas) and ideal.pd == "none":
        raise NoPD("transport between distinct points needs divided powers")
    h, n = C.h, C.n
    bound = 4 * C.order
    gam = {}

    def gamma(i, m):
        if (i, m) not in gam:
            gam[(i, m)] = pd_gamma(ideal, m, deltas[i]) if m else S.one
        return gam[(i, m)]

    pw = _powers(C)
    cols = [[S.zero] * n for _ in range(n)]
    for total in range(bound + 1):
        for m in _compositions(total, h):
            coef = S.one
            for i, e in enumerate(m):
                coef = coef * gamma(i, e)
                if coef.is_zero():
                    break
            if coef.is_zero():
                continue
            for k in range(n):
                vec = pw.get(m, k)
                if all(x.is_zero() for x in vec):
                    continue
                cols[k] = [a + coef * g(x) for a, x in zip(cols[k], vec)]
    return transpose(cols)


def transport(C, f, g, ideal, x):
    M = transport_matrix(C, f, g, ideal)
    return _matvec(M, x, f.dst.zero)


# ---------------------------------------------------------------------------
# lines


def normalize(S, e):
    """Scale a Fil^3-lifting generator so that its ``u`` coordinate is 1."""
    if not e[0].is_unit():
        raise NotALift("generator does not reduce to a multiple of u")
    inv = e[0].inverse()
    return [x * inv for x in e]


@dataclass
class LineLift:
    fiber: object
    e: list

    def key(self):
        return _vkey(self.e)


def make_line(fib, ideal, e):
    S = fib.S
    e = normalize(S, [S(x) for x in e])
    for x in e[1:]:
        if not ideal.contains(x):
            raise NotALift(f"coordinate {x} is not in the ideal")
    return LineLift(fib, e)


def kappa(C, f, line, ideal):
    """The classifying map on ``u_0``: coordinates of the line in ``a (H / Fil^3)``."""
    e = normalize(f.dst, line.e)
    if not all(ideal.contains(x) for x in e[1:]):
        raise NotALift("line does not lift Fil^3")
    return e[1:]


def kappa_formula(C, f, g):
    """``-sum (f(t_i) - g(t_i)) nabla_i(u)`` with the residue connection values."""
    fib = specialize(C, f)
    S = f.dst
    u = C.basis_vector(0, S)
    acc = [S.zero] * C.n
    for i, v in enumerate(C.A.vars):
        d = f.images[v] - g.images[v]
        acc = [a - d * x for a, x in zip(acc, fib.residue_nabla(i, u))]
    return acc[1:]


def def_to_line(C, f, g, ideal):
    """``F_Y = Psi_{f,g}^{-1}(Fil^3)``, computed as ``Psi_{g,f}(u)``."""
    S = f.dst
    M = transport_matrix(C, g, f, ideal)
    e = [row[0] for row in M]
    return make_line(specialize(C, f), ideal, e)


def line_to_def(C, f, line, ideal, max_rounds=None):
    """Read off ``g`` from the ``v`` coordinates of the line and confirm it reproduces it."""
    S = f.dst
    h = C.h
    fib = specialize(C, f)
    u = C.basis_vector(0, S)
    cols = [[fib.nabla(i, u)[C.v_index(j)] for j in range(h)] for i in range(h)]
    M = transpose(cols)
    target = normalize(S, line.e)
    shift = [S.zero] * h
    rounds = max_rounds or (C.order + 4)
    for _ in range(rounds):
        g = point(C, S, [f.images[v] + s for v, s in zip(C.A.vars, shift)])
        got = def_to_line(C, f, g, ideal).e
        if _vkey(got) == _vkey(target):
            return g
        diff = [target[C.v_index(j)] - got[C.v_index(j)] for j in range(h)]
        if all(x.is_zero() for x in diff):
            break
        sol = solve_linear(S, M, diff)
        if not sol.ok:
            break
        shift = [a + b for a, b in zip(shift, sol.x)]
    raise CoefficientExtractionFailed("line is not the image of any deformation",
                                      witness=target)


# ---------------------------------------------------------------------------
# CY-type liftings


@dataclass
class CYCheck:
    ok: bool
    failed: str = ""
    steps: dict = field(default_factory=dict)
    ranks: tuple = ()


def _pd_powers(ideal, upto):
    out = {0: None, 1: ideal}
    for k in range(2, upto + 1):
        out[k] = ideal.divided_power_ideal(k)
    return out


def cy_type_check(C, f, line, ideal, pd_powers=None):
    """Conditions (i)-(iii) for the line; on success the filtration ``E^3..E^0``."""
    fib = specialize(C, f)
    S = f.dst
    e = normalize(S, line.e)
    pw = pd_powers or _pd_powers(ideal, 3)
    for k, x in enumerate(e):
        need = 3 - C.levels[k]
        if need and not pw[need].contains(x):
            return CYCheck(False, f"(i) coordinate {k} = {x} not in the divided power ideal "
                                  f"of order {need}")
    E3 = [e]
    E1 = perp(fib, E3)
    E2 = E3 + nabla_span(fib, e)
    info2 = image_summand(S, E2, C.n)
    if not info2.is_direct_summand or info2.unit_rank != C.h + 1:
        return CYCheck(False, "(iii) E + nabla E is not a direct summand of rank h+1")
    if not same_span(S, perp(fib, E2), E2):
        return CYCheck(False, "(iii) E + nabla E is not its own orthogonal")
    info1 = image_summand(S, E1, C.n)
    if not info1.is_direct_summand:
        return CYCheck(False, "(ii) the orthogonal of E is not a direct summand")
    if not all(span_contains(S, E1, v) for v in E2):
        return CYCheck(False, "(ii) E + nabla E is not inside the orthogonal of E")
    steps = {0: [C.basis_vector(k, S) for k in range(C.n)], 1: info1.summand_basis,
             2: info2.summand_basis, 3: E3}
    ranks = (1, info2.unit_rank, info1.unit_rank)
    return CYCheck(True, "", steps, ranks)


def to_display_order(C, vec):
    """Reorder ``u, v, w, z`` coordinates into blocks ``L_0 = z, L_1 = w, L_2 = v, L_3 = u``."""
    h = C.h
    return [vec[C.z_index()]] + [vec[C.w_index(i)] for i in range(h)] + \
        [vec[C.v_index(i)] for i in range(h)] + [vec[0]]


def cy_lifting(C, check):
    """The CY-type filtration as a display lifting (ranks ``1, h, h, 1`` in blocks)."""
    from .filtration import Lifting
    S = check.steps[3][0][0].parent
    steps = [[to_display_order(C, v) for v in check.steps[i]] for i in range(4)]
    return Lifting(S, C.n, steps)


def no_perp_sums(C, f, alphas):
    """The two pairing sums whose vanishing gives the self-orthogonality for square-zero ideals."""
    fib = specialize(C, f)
    S = f.dst
    u = C.basis_vector(0, S)
    nu = [fib.residue_nabla(i, u) for i in range(C.h)]
    first, second = [], []
    for s in range(C.h):
        acc = S.zero
        for i in range(C.h):
            for j in range(C.h):
                acc = acc + alphas[i] * alphas[j] * fib.pairing(nu[i], fib.nabla(s, nu[j]))
        first.append(acc)
        for t in range(C.h):
            if t == s:
                continue
            acc = S.zero
            for i in range(C.h):
                for j in range(C.h):
                    acc = acc + alphas[i] * alphas[j] * \
                        fib.pairing(fib.nabla(s, nu[i]), fib.nabla(t, nu[j]))
            second.append(acc)
    return first, second


# ---------------------------------------------------------------------------
# classification


def pd_length(ideal, cap=12):
    """Least ``t`` with vanishing ``t``-th divided power ideal, or None below ``cap``."""
    for t in range(1, cap + 1):
        if ideal.divided_power_ideal(t).is_zero():
            return t
    return None


def _nilpotence(S):
    m = Ideal(S, [S(S.p)] + S.gens())
    k, cur = 1, m
    while not cur.is_zero():
        cur = cur.times(m)
        k += 1
        if k > 64:
            return None
    return k


@dataclass
class Certificate:
    title: str
    report: object
    deformations: list = field(default_factory=list)
    lines: list = field(default_factory=list)
    matching: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    liftings: list = field(default_factory=list)

    @property
    def ok(self):
        return self.report.ok

    def counts(self):
        return len(self.deformations), len(self.lines)

    def lines_text(self):
        out = [f"deformations {len(self.deformations)}",
               f"cy_lines {len(self.lines)}"]
        out += [f"note {n}" for n in self.notes]
        for g, e in self.matching:
            out.append(f"match t=({', '.join(map(str, g))}) -> line "
                       f"[{', '.join(map(str, e))}]")
        out += self.report.lines()
        return out

    def raise_on_failure(self):
        if not self.ok:
            bad = self.report.failures()[0]
            raise BijectionFailure(f"{bad.name}: {bad.witness}", witness=bad)


def classify(C, f, ideal, title=None, samples=None, seed=0):
    """Match every deformation lifting ``f`` modulo the ideal with every CY-type line.

    With ``samples`` set, random deformations and candidate lines are drawn
    instead; the count comparison is then skipped.
    """
    S = f.dst
    rep = Report(title or f"classify {C.describe()} over {S.describe()}", 0)
    cert = Certificate(rep.title, rep)
    cert.notes.append(TRANSPORT_NOTE)
    if ideal.pd == "none":
        raise NoPD("classification needs divided powers on the kernel")
    nil = _nilpotence(S)
    order_ok = nil is not None and C.order - 1 >= nil
    rep.add("truncation of A dominates the nilpotence of S", order_ok,
            "" if order_ok else f"order {C.order} vs nilpotence {nil}")
    if not order_ok:
        return cert
    t = pd_length(ideal)
    cert.notes.append(f"divided power length t = {t}" if t else
                      "divided powers are not nilpotent")
    rep.add("divided powers on the kernel are nilpotent", t is not None,
            "" if t else "gamma_m does not vanish on the ideal for large m")
    pw = _pd_powers(ideal, 3)
    a_elems = sorted(ideal.elements(), key=lambda x: x.vec)
    fib = specialize(C, f)
    base = point_values(C, f)

    rng = random.Random(seed)

    def candidates(k):
        if samples is None:
            return product(a_elems, repeat=k)
        return sorted({tuple(rng.choice(a_elems) for _ in range(k)) for _ in range(samples)},
                      key=lambda xs: [x.vec for x in xs])

    if samples is not None:
        cert.notes.append(f"sampled mode: {samples} draws per side, counts not compared")
    defs = []
    for shift in candidates(C.h):
        try:
            defs.append(point(C, S, [b + s for b, s in zip(base, shift)]))
        except InputError:
            continue
    cy_lines = {}
    for x in candidates(C.n - 1):
        line = LineLift(fib, [S.one] + list(x))
        chk = cy_type_check(C, f, line, ideal, pw)
        if chk.ok:
            cy_lines[line.key()] = (line, chk)
    cert.deformations = [tuple(point_values(C, g)) for g in defs]
    cert.lines = [l.e for l, _ in cy_lines.values()]

    square_zero = ideal.times(ideal).is_zero()
    small = ideal.annihilated_by_max()
    first_order = t is not None and t <= 2
    image = {}
    bad_cy, bad_inside, bad_kappa, bad_formula = [], [], [], []
    for g in defs:
        line = def_to_line(C, f, g, ideal)
        image.setdefault(line.key(), []).append(g)
        if line.key() not in cy_lines and not cy_type_check(C, f, line, ideal, pw).ok:
            bad_cy.append(point_values(C, g))
        kap = kappa(C, f, line, ideal)
        if small and not all(kap[k - 1].is_zero() for k in range(1, C.n) if C.levels[k] < 2):
            bad_kappa.append(point_values(C, g))
        if first_order and kap != kappa_formula(C, f, g):
            bad_formula.append(point_values(C, g))
        for k, c in enumerate(line.e):
            need = 3 - C.levels[k]
            if need and not pw[need].contains(c):
                bad_inside.append(point_values(C, g))
                break
        cert.matching.append((tuple(point_values(C, g)), tuple(line.e)))
    rep.add("every deformation gives a CY-type line", not bad_cy,
            f"t -> {_fmt(bad_cy[0])}" if bad_cy else "")
    rep.add("lines of deformations lie in the divided power filtration", not bad_inside,
            f"t -> {_fmt(bad_inside[0])}" if bad_inside else "")
    if small:
        rep.add("kappa of every deformation line lands in a (x) gr^2", not bad_kappa,
                f"t -> {_fmt(bad_kappa[0])}" if bad_kappa else "")
    if first_order:
        rep.add("kappa equals -sum (f - g) nabla_i(u)", not bad_formula,
                f"t -> {_fmt(bad_formula[0])}" if bad_formula else "")
    clash = [k for k, gs in image.items() if len(gs) > 1]
    rep.add("deformations give distinct lines", not clash,
            f"{len(image[clash[0]])} deformations share a line" if clash else "")
    if samples is None:
        missing = [k for k in cy_lines if k not in image]
        rep.add("every CY-type line comes from a deformation", not missing,
                f"line {_fmt(cy_lines[missing[0]][0].e)}" if missing else "")
        rep.add("counts agree", len(defs) == len(cy_lines),
                f"{len(defs)} deformations, {len(cy_lines)} CY-type lines")

    bad_rt = []
    for key, (line, chk) in sorted(cy_lines.items()):
        try:
            g = line_to_def(C, f, line, ideal)
        except CoefficientExtractionFailed:
            bad_rt.append(line.e)
            continue
        if def_to_line(C, f, g, ideal).key() != key:
            bad_rt.append(line.e)
    rep.add("line -> deformation -> line is the identity", not bad_rt,
            f"line {_fmt(bad_rt[0])}" if bad_rt else "")
    bad_rt = []
    for g in defs:
        try:
            back = line_to_def(C, f, def_to_line(C, f, g, ideal), ideal)
        except CoefficientExtractionFailed:
            bad_rt.append(point_values(C, g))
            continue
        if point_values(C, back) != point_values(C, g):
            bad_rt.append(point_values(C, g))
    rep.add("deformation -> line -> deformation is the identity", not bad_rt,
            f"t -> {_fmt(bad_rt[0])}" if bad_rt else "")

    bad_ranks = [l.e for l, chk in cy_lines.values() if chk.ranks != C.fil_ranks[:3]]
    rep.add("CY-type filtrations have ranks (1, h+1, 2h+1)", not bad_ranks,
            f"line {_fmt(bad_ranks[0])}" if bad_ranks else "")
    cert.liftings = [chk for _, chk in cy_lines.values()]

    if square_zero:
        bad_orth, bad_sums, n_orth = [], [], 0
        for alphas in product(a_elems, repeat=C.h):
            e = [S.one] + list(alphas) + [S.zero] * (C.h + 1)
            n_orth += 1
            E2 = [e] + nabla_span(fib, e)
            if not same_span(S, perp(fib, E2), E2):
                bad_orth.append(alphas)
            first, second = no_perp_sums(C, f, list(alphas))
            if not all(x.is_zero() for x in first + second):
                bad_sums.append(alphas)
        rep.add(f"lines in Fil^2 are self-orthogonal with nabla ({n_orth} lines)",
                not bad_orth, f"alpha {_fmt(bad_orth[0])}" if bad_orth else "")
        rep.add("both quadratic pairing sums vanish", not bad_sums,
                f"alpha {_fmt(bad_sums[0])}" if bad_sums else "")

    if t is not None and t > 2 and samples is None:
        _two_step(C, f, ideal, t, defs, cy_lines, rep)
    return cert


def _coset_key(S, b_elems, x):
    return min((x + y).vec for y in b_elems)


def _two_step(C, f, ideal, t, defs, cy_lines, rep):
    """Group both sides by their reduction modulo the last divided power ideal."""
    S = f.dst
    b = ideal.divided_power_ideal(t - 1)
    b_elems = list(b.elements())

    def red(vec):
        return tuple(_coset_key(S, b_elems, x) for x in vec)

    by_def, by_line = {}, {}
    for g in defs:
        line = def_to_line(C, f, g, ideal)
        k = red(line.e)
        by_def[k] = by_def.get(k, 0) + 1
    for line, _ in cy_lines.values():
        k = red(line.e)
        by_line[k] = by_line.get(k, 0) + 1
    ok = by_def == by_line
    rep.add(f"fibers over S / a^[{t - 1}] match in size", ok,
            "" if ok else f"{len(by_def)} vs {len(by_line)} classes")
