"""Command line entry point.

Exit codes: 0 when every check passed, 1 when a mathematical check failed
(the report carries a witness), 2 for bad input or usage.
"""

import argparse
import sys

from . import __version__
from .errors import ArtifactError, CheckFailed, InputError, ParseError
from .frames import Report, frame_check, frame_relative, frame_witt, verj_check
from .ring import Ideal, RingHom
from .textio import clean_lines, parse_element, parse_matrix, parse_ring_line, parse_witt
from .witt import WittEl, witt_structure_polys

SAMPLES = 200


# ---------------------------------------------------------------------------
# input files


def _ring_from(text):
    text = text.strip()
    if not text.startswith("ring"):
        text = "ring " + text
    return parse_ring_line(text)


def _kv(tokens):
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise ParseError(f"expected key=value, got {tok!r}")
        k, v = tok.split("=", 1)
        out[k] = v
    return out


def _images(R, text):
    out = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ParseError(f"expected var=value in {text!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = parse_element(R, v)
    return out


class Setup:
    """Frame, optional datum and optional lifting read from one file."""

    def __init__(self, text):
        lines = clean_lines(text)
        self.S = None
        self.R = None
        self.images = {}
        self.pd = "trivial"
        self.prec = 2
        self.d = None
        self.ranks = None
        self.rows = []
        self.steps = {}
        self.faults = []
        step = None
        for line in lines:
            head, _, rest = line.partition(" ")
            if head == "ring":
                self.S = parse_ring_line(line)
            elif head == "target":
                self.R = _ring_from(rest)
            elif head == "map":
                self._map_text = rest
            elif head == "pd":
                self.pd = rest.strip()
            elif head == "prec":
                self.prec = int(rest)
            elif head == "datum":
                kv = _kv(rest.split())
                self.d = int(kv["d"])
                self.ranks = tuple(int(r) for r in kv["ranks"].split(","))
            elif head == "row":
                self.rows.append([c.strip() for c in rest.split("|")])
            elif head == "step":
                step = int(rest)
                self.steps[step] = []
            elif head == "vec":
                if step is None:
                    raise ParseError("vec before any step")
                self.steps[step].append(rest)
            elif head == "fault":
                self.faults.append([int(x) for x in rest.split()])
            else:
                raise ParseError(f"unknown line {line!r}")
        if self.S is None:
            raise ParseError("missing ring line")
        self.frame = self._frame()

    def _frame(self):
        S = self.S
        if self.R is None:
            return frame_witt(S, self.prec)
        imgs = _images(self.R, getattr(self, "_map_text", ""))
        alpha = RingHom(S, self.R, imgs)
        return frame_relative(alpha, alpha.kernel(pd=self.pd), self.prec)

    def entry(self, text):
        S, prec = self.S, self.prec
        text = text.strip()
        if text.startswith("["):
            if "@" not in text:
                comps = [c for c in text.strip("[]").split(",")]
                comps += ["0"] * (prec - len(comps))
                text = "[" + ",".join(comps) + f"]@{prec}"
            return parse_witt(S, text)
        try:
            return WittEl.from_int(S, int(text), prec)
        except ValueError:
            from .witt import teichmuller
            return teichmuller(parse_element(S, text), prec)

    def datum(self):
        from .displays import datum_from_columns
        if self.d is None:
            raise ParseError("missing datum line")
        full = [[self.entry(x) for x in row] for row in self.rows]
        n = sum(self.ranks)
        if len(full) != n or any(len(r) != n for r in full):
            raise ParseError(f"datum needs {n} rows of {n} entries")
        return datum_from_columns(self.frame, self.d, self.ranks, full)

    def lifting(self):
        from .filtration import Lifting
        n = sum(self.ranks)
        steps = []
        for i in range(max(self.steps) + 1 if self.steps else 0):
            vecs = []
            for v in self.steps.get(i, []):
                vec = [parse_element(self.S, c) for c in v.split(",")]
                if len(vec) != n:
                    raise ParseError(f"vector {v!r} has the wrong length")
                vecs.append(vec)
            steps.append(vecs)
        return Lifting(self.S, n, steps)


def read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


class CrystalFile:
    def __init__(self, text):
        from .cy import cy_make, point
        lines = clean_lines(text)
        header, yuk, nablas, base, gens, pd, pt = None, {}, {}, None, [], "trivial", None
        k = 0
        while k < len(lines):
            line = lines[k]
            head, _, rest = line.partition(" ")
            k += 1
            if head == "cy":
                header = _kv(rest.split())
            elif head == "yukawa":
                idx, _, val = rest.partition("=")
                key = tuple(sorted(int(x) - 1 for x in idx.split(",")))
                yuk[key] = int(val)
            elif head == "nabla":
                nablas[int(rest) - 1] = k
                k += 1 + int(lines[k].split()[1])
            elif head == "base":
                base = _ring_from(rest)
            elif head == "ideal":
                kv = _kv(rest.split())
                gens = [g for g in kv.get("gens", "").split(",") if g]
                pd = kv.get("pd", "trivial")
            elif head == "point":
                pt = [x.strip() for x in rest.split(",")]
            else:
                raise ParseError(f"unknown line {line!r}")
        if header is None or base is None:
            raise ParseError("crystal file needs a cy line and a base line")
        h, p = int(header["h"]), int(header["p"])
        N, order = int(header.get("N", 2)), int(header.get("order", 4))
        mats = None
        if nablas:
            from .cy import cy_ring
            A = cy_ring(h, p, N, order)
            mats = []
            for i in range(h):
                if i not in nablas:
                    raise ParseError(f"missing nabla {i + 1}")
                M, _ = parse_matrix(A, lines[nablas[i]:])
                mats.append(M)
        self.crystal = cy_make(h, p, N, order, yukawa=yuk or None, nablas=mats, validate=False)
        self.S = base
        self.ideal = Ideal(base, [parse_element(base, g) for g in gens], pd=pd)
        self.f = point(self.crystal, base, [parse_element(base, x) for x in (pt or ["0"] * h)])

    def vector(self, text):
        vec = [parse_element(self.S, c) for c in text.split(",")]
        if len(vec) != self.crystal.n:
            raise ParseError(f"need {self.crystal.n} coordinates")
        return vec


# ---------------------------------------------------------------------------
# commands


def _emit(args, lines):
    text = "\n".join(lines) + "\n"
    if getattr(args, "out", None):
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise InputError(f"cannot write {args.out}: {exc}") from exc
    sys.stdout.write(text)


def _finish(args, reports):
    lines = []
    for rep in reports:
        lines += rep.lines()
    _emit(args, lines)
    return 0 if all(r.ok for r in reports) else 1


def cmd_ring(args):
    R = _ring_from(args.ring)
    rep = Report(R.describe(), args.seed)
    rep.add("size", True, detail=str(R.size()))
    rep.add("additive dimension", True, detail=str(R.dim))
    if args.ideal is not None:
        gens = [parse_element(R, g) for g in args.ideal.split(",") if g]
        I = Ideal(R, gens, pd=args.pd)
        rep.add("ideal size", True, detail=str(I.size()))
        if args.pd != "none":
            from .ring import pd_gamma
            from math import factorial
            bad = []
            for x in I.elements():
                for m in range(1, 6):
                    if pd_gamma(I, m, x) * factorial(m) != x ** m:
                        bad.append((str(x), m))
            rep.add("m! gamma_m(x) = x^m for m <= 5", not bad,
                    f"x={bad[0][0]} m={bad[0][1]}" if bad else "")
    return _finish(args, [rep])


def cmd_witt(args):
    if args.action == "ghost":
        rep = Report(f"Witt structure polynomials p={args.p} n={args.n}", args.seed)
        ok, where = witt_structure_polys(args.p, args.n).verify_ghost_identities()
        rep.add("ghost identities over Z", ok, "" if ok else f"{where[0]} component {where[1]}")
        return _finish(args, [rep])
    R = _ring_from(args.ring)
    xs = [parse_witt(R, x) for x in args.operands]
    ops = {"add": (2, lambda a, b: a + b), "mul": (2, lambda a, b: a * b),
           "neg": (1, lambda a: -a), "frobenius": (1, lambda a: a.frobenius()),
           "verschiebung": (1, lambda a: a.verschiebung())}
    arity, fn = ops[args.action]
    if len(xs) != arity:
        raise InputError(f"{args.action} takes {arity} operand(s)")
    from .textio import format_witt
    _emit(args, [format_witt(fn(*xs))])
    return 0


def cmd_frame(args):
    st = Setup(read(args.file))
    F = st.frame
    reps = [frame_check(F, args.samples, args.seed), verj_check(F, args.samples, args.seed)]
    return _finish(args, reps)


def cmd_display(args):
    from .displays import display_build, predisplay_check
    st = Setup(read(args.file))
    datum = st.datum()
    P = display_build(datum, args.levels)
    for level, block, row, col, delta in st.faults:
        P.inject_fault(level, block, row, col, WittEl.from_int(st.S, delta, st.prec))
    return _finish(args, [predisplay_check(P, args.samples, args.seed)])


def cmd_fil(args):
    from .displays import display_build
    from .filtration import admissible_check, display_lift, hodge_fil
    st = Setup(read(args.file))
    datum = st.datum()
    P = display_build(datum, datum.d)
    if args.action == "compute":
        fil = hodge_fil(P)
        rep = Report("Hodge filtration", args.seed)
        for i, s in enumerate(fil.steps):
            rep.add(f"Fil^{i} rank", s.is_direct_summand, detail=str(s.unit_rank))
        rep.add("steps form a chain of direct summands", fil.is_summand_chain())
        return _finish(args, [rep])
    E = st.lifting()
    if args.action == "admissible":
        res = admissible_check(E, P)
        rep = Report("admissibility", args.seed)
        rep.add("lifting is admissible", res.ok, "; ".join(res.failures))
        return _finish(args, [rep])
    L = display_lift(P, E)
    return _finish(args, [L.round_trip_a(), L.round_trip_b()])


def cmd_cy(args):
    from . import cy
    cf = CrystalFile(read(args.file))
    C = cf.crystal
    if args.action == "validate":
        return _finish(args, [cy.cy_validate(C)])
    rep0 = cy.cy_validate(C)
    if not rep0.ok:
        return _finish(args, [rep0])
    if args.action == "transport":
        if not args.to:
            raise InputError("transport needs --to")
        g = cy.point(C, cf.S, [parse_element(cf.S, x) for x in args.to.split(",")])
        x = cf.vector(args.vector) if args.vector else C.basis_vector(0, cf.S)
        y = cy.transport(C, cf.f, g, cf.ideal, x)
        _emit(args, ["(" + ", ".join(str(c) for c in y) + ")", f"# {cy.TRANSPORT_NOTE}"])
        return 0
    if args.action == "kappa":
        line = cy.make_line(cy.specialize(C, cf.f), cf.ideal, cf.vector(args.line))
        k = cy.kappa(C, cf.f, line, cf.ideal)
        _emit(args, ["(" + ", ".join(str(c) for c in k) + ")"])
        return 0
    if args.action == "check":
        line = cy.make_line(cy.specialize(C, cf.f), cf.ideal, cf.vector(args.line))
        chk = cy.cy_type_check(C, cf.f, line, cf.ideal)
        rep = Report("CY-type lifting", args.seed)
        rep.add("conditions (i)-(iii)", chk.ok, chk.failed)
        if chk.ok:
            rep.add("filtration ranks", True, detail=str(chk.ranks))
        return _finish(args, [rep])
    cert = cy.classify(C, cf.f, cf.ideal, samples=args.samples, seed=args.seed)
    if args.cert:
        try:
            with open(args.cert, "w") as fh:
                fh.write("\n".join(cert.lines_text()) + "\n")
        except OSError as exc:
            raise InputError(f"cannot write {args.cert}: {exc}") from exc
    return _finish(args, [cert.report])


def cmd_selftest(args):
    from .selftest import run_selftest
    return _finish(args, run_selftest(args.seed, quick=not args.full))


# ---------------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(prog="wittdisp", description="Witt frames, displays and "
                                 "Calabi-Yau deformation checks")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="also write the report here")

    p = sub.add_parser("ring", help="ring and ideal summary")
    p.add_argument("ring", help='e.g. "p=2 N=1 vars=e trunc=e^2"')
    p.add_argument("--ideal", help="comma separated generators")
    p.add_argument("--pd", default="none", choices=["none", "trivial", "p-adic"])
    common(p)
    p.set_defaults(func=cmd_ring)

    p = sub.add_parser("witt", help="Witt vector arithmetic")
    p.add_argument("action", choices=["ghost", "add", "mul", "neg", "frobenius", "verschiebung"])
    p.add_argument("operands", nargs="*", help="Witt vectors [c0, c1, ...]@n")
    p.add_argument("--ring", default="p=2 N=2")
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--n", type=int, default=3)
    common(p)
    p.set_defaults(func=cmd_witt)

    p = sub.add_parser("frame", help="frame and Verjungung axioms")
    p.add_argument("action", choices=["check"])
    p.add_argument("file")
    p.add_argument("--samples", type=int, default=SAMPLES)
    common(p)
    p.set_defaults(func=cmd_frame)

    p = sub.add_parser("display", help="predisplay axioms of a standard datum")
    p.add_argument("action", choices=["check"])
    p.add_argument("file")
    p.add_argument("--levels", type=int, default=None)
    p.add_argument("--samples", type=int, default=20)
    common(p)
    p.set_defaults(func=cmd_display)

    p = sub.add_parser("fil", help="Hodge filtrations and liftings")
    p.add_argument("action", choices=["compute", "admissible", "lift"])
    p.add_argument("file")
    common(p)
    p.set_defaults(func=cmd_fil)

    p = sub.add_parser("cy", help="Calabi-Yau crystals")
    p.add_argument("action", choices=["validate", "transport", "kappa", "check", "classify"])
    p.add_argument("file")
    p.add_argument("--to", help="target point, comma separated t_i images")
    p.add_argument("--vector", help="comma separated coordinates u, v.., w.., z")
    p.add_argument("--line", help="line generator coordinates")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", default=True)
    mode.add_argument("--samples", type=int)
    p.add_argument("--cert", help="write the classification certificate here")
    common(p)
    p.set_defaults(func=cmd_cy)

    p = sub.add_parser("selftest", help="run the built-in suites")
    p.add_argument("--full", action="store_true", help="larger instance set")
    common(p)
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CheckFailed as exc:
        sys.stderr.write(f"check failed: {exc}\n")
        if exc.witness is not None:
            sys.stderr.write(f"witness: {exc.witness}\n")
        return 1
    except (ArtifactError, ValueError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
