"""Line-oriented text formats.

Grammar (one item per line, ``#`` starts a comment)::

    ring p=2 N=2 vars=t,s trunc=t^2,s^3,t*s [f=2]
    matrix 2 2
    1+t, t
    0, 2
    witt [1, t, 0]@3

Polynomial strings are read with sympy; rational coefficients are allowed
when their denominators are prime to p.
"""

import re
from fractions import Fraction

import sympy

from .errors import ParseError

_ring_cache = {}


def _symbols(R):
    names = list(R.vars) + ([R.field_gen] if R.f > 1 else [])
    return names, {n: sympy.Symbol(n) for n in names}


def parse_element(R, text):
    text = str(text).strip().replace("^", "**")
    names, syms = _symbols(R)
    try:
        expr = sympy.sympify(text, locals=syms)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ParseError(f"cannot parse polynomial {text!r}") from exc
    gens = [syms[n] for n in names]
    if expr.free_symbols - set(gens):
        bad = ", ".join(sorted(str(s) for s in expr.free_symbols - set(gens)))
        raise ParseError(f"unknown symbols in {text!r}: {bad}")
    if not gens:
        if not expr.is_number:
            raise ParseError(f"not a constant: {text!r}")
        return R(_coef(R, expr))
    poly = sympy.Poly(expr, *gens)
    acc = R.zero
    gen_els = [R.gen(n) for n in names]
    for exps, c in poly.terms():
        term = R(_coef(R, c))
        for g, e in zip(gen_els, exps):
            if e:
                term = term * g ** e
        acc = acc + term
    return acc


def _coef(R, c):
    fr = Fraction(str(sympy.Rational(c)))
    if fr.denominator % R.p == 0:
        raise ParseError(f"coefficient {fr} is not {R.p}-integral")
    return fr.numerator * pow(fr.denominator, -1, R.q) % R.q


def _kv(tokens):
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise ParseError(f"expected key=value, got {tok!r}")
        k, v = tok.split("=", 1)
        out[k] = v
    return out


def parse_monomial(vars, text):
    exps = [0] * len(vars)
    for factor in text.split("*"):
        factor = factor.strip()
        if not factor or factor == "1":
            continue
        m = re.fullmatch(r"([A-Za-z_]\w*)(?:\^(\d+))?", factor)
        if not m or m.group(1) not in vars:
            raise ParseError(f"bad monomial factor {factor!r}")
        exps[vars.index(m.group(1))] += int(m.group(2) or 1)
    return tuple(exps)


def parse_ring_line(line):
    from .ring import ArtinRing
    toks = line.split()
    if not toks or toks[0] != "ring":
        raise ParseError(f"expected a ring line, got {line!r}")
    kv = _kv(toks[1:])
    try:
        p = int(kv["p"])
        N = int(kv.get("N", "1"))
        f = int(kv.get("f", "1"))
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad ring line {line!r}") from exc
    vars = tuple(v for v in kv.get("vars", "").split(",") if v)
    trunc = tuple(parse_monomial(vars, t) for t in kv.get("trunc", "").split(",") if t)
    return ArtinRing(p, N, vars, trunc, f)


def format_matrix(M):
    rows = len(M)
    cols = len(M[0]) if rows else 0
    lines = [f"matrix {rows} {cols}"]
    for r in M:
        lines.append(", ".join(str(x) for x in r))
    return "\n".join(lines)


def parse_matrix(R, lines):
    """Parse ``matrix r c`` followed by r comma-separated rows; returns (M, rest)."""
    head = lines[0].split()
    if len(head) != 3 or head[0] != "matrix":
        raise ParseError(f"expected 'matrix rows cols', got {lines[0]!r}")
    r, c = int(head[1]), int(head[2])
    M = []
    for line in lines[1:1 + r]:
        entries = [e for e in line.split(",")]
        if len(entries) != c:
            raise ParseError(f"row {line!r} does not have {c} entries")
        M.append([parse_element(R, e) for e in entries])
    if len(M) != r:
        raise ParseError("matrix is missing rows")
    return M, lines[1 + r:]


def clean_lines(text):
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def parse_witt(R, text):
    from .witt import WittEl
    m = re.fullmatch(r"\s*\[(.*)\]\s*@\s*(\d+)\s*", text)
    if not m:
        raise ParseError(f"bad Witt vector {text!r}; expected [c0, c1, ...]@prec")
    comps = [parse_element(R, c) for c in m.group(1).split(",")] if m.group(1).strip() else []
    prec = int(m.group(2))
    if prec < 1 or prec > len(comps):
        raise ParseError("precision must be between 1 and the number of components")
    return WittEl(R, comps, prec)


def format_witt(x):
    return "[" + ", ".join(str(c) for c in x.comps[:x.prec]) + f"]@{x.prec}"
