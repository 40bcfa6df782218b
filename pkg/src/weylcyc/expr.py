"""Expression syntax for CLI input and output.

Grammar (whitespace-insensitive):

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' ['-' | '+'] INT)?
    atom   := INT | NAME | '(' expr ')'

NAME is ``i``, ``hbar`` or a generator ``p<k>``, ``q<k>``, ``x<k>``,
``y<k>``, ``dx<k>`` with k >= 1.  ``*`` is the commutative product (dx
generators anticommute); the star product is never written infix.  Only
``hbar`` takes negative exponents, and a divisor must be a nonzero constant
times a power of hbar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ContextMismatch, ParseError, UnknownGenerator
from .graded import merge_sign
from .scalar import Scalar, ONE, ZERO, I, fmt_q

GEN_KINDS = ("p", "q", "x", "y", "dx")
_GEN_RE = re.compile(r"(dx|p|q|x|y)([1-9][0-9]*)\Z")
_TOKEN_RE = re.compile(r"\s*(?:(?P<num>[0-9]+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))")


# abstract syntax ---------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Add:
    terms: tuple


@dataclass(frozen=True)
class Mul:
    factors: tuple


@dataclass(frozen=True)
class Div:
    num: object
    den: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


# tokenizer / parser ------------------------------------------------------------

def _line_col(text, pos0):
    line = text.count("\n", 0, pos0) + 1
    start = text.rfind("\n", 0, pos0) + 1
    return line, pos0 - start + 1


def _error(text, pos0, msg, cls=ParseError):
    line, col = _line_col(text, pos0)
    return cls(msg, pos0 + 1, line, col)


def _tokenize(text):
    toks = []
    i = 0
    n = len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN_RE.match(text, i)
        if not m or m.end() == i:
            raise _error(text, i, f"unexpected character {text[i]!r}")
        start = m.start(m.lastgroup)
        toks.append((m.lastgroup, m.group(m.lastgroup), start))
        i = m.end()
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, tok, msg):
        return _error(self.text, tok[2], msg)

    def expect_op(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            raise self.fail(t, f"expected {op!r}" if t[0] != "end" else f"expected {op!r}, got end of input")
        return t

    def parse(self):
        e = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise self.fail(t, f"unexpected {t[1]!r}")
        return e

    def expr(self):
        terms = [self.term()]
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            t = self.term()
            terms.append(t if op == "+" else Neg(t))
        return terms[0] if len(terms) == 1 else Add(tuple(terms))

    def term(self):
        acc = self.unary()
        factors = [acc]
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            rhs = self.unary()
            if op == "*":
                factors.append(rhs)
            else:
                left = factors[0] if len(factors) == 1 else Mul(tuple(factors))
                factors = [Div(left, rhs)]
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def unary(self):
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            arg = self.unary()
            return Neg(arg) if t[1] == "-" else arg
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            sign = 1
            t = self.peek()
            if t[0] == "op" and t[1] in "+-":
                self.take()
                sign = -1 if t[1] == "-" else 1
            t = self.take()
            if t[0] != "num":
                raise self.fail(t, "exponent must be an integer" if t[0] != "end" else "missing exponent")
            k = sign * int(t[1])
            if k < 0 and base != Sym("hbar"):
                raise self.fail(t, "only hbar takes negative exponents")
            return Pow(base, k)
        return base

    def atom(self):
        t = self.take()
        kind, val, pos = t
        if kind == "num":
            return Num(int(val))
        if kind == "name":
            if val in ("i", "hbar") or _GEN_RE.match(val):
                return Sym(val)
            raise _error(self.text, pos, f"unknown generator {val!r}", UnknownGenerator)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect_op(")")
            return e
        if kind == "end":
            raise self.fail(t, "unexpected end of input")
        raise self.fail(t, f"unexpected {val!r}")


def parse_expr(text: str):
    """Parse text into an abstract syntax tree."""
    return _Parser(text).parse()


# canonical form ----------------------------------------------------------------

def gen_sort_key(name):
    m = _GEN_RE.match(name)
    kind, idx = m.group(1), int(m.group(2))
    return (GEN_KINDS.index(kind), idx)


class Canon:
    """Normal form: {(commuting monomial, dx indices): Scalar}.

    The commuting monomial is a sorted tuple of (generator, exponent); dx
    indices are sorted (1-based) with the reordering sign absorbed.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def scalar(cls, s):
        return cls({((), ()): Scalar.coerce(s)})

    @classmethod
    def gen(cls, name):
        m = _GEN_RE.match(name)
        if m.group(1) == "dx":
            return cls({((), (int(m.group(2)),)): ONE})
        return cls({(((name, 1),), ()): ONE})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return Canon(out)

    def __neg__(self):
        return Canon({k: -v for k, v in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for (m1, f1), a in self.terms.items():
            for (m2, f2), b in other.terms.items():
                s, f = merge_sign(f1, f2)
                if not s:
                    continue
                exps = dict(m1)
                for g, e in m2:
                    exps[g] = exps.get(g, 0) + e
                mono = tuple(sorted(exps.items(), key=lambda t: gen_sort_key(t[0])))
                c = a * b
                if s < 0:
                    c = -c
                k = (mono, f)
                out[k] = out[k] + c if k in out else c
        return Canon(out)

    def scale(self, s):
        s = Scalar.coerce(s)
        return Canon({k: v * s for k, v in self.terms.items()})

    def constant(self):
        """The Scalar if this is free of generators, else None."""
        if not self.terms:
            return ZERO
        if set(self.terms) == {((), ())}:
            return self.terms[((), ())]
        return None

    def generators(self):
        names = set()
        for mono, f in self.terms:
            names.update(g for g, _ in mono)
            names.update(f"dx{j}" for j in f)
        return names

    def __eq__(self, other):
        return isinstance(other, Canon) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"Canon({print_expr(self)})"


def _power(base: Canon, k: int) -> Canon:
    out = Canon.scalar(ONE)
    for _ in range(k):
        out = out * base
    return out


def normalize(e) -> Canon:
    """Evaluate an AST to its canonical form."""
    if isinstance(e, Canon):
        return e
    if isinstance(e, Num):
        return Canon.scalar(e.value)
    if isinstance(e, Sym):
        if e.name == "i":
            return Canon.scalar(I)
        if e.name == "hbar":
            return Canon.scalar(Scalar.hbar(1))
        return Canon.gen(e.name)
    if isinstance(e, Neg):
        return -normalize(e.arg)
    if isinstance(e, Add):
        out = Canon()
        for t in e.terms:
            out = out + normalize(t)
        return out
    if isinstance(e, Mul):
        out = Canon.scalar(ONE)
        for f in e.factors:
            out = out * normalize(f)
        return out
    if isinstance(e, Div):
        d = normalize(e.den).constant()
        if d is None or not d or len(d.terms) != 1:
            raise ParseError("divisor must be a nonzero constant times a power of hbar", 1)
        return normalize(e.num).scale(d.inv())
    if isinstance(e, Pow):
        if e.base == Sym("hbar"):
            return Canon.scalar(Scalar.hbar(e.exp))
        if e.exp < 0:
            raise ParseError("only hbar takes negative exponents", 1)
        return _power(normalize(e.base), e.exp)
    raise TypeError(f"not an expression: {e!r}")


def parse(text: str) -> Canon:
    return normalize(parse_expr(text))


# printing ----------------------------------------------------------------------

def _fmt_complex(re_, im):
    """Signed pieces of a Gaussian rational: list of (sign, unsigned text)."""
    out = []
    if re_:
        out.append(("-" if re_ < 0 else "+", fmt_q(abs(re_))))
    if im:
        a = abs(im)
        out.append(("-" if im < 0 else "+", "i" if a == 1 else f"{fmt_q(a)}*i"))
    return out


def _mono_text(mono, f, h):
    parts = []
    if h:
        parts.append("hbar" if h == 1 else f"hbar^{h}")
    for g, e in mono:
        parts.append(g if e == 1 else f"{g}^{e}")
    parts.extend(f"dx{j}" for j in f)
    return "*".join(parts)


def _term_order(item):
    (mono, f), _ = item
    deg = sum(e for _, e in mono) + len(f)
    return (-deg, tuple((gen_sort_key(g), -e) for g, e in mono), f)


def print_expr(e) -> str:
    """Canonical text; parse(print_expr(e)) equals normalize(e)."""
    c = normalize(e)
    pieces = []
    for (mono, f), s in sorted(c.terms.items(), key=_term_order):
        for h, (re_, im) in sorted(s.terms.items(), reverse=True):
            body = _mono_text(mono, f, h)
            signed = _fmt_complex(re_, im)
            if len(signed) == 2:
                inner = signed[0][1] if signed[0][0] == "+" else "-" + signed[0][1]
                inner += f" {signed[1][0]} {signed[1][1]}"
                pieces.append(("+", f"({inner})" + (f"*{body}" if body else "")))
                continue
            sign, mag = signed[0]
            if not body:
                pieces.append((sign, mag))
            elif mag == "1":
                pieces.append((sign, body))
            else:
                pieces.append((sign, f"{mag}*{body}"))
    if not pieces:
        return "0"
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, text in pieces[1:]:
        out += f" {sign} {text}"
    return out


def split_chain(text: str, seps=("⊗", "|")):
    """Split a tensor 'a0 ⊗ a1 ⊗ ...' at top-level separators; returns (piece, offset) pairs."""
    out = []
    depth = 0
    start = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch in seps:
            out.append((text[start:i], start))
            start = i + 1
    out.append((text[start:], start))
    return out


def parse_chain(text: str):
    """Canonical forms of the slots of a tensor expression."""
    out = []
    for piece, off in split_chain(text):
        try:
            out.append(parse(piece))
        except ParseError as err:
            pos = err.pos + off
            line, col = _line_col(text, pos - 1)
            raise type(err)(err.reason, pos, line, col) from None
    return out


# conversions to and from the algebra types -------------------------------------

def weyl_gen_names(n: int):
    return tuple(f"{c}{s}" for s in range(1, n + 1) for c in "pq")


def _require(c: Canon, allowed, what):
    bad = sorted(c.generators() - set(allowed), key=gen_sort_key)
    if bad:
        raise ContextMismatch(f"{bad[0]} is not a generator of {what}")


def to_weyl(c: Canon, n: int):
    """Element of W_{2n}; p_s, q_s are the generators of pair s."""
    from .weyl import WeylContext

    names = weyl_gen_names(n)
    _require(c, names, f"W_{2 * n}")
    W = WeylContext(n)
    terms = {}
    for (mono, _), s in c.terms.items():
        e = [0] * (2 * n)
        for g, k in mono:
            e[names.index(g)] = k
        terms[tuple(e)] = s
    return W.zero()._new(dict(terms)) if terms else W.zero()


def from_weyl(el) -> Canon:
    n = len(el.pairs)
    names = weyl_gen_names(n)
    out = {}
    for e, s in el.terms.items():
        mono = tuple((names[j], k) for j, k in enumerate(e) if k)
        out[(tuple(sorted(mono, key=lambda t: gen_sort_key(t[0]))), ())] = s
    return Canon(out)


def _bundle_names(bundle):
    V = 2 * bundle.n
    alias = {}
    for s in range(1, bundle.n + 1):
        alias[f"p{s}"] = f"y{2 * s - 1}"
        alias[f"q{s}"] = f"y{2 * s}"
    return V, alias


def to_section(c: Canon, bundle) -> dict:
    """Section of the flat bundle from x, y, dx (p_s, q_s alias y^{2s-1}, y^{2s})."""
    V, alias = _bundle_names(bundle)
    allowed = set(bundle.xnames) | set(bundle.ynames) | set(alias) | {f"dx{j}" for j in range(1, V + 1)}
    _require(c, allowed, "the Weyl bundle")
    gens = bundle.xnames + bundle.ynames
    out = {}
    for (mono, f), s in c.terms.items():
        e = [0] * (2 * V)
        for g, k in mono:
            e[gens.index(alias.get(g, g))] += k
        key = (tuple(e), tuple(j - 1 for j in f))
        out[key] = out[key] + s if key in out else s
    return {k: v for k, v in out.items() if v}


def from_section(vec: dict, bundle) -> Canon:
    gens = bundle.xnames + bundle.ynames
    out = Canon()
    for (e, f), s in vec.items():
        mono = tuple(sorted(((gens[j], k) for j, k in enumerate(e) if k), key=lambda t: gen_sort_key(t[0])))
        out = out + Canon({(mono, tuple(j + 1 for j in f)): s})
    return out


def to_base(c: Canon, bundle):
    """Polynomial in the base coordinates x1..x2n."""
    _require(c, bundle.xnames, "the base coordinate ring")
    terms = {}
    for (mono, _), s in c.terms.items():
        e = [0] * len(bundle.xnames)
        for g, k in mono:
            e[bundle.xnames.index(g)] = k
        terms[tuple(e)] = s
    return bundle.base_ring._new(terms)


def from_form(w) -> Canon:
    """Canon of a GradedElement with commutative polynomial coefficients."""
    gens = w.proto.gens
    out = Canon()
    for idx, c in w.form.items():
        for e, s in c.terms.items():
            mono = tuple(sorted(((gens[j], k) for j, k in enumerate(e) if k), key=lambda t: gen_sort_key(t[0])))
            out = out + Canon({(mono, tuple(j + 1 for j in idx)): s})
    return out


def parse_matrix(text: str):
    """Rows separated by ';', entries by ','."""
    rows = []
    off = 0
    for row in text.split(";"):
        entries = []
        roff = off
        for piece in row.split(","):
            try:
                entries.append(parse(piece))
            except ParseError as err:
                pos = err.pos + roff
                line, col = _line_col(text, pos - 1)
                raise type(err)(err.reason, pos, line, col) from None
            roff += len(piece) + 1
        rows.append(entries)
        off += len(row) + 1
    if len({len(r) for r in rows}) != 1:
        raise ParseError("matrix rows have different lengths", 1)
    return rows
