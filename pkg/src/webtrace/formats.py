"""Line-oriented text formats for every value kind.

::

    type a in=1 out=1                 signature lines (optional prefix elsewhere)

    web k=1 l=1 loops=0               web block
    vertex 0 : a
    edge root 1 -> (0, in 1)
    edge (0, out 1) -> sink 1

    term -1                           quantum web: repeated term + web block
    web k=1 l=1 loops=0
    edge root 1 -> sink 1

    tensor dim=2 in=1 out=1           tensor: row-major (in..., out...) entries
    1 1 0 1

    dim 2                             representation: named tensor per type
    tensor a dim=2 in=1 out=1
    1 1 0 1

    pack degenerate                   pack: notes, types, relations, rep
    note ...
    relation a=1 expect=nonzero
    term 1
    web ...

Blank lines and ``#`` comments are ignored.  Serialization is canonical:
webs are written in canonical vertex order and rationals in lowest terms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .diagram import Port, Root, Sink, TypeSignature, Web, canonical_form, validate
from .gallery import ExamplePack
from .quantum import QuantumWeb
from .tensors import Representation, Tensor

__all__ = ["ParseError", "parse", "serialize", "format_rational", "parse_rational", "KINDS", "detect_kind"]

KINDS = ("signature", "web", "quantum_web", "tensor", "representation", "pack")


class ParseError(ValueError):
    """Syntax or semantic error at a 1-based (line, column)."""

    def __init__(self, message: str, line: int = 0, col: int = 0, semantic: bool = False):
        self.message = message
        self.line = line
        self.col = col
        self.semantic = semantic
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)


_RATIONAL = re.compile(r"[-−]?\d+(?:/\d+)?$")
_NUMERIC_START = re.compile(r"[-−+.\d]")


def parse_rational(tok: str, line: int = 0, col: int = 0) -> Fraction:
    if not _RATIONAL.match(tok):
        raise ParseError(f"expected a rational p/q, got {tok!r}", line, col)
    tok = tok.replace("−", "-")
    if tok.endswith("/0"):
        raise ParseError("zero denominator", line, col)
    return Fraction(tok)


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# -- lexing -----------------------------------------------------------------------

@dataclass
class _Line:
    no: int
    text: str  # comment-stripped, right-stripped; leading spaces kept for columns
    keyword: str
    start: int  # column offset of the keyword


def _lines(text: str) -> list[_Line]:
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].rstrip()
        stripped = body.lstrip()
        if not stripped:
            continue
        start = len(body) - len(stripped)
        out.append(_Line(no, body, stripped.split()[0], start))
    return out


_TYPE = re.compile(r"type\s+(?P<name>[^\s=]+)\s+in=(?P<i>\d+)\s+out=(?P<o>\d+)\s*$")
_WEB = re.compile(r"web\s+k=(?P<k>\d+)\s+l=(?P<l>\d+)\s+loops=(?P<c>\d+)\s*$")
_VERTEX = re.compile(r"vertex\s+(?P<v>[A-Za-z0-9_.]+)\s*:\s*(?P<t>[^\s=]+)\s*$")
_END = re.compile(r"\s*(?:\(\s*(?P<v>[A-Za-z0-9_.]+)\s*,\s*(?P<side>in|out)\s+(?P<slot>\d+)\s*\)"
                  r"|(?P<kind>root|sink)\s+(?P<label>\d+))")
_ARROW = re.compile(r"\s*->")
_TERM = re.compile(r"term\s+(?P<c>\S+)\s*$")
_TENSOR = re.compile(r"tensor(?:\s+(?P<name>[^\s=]+))?\s+dim=(?P<n>\d+)\s+in=(?P<k>\d+)\s+out=(?P<l>\d+)\s*$")
_DIM = re.compile(r"dim\s+(?P<n>\d+)\s*$")
_PACK = re.compile(r"pack\s+(?P<name>\S+)\s*$")
_NOTE = re.compile(r"note\s?(?P<text>.*)$")
_RELATION = re.compile(r"relation\s+(?P<name>\S+)(?:\s+expect=(?P<e>zero|nonzero))?\s*$")


class _Parser:
    def __init__(self, text: str):
        self.lines = _lines(text)
        self.pos = 0

    # helpers
    def peek(self) -> _Line | None:
        return self.lines[self.pos] if self.pos < len(self.lines) else None

    def at(self, *keywords) -> bool:
        ln = self.peek()
        return ln is not None and ln.keyword in keywords

    def take(self, pattern: re.Pattern, what: str) -> tuple[_Line, re.Match]:
        ln = self.peek()
        if ln is None:
            raise ParseError(f"unexpected end of input, expected {what}",
                             self.lines[-1].no if self.lines else 1, 1)
        m = pattern.match(ln.text, ln.start)
        if not m:
            raise ParseError(f"expected {what}, got {ln.text.strip()!r}", ln.no, ln.start + 1)
        self.pos += 1
        return ln, m

    def done(self):
        ln = self.peek()
        if ln is not None:
            raise ParseError(f"unexpected {ln.keyword!r}", ln.no, ln.start + 1)

    # grammar
    def types(self) -> TypeSignature | None:
        seen = []
        names = {}
        while self.at("type"):
            ln, m = self.take(_TYPE, "type <name> in=<i> out=<o>")
            name = m["name"]
            if name in names:
                raise ParseError(f"duplicate type {name!r}", ln.no, m.start("name") + 1, semantic=True)
            names[name] = ln
            seen.append((name, int(m["i"]), int(m["o"])))
        return TypeSignature(seen) if seen else None

    def endpoint(self, ln: _Line, pos: int):
        m = _END.match(ln.text, pos)
        if not m:
            raise ParseError("expected endpoint '(<id>, in|out <slot>)', 'root <i>' or 'sink <j>'",
                             ln.no, pos + 1 + (len(ln.text[pos:]) - len(ln.text[pos:].lstrip())))
        if m["kind"] == "root":
            end = Root(int(m["label"]))
        elif m["kind"] == "sink":
            end = Sink(int(m["label"]))
        else:
            end = Port(m["v"], m["side"], int(m["slot"]))
        return end, m.end(), m.start() + 1 + (len(m.group(0)) - len(m.group(0).lstrip()))

    def web(self, sig: TypeSignature, check: bool) -> Web:
        head, m = self.take(_WEB, "web k=<k> l=<l> loops=<c>")
        k, l, loops = int(m["k"]), int(m["l"]), int(m["c"])
        verts = []
        vline = {}
        while self.at("vertex"):
            ln, vm = self.take(_VERTEX, "vertex <id> : <type>")
            v, t = vm["v"], vm["t"]
            if check and v in vline:
                raise ParseError(f"duplicate vertex id {v}", ln.no, vm.start("v") + 1, semantic=True)
            if check and t not in sig:
                raise ParseError(f"vertex {v} has unknown type {t!r}", ln.no, vm.start("t") + 1, semantic=True)
            vline[v] = ln
            verts.append((v, t))
        types = dict(verts)
        edges = []
        used = {}
        while self.at("edge"):
            ln = self.peek()
            self.pos += 1
            pos = ln.start + len("edge")
            tail, pos, tcol = self.endpoint(ln, pos)
            am = _ARROW.match(ln.text, pos)
            if not am:
                raise ParseError("expected '->'", ln.no, pos + 1)
            head_end, pos, hcol = self.endpoint(ln, am.end())
            if ln.text[pos:].strip():
                raise ParseError("unexpected text after edge", ln.no, pos + 1)
            if check:
                for end, col, role in ((tail, tcol, "tail"), (head_end, hcol, "head")):
                    self._check_end(end, role, sig, types, k, l, ln, col)
                    if end in used:
                        what = (f"{end.side}-slot {end.slot} of {end.vertex}" if isinstance(end, Port) else str(end))
                        raise ParseError(f"{what} used twice (first on line {used[end]})", ln.no, col, semantic=True)
                    used[end] = ln.no
            edges.append((tail, head_end))
        w = Web(sig, tuple(verts), tuple(edges), k, l, loops)
        if check:
            problems = validate(sig, w)
            if problems:
                raise ParseError("; ".join(problems), head.no, head.start + 1, semantic=True)
        return w

    @staticmethod
    def _check_end(end, role, sig, types, k, l, ln, col):
        if isinstance(end, Root):
            if role == "head":
                raise ParseError(f"root {end.label} cannot be an edge head", ln.no, col, semantic=True)
            if not 1 <= end.label <= k:
                raise ParseError(f"root label {end.label} outside 1..{k}", ln.no, col, semantic=True)
        elif isinstance(end, Sink):
            if role == "tail":
                raise ParseError(f"sink {end.label} cannot be an edge tail", ln.no, col, semantic=True)
            if not 1 <= end.label <= l:
                raise ParseError(f"sink label {end.label} outside 1..{l}", ln.no, col, semantic=True)
        else:
            if end.vertex not in types:
                raise ParseError(f"unknown vertex {end.vertex}", ln.no, col, semantic=True)
            want = "out" if role == "tail" else "in"
            if end.side != want:
                raise ParseError(f"{end.side}-slot of {end.vertex} cannot be an edge {role}", ln.no, col, semantic=True)
            i, o = sig.arity(types[end.vertex])
            bound = o if end.side == "out" else i
            if not 1 <= end.slot <= bound:
                raise ParseError(f"{end.side}-slot {end.slot} of {end.vertex} exceeds arity {bound} of type "
                                 f"{types[end.vertex]!r}", ln.no, col, semantic=True)

    def terms(self, sig: TypeSignature, check: bool) -> QuantumWeb:
        pairs = []
        while self.at("term"):
            ln, m = self.take(_TERM, "term <rational>")
            c = parse_rational(m["c"], ln.no, m.start("c") + 1)
            pairs.append((c, self.web(sig, check)))
        return QuantumWeb(pairs, sig)

    def tensor(self, named: bool) -> tuple[str | None, Tensor]:
        ln, m = self.take(_TENSOR, "tensor dim=<n> in=<k> out=<l>")
        if named and not m["name"]:
            raise ParseError("representation tensors need a type name", ln.no, ln.start + 1)
        if not named and m["name"]:
            raise ParseError("unexpected tensor name", ln.no, m.start("name") + 1)
        n, k, l = int(m["n"]), int(m["k"]), int(m["l"])
        want = n ** (k + l)
        vals = []
        while True:
            nxt = self.peek()
            if nxt is None or not _NUMERIC_START.match(nxt.keyword):
                break
            self.pos += 1
            col = 0
            for tok in nxt.text.split():
                col = nxt.text.index(tok, col)
                vals.append(parse_rational(tok, nxt.no, col + 1))
                col += len(tok)
        if len(vals) != want:
            raise ParseError(f"tensor needs {want} entries, found {len(vals)}", ln.no, ln.start + 1, semantic=True)
        return m["name"], Tensor(k, l, n, vals)

    def representation(self) -> Representation:
        ln, m = self.take(_DIM, "dim <n>")
        n = int(m["n"])
        tensors = {}
        arity = []
        while self.at("tensor"):
            tl = self.peek()
            name, t = self.tensor(named=True)
            if name in tensors:
                raise ParseError(f"duplicate tensor for type {name!r}", tl.no, tl.start + 1, semantic=True)
            if t.dim != n:
                raise ParseError(f"tensor {name!r} has dim {t.dim}, expected {n}", tl.no, tl.start + 1, semantic=True)
            tensors[name] = t
            arity.append((name, t.in_rank, t.out_rank))
        return Representation(TypeSignature(arity), n, tensors)

    def pack(self) -> ExamplePack:
        ln, m = self.take(_PACK, "pack <name>")
        name = m["name"]
        notes = []
        while self.at("note"):
            _, nm = self.take(_NOTE, "note <text>")
            notes.append(nm["text"])
        sig = self.types() or TypeSignature()
        rels, names, expect = [], [], []
        while self.at("relation"):
            rl, rm = self.take(_RELATION, "relation <name> [expect=zero|nonzero]")
            names.append(rm["name"])
            expect.append(rm["e"])
            rels.append(self.terms(sig, True))
        rep = None
        if self.at("dim"):
            rep = self.representation()
            if rep.sig != sig:
                raise ParseError("representation types do not match the pack signature", ln.no, 1, semantic=True)
        declared = [e for e in expect if e is not None]
        if rep is not None and len(declared) != len(expect):
            raise ParseError("every relation needs expect= when a representation is given", ln.no, 1, semantic=True)
        expect_zero = tuple(e == "zero" for e in declared)
        return ExamplePack(name, sig, tuple(rels), tuple(names), expect_zero, rep, tuple(notes))


def parse(kind: str, text: str, sig: TypeSignature | None = None, check: bool = True):
    """Parse a document of the given kind.

    ``sig`` supplies the signature for web and quantum web documents that do
    not declare their own types; declared types must then agree with it.
    With ``check=False`` webs are returned without semantic validation.
    """
    p = _Parser(text)
    if kind == "signature":
        out = p.types() or TypeSignature()
    elif kind in ("web", "quantum_web"):
        declared = p.types()
        if declared is not None and sig is not None and declared != sig:
            raise ParseError("declared types differ from the supplied signature", 1, 1, semantic=True)
        use = declared or sig or TypeSignature()
        out = p.web(use, check) if kind == "web" else p.terms(use, check)
    elif kind == "tensor":
        out = p.tensor(named=False)[1]
    elif kind == "representation":
        out = p.representation()
    elif kind == "pack":
        out = p.pack()
    else:
        raise ValueError(f"unknown document kind {kind!r}; expected one of {KINDS}")
    p.done()
    return out


def detect_kind(text: str) -> str:
    first = next((ln.keyword for ln in _lines(text) if ln.keyword != "type"), None)
    return {
        "web": "web", "term": "quantum_web", "tensor": "tensor", "dim": "representation", "pack": "pack",
        None: "signature",
    }.get(first, "signature")


# -- serialization ------------------------------------------------------------------

def _sig_lines(sig: TypeSignature | None) -> list[str]:
    return [f"type {t} in={i} out={o}" for t, i, o in sig.items()] if sig is not None else []


def _web_lines(w: Web) -> list[str]:
    w = canonical_form(w)
    out = [f"web k={w.k} l={w.l} loops={w.loops}"]
    out += [f"vertex {v} : {t}" for v, t in w.vertices]
    out += [f"edge {a} -> {b}" for a, b in w.edges]
    return out


def _term_lines(q: QuantumWeb) -> list[str]:
    out = []
    for c, w in q.terms():
        out.append(f"term {format_rational(c)}")
        out += _web_lines(w)
    return out


def _tensor_lines(t: Tensor, name: str | None = None) -> list[str]:
    label = f"tensor {name} " if name is not None else "tensor "
    out = [f"{label}dim={t.dim} in={t.in_rank} out={t.out_rank}"]
    vals = [format_rational(x) for x in t.entries()]
    for i in range(0, len(vals), 16):
        out.append(" ".join(vals[i:i + 16]))
    return out


def _rep_lines(r: Representation) -> list[str]:
    out = [f"dim {r.dim}"]
    for t in r.sig.types:
        out += _tensor_lines(r[t], t)
    return out


def _pack_lines(p: ExamplePack) -> list[str]:
    out = [f"pack {p.name}"]
    out += [f"note {n}" for n in p.notes]
    out += _sig_lines(p.sig)
    for i, (name, q) in enumerate(zip(p.relation_names, p.relations)):
        exp = ""
        if i < len(p.expect_zero):
            exp = " expect=zero" if p.expect_zero[i] else " expect=nonzero"
        out.append(f"relation {name}{exp}")
        out += _term_lines(q)
    if p.rep is not None:
        out += _rep_lines(p.rep)
    return out


_SERIALIZERS: dict[type, Callable] = {
    TypeSignature: _sig_lines,
    Web: lambda w: _sig_lines(w.sig) + _web_lines(w),
    QuantumWeb: lambda q: _sig_lines(q.sig) + _term_lines(q),
    Tensor: _tensor_lines,
    Representation: _rep_lines,
    ExamplePack: _pack_lines,
}


def serialize(value) -> str:
    """Deterministic text form of any supported value."""
    for cls, fn in _SERIALIZERS.items():
        if isinstance(value, cls):
            return "\n".join(fn(value)) + "\n"
    raise TypeError(f"cannot serialize {type(value).__name__}")
