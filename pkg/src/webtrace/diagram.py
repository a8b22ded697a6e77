"""Type signatures, webs and diagrams, and the structural operations on them.

A web is stored port-level: every edge runs from a *tail* endpoint (a root
label or an out-slot of a typed vertex) to a *head* endpoint (a sink label or
an in-slot of a typed vertex).  Slot indices are 1-based and encode the local
orders at each vertex.  Vertexless directed loops are kept as a counter.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import count
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence, Union

__all__ = [
    "SignatureError",
    "ProfileError",
    "CanonicalCapError",
    "TypeSignature",
    "Root",
    "Sink",
    "Port",
    "Web",
    "validate",
    "disjoint_union",
    "glue",
    "compose",
    "relabel_boundary",
    "permutation_web",
    "strand",
    "vertex_web",
    "path_web",
    "cycle_diagram",
    "loop_diagram",
    "canonical_form",
    "canonical_key",
    "MAX_CANONICAL_VERTICES",
    "check_permutation",
    "compose_permutations",
    "cycle_count",
    "permutation_sign",
]

MAX_CANONICAL_VERTICES = 12


class SignatureError(ValueError):
    """Raised when signatures disagree or a type is unknown."""


class ProfileError(ValueError):
    """Raised when webs have the wrong (k, l) profile for an operation."""


class CanonicalCapError(ValueError):
    """Raised when a web is too large for :func:`canonical_key`."""


class TypeSignature:
    """A finite set of types with in- and out-arities.

    Accepts either a mapping ``name -> (in_arity, out_arity)`` or an iterable
    of ``(name, in_arity, out_arity)`` triples.  Type order is preserved.
    """

    __slots__ = ("_arity",)

    def __init__(self, types: Mapping[str, tuple[int, int]] | Iterable[tuple[str, int, int]] = ()):
        if isinstance(types, Mapping):
            items = [(name, a[0], a[1]) for name, a in types.items()]
        else:
            items = [tuple(t) for t in types]
        arity: dict[str, tuple[int, int]] = {}
        for name, i, o in items:
            if not isinstance(name, str) or not name:
                raise SignatureError(f"type name must be a nonempty string, got {name!r}")
            if name in arity:
                raise SignatureError(f"duplicate type name {name!r}")
            if int(i) < 0 or int(o) < 0:
                raise SignatureError(f"negative arity for type {name!r}")
            arity[name] = (int(i), int(o))
        self._arity = arity

    @property
    def types(self) -> tuple[str, ...]:
        return tuple(self._arity)

    @property
    def in_arity(self) -> Mapping[str, int]:
        return MappingProxyType({t: a[0] for t, a in self._arity.items()})

    @property
    def out_arity(self) -> Mapping[str, int]:
        return MappingProxyType({t: a[1] for t, a in self._arity.items()})

    def arity(self, t: str) -> tuple[int, int]:
        try:
            return self._arity[t]
        except KeyError:
            raise SignatureError(f"unknown type {t!r}") from None

    def items(self) -> Iterator[tuple[str, int, int]]:
        for t, (i, o) in self._arity.items():
            yield t, i, o

    def compatible(self, other: "TypeSignature") -> bool:
        return all(other._arity.get(t, a) == a for t, a in self._arity.items())

    def union(self, other: "TypeSignature") -> "TypeSignature":
        """Merge two signatures whose shared types agree on arity."""
        if not self.compatible(other):
            bad = sorted(t for t in self._arity if t in other._arity and other._arity[t] != self._arity[t])
            raise SignatureError(f"conflicting arities for types {bad}")
        if all(t in self._arity for t in other._arity):
            return self
        merged = dict(self._arity)
        merged.update(other._arity)
        return TypeSignature(merged)

    def __contains__(self, t: object) -> bool:
        return t in self._arity

    def __iter__(self) -> Iterator[str]:
        return iter(self._arity)

    def __len__(self) -> int:
        return len(self._arity)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TypeSignature):
            return NotImplemented
        return list(self._arity.items()) == list(other._arity.items())

    def __hash__(self) -> int:
        return hash(tuple(self._arity.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{t}: {i}->{o}" for t, (i, o) in self._arity.items())
        return f"TypeSignature({{{body}}})"


@dataclass(frozen=True)
class Root:
    label: int

    def __str__(self) -> str:
        return f"root {self.label}"


@dataclass(frozen=True)
class Sink:
    label: int

    def __str__(self) -> str:
        return f"sink {self.label}"


@dataclass(frozen=True)
class Port:
    vertex: str
    side: str  # "in" or "out"
    slot: int

    def __str__(self) -> str:
        return f"({self.vertex}, {self.side} {self.slot})"


End = Union[Root, Sink, Port]
Edge = tuple[End, End]


def _out(v, s: int) -> Port:
    return Port(str(v), "out", s)


def _in(v, s: int) -> Port:
    return Port(str(v), "in", s)


@dataclass(frozen=True)
class Web:
    """A k,l-web over a signature; a diagram when ``k == l == 0``."""

    sig: TypeSignature
    vertices: tuple[tuple[str, str], ...] = ()
    edges: tuple[Edge, ...] = ()
    k: int = 0
    l: int = 0
    loops: int = 0
    _partner: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple((str(v), t) for v, t in self.vertices))
        object.__setattr__(self, "edges", tuple((a, b) for a, b in self.edges))

    @property
    def profile(self) -> tuple[int, int]:
        return (self.k, self.l)

    @property
    def is_diagram(self) -> bool:
        return self.k == 0 and self.l == 0

    @property
    def vertex_types(self) -> dict[str, str]:
        return dict(self.vertices)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    def partner(self) -> dict:
        """Map each endpoint to the opposite endpoint of its edge."""
        if self._partner is None:
            p = {}
            for a, b in self.edges:
                p[a] = b
                p[b] = a
            object.__setattr__(self, "_partner", p)
        return self._partner

    def with_sig(self, sig: TypeSignature) -> "Web":
        return Web(sig, self.vertices, self.edges, self.k, self.l, self.loops)

    def check(self) -> "Web":
        """Return self, raising ``ValueError`` listing violations if invalid."""
        problems = validate(self.sig, self)
        if problems:
            raise ValueError("invalid web: " + "; ".join(problems))
        return self


def validate(sig: TypeSignature, w: Web) -> list[str]:
    """Return the list of structural violations of ``w`` against ``sig``."""
    report: list[str] = []
    if w.k < 0 or w.l < 0:
        report.append(f"negative profile ({w.k}, {w.l})")
    if w.loops < 0:
        report.append(f"negative loop count {w.loops}")
    types: dict[str, str] = {}
    for v, t in w.vertices:
        if v in types:
            report.append(f"duplicate vertex id {v}")
            continue
        if t not in sig:
            report.append(f"vertex {v} has unknown type {t!r}")
        types[v] = t

    used: Counter = Counter()
    for tail, head in w.edges:
        for end, role in ((tail, "tail"), (head, "head")):
            if isinstance(end, Root):
                if role == "head":
                    report.append(f"root {end.label} used as an edge head")
                    continue
                if not 1 <= end.label <= w.k:
                    report.append(f"root {end.label} out of range 1..{w.k}")
                    continue
            elif isinstance(end, Sink):
                if role == "tail":
                    report.append(f"sink {end.label} used as an edge tail")
                    continue
                if not 1 <= end.label <= w.l:
                    report.append(f"sink {end.label} out of range 1..{w.l}")
                    continue
            elif isinstance(end, Port):
                if end.vertex not in types:
                    report.append(f"edge endpoint refers to unknown vertex {end.vertex}")
                    continue
                want = "out" if role == "tail" else "in"
                if end.side != want:
                    report.append(f"{end.side}-slot {end.slot} of {end.vertex} used as an edge {role}")
                    continue
                t = types[end.vertex]
                if t in sig:
                    i, o = sig.arity(t)
                    bound = o if end.side == "out" else i
                    if not 1 <= end.slot <= bound:
                        report.append(f"{end.side}-slot {end.slot} of {end.vertex} out of range 1..{bound}")
                        continue
            else:
                report.append(f"malformed endpoint {end!r}")
                continue
            used[end] += 1

    for end, c in used.items():
        if c > 1:
            if isinstance(end, Port):
                report.append(f"{end.side}-slot {end.slot} of {end.vertex} used {c} times")
            else:
                report.append(f"{end} used {c} times")
    for v, t in w.vertices:
        if t not in sig or types.get(v) != t:
            continue
        i, o = sig.arity(t)
        for s in range(1, i + 1):
            if used[_in(v, s)] == 0:
                report.append(f"in-slot {s} of {v} unfilled")
        for s in range(1, o + 1):
            if used[_out(v, s)] == 0:
                report.append(f"out-slot {s} of {v} unfilled")
    for i in range(1, w.k + 1):
        if used[Root(i)] == 0:
            report.append(f"root {i} missing")
    for j in range(1, w.l + 1):
        if used[Sink(j)] == 0:
            report.append(f"sink {j} missing")
    return report


# -- permutations -------------------------------------------------------------
# Permutations of [k] are tuples of 1-based images: perm[i - 1] == perm(i).

def check_permutation(perm: Sequence[int], k: int | None = None) -> tuple[int, ...]:
    perm = tuple(int(p) for p in perm)
    if k is not None and len(perm) != k:
        raise ValueError(f"permutation {perm} does not have length {k}")
    if sorted(perm) != list(range(1, len(perm) + 1)):
        raise ValueError(f"{perm} is not a bijection of [{len(perm)}]")
    return perm


def compose_permutations(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """Return ``p ∘ q`` (apply ``q`` first)."""
    return tuple(p[q[i] - 1] for i in range(len(q)))


def cycle_count(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    cycles = 0
    for start in range(len(perm)):
        if seen[start]:
            continue
        cycles += 1
        i = start
        while not seen[i]:
            seen[i] = True
            i = perm[i] - 1
    return cycles


def permutation_sign(perm: Sequence[int]) -> int:
    return -1 if (len(perm) - cycle_count(perm)) % 2 else 1


# -- constructors ---------------------------------------------------------------

_EMPTY_SIG = TypeSignature()


def permutation_web(k: int, perm: Sequence[int], sig: TypeSignature = _EMPTY_SIG) -> Web:
    """The k,k-web J_perm: k bare strands, root i to sink perm(i)."""
    if k < 1:
        raise ValueError("k must be positive")
    perm = check_permutation(perm, k)
    return Web(sig, (), tuple((Root(i), Sink(perm[i - 1])) for i in range(1, k + 1)), k, k)


def strand(sig: TypeSignature = _EMPTY_SIG) -> Web:
    return permutation_web(1, (1,), sig)


def loop_diagram(sig: TypeSignature = _EMPTY_SIG, count: int = 1) -> Web:
    return Web(sig, loops=count)


def vertex_web(sig: TypeSignature, t: str) -> Web:
    """Single vertex of type t; root i feeds in-slot i, out-slot j feeds sink j."""
    i, o = sig.arity(t)
    edges = [(Root(s), _in(0, s)) for s in range(1, i + 1)]
    edges += [(_out(0, s), Sink(s)) for s in range(1, o + 1)]
    return Web(sig, (("0", t),), tuple(edges), i, o)


def path_web(sig: TypeSignature, types: Sequence[str]) -> Web:
    """1,1-web root -> v0 -> v1 -> ... -> sink through (1,1)-typed vertices."""
    if not types:
        return strand(sig)
    for t in types:
        if sig.arity(t) != (1, 1):
            raise SignatureError(f"type {t!r} is not a (1,1) type")
    n = len(types)
    edges = [(Root(1), _in(0, 1))]
    edges += [(_out(i, 1), _in(i + 1, 1)) for i in range(n - 1)]
    edges.append((_out(n - 1, 1), Sink(1)))
    return Web(sig, tuple((str(i), t) for i, t in enumerate(types)), tuple(edges), 1, 1)


def cycle_diagram(sig: TypeSignature, types: Sequence[str]) -> Web:
    """Directed cycle v0 -> v1 -> ... -> v0 through (1,1)-typed vertices."""
    if not types:
        return loop_diagram(sig)
    for t in types:
        if sig.arity(t) != (1, 1):
            raise SignatureError(f"type {t!r} is not a (1,1) type")
    n = len(types)
    edges = tuple((_out(i, 1), _in((i + 1) % n, 1)) for i in range(n))
    return Web(sig, tuple((str(i), t) for i, t in enumerate(types)), edges)


# -- gluing -----------------------------------------------------------------------

@dataclass(frozen=True)
class _Junction:
    tag: str
    label: int


def _import(w: Web, ids: dict[str, str], root_as, sink_as) -> list[Edge]:
    def conv(e):
        if isinstance(e, Port):
            return Port(ids[e.vertex], e.side, e.slot)
        if isinstance(e, Root):
            return root_as(e.label)
        return sink_as(e.label)

    return [(conv(a), conv(b)) for a, b in w.edges]


def _smooth(edges: list[Edge], link: dict) -> tuple[list[Edge], int]:
    """Collapse chains through junction points.

    ``link`` maps a junction that ends an edge to the junction that starts the
    continuing edge.  Returns the compressed edge list and the number of
    closed chains that contain no real endpoint (new vertexless loops).
    """
    by_tail = {a: b for a, b in edges}
    junction_tails = set(link.values())
    out = []
    visited = set()
    for tail, head in edges:
        if tail in junction_tails:
            continue
        while head in link:
            nxt = link[head]
            visited.add(nxt)
            head = by_tail[nxt]
        out.append((tail, head))
    loops = 0
    for start in junction_tails:
        if start in visited:
            continue
        loops += 1
        t = start
        while t not in visited:
            visited.add(t)
            t = link[by_tail[t]]
    return out, loops


def _merge_sig(a: Web, b: Web) -> TypeSignature:
    try:
        return a.sig.union(b.sig)
    except SignatureError as exc:
        raise SignatureError(f"webs have incompatible signatures: {exc}") from None


def _fresh_ids(*webs: Web) -> list[dict[str, str]]:
    c = count()
    return [{v: str(next(c)) for v, _ in w.vertices} for w in webs]


def disjoint_union(g: Web, h: Web) -> Web:
    """The product G·H of two diagrams (disjoint union)."""
    if not (g.is_diagram and h.is_diagram):
        raise ProfileError(f"disjoint_union needs diagrams, got profiles {g.profile} and {h.profile}")
    sig = _merge_sig(g, h)
    gi, hi = _fresh_ids(g, h)
    verts = [(gi[v], t) for v, t in g.vertices] + [(hi[v], t) for v, t in h.vertices]
    edges = _import(g, gi, Root, Sink) + _import(h, hi, Root, Sink)
    return Web(sig, tuple(verts), tuple(edges), 0, 0, g.loops + h.loops)


def glue(w: Web, x: Web) -> Web:
    """The product W·X of a k,l-web and an l,k-web; always a diagram.

    Root i of W is joined to sink i of X and sink j of W to root j of X; the
    identified points are smoothed away.
    """
    if (w.k, w.l) != (x.l, x.k):
        raise ProfileError(f"cannot glue profile {w.profile} with {x.profile}")
    sig = _merge_sig(w, x)
    wi, xi = _fresh_ids(w, x)
    edges = _import(w, wi, lambda i: _Junction("wr", i), lambda j: _Junction("ws", j))
    edges += _import(x, xi, lambda i: _Junction("xr", i), lambda j: _Junction("xs", j))
    link = {_Junction("xs", i): _Junction("wr", i) for i in range(1, w.k + 1)}
    link.update({_Junction("ws", j): _Junction("xr", j) for j in range(1, w.l + 1)})
    edges, new_loops = _smooth(edges, link)
    verts = [(wi[v], t) for v, t in w.vertices] + [(xi[v], t) for v, t in x.vertices]
    return Web(sig, tuple(verts), tuple(edges), 0, 0, w.loops + x.loops + new_loops)


def compose(w: Web, x: Web) -> Web:
    """Stack a k,m-web W on an m,l-web X: sink j of W feeds root j of X."""
    if w.l != x.k:
        raise ProfileError(f"cannot compose profile {w.profile} with {x.profile}")
    sig = _merge_sig(w, x)
    wi, xi = _fresh_ids(w, x)
    edges = _import(w, wi, Root, lambda j: _Junction("ws", j))
    edges += _import(x, xi, lambda i: _Junction("xr", i), Sink)
    link = {_Junction("ws", j): _Junction("xr", j) for j in range(1, w.l + 1)}
    edges, new_loops = _smooth(edges, link)
    verts = [(wi[v], t) for v, t in w.vertices] + [(xi[v], t) for v, t in x.vertices]
    return Web(sig, tuple(verts), tuple(edges), w.k, x.l, w.loops + x.loops + new_loops)


def relabel_boundary(w: Web, roots: Sequence[int] | None = None, sinks: Sequence[int] | None = None) -> Web:
    """Rename root i to ``roots(i)`` and sink j to ``sinks(j)``."""
    rp = check_permutation(roots, w.k) if roots is not None else None
    sp = check_permutation(sinks, w.l) if sinks is not None else None

    def conv(e):
        if rp is not None and isinstance(e, Root):
            return Root(rp[e.label - 1])
        if sp is not None and isinstance(e, Sink):
            return Sink(sp[e.label - 1])
        return e

    edges = tuple((conv(a), conv(b)) for a, b in w.edges)
    return Web(w.sig, w.vertices, edges, w.k, w.l, w.loops)


# -- canonical forms ----------------------------------------------------------------

def _ports(w: Web, types: dict[str, str], v: str) -> list[Port]:
    i, o = w.sig.arity(types[v])
    return [_in(v, s) for s in range(1, i + 1)] + [_out(v, s) for s in range(1, o + 1)]


def _traverse(w: Web, types, partner, seeds: list[End], start: str | None):
    """Number vertices in breadth-first port order from the given seeds.

    Returns (vertex order, code).  The code determines the traversed part of
    the web up to isomorphism fixing boundary labels.
    """
    number: dict[str, int] = {}
    order: list[str] = []

    def visit(v):
        number[v] = len(order)
        order.append(v)

    def enc(e):
        if isinstance(e, Root):
            return (0, e.label, 0, 0)
        if isinstance(e, Sink):
            return (1, e.label, 0, 0)
        if e.vertex not in number:
            visit(e.vertex)
        return (2, number[e.vertex], 0 if e.side == "in" else 1, e.slot)

    if start is not None:
        visit(start)
    boundary = tuple(enc(partner[s]) for s in seeds)
    body = []
    pos = 0
    while pos < len(order):
        v = order[pos]
        pos += 1
        body.append((types[v],) + tuple(enc(partner[p]) for p in _ports(w, types, v)))
    return order, (boundary, tuple(body))


def _canonical_parts(w: Web):
    problems = validate(w.sig, w)
    if problems:
        raise ValueError("cannot canonicalize an invalid web: " + "; ".join(problems))
    types = w.vertex_types
    partner = w.partner()
    seeds = [Root(i) for i in range(1, w.k + 1)] + [Sink(j) for j in range(1, w.l + 1)]
    order, code = _traverse(w, types, partner, seeds, None)
    seen = set(order)
    closed = []
    for v, _ in w.vertices:
        if v in seen:
            continue
        comp, _ = _traverse(w, types, partner, [], v)
        seen.update(comp)
        best = None
        for s in sorted(comp):
            o, c = _traverse(w, types, partner, [], s)
            if best is None or c[1] < best[1]:
                best = (o, c[1])
        closed.append(best)
    closed.sort(key=lambda oc: oc[1])
    full_order = order + [v for o, _ in closed for v in o]
    key = (w.k, w.l, w.loops, code, tuple(c for _, c in closed))
    return full_order, key


def _end_sort_key(e):
    if isinstance(e, Root):
        return (0, e.label, 0, 0)
    if isinstance(e, Sink):
        return (1, e.label, 0, 0)
    return (2, int(e.vertex), 0 if e.side == "in" else 1, e.slot)


def canonical_form(w: Web) -> Web:
    """Isomorphic copy with vertices renamed "0".."m-1" in canonical order."""
    order, _ = _canonical_parts(w)
    ids = {v: str(i) for i, v in enumerate(order)}
    types = w.vertex_types
    verts = tuple((ids[v], types[v]) for v in order)

    def conv(e):
        return Port(ids[e.vertex], e.side, e.slot) if isinstance(e, Port) else e

    edges = sorted(((conv(a), conv(b)) for a, b in w.edges), key=lambda ab: _end_sort_key(ab[0]))
    return Web(w.sig, verts, tuple(edges), w.k, w.l, w.loops)


def canonical_key(w: Web, max_vertices: int | None = MAX_CANONICAL_VERTICES) -> bytes:
    """Byte string equal for exactly the isomorphic webs.

    Isomorphisms fix root and sink labels and preserve types and slot orders.
    Each component reachable from the boundary has a forced numbering; each
    closed component is minimized over its possible start vertices.
    """
    if max_vertices is not None and len(w.vertices) > max_vertices:
        raise CanonicalCapError(f"web has {len(w.vertices)} typed vertices, cap is {max_vertices}")
    _, key = _canonical_parts(w)
    return repr(key).encode()
