"""Example families: signatures, relation sets and concrete representations.

Relation webs whose pictures are standard (Reidemeister moves, chord
undirectedness and 4T, associativity and unit laws) are written out here in
their usual published forms with explicit numeric boundary labels.  They are
marked ``standard form, figure unverified``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Mapping, Sequence

from .diagram import (
    Port,
    Root,
    SignatureError,
    Sink,
    TypeSignature,
    Web,
    check_permutation,
    path_web,
    strand,
    validate,
    vertex_web,
)
from .linalg import as_rational, identity, matmul
from .quantum import QuantumWeb
from .tensors import Representation, Tensor, quantum_trace

__all__ = [
    "ExamplePack",
    "UNVERIFIED",
    "swap_tensor",
    "braid_web",
    "chord_web",
    "virtual_links",
    "chord_diagrams",
    "one_chord_diagram",
    "group_pack",
    "cyclic_group",
    "integer_window",
    "z_fragment_unipotent",
    "z2_diagonal",
    "algebra_pack",
    "diagonal_algebra",
    "matrix_algebra",
    "directed_graph_signature",
    "directed_graph_relations",
    "directed_graphs",
    "hopf_template",
    "degenerate_example",
    "GALLERY",
    "build",
]

UNVERIFIED = "standard form, figure unverified"


@dataclass(frozen=True)
class ExamplePack:
    """A signature, relation set Q, and optionally a representation.

    ``expect_zero[i]`` declares whether p̂_rep(relations[i]) should vanish.
    """

    name: str
    sig: TypeSignature
    relations: tuple[QuantumWeb, ...] = ()
    relation_names: tuple[str, ...] = ()
    expect_zero: tuple[bool, ...] = ()
    rep: Representation | None = None
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.relation_names) != len(self.relations):
            raise ValueError("relation_names must match relations")
        if self.rep is not None and len(self.expect_zero) != len(self.relations):
            raise ValueError("expect_zero must be declared for every relation")
        for name, q in zip(self.relation_names, self.relations):
            for _, w in q.terms():
                problems = validate(self.sig, w)
                if problems:
                    raise ValueError(f"relation {name} has an invalid web: {'; '.join(problems)}")

    def evaluate(self, rep: Representation | None = None) -> list:
        """p̂ of each relation under ``rep`` (default: the pack's own)."""
        rep = self.rep if rep is None else rep
        if rep is None:
            raise ValueError(f"pack {self.name} has no representation")
        return [quantum_trace(rep, q) for q in self.relations]

    def check(self, rep: Representation | None = None) -> list[tuple[str, bool, bool]]:
        """(name, expected zero, actually zero) per relation."""
        out = []
        for name, want, val in zip(self.relation_names, self.expect_zero, self.evaluate(rep)):
            out.append((name, want, val == 0 if isinstance(val, Fraction) else val.is_zero()))
        return out


def _qw(*pairs) -> QuantumWeb:
    return QuantumWeb(pairs)


def _o(v, s):
    return Port(str(v), "out", s)


def _i(v, s):
    return Port(str(v), "in", s)


def swap_tensor(n: int, scale=1) -> Tensor:
    """Entry (i, k) -> (j, l) equal to δ_il δ_jk."""
    return Tensor(2, 2, n, [scale * int(i == l and j == k) for i, k, j, l in product(range(n), repeat=4)])


# -- virtual links ------------------------------------------------------------------
# A crossing vertex carries the strand entering at in-slot 1 out through out-slot
# 2 and the strand entering at in-slot 2 out through out-slot 1.

def braid_web(sig: TypeSignature, strands: int, word: Sequence[tuple[str, int]]) -> Web:
    """strands,strands-web of crossings applied bottom to top.

    Each letter ``(type, i)`` crosses positions i and i+1 with a vertex of the
    given type.
    """
    tails: list = [Root(p) for p in range(1, strands + 1)]
    verts = []
    edges = []
    for idx, (t, i) in enumerate(word):
        v = str(idx)
        verts.append((v, t))
        edges.append((tails[i - 1], _i(v, 1)))
        edges.append((tails[i], _i(v, 2)))
        tails[i - 1], tails[i] = _o(v, 1), _o(v, 2)
    edges += [(tails[p - 1], Sink(p)) for p in range(1, strands + 1)]
    return Web(sig, tuple(verts), tuple(edges), strands, strands)


def _kink(sig: TypeSignature, t: str) -> Web:
    # root -> in1, through to out2, around into in2, through to out1 -> sink
    edges = ((Root(1), _i(0, 1)), (_o(0, 2), _i(0, 2)), (_o(0, 1), Sink(1)))
    return Web(sig, (("0", t),), edges, 1, 1)


def virtual_links(n: int = 2) -> ExamplePack:
    sig = TypeSignature({"pos": (2, 2), "neg": (2, 2)})
    ident2 = braid_web(sig, 2, [])
    rels = {
        "R1_pos": _qw((1, _kink(sig, "pos")), (-1, strand(sig))),
        "R1_neg": _qw((1, _kink(sig, "neg")), (-1, strand(sig))),
        "R2_pos_neg": _qw((1, braid_web(sig, 2, [("pos", 1), ("neg", 1)])), (-1, ident2)),
        "R2_neg_pos": _qw((1, braid_web(sig, 2, [("neg", 1), ("pos", 1)])), (-1, ident2)),
        "R3": _qw((1, braid_web(sig, 3, [("pos", 1), ("pos", 2), ("pos", 1)])),
                  (-1, braid_web(sig, 3, [("pos", 2), ("pos", 1), ("pos", 2)]))),
    }
    rep = Representation(sig, n, {"pos": swap_tensor(n), "neg": swap_tensor(n)})
    return ExamplePack(
        "virtual_links", sig, tuple(rels.values()), tuple(rels), (True,) * len(rels), rep,
        (f"Reidemeister moves: {UNVERIFIED}",
         "both crossings represented by the swap on V⊗V; its trace is n^(number of components)"),
    )


# -- chord diagrams -------------------------------------------------------------------
# A chord vertex joins two points of Wilson loops: strand A runs in1 -> out1,
# strand B runs in2 -> out2.

def chord_web(sig: TypeSignature, strands: int, chords: Sequence[tuple[int, int]], t: str = "chord") -> Web:
    """strands,strands-web with chords between strand positions, bottom to top."""
    tails: list = [Root(p) for p in range(1, strands + 1)]
    verts = []
    edges = []
    for idx, (a, b) in enumerate(chords):
        v = str(idx)
        verts.append((v, t))
        edges.append((tails[a - 1], _i(v, 1)))
        edges.append((tails[b - 1], _i(v, 2)))
        tails[a - 1], tails[b - 1] = _o(v, 1), _o(v, 2)
    edges += [(tails[p - 1], Sink(p)) for p in range(1, strands + 1)]
    return Web(sig, tuple(verts), tuple(edges), strands, strands)


def chord_diagrams(n: int = 2) -> ExamplePack:
    sig = TypeSignature({"chord": (2, 2)})
    c = lambda chords: chord_web(sig, 3, chords)  # noqa: E731
    rels = {
        "undirected": _qw((1, chord_web(sig, 2, [(1, 2)])), (-1, chord_web(sig, 2, [(2, 1)]))),
        # [t12, t13 + t23] = 0
        "4T": _qw((1, c([(1, 2), (1, 3)])), (1, c([(1, 2), (2, 3)])),
                  (-1, c([(1, 3), (1, 2)])), (-1, c([(2, 3), (1, 2)]))),
    }
    rep = Representation(sig, n, {"chord": swap_tensor(n)})
    return ExamplePack(
        "chord_diagrams", sig, tuple(rels.values()), tuple(rels), (True, True), rep,
        (f"undirectedness and 4T: {UNVERIFIED}",
         "chord tensor is the gl_n Casimir, entry (i,k)->(j,l) = δ_il δ_jk"),
    )


def one_chord_diagram(sig: TypeSignature | None = None) -> Web:
    """A single chord with both endpoints on one Wilson loop."""
    sig = sig or TypeSignature({"chord": (2, 2)})
    return Web(sig, (("0", "chord"),), ((_o(0, 1), _i(0, 2)), (_o(0, 2), _i(0, 1))))


# -- groups ------------------------------------------------------------------------------

def cyclic_group(m: int) -> tuple[list[str], dict[tuple[str, str], str], str]:
    elems = [str(i) for i in range(m)]
    return elems, {(a, b): str((int(a) + int(b)) % m) for a in elems for b in elems}, "0"


def integer_window(lo: int, hi: int) -> tuple[list[str], dict[tuple[str, str], str], str]:
    """Powers g^lo..g^hi of Z, with only the products that stay in the window."""
    name = lambda p: f"g{p}" if p >= 0 else f"gm{-p}"  # noqa: E731
    elems = [name(p) for p in range(lo, hi + 1)]
    mul = {(name(a), name(b)): name(a + b) for a in range(lo, hi + 1) for b in range(lo, hi + 1)
           if lo <= a + b <= hi}
    return elems, mul, name(0)


def _check_group(elems, mul, unit, partial: bool):
    es = set(elems)
    if unit not in es:
        raise ValueError(f"unit {unit!r} is not an element")
    for (a, b), c in mul.items():
        if a not in es or b not in es or c not in es:
            raise ValueError(f"product {a}*{b}={c} leaves the element set")
    if not partial:
        for a in elems:
            for b in elems:
                if (a, b) not in mul:
                    raise ValueError(f"table not closed: {a}*{b} missing")
    for a in elems:
        if mul.get((unit, a), a) != a or mul.get((a, unit), a) != a:
            raise ValueError(f"{unit!r} is not a unit for {a!r}")
    for a, b, c in product(elems, repeat=3):
        ab, bc = mul.get((a, b)), mul.get((b, c))
        if ab is None or bc is None:
            continue
        left, right = mul.get((ab, c)), mul.get((a, bc))
        if left is not None and right is not None and left != right:
            raise ValueError(f"table not associative at ({a}, {b}, {c})")
    if not partial:
        for a in elems:
            if not any(mul[(a, b)] == unit for b in elems):
                raise ValueError(f"{a!r} has no inverse")


def group_pack(elems: Sequence[str], mul: Mapping[tuple[str, str], str], unit: str,
               matrices: Mapping[str, Sequence[Sequence]], name: str = "group",
               partial: bool = False) -> ExamplePack:
    """Group signature (all types 1->1) with its relations and a matrix rep.

    ``partial=True`` allows a finite fragment of an infinite group: only the
    products present in ``mul`` generate relations.
    """
    _check_group(elems, mul, unit, partial)
    sig = TypeSignature({e: (1, 1) for e in elems})
    rep = Representation(sig, len(matrices[unit]), {e: Tensor.from_matrix(matrices[e]) for e in elems})
    rels, names, expect = [], [], []
    for (a, b), c in mul.items():
        rels.append(_qw((1, path_web(sig, [a, b])), (-1, vertex_web(sig, c))))
        names.append(f"{a}*{b}={c}")
        expect.append(_mat_eq(matmul(matrices[a], matrices[b]), matrices[c]))
    rels.append(_qw((1, vertex_web(sig, unit)), (-1, strand(sig))))
    names.append(f"{unit}=1")
    expect.append(_mat_eq(matrices[unit], identity(len(matrices[unit]))))
    return ExamplePack(name, sig, tuple(rels), tuple(names), tuple(expect), rep,
                       ("expected zero computed by direct matrix multiplication",))


def _mat_eq(a, b) -> bool:
    return all(as_rational(x) == as_rational(y) for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def z_fragment_unipotent(lo: int = -2, hi: int = 3) -> ExamplePack:
    """Z as powers of a unipotent 2x2 matrix, restricted to a window."""
    elems, mul, unit = integer_window(lo, hi)
    mats = {e: [[1, p], [0, 1]] for e, p in zip(elems, range(lo, hi + 1))}
    return group_pack(elems, mul, unit, mats, name="z_fragment_unipotent", partial=True)


def z2_diagonal() -> ExamplePack:
    elems, mul, unit = cyclic_group(2)
    return group_pack(elems, mul, unit, {"0": [[1, 0], [0, 1]], "1": [[1, 0], [0, -1]]}, name="z2_diagonal")


# -- algebras ----------------------------------------------------------------------------

ALGEBRA_SIG = TypeSignature({"mu": (2, 1), "eta": (0, 1)})


def _assoc_webs(sig):
    # (x1 x2) x3 and x1 (x2 x3)
    left = Web(sig, (("0", "mu"), ("1", "mu")),
               ((Root(1), _i(0, 1)), (Root(2), _i(0, 2)), (_o(0, 1), _i(1, 1)), (Root(3), _i(1, 2)),
                (_o(1, 1), Sink(1))), 3, 1)
    right = Web(sig, (("0", "mu"), ("1", "mu")),
                ((Root(2), _i(0, 1)), (Root(3), _i(0, 2)), (Root(1), _i(1, 1)), (_o(0, 1), _i(1, 2)),
                 (_o(1, 1), Sink(1))), 3, 1)
    return left, right


def _unit_web(sig, side: str):
    unit_slot, arg_slot = (1, 2) if side == "left" else (2, 1)
    return Web(sig, (("0", "mu"), ("1", "eta")),
               ((_o(1, 1), _i(0, unit_slot)), (Root(1), _i(0, arg_slot)), (_o(0, 1), Sink(1))), 1, 1)


def algebra_is_unital_associative(c, unit) -> tuple[bool, bool, bool]:
    """Direct loop check: (associative, left unit, right unit)."""
    n = len(unit)
    c = [[[as_rational(c[i][j][k]) for k in range(n)] for j in range(n)] for i in range(n)]
    u = [as_rational(x) for x in unit]
    assoc = all(sum(c[i][j][m] * c[m][k][l] for m in range(n)) == sum(c[j][k][m] * c[i][m][l] for m in range(n))
                for i, j, k, l in product(range(n), repeat=4))
    left = all(sum(u[e] * c[e][j][k] for e in range(n)) == int(j == k) for j, k in product(range(n), repeat=2))
    right = all(sum(u[e] * c[j][e][k] for e in range(n)) == int(j == k) for j, k in product(range(n), repeat=2))
    return assoc, left, right


def algebra_pack(constants: Sequence[Sequence[Sequence]], unit: Sequence, name: str = "algebra") -> ExamplePack:
    """Algebra template with structure constants c[i][j][k] (e_i e_j = Σ c e_k)."""
    n = len(unit)
    sig = ALGEBRA_SIG
    mu = Tensor(2, 1, n, [constants[i][j][k] for i, j, k in product(range(n), repeat=3)])
    eta = Tensor(0, 1, n, list(unit))
    rep = Representation(sig, n, {"mu": mu, "eta": eta})
    left, right = _assoc_webs(sig)
    rels = (
        _qw((1, left), (-1, right)),
        _qw((1, _unit_web(sig, "left")), (-1, strand(sig))),
        _qw((1, _unit_web(sig, "right")), (-1, strand(sig))),
    )
    return ExamplePack(name, sig, rels, ("associativity", "left_unit", "right_unit"),
                       algebra_is_unital_associative(constants, unit), rep,
                       (f"associativity and unit laws: {UNVERIFIED}",))


def diagonal_algebra(n: int = 2) -> ExamplePack:
    c = [[[int(i == j == k) for k in range(n)] for j in range(n)] for i in range(n)]
    return algebra_pack(c, [1] * n, name="diagonal_algebra")


def matrix_algebra(m: int = 2) -> ExamplePack:
    """m x m matrices; basis E_ab indexed a*m + b."""
    n = m * m
    c = [[[0] * n for _ in range(n)] for _ in range(n)]
    for a, b, d in product(range(m), repeat=3):
        c[a * m + b][b * m + d][a * m + d] = 1
    unit = [int(i // m == i % m) for i in range(n)]
    return algebra_pack(c, unit, name="matrix_algebra")


# -- directed graphs ------------------------------------------------------------------------

def _dg_name(k: int, l: int) -> str:
    return f"d{k}_{l}"


def directed_graph_signature(degrees: Sequence[tuple[int, int]]) -> TypeSignature:
    return TypeSignature({_dg_name(k, l): (k, l) for k, l in degrees})


def directed_graph_relations(k: int, l: int, pi: Sequence[int], sigma: Sequence[int],
                             sig: TypeSignature | None = None) -> QuantumWeb:
    """(vertex with entering edges permuted by pi, leaving by sigma) - (vertex)."""
    sig = directed_graph_signature([(k, l)]) if sig is None else sig
    t = _dg_name(k, l)
    if t not in sig or sig.arity(t) != (k, l):
        raise SignatureError(f"signature has no type ({k},{l})")
    pi = check_permutation(pi, k)
    sigma = check_permutation(sigma, l)
    plain = vertex_web(sig, t)
    edges = [(Root(i), _i(0, pi[i - 1])) for i in range(1, k + 1)]
    edges += [(_o(0, sigma[j - 1]), Sink(j)) for j in range(1, l + 1)]
    permuted = Web(sig, (("0", t),), tuple(edges), k, l)
    return _qw((1, permuted), (-1, plain))


def directed_graphs(n: int = 2, degrees: Sequence[tuple[int, int]] = ((2, 0), (1, 2), (2, 1))) -> ExamplePack:
    """Directed-graph signature with symmetric (permutation-invariant) tensors."""
    from itertools import permutations

    sig = directed_graph_signature(degrees)
    tensors = {}
    for k, l in degrees:
        # entry depends only on the multisets of in- and out-indices
        vals = [1 + sum(idx[:k]) ** 2 + 2 * sum(idx[k:]) for idx in product(range(n), repeat=k + l)]
        tensors[_dg_name(k, l)] = Tensor(k, l, n, vals)
    rep = Representation(sig, n, tensors)
    rels, names = [], []
    for k, l in degrees:
        for pi in permutations(range(1, k + 1)):
            for sg in permutations(range(1, l + 1)):
                q = directed_graph_relations(k, l, pi, sg, sig)
                if not q.is_zero():
                    rels.append(q)
                    names.append(f"{_dg_name(k, l)}:{''.join(map(str, pi))}/{''.join(map(str, sg))}")
    return ExamplePack("directed_graphs", sig, tuple(rels), tuple(names), (True,) * len(rels), rep,
                       ("symmetric tensors: entries depend on index sums only",))


# -- Hopf template and the degenerate example -----------------------------------------------

def hopf_template() -> ExamplePack:
    """Signature only: μ 2->1, η 0->1, Δ 1->2, ε 1->0, S 1->1."""
    sig = TypeSignature({"mu": (2, 1), "eta": (0, 1), "comul": (1, 2), "counit": (1, 0), "antipode": (1, 1)})
    return ExamplePack("hopf_template", sig, notes=("relation set not shipped",))


def degenerate_example() -> ExamplePack:
    sig = TypeSignature({"a": (1, 1)})
    rep = Representation(sig, 2, {"a": Tensor.from_matrix([[1, 1], [0, 1]])})
    q = _qw((1, vertex_web(sig, "a")), (-1, strand(sig)))
    return ExamplePack("degenerate", sig, (q,), ("a=1",), (False,), rep,
                       ("p̂(a - strand) = [[0,1],[0,0]] is nonzero",
                        "yet p(q·W) = tr(R^(m+1)) - tr(R^m) = 0 for every web W"))


GALLERY: dict[str, Callable[[], ExamplePack]] = {
    "virtual_links": virtual_links,
    "chord_diagrams": chord_diagrams,
    "z_fragment_unipotent": z_fragment_unipotent,
    "z2_diagonal": z2_diagonal,
    "diagonal_algebra": diagonal_algebra,
    "matrix_algebra": matrix_algebra,
    "directed_graphs": directed_graphs,
    "hopf_template": hopf_template,
    "degenerate": degenerate_example,
}


def build(name: str) -> ExamplePack:
    try:
        return GALLERY[name]()
    except KeyError:
        raise KeyError(f"unknown gallery pack {name!r}; choose from {sorted(GALLERY)}") from None
