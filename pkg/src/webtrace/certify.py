"""Executable checks of the properties every trace p_R must have.

Everything here runs on a concrete representation R.  Statements that
quantify over all webs are checked on explicit finite enumerations, so
"exhausted" results are bounded evidence, not proofs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, permutations
from typing import Iterable, Sequence

from .diagram import (
    CanonicalCapError,
    MAX_CANONICAL_VERTICES,
    Port,
    ProfileError,
    Root,
    SignatureError,
    Sink,
    TypeSignature,
    Web,
    canonical_form,
    canonical_key,
    cycle_diagram,
    disjoint_union,
    glue,
)
from .linalg import exact_rank
from .quantum import MAX_DELTA_K, QuantumWeb, delta, qw_product
from .tensors import Representation, Tensor, planned_trace, quantum_trace

__all__ = [
    "enumerate_webs",
    "ConnectionMatrix",
    "connection_matrix",
    "exact_rank",
    "RankReport",
    "rank_growth_check",
    "DeltaReport",
    "check_delta_annihilation",
    "check_multiplicativity",
    "WitnessResult",
    "annihilation_witness_search",
    "character_value",
    "character_identity_sides",
    "character_identity_check",
    "DEFAULT_MAX_VERTICES",
    "DEFAULT_MAX_LOOPS",
]

DEFAULT_MAX_VERTICES = 3
DEFAULT_MAX_LOOPS = 1


def enumerate_webs(sig: TypeSignature, k: int, l: int, max_vertices: int = DEFAULT_MAX_VERTICES,
                   max_loops: int = DEFAULT_MAX_LOOPS) -> list[Web]:
    """All valid k,l-webs with bounded vertices and loops, up to isomorphism.

    Every multiset of vertex types is tried and every bijection between the
    available edge tails and heads is wired; duplicates are removed by
    canonical key.  Output is sorted by (vertices, loops, canonical key).
    """
    if max_vertices > MAX_CANONICAL_VERTICES:
        raise CanonicalCapError(f"max_vertices={max_vertices} exceeds the cap {MAX_CANONICAL_VERTICES}")
    found: dict[bytes, Web] = {}
    for m in range(max_vertices + 1):
        for types in combinations_with_replacement(sig.types, m):
            ids = [str(i) for i in range(m)]
            tails = [Root(i) for i in range(1, k + 1)]
            heads = [Sink(j) for j in range(1, l + 1)]
            for v, t in zip(ids, types):
                i, o = sig.arity(t)
                tails += [Port(v, "out", s) for s in range(1, o + 1)]
                heads += [Port(v, "in", s) for s in range(1, i + 1)]
            if len(tails) != len(heads):
                continue
            verts = tuple(zip(ids, types))
            for perm in permutations(heads):
                w = Web(sig, verts, tuple(zip(tails, perm)), k, l)
                key = canonical_key(w)
                if key not in found:
                    found[key] = canonical_form(w)
    out = []
    for w in found.values():
        for c in range(max_loops + 1):
            out.append(Web(sig, w.vertices, w.edges, k, l, c))
    out.sort(key=lambda w: (w.num_vertices, w.loops, canonical_key(w)))
    return out


@dataclass(frozen=True)
class ConnectionMatrix:
    k: int
    row_webs: tuple[Web, ...]
    col_webs: tuple[Web, ...]
    entries: tuple[tuple[Fraction, ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.row_webs), len(self.col_webs))

    def is_symmetric(self) -> bool:
        n, m = self.shape
        return n == m and all(self.entries[i][j] == self.entries[j][i] for i in range(n) for j in range(i))

    def rank(self) -> int:
        return exact_rank(self.entries)


def connection_matrix(R: Representation, k: int, webs: Sequence[Web],
                      col_webs: Sequence[Web] | None = None) -> ConnectionMatrix:
    """Matrix of p_R(W·X) over k,k-webs W (rows) and X (columns)."""
    rows = tuple(webs)
    cols = rows if col_webs is None else tuple(col_webs)
    for w in rows + cols:
        if w.profile != (k, k):
            raise ProfileError(f"connection matrix for k={k} got a web of profile {w.profile}")
    entries = tuple(tuple(planned_trace(R, glue(w, x)) for x in cols) for w in rows)
    return ConnectionMatrix(k, rows, cols, entries)


@dataclass(frozen=True)
class RankReport:
    k: int
    size: int
    rank: int
    bound: int

    @property
    def passed(self) -> bool:
        return self.rank <= self.bound


def rank_growth_check(R: Representation, k_max: int, max_vertices: int = DEFAULT_MAX_VERTICES,
                      max_loops: int = DEFAULT_MAX_LOOPS) -> list[RankReport]:
    """rank(M_{p_R,k}) against n^{2k} for k = 0..k_max on enumerated webs."""
    reports = []
    for k in range(k_max + 1):
        webs = enumerate_webs(R.sig, k, k, max_vertices, max_loops)
        M = connection_matrix(R, k, webs)
        reports.append(RankReport(k, len(webs), M.rank(), R.dim ** (2 * k)))
    return reports


@dataclass(frozen=True)
class DeltaReport:
    k: int
    hat_zero: bool
    value: Tensor


def check_delta_annihilation(R: Representation, k: int | None = None) -> DeltaReport:
    """Evaluate p̂_R(Δ_k), by default with k = dim R + 1.

    Passing a smaller k gives the negative control: Δ_n does not vanish in
    dimension n.
    """
    k = R.dim + 1 if k is None else k
    if k > MAX_DELTA_K:
        raise ValueError(f"Δ_{k} exceeds the materialization cap {MAX_DELTA_K}")
    value = quantum_trace(R, delta(k, R.sig))
    return DeltaReport(k, value.is_zero(), value)


def check_multiplicativity(R: Representation, pairs: Iterable[tuple[Web, Web]]) -> bool:
    """p_R(∅) = 1 and p_R(G·H) = p_R(G)·p_R(H) on every given pair."""
    if planned_trace(R, Web(R.sig)) != 1:
        return False
    return all(planned_trace(R, disjoint_union(g, h)) == planned_trace(R, g) * planned_trace(R, h)
               for g, h in pairs)


@dataclass(frozen=True)
class WitnessResult:
    witness: Web | None
    value: Fraction
    examined: int

    @property
    def exhausted(self) -> bool:
        return self.witness is None


def annihilation_witness_search(R: Representation, omega: QuantumWeb,
                                max_vertices: int = DEFAULT_MAX_VERTICES,
                                max_loops: int = DEFAULT_MAX_LOOPS) -> WitnessResult:
    """Find the first web W (canonical order) with p_R(ω·W) ≠ 0.

    A witness proves p_R does not annihilate ω; exhaustion only says none
    exists within the bounds.
    """
    profiles = omega.profiles()
    if not profiles:
        return WitnessResult(None, Fraction(0), 0)
    if len(profiles) > 1:
        raise ProfileError(f"quantum web mixes profiles {sorted(profiles)}")
    ((k, l),) = profiles
    examined = 0
    for w in enumerate_webs(R.sig, l, k, max_vertices, max_loops):
        examined += 1
        value = quantum_trace(R, qw_product(omega, QuantumWeb.from_web(w)))
        if value != 0:
            return WitnessResult(w, value, examined)
    return WitnessResult(None, Fraction(0), examined)


def character_value(R: Representation, word: Sequence[str]) -> Fraction:
    """φ(word): trace of the directed cycle through the word's letters."""
    missing = [t for t in word if t not in R.sig]
    if missing:
        raise SignatureError(f"missing types {missing}")
    return planned_trace(R, cycle_diagram(R.sig, list(word)))


def character_identity_sides(R: Representation, a: str, b: str, c: str) -> tuple[Fraction, Fraction]:
    phi = lambda *w: character_value(R, w)  # noqa: E731
    lhs = phi(a, b, c) + phi(c, b, a) + phi(a) * phi(b) * phi(c)
    rhs = phi(a, b) * phi(c) + phi(a, c) * phi(b) + phi(b, c) * phi(a)
    return lhs, rhs


def character_identity_check(R: Representation, a: str, b: str, c: str) -> bool:
    """The dimension-2 character identity for the triple (a, b, c)."""
    lhs, rhs = character_identity_sides(R, a, b, c)
    return lhs == rhs
