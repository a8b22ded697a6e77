"""Quantum webs: finite formal rational combinations of webs."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Iterable, Iterator

from .diagram import (
    SignatureError,
    TypeSignature,
    Web,
    canonical_form,
    canonical_key,
    glue,
    permutation_sign,
    permutation_web,
)
from .linalg import as_rational

__all__ = ["QuantumWeb", "linear_combine", "qw_product", "delta", "iter_delta", "MAX_DELTA_K"]

MAX_DELTA_K = 8


class QuantumWeb:
    """An immutable formal linear combination of webs.

    Terms are keyed by canonical key, so isomorphic webs always merge, and
    zero coefficients are dropped on construction.  Webs of several profiles
    may be mixed.
    """

    __slots__ = ("_terms", "_sig")

    def __init__(self, pairs: Iterable[tuple[object, Web]] = (), sig: TypeSignature | None = None):
        terms: dict[bytes, list] = {}
        for coeff, web in pairs:
            c = as_rational(coeff)
            sig = web.sig if sig is None else _join_sigs(sig, web.sig)
            key = canonical_key(web)
            if key in terms:
                terms[key][1] += c
            else:
                terms[key] = [canonical_form(web), c]
        self._terms = {k: (w, c) for k, (w, c) in sorted(terms.items()) if c != 0}
        self._sig = sig

    @classmethod
    def from_web(cls, web: Web, coeff=1) -> "QuantumWeb":
        return cls([(coeff, web)])

    @classmethod
    def zero(cls, sig: TypeSignature | None = None) -> "QuantumWeb":
        return cls((), sig)

    @property
    def sig(self) -> TypeSignature | None:
        return self._sig

    def terms(self) -> list[tuple[Fraction, Web]]:
        """Coefficient/web pairs in canonical key order."""
        return [(c, w) for w, c in self._terms.values()]

    def coefficient(self, web: Web) -> Fraction:
        entry = self._terms.get(canonical_key(web))
        return entry[1] if entry else Fraction(0)

    def profiles(self) -> set[tuple[int, int]]:
        return {w.profile for w, _ in self._terms.values()}

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[Fraction, Web]]:
        return iter(self.terms())

    def __add__(self, other: "QuantumWeb") -> "QuantumWeb":
        if not isinstance(other, QuantumWeb):
            return NotImplemented
        return QuantumWeb(self.terms() + other.terms(), _join_sigs(self._sig, other._sig))

    def __neg__(self) -> "QuantumWeb":
        return self.scale(-1)

    def __sub__(self, other: "QuantumWeb") -> "QuantumWeb":
        if not isinstance(other, QuantumWeb):
            return NotImplemented
        return self + (-other)

    def scale(self, a) -> "QuantumWeb":
        a = as_rational(a)
        return QuantumWeb([(a * c, w) for c, w in self.terms()], self._sig)

    def __rmul__(self, a) -> "QuantumWeb":
        return self.scale(a)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuantumWeb):
            return NotImplemented
        return {k: c for k, (_, c) in self._terms.items()} == {k: c for k, (_, c) in other._terms.items()}

    def __hash__(self) -> int:
        return hash(tuple((k, c) for k, (_, c) in self._terms.items()))

    def __repr__(self) -> str:
        parts = [f"{c}*<{w.k},{w.l}-web |V|={w.num_vertices} loops={w.loops}>" for c, w in self.terms()]
        return "QuantumWeb(" + (" + ".join(parts) if parts else "0") + ")"


def _join_sigs(a: TypeSignature | None, b: TypeSignature | None) -> TypeSignature | None:
    if a is None:
        return b
    if b is None:
        return a
    try:
        return a.union(b)
    except SignatureError as exc:
        raise SignatureError(f"mixed signatures in quantum web: {exc}") from None


def linear_combine(pairs: Iterable[tuple[object, Web]]) -> QuantumWeb:
    return QuantumWeb(pairs)


def qw_product(omega: QuantumWeb, xi: QuantumWeb) -> QuantumWeb:
    """Bilinear extension of :func:`glue`; mismatched profiles contribute 0."""
    sig = _join_sigs(omega.sig, xi.sig)
    out = []
    for a, w in omega.terms():
        for b, x in xi.terms():
            if (w.k, w.l) == (x.l, x.k):
                out.append((a * b, glue(w, x)))
    return QuantumWeb(out, sig)


def iter_delta(k: int, sig: TypeSignature | None = None) -> Iterator[tuple[int, Web]]:
    """Yield ``(sgn(pi), J_pi)`` for every permutation of [k]."""
    if k < 1:
        raise ValueError("k must be positive")
    kwargs = {} if sig is None else {"sig": sig}
    for perm in permutations(range(1, k + 1)):
        yield permutation_sign(perm), permutation_web(k, perm, **kwargs)


def delta(k: int, sig: TypeSignature | None = None) -> QuantumWeb:
    """The antisymmetrizer: the signed sum of all permutation webs of [k]."""
    if k > MAX_DELTA_K:
        raise ValueError(f"delta({k}) exceeds the materialization cap {MAX_DELTA_K}; use iter_delta")
    return QuantumWeb(iter_delta(k, sig), sig)
