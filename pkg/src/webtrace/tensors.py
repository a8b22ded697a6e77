"""Exact tensors, tensor representations, and traces of webs.

A tensor of profile (k, l) over dimension n is a dense object array of shape
``(n,) * (k + l)`` whose axes are the k in-indices (dual factors) followed by
the l out-indices.  Entries are Python ints or Fractions, never floats.
"""

from __future__ import annotations

import os
import random
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

import numpy as np

from .diagram import Port, ProfileError, Root, Sink, TypeSignature, Web, validate
from .linalg import SingularMatrixError, as_rational, inverse
from .planner import BudgetExceeded, _einsum, execute_plan
from .quantum import QuantumWeb

__all__ = [
    "Tensor",
    "Representation",
    "BudgetExceeded",
    "DEFAULT_BUDGET",
    "BUDGET_ENV",
    "resolve_budget",
    "naive_trace",
    "naive_extended_trace",
    "extended_trace",
    "planned_trace",
    "quantum_trace",
    "pairing",
    "gl_action",
    "random_representation",
    "random_invertible",
]

DEFAULT_BUDGET = 10 ** 7
BUDGET_ENV = "WEBTRACE_BUDGET"


def resolve_budget(budget: int | None = None) -> int:
    """Explicit argument, else the environment override, else the default."""
    if budget is not None:
        return int(budget)
    env = os.environ.get(BUDGET_ENV)
    return int(env) if env else DEFAULT_BUDGET


def _exact(x):
    # ints stay ints (faster); everything else becomes a Fraction
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    f = as_rational(x)
    return f.numerator if f.denominator == 1 else f


class Tensor:
    """Element of V*^{⊗k} ⊗ V^{⊗l} as an exact coordinate array."""

    __slots__ = ("in_rank", "out_rank", "dim", "data")

    def __init__(self, in_rank: int, out_rank: int, dim: int, entries):
        shape = (dim,) * (in_rank + out_rank)
        arr = np.empty(int(np.prod(shape, dtype=object)), dtype=object)
        flat = np.asarray(entries, dtype=object).reshape(-1)
        if flat.size != arr.size:
            raise ValueError(f"expected {arr.size} entries for dim={dim} in={in_rank} out={out_rank}, got {flat.size}")
        for i, x in enumerate(flat):
            arr[i] = _exact(x)
        self._set(in_rank, out_rank, dim, arr.reshape(shape))

    def _set(self, k, l, n, arr):
        arr.flags.writeable = False
        object.__setattr__(self, "in_rank", k)
        object.__setattr__(self, "out_rank", l)
        object.__setattr__(self, "dim", n)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Tensor is immutable")

    @classmethod
    def _wrap(cls, k: int, l: int, n: int, arr: np.ndarray) -> "Tensor":
        t = object.__new__(cls)
        arr = np.asarray(arr, dtype=object).reshape((n,) * (k + l))
        t._set(k, l, n, arr.copy() if arr.flags.writeable is False else arr)
        return t

    @classmethod
    def zeros(cls, k: int, l: int, n: int) -> "Tensor":
        return cls._wrap(k, l, n, np.zeros((n,) * (k + l), dtype=object))

    @classmethod
    def identity(cls, n: int) -> "Tensor":
        return cls(1, 1, n, [int(i == j) for i in range(n) for j in range(n)])

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence]) -> "Tensor":
        """A (1,1) tensor; row index is the in-index, column the out-index."""
        n = len(rows)
        return cls(1, 1, n, [x for row in rows for x in row])

    @property
    def profile(self) -> tuple[int, int]:
        return (self.in_rank, self.out_rank)

    @property
    def rank(self) -> int:
        return self.in_rank + self.out_rank

    def entries(self) -> list[Fraction]:
        """Row-major entries over (in-indices, out-indices)."""
        return [Fraction(x) for x in self.data.reshape(-1)]

    def __getitem__(self, index):
        return Fraction(self.data[index])

    def scalar(self) -> Fraction:
        if self.rank:
            raise ProfileError("only rank-0 tensors have a scalar value")
        return Fraction(self.data[()])

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.data.reshape(-1))

    def _check_same(self, other: "Tensor"):
        if (self.profile, self.dim) != (other.profile, other.dim):
            raise ProfileError(f"tensor shapes differ: {self.profile}/{self.dim} vs {other.profile}/{other.dim}")

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check_same(other)
        return Tensor._wrap(self.in_rank, self.out_rank, self.dim, self.data + other.data)

    def __sub__(self, other: "Tensor") -> "Tensor":
        self._check_same(other)
        return Tensor._wrap(self.in_rank, self.out_rank, self.dim, self.data - other.data)

    def scale(self, a) -> "Tensor":
        a = _exact(a)
        return Tensor._wrap(self.in_rank, self.out_rank, self.dim, self.data * a)

    def __rmul__(self, a) -> "Tensor":
        return self.scale(a)

    def __neg__(self) -> "Tensor":
        return self.scale(-1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return (self.profile, self.dim) == (other.profile, other.dim) and bool(np.all(self.data == other.data))

    def __hash__(self) -> int:
        return hash((self.profile, self.dim, tuple(self.entries())))

    def __repr__(self) -> str:
        body = " ".join(str(x) for x in self.entries()[:16])
        more = " ..." if self.data.size > 16 else ""
        return f"Tensor(dim={self.dim}, in={self.in_rank}, out={self.out_rank}: {body}{more})"


class Representation:
    """Assignment of a (ι(t), o(t)) tensor over a common dimension to each type."""

    __slots__ = ("sig", "dim", "_tensors")

    def __init__(self, sig: TypeSignature, dim: int, tensors: Mapping[str, Tensor | Sequence]):
        if dim < 0:
            raise ValueError("dimension must be nonnegative")
        built = {}
        for t, i, o in sig.items():
            if t not in tensors:
                raise ValueError(f"no tensor for type {t!r}")
            x = tensors[t]
            if not isinstance(x, Tensor):
                x = Tensor(i, o, dim, x)
            if x.profile != (i, o) or x.dim != dim:
                raise ValueError(f"tensor for {t!r} has profile {x.profile}/dim {x.dim}, "
                                 f"expected ({i}, {o})/dim {dim}")
            built[t] = x
        extra = set(tensors) - set(built)
        if extra:
            raise ValueError(f"tensors given for unknown types {sorted(extra)}")
        self.sig = sig
        self.dim = dim
        self._tensors = built

    @classmethod
    def from_matrices(cls, matrices: Mapping[str, Sequence[Sequence]]) -> "Representation":
        """Representation of a signature of (1,1) types from square matrices."""
        sig = TypeSignature({t: (1, 1) for t in matrices})
        tensors = {t: Tensor.from_matrix(m) for t, m in matrices.items()}
        dims = {x.dim for x in tensors.values()}
        if len(dims) > 1:
            raise ValueError("matrices have different sizes")
        return cls(sig, dims.pop() if dims else 0, tensors)

    def __getitem__(self, t: str) -> Tensor:
        return self._tensors[t]

    def tensors(self) -> dict[str, Tensor]:
        return dict(self._tensors)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Representation):
            return NotImplemented
        return self.sig == other.sig and self.dim == other.dim and self._tensors == other._tensors

    def __repr__(self) -> str:
        return f"Representation(dim={self.dim}, types={list(self.sig.types)})"


def _check_web(R: Representation, w: Web):
    problems = validate(R.sig, w)
    if problems:
        raise ValueError("web is not valid for this representation: " + "; ".join(problems))


def _colorings(R: Representation, w: Web, budget: int | None):
    """Yield (coloring, weight) for every coloring of the edges of w."""
    n = R.dim
    E = len(w.edges)
    limit = resolve_budget(budget)
    if n ** E > limit:
        raise BudgetExceeded(f"{n}^{E} colorings exceed the budget {limit}")
    slot = {}
    for idx, (tail, head) in enumerate(w.edges):
        slot[tail] = idx
        slot[head] = idx
    factors = []
    for v, t in w.vertices:
        i, o = R.sig.arity(t)
        idxs = [slot[Port(v, "in", s)] for s in range(1, i + 1)] + [slot[Port(v, "out", s)] for s in range(1, o + 1)]
        factors.append((R[t].data, idxs))
    for phi in product(range(n), repeat=E):
        weight = 1
        for arr, idxs in factors:
            weight *= arr[tuple(phi[e] for e in idxs)]
            if weight == 0:
                break
        yield phi, weight


def naive_trace(R: Representation, g: Web, budget: int | None = None) -> Fraction:
    """Trace of a diagram by direct summation over all edge colorings."""
    if not g.is_diagram:
        raise ProfileError(f"naive_trace needs a diagram, got profile {g.profile}")
    _check_web(R, g)
    total = sum((wt for _, wt in _colorings(R, g, budget)), 0)
    return Fraction(total * R.dim ** g.loops)


def naive_extended_trace(R: Representation, w: Web, budget: int | None = None) -> Tensor:
    """Boundary tensor of a web by direct summation over colorings."""
    _check_web(R, w)
    n = R.dim
    root_edge = {}
    sink_edge = {}
    for idx, (tail, head) in enumerate(w.edges):
        if isinstance(tail, Root):
            root_edge[tail.label] = idx
        if isinstance(head, Sink):
            sink_edge[head.label] = idx
    boundary = [root_edge[i] for i in range(1, w.k + 1)] + [sink_edge[j] for j in range(1, w.l + 1)]
    out = np.zeros((n,) * (w.k + w.l), dtype=object)
    for phi, wt in _colorings(R, w, budget):
        if wt:
            out[tuple(phi[e] for e in boundary)] += wt
    return Tensor._wrap(w.k, w.l, n, out * n ** w.loops)


def extended_trace(R: Representation, w: Web, budget: int | None = None) -> Tensor:
    """p̂_R(w): contract interior edges, keeping root/sink indices open."""
    _check_web(R, w)
    arrays = [R[t].data for _, t in w.vertices]
    arr = execute_plan(w, arrays, R.dim, resolve_budget(budget))
    return Tensor._wrap(w.k, w.l, R.dim, arr)


def planned_trace(R: Representation, g: Web, budget: int | None = None) -> Fraction:
    """Trace of a diagram through the greedy pairwise contraction plan."""
    if not g.is_diagram:
        raise ProfileError(f"planned_trace needs a diagram, got profile {g.profile}")
    return extended_trace(R, g, budget).scalar()


def quantum_trace(R: Representation, omega: QuantumWeb, profile: tuple[int, int] | None = None,
                  budget: int | None = None):
    """Linear extension of the extended trace.

    Returns a Fraction for profile (0, 0) and a Tensor otherwise.  The zero
    quantum web is treated as profile (0, 0) unless ``profile`` is given.
    """
    profiles = omega.profiles()
    if len(profiles) > 1:
        raise ProfileError(f"quantum web mixes profiles {sorted(profiles)}")
    if profiles:
        (p,) = profiles
        if profile is not None and tuple(profile) != p:
            raise ProfileError(f"quantum web has profile {p}, not {tuple(profile)}")
        profile = p
    elif profile is None:
        profile = (0, 0)
    k, l = profile
    acc = np.zeros((R.dim,) * (k + l), dtype=object)
    for c, w in omega.terms():
        acc = acc + extended_trace(R, w, budget).data * _exact(c)
    result = Tensor._wrap(k, l, R.dim, acc)
    return result.scalar() if (k, l) == (0, 0) else result


def pairing(t: Tensor, u: Tensor) -> Fraction:
    """Standard bilinear form between profiles (k, l) and (l, k)."""
    if t.dim != u.dim or t.in_rank != u.out_rank or t.out_rank != u.in_rank:
        raise ProfileError(f"cannot pair {t.profile}/dim {t.dim} with {u.profile}/dim {u.dim}")
    k, l = t.profile
    a = [("a", i) for i in range(k)]
    b = [("b", j) for j in range(l)]
    return Fraction(_einsum([(t.data, a + b), (u.data, b + a)], []))


def _matrix(g, n: int) -> np.ndarray:
    arr = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            arr[i, j] = _exact(g[i][j])
    return arr


def gl_action(g: Sequence[Sequence], R: Representation, g_inv: Sequence[Sequence] | None = None) -> Representation:
    """Change of basis: out-indices transform by g, in-indices by g⁻¹ᵀ.

    With this convention every trace is invariant and
    ``gl_action(g, gl_action(h, R)) == gl_action(g @ h, R)``.
    """
    n = R.dim
    if len(g) != n or any(len(row) != n for row in g):
        raise ValueError(f"matrix must be {n}x{n}")
    if g_inv is None:
        try:
            g_inv = inverse(g)
        except SingularMatrixError:
            raise SingularMatrixError("gl_action needs an invertible matrix") from None
    G = _matrix(g, n)
    Gi = _matrix(g_inv, n)
    if n and not np.all(np.dot(G, Gi) == np.array([[int(i == j) for j in range(n)] for i in range(n)], dtype=object)):
        raise ValueError("supplied inverse is not the inverse of g")
    out = {}
    for t, x in R.tensors().items():
        arr = x.data
        for ax in range(x.rank):
            if ax < x.in_rank:
                arr = np.moveaxis(np.tensordot(Gi, arr, axes=([0], [ax])), 0, ax)
            else:
                arr = np.moveaxis(np.tensordot(G, arr, axes=([1], [ax])), 0, ax)
        out[t] = Tensor._wrap(x.in_rank, x.out_rank, n, arr)
    return Representation(R.sig, n, out)


def _random_rational(rng: random.Random, max_num: int, max_den: int) -> Fraction:
    return Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den))


def random_representation(sig: TypeSignature, dim: int, rng: random.Random | int | None = None,
                          max_num: int = 3, max_den: int = 3) -> Representation:
    """Representation with independent random small rationals as entries."""
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    tensors = {}
    for t, i, o in sig.items():
        size = dim ** (i + o)
        tensors[t] = Tensor(i, o, dim, [_random_rational(rng, max_num, max_den) for _ in range(size)])
    return Representation(sig, dim, tensors)


def random_invertible(dim: int, rng: random.Random | int | None = None, max_num: int = 3,
                      max_den: int = 2) -> list[list[Fraction]]:
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    while True:
        g = [[_random_rational(rng, max_num, max_den) for _ in range(dim)] for _ in range(dim)]
        try:
            inverse(g)
        except SingularMatrixError:
            continue
        return g

