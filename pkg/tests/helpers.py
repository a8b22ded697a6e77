"""Random generators shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations_with_replacement

from webtrace.diagram import Port, Root, Sink, TypeSignature, Web
from webtrace.quantum import QuantumWeb
from webtrace.tensors import Representation, Tensor


def balanced_multisets(sig: TypeSignature, k: int, l: int, max_vertices: int) -> list[tuple[str, ...]]:
    """Vertex type multisets whose edge tails and heads can be matched."""
    out = []
    for m in range(max_vertices + 1):
        for types in combinations_with_replacement(sig.types, m):
            tails = k + sum(sig.arity(t)[1] for t in types)
            heads = l + sum(sig.arity(t)[0] for t in types)
            if tails == heads:
                out.append(types)
    return out


def random_web(sig: TypeSignature, k: int, l: int, rng: random.Random, max_vertices: int = 3,
               max_loops: int = 1) -> Web:
    """A uniformly wired valid k,l-web on a random balanced vertex multiset."""
    options = balanced_multisets(sig, k, l, max_vertices)
    if not options:
        raise ValueError(f"no vertex multiset of size <= {max_vertices} balances profile {(k, l)}")
    chosen = list(rng.choice(options))
    rng.shuffle(chosen)
    ids = [f"v{i}" for i in range(len(chosen))]
    tails = [Root(i) for i in range(1, k + 1)]
    heads = [Sink(j) for j in range(1, l + 1)]
    for v, t in zip(ids, chosen):
        i, o = sig.arity(t)
        tails += [Port(v, "out", s) for s in range(1, o + 1)]
        heads += [Port(v, "in", s) for s in range(1, i + 1)]
    rng.shuffle(heads)
    return Web(sig, tuple(zip(ids, chosen)), tuple(zip(tails, heads)), k, l, rng.randint(0, max_loops))


def random_fraction(rng: random.Random, max_num: int = 5, max_den: int = 4) -> Fraction:
    return Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den))


def random_tensor(k: int, l: int, n: int, rng: random.Random) -> Tensor:
    return Tensor(k, l, n, [random_fraction(rng) for _ in range(n ** (k + l))])


def random_signature(rng: random.Random, max_types: int = 3, max_arity: int = 2) -> TypeSignature:
    names = rng.sample(["a", "b", "c", "mu", "x_1", "t2"], rng.randint(1, max_types))
    return TypeSignature({t: (rng.randint(0, max_arity), rng.randint(0, max_arity)) for t in names})


def random_quantum_web(sig: TypeSignature, k: int, l: int, rng: random.Random, terms: int = 3) -> QuantumWeb:
    return QuantumWeb([(random_fraction(rng), random_web(sig, k, l, rng)) for _ in range(terms)], sig=sig)


def random_rep(sig: TypeSignature, n: int, rng: random.Random) -> Representation:
    return Representation(sig, n, {t: random_tensor(*sig.arity(t), n, rng) for t in sig.types})
