import random
import sys
from fractions import Fraction
from itertools import permutations
from math import factorial
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from helpers import random_quantum_web, random_web  # noqa: E402
from webtrace.diagram import (  # noqa: E402
    SignatureError,
    TypeSignature,
    canonical_key,
    cycle_diagram,
    loop_diagram,
    permutation_sign,
    permutation_web,
    relabel_boundary,
    strand,
)
from webtrace.quantum import MAX_DELTA_K, QuantumWeb, delta, iter_delta, linear_combine, qw_product  # noqa: E402

A = TypeSignature({"a": (1, 1)})
MIXED = TypeSignature({"a": (1, 1), "b": (2, 1), "c": (1, 2)})


def test_cancellation():
    w = cycle_diagram(A, ["a", "a"])
    renamed = cycle_diagram(A, ["a", "a"])
    assert linear_combine([(1, w), (-1, renamed)]).is_zero()


def test_merging():
    w = cycle_diagram(A, ["a"])
    q = linear_combine([(Fraction(1, 2), w), (Fraction(1, 2), w)])
    assert q.terms() == [(1, q.terms()[0][1])] and canonical_key(q.terms()[0][1]) == canonical_key(w)


def test_single_term():
    q = linear_combine([(3, loop_diagram(A))])
    assert len(q.terms()) == 1 and q.coefficient(loop_diagram(A)) == 3


def test_mixed_signatures_rejected():
    with pytest.raises(SignatureError):
        linear_combine([(1, strand(A)), (1, strand(TypeSignature({"a": (2, 2)})))])


def test_delta_two_times_identity():
    sig = TypeSignature()
    prod = qw_product(delta(2), QuantumWeb.from_web(permutation_web(2, (1, 2))))
    assert prod == linear_combine([(1, loop_diagram(sig, 2)), (-1, loop_diagram(sig, 1))])


def test_mismatched_profiles_give_zero():
    omega = QuantumWeb.from_web(strand(A))
    xi = QuantumWeb.from_web(permutation_web(2, (1, 2), A))
    assert qw_product(omega, xi).is_zero()


def test_zero_product():
    assert qw_product(QuantumWeb.zero(A), QuantumWeb.from_web(strand(A))).is_zero()


def test_mixed_profile_data_allowed():
    q = QuantumWeb.from_web(strand(A)) + QuantumWeb.from_web(permutation_web(2, (2, 1), A))
    assert q.profiles() == {(1, 1), (2, 2)}
    prod = qw_product(q, QuantumWeb.from_web(permutation_web(2, (2, 1), A)))
    assert prod == linear_combine([(1, loop_diagram(A, 2))])


def test_delta_small():
    (term,) = delta(1).terms()
    assert term[0] == 1 and canonical_key(term[1]) == canonical_key(permutation_web(1, (1,)))
    assert delta(2) == linear_combine([(1, permutation_web(2, (1, 2))), (-1, permutation_web(2, (2, 1)))])
    d3 = delta(3)
    assert len(d3.terms()) == 6 and sum(c for c, _ in d3.terms()) == 0


@pytest.mark.parametrize("k", range(1, 7))
def test_delta_sizes(k):
    d = delta(k)
    assert len(d.terms()) == factorial(k)
    assert {c for c, _ in d.terms()} <= {1, -1}
    assert len({canonical_key(w) for _, w in d.terms()}) == factorial(k)
    assert len(list(iter_delta(k))) == factorial(k)


def test_delta_cap():
    with pytest.raises(ValueError):
        delta(MAX_DELTA_K + 1)
    # the iterator streams past the cap
    it = iter_delta(MAX_DELTA_K + 1)
    sign, w = next(it)
    assert sign == 1 and w.k == MAX_DELTA_K + 1


def test_iter_delta_signs():
    for sign, w in iter_delta(4):
        image = tuple(h.label for _, h in sorted(w.edges, key=lambda e: e[0].label))
        assert sign == permutation_sign(image)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_delta_alternating(k):
    d = delta(k)
    for sigma in permutations(range(1, k + 1)):
        moved = linear_combine([(c, relabel_boundary(w, roots=sigma)) for c, w in d.terms()])
        assert moved == d.scale(permutation_sign(sigma))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_product_bilinear(seed):
    rng = random.Random(seed)
    k, l = rng.choice([(1, 1), (2, 1), (1, 2), (0, 1)])
    w1 = random_quantum_web(MIXED, k, l, rng)
    w2 = random_quantum_web(MIXED, k, l, rng)
    x = random_quantum_web(MIXED, l, k, rng)
    a, b = Fraction(rng.randint(-3, 3), rng.randint(1, 3)), Fraction(rng.randint(-3, 3), rng.randint(1, 3))
    assert qw_product(w1.scale(a) + w2.scale(b), x) == qw_product(w1, x).scale(a) + qw_product(w2, x).scale(b)
    assert qw_product(x, w1.scale(a) + w2.scale(b)) == qw_product(x, w1).scale(a) + qw_product(x, w2).scale(b)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_vector_space_laws(seed):
    rng = random.Random(seed)
    p, q = random_quantum_web(MIXED, 1, 1, rng), random_quantum_web(MIXED, 1, 1, rng)
    assert p + q == q + p
    assert (p - p).is_zero() and (p + (-p)).is_zero()
    assert 2 * p == p + p and p.scale(0).is_zero()
    assert hash(p + q) == hash(q + p)


def test_product_is_commutative_up_to_key():
    rng = random.Random(3)
    for _ in range(20):
        w = random_quantum_web(MIXED, 1, 2, rng)
        x = random_quantum_web(MIXED, 2, 1, rng)
        assert qw_product(w, x) == qw_product(x, w)


def test_terms_store_canonical_representatives():
    rng = random.Random(8)
    w = random_web(MIXED, 1, 1, rng)
    (_, rep), = QuantumWeb.from_web(w).terms()
    assert [v for v, _ in rep.vertices] == [str(i) for i in range(w.num_vertices)]
