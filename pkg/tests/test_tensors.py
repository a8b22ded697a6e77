import random
import sys
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from helpers import random_web  # noqa: E402
from webtrace.diagram import (  # noqa: E402
    Port,
    ProfileError,
    TypeSignature,
    Web,
    cycle_diagram,
    disjoint_union,
    glue,
    loop_diagram,
    path_web,
    permutation_web,
    strand,
    vertex_web,
)
from webtrace.linalg import SingularMatrixError, identity, inverse, matmul  # noqa: E402
from webtrace.planner import BudgetExceeded, plan_contraction  # noqa: E402
from webtrace.quantum import QuantumWeb, delta  # noqa: E402
from webtrace.tensors import (  # noqa: E402
    BUDGET_ENV,
    DEFAULT_BUDGET,
    Representation,
    Tensor,
    extended_trace,
    gl_action,
    naive_extended_trace,
    naive_trace,
    pairing,
    planned_trace,
    quantum_trace,
    random_invertible,
    random_representation,
    resolve_budget,
)

A = TypeSignature({"a": (1, 1)})
MIXED = TypeSignature({"a": (1, 1), "b": (2, 1), "c": (1, 2), "u": (0, 1), "e": (1, 0)})
UNIPOTENT = Representation(A, 2, {"a": Tensor.from_matrix([[1, 1], [0, 1]])})


# -- tensors -------------------------------------------------------------------------

def test_tensor_layout_and_immutability():
    t = Tensor(1, 1, 2, [1, 2, 3, 4])
    assert t[0, 1] == 2 and t.entries() == [1, 2, 3, 4]
    with pytest.raises(AttributeError):
        t.dim = 3
    with pytest.raises(ValueError):
        t.data[0, 0] = 5
    with pytest.raises(ValueError):
        Tensor(1, 1, 2, [1, 2, 3])


def test_tensor_rejects_floats():
    with pytest.raises(TypeError):
        Tensor(0, 1, 1, [0.5])


def test_tensor_arithmetic():
    t, u = Tensor(0, 1, 2, [1, 2]), Tensor(0, 1, 2, [Fraction(1, 2), -1])
    assert (t + u).entries() == [Fraction(3, 2), 1]
    assert (t - t).is_zero() and (2 * t).entries() == [2, 4] and (-t).entries() == [-1, -2]
    with pytest.raises(ProfileError):
        t + Tensor(1, 0, 2, [1, 2])


def test_representation_checks():
    with pytest.raises(ValueError):
        Representation(A, 2, {})
    with pytest.raises(ValueError):
        Representation(A, 2, {"a": Tensor(2, 0, 2, [0] * 4)})
    with pytest.raises(ValueError):
        Representation(A, 2, {"a": Tensor.identity(2), "z": Tensor.identity(2)})


# -- trace examples ------------------------------------------------------------------

def test_loop_and_empty():
    rng = random.Random(0)
    for n in range(4):
        R = random_representation(MIXED, n, rng)
        assert naive_trace(R, Web(MIXED)) == planned_trace(R, Web(MIXED)) == 1
        for c in range(4):
            assert naive_trace(R, loop_diagram(MIXED, c)) == planned_trace(R, loop_diagram(MIXED, c)) == n ** c


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_unipotent_cycles(k):
    assert naive_trace(UNIPOTENT, cycle_diagram(A, ["a"] * k)) == 2
    assert planned_trace(UNIPOTENT, cycle_diagram(A, ["a"] * k)) == 2


def test_cycle_is_trace_of_product():
    sig = TypeSignature({"x": (1, 1), "y": (1, 1), "z": (1, 1)})
    mats = {"x": [[1, 2], [3, 4]], "y": [[0, 1], [5, -1]], "z": [[2, 0], [1, Fraction(1, 3)]]}
    R = Representation(sig, 2, {t: Tensor.from_matrix(m) for t, m in mats.items()})
    p = matmul(matmul(mats["x"], mats["y"]), mats["z"])
    assert planned_trace(R, cycle_diagram(sig, ["x", "y", "z"])) == p[0][0] + p[1][1]


def test_dimension_zero():
    R = random_representation(MIXED, 0, 1)
    assert planned_trace(R, Web(MIXED)) == 1
    assert planned_trace(R, cycle_diagram(MIXED, ["a"])) == 0 == naive_trace(R, cycle_diagram(MIXED, ["a"]))
    assert planned_trace(R, loop_diagram(MIXED, 2)) == 0


def test_extended_trace_examples():
    R = random_representation(A, 3, 7)
    assert extended_trace(R, vertex_web(A, "a")) == R["a"]
    assert extended_trace(R, strand(A)) == Tensor.identity(3)
    mixed = random_representation(MIXED, 2, 7)
    assert extended_trace(mixed, vertex_web(MIXED, "b")) == mixed["b"]
    assert extended_trace(mixed, vertex_web(MIXED, "u")) == mixed["u"]


def test_extended_trace_of_diagram_is_rank_zero():
    rng = random.Random(2)
    R = random_representation(MIXED, 2, rng)
    for _ in range(10):
        g = random_web(MIXED, 0, 0, rng)
        t = extended_trace(R, g)
        assert t.rank == 0 and t.scalar() == naive_trace(R, g)


def test_permutation_web_tensor():
    t = extended_trace(random_representation(A, 2, 0), permutation_web(2, (2, 1), A))
    # root 1 -> sink 2, root 2 -> sink 1: entry (i1, i2, j1, j2) = δ(i1, j2) δ(i2, j1)
    for i1, i2, j1, j2 in np.ndindex(2, 2, 2, 2):
        assert t[i1, i2, j1, j2] == int(i1 == j2 and i2 == j1)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_planned_matches_naive_with_boundary(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    R = random_representation(MIXED, n, rng)
    k, l = rng.choice([(0, 0), (1, 1), (1, 0), (0, 1), (2, 1), (1, 2)])
    w = random_web(MIXED, k, l, rng, max_vertices=3)
    assert extended_trace(R, w) == naive_extended_trace(R, w)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_multiplicative(seed):
    rng = random.Random(seed)
    R = random_representation(MIXED, rng.randint(0, 3), rng)
    g, h = random_web(MIXED, 0, 0, rng), random_web(MIXED, 0, 0, rng)
    assert planned_trace(R, disjoint_union(g, h)) == planned_trace(R, g) * planned_trace(R, h)


def test_profile_errors():
    with pytest.raises(ProfileError):
        naive_trace(UNIPOTENT, strand(A))
    with pytest.raises(ProfileError):
        planned_trace(UNIPOTENT, strand(A))
    with pytest.raises(ValueError):
        planned_trace(UNIPOTENT, Web(A, (("v", "a"),), ()))


# -- quantum trace -------------------------------------------------------------------

def test_quantum_trace_examples():
    zero = QuantumWeb.zero(A)
    assert quantum_trace(UNIPOTENT, zero) == 0
    assert quantum_trace(UNIPOTENT, zero, profile=(1, 1)).is_zero()
    q = QuantumWeb([(1, vertex_web(A, "a")), (-1, strand(A))])
    assert quantum_trace(UNIPOTENT, q) == Tensor.from_matrix([[0, 1], [0, 0]])
    with pytest.raises(ProfileError):
        quantum_trace(UNIPOTENT, q + QuantumWeb.from_web(loop_diagram(A)))
    with pytest.raises(ProfileError):
        quantum_trace(UNIPOTENT, q, profile=(2, 2))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_delta_annihilated(n):
    R = random_representation(A, n, n)
    assert quantum_trace(R, delta(n + 1)).is_zero()
    assert not quantum_trace(R, delta(n)).is_zero()


def test_delta_terms_against_oracle():
    R = random_representation(A, 2, 4)
    acc = Tensor.zeros(3, 3, 2)
    for c, w in delta(3).terms():
        acc = acc + c * naive_extended_trace(R, w)
    assert acc.is_zero()


# -- pairing -------------------------------------------------------------------------

def test_pairing_examples():
    assert pairing(Tensor.identity(2), Tensor.identity(2)) == 2
    t = Tensor(2, 1, 2, list(range(8)))
    assert pairing(Tensor.zeros(2, 1, 2), Tensor(1, 2, 2, list(range(8)))) == 0
    with pytest.raises(ProfileError):
        pairing(t, t)


def test_pairing_index_convention():
    rng = random.Random(1)
    t = Tensor(2, 1, 2, [Fraction(rng.randint(-3, 3)) for _ in range(8)])
    u = Tensor(1, 2, 2, [Fraction(rng.randint(-3, 3)) for _ in range(8)])
    brute = sum(t[a1, a2, b] * u[b, a1, a2] for a1, a2, b in np.ndindex(2, 2, 2))
    assert pairing(t, u) == brute


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_pairing_matches_glue(seed):
    rng = random.Random(seed)
    R = random_representation(MIXED, rng.randint(1, 3), rng)
    k, l = rng.choice([(0, 0), (1, 1), (1, 0), (0, 1), (2, 1), (1, 2), (3, 0), (0, 2)])
    w = random_web(MIXED, k, l, rng, max_vertices=3)
    x = random_web(MIXED, l, k, rng, max_vertices=3)
    assert pairing(extended_trace(R, w), extended_trace(R, x)) == planned_trace(R, glue(w, x))


# -- gl action -----------------------------------------------------------------------

def test_gl_identity():
    R = random_representation(MIXED, 2, 3)
    assert gl_action(identity(2), R) == R


def test_gl_diagonal_invariance():
    rng = random.Random(11)
    R = random_representation(MIXED, 2, rng)
    g = [[2, 0], [0, Fraction(1, 3)]]
    gR = gl_action(g, R)
    assert gR != R
    for _ in range(15):
        d = random_web(MIXED, 0, 0, rng, max_vertices=4)
        assert planned_trace(gR, d) == planned_trace(R, d)


def test_gl_transforms_matrices_by_conjugation():
    rng = random.Random(12)
    m = [[1, 2], [3, 4]]
    R = Representation(A, 2, {"a": Tensor.from_matrix(m)})
    g = random_invertible(2, rng)
    # rows are in-indices (g^-T), columns out-indices (g): M -> g^-T M g^T
    tr = lambda x: [list(r) for r in zip(*x)]  # noqa: E731
    want = matmul(matmul(tr(inverse(g)), m), tr(g))
    assert gl_action(g, R)["a"] == Tensor.from_matrix(want)


def test_gl_composition():
    rng = random.Random(13)
    R = random_representation(MIXED, 3, rng)
    g, h = random_invertible(3, rng), random_invertible(3, rng)
    assert gl_action(g, gl_action(h, R)) == gl_action(matmul(g, h), R)


def test_gl_errors():
    R = random_representation(A, 2, 0)
    with pytest.raises(SingularMatrixError):
        gl_action([[1, 2], [2, 4]], R)
    with pytest.raises(ValueError):
        gl_action([[1, 0], [0, 1]], R, g_inv=[[2, 0], [0, 1]])
    with pytest.raises(ValueError):
        gl_action([[1]], R)


def test_random_invertible_is_invertible():
    for seed in range(20):
        g = random_invertible(3, seed)
        assert matmul(g, inverse(g)) == identity(3)


# -- budget --------------------------------------------------------------------------

def test_budget_default_and_env(monkeypatch):
    monkeypatch.delenv(BUDGET_ENV, raising=False)
    assert resolve_budget() == DEFAULT_BUDGET == 10 ** 7
    monkeypatch.setenv(BUDGET_ENV, "50")
    assert resolve_budget() == 50 and resolve_budget(7) == 7
    g = cycle_diagram(A, ["a"] * 6)
    with pytest.raises(BudgetExceeded):
        naive_trace(UNIPOTENT, g)
    assert naive_trace(UNIPOTENT, g, budget=64) == 2


def test_planned_budget():
    sig = TypeSignature({"big": (3, 3)})
    R = random_representation(sig, 3, 0)
    w = vertex_web(sig, "big")
    with pytest.raises(BudgetExceeded):
        extended_trace(R, w, budget=100)
    assert extended_trace(R, w, budget=729) == R["big"]


# -- planning ------------------------------------------------------------------------

def test_plan_self_loop():
    plan = plan_contraction(cycle_diagram(A, ["a"]))
    assert len(plan) == 1 and plan.steps[0].right is None and plan.steps[0].open_legs == 0


def test_plan_path_and_cycle():
    path = plan_contraction(path_web(A, ["a"] * 3))
    assert len(path) == 2
    assert [s.open_legs for s in path.steps] == [2, 2]
    cyc = plan_contraction(cycle_diagram(A, ["a"] * 3))
    assert len(cyc) == 2 and cyc.steps[-1].open_legs == 0


def test_plan_is_deterministic_and_complete():
    rng = random.Random(4)
    for _ in range(30):
        w = random_web(MIXED, 0, 0, rng, max_vertices=4)
        plan = plan_contraction(w)
        assert plan == plan_contraction(w)
        contracted = sorted(e for s in plan.steps for e in s.edges)
        assert contracted == list(range(len(w.edges)))


def _components(w: Web) -> dict[str, int]:
    ids = [v for v, _ in w.vertices]
    parent = {v: v for v in ids}

    def find(v):
        while parent[v] != v:
            v = parent[v]
        return v

    for t, h in w.edges:
        if isinstance(t, Port) and isinstance(h, Port):
            parent[find(t.vertex)] = find(h.vertex)
    return {v: find(v) for v in ids}


def brute_plan_costs(w: Web, dim: int) -> tuple[int, int]:
    """Optimal plan cost over all merge orders, and over component-respecting ones.

    Self-loops are traced up front (identically in both searches).  A step
    merges two factors, contracting their shared legs, and costs the entry
    count of its result; the unrestricted search may also take outer
    products of unrelated factors.  Finished components (scalars) combine at
    cost 1 in both searches.
    """
    start = []
    for v, _ in w.vertices:
        ls = []
        for idx, (a, b) in enumerate(w.edges):
            ls += [idx] * ((isinstance(a, Port) and a.vertex == v) + (isinstance(b, Port) and b.vertex == v))
        start.append((frozenset([v]), tuple(sorted(x for x in set(ls) if ls.count(x) == 1))))

    @lru_cache(maxsize=None)
    def best(state, mixing):
        factors = sorted(state, key=lambda f: (sorted(f[0]), f[1]))
        if len(factors) == 1:
            return 0
        out = float("inf")
        for (i, (fv, fl)), (j, (gv, gl)) in combinations(enumerate(factors), 2):
            shared = set(fl) & set(gl)
            if not (shared or mixing or not (fl or gl)):
                continue
            legs = tuple(sorted(set(fl) ^ set(gl)))
            rest = [x for k, x in enumerate(factors) if k not in (i, j)]
            out = min(out, dim ** len(legs) + best(frozenset(rest + [(fv | gv, legs)]), mixing))
        return out

    state = frozenset(start)
    return best(state, True), best(state, False)


def test_brute_plan_search_sanity():
    # two traced self-loops combine at cost 1 either way
    g = disjoint_union(cycle_diagram(A, ["a"]), cycle_diagram(A, ["a"]))
    assert brute_plan_costs(g, 2) == (1, 1)
    # 2-cycle: one merge over both edges
    assert brute_plan_costs(cycle_diagram(A, ["a", "a"]), 3) == (1, 1)
    # 3-cycle: the middle intermediate is a matrix
    assert brute_plan_costs(cycle_diagram(A, ["a"] * 3), 3) == (10, 10)


@pytest.mark.parametrize("seed", range(12))
def test_optimal_plans_never_mix_components(seed):
    rng = random.Random(seed)
    sig = TypeSignature({"a": (1, 1), "x": (2, 2)})
    g = disjoint_union(random_web(sig, 0, 0, rng, max_vertices=2, max_loops=0),
                       random_web(sig, 0, 0, rng, max_vertices=2, max_loops=0))
    if g.num_vertices == 0:
        return
    comp = _components(g)
    for dim in (2, 3):
        overall, factored = brute_plan_costs(g, dim)
        assert overall == factored
    for step in plan_contraction(g).steps:
        members = step.left + (step.right or ())
        assert len({comp[v] for v in members}) == 1
