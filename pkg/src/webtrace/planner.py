"""Greedy pairwise contraction planning and execution for webs.

Every typed vertex of a web becomes one tensor factor whose legs are the
edges at its in-slots followed by its out-slots.  Legs that end at a root or
sink stay open.  The planner repeatedly performs the cheapest available step:
either tracing out a factor's repeated legs (self-loops) or merging two
factors over all legs they share.  Factors in different components are
never merged; their scalar (or open-leg) results are combined at the end.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .diagram import Port, Root, Sink, Web

__all__ = ["ContractionStep", "ContractionPlan", "plan_contraction", "execute_plan", "BudgetExceeded"]


class BudgetExceeded(RuntimeError):
    """Raised when a computation would exceed its configured size budget."""


@dataclass(frozen=True)
class ContractionStep:
    """Merge ``left`` with ``right`` (``None`` for a self-contraction).

    ``left``/``right`` are the vertex ids making up each factor, ``edges``
    the indices (into ``web.edges``) contracted by this step, and
    ``open_legs`` the number of legs of the resulting factor.
    """

    left: tuple[str, ...]
    right: tuple[str, ...] | None
    edges: tuple[int, ...]
    open_legs: int


@dataclass(frozen=True)
class ContractionPlan:
    steps: tuple[ContractionStep, ...]

    def cost(self, dim: int) -> int:
        """Sum over steps of the intermediate tensor's entry count."""
        return sum(dim ** s.open_legs for s in self.steps)

    def __len__(self) -> int:
        return len(self.steps)


def _leg_labels(w: Web):
    """Per-vertex leg labels and the open-label order (roots, then sinks).

    Internal edges are labeled by their index in ``w.edges``; boundary edges
    by ("r", i) / ("s", j).  Bare strands are returned separately as pairs of
    open labels.
    """
    port_label: dict[Port, object] = {}
    strands = []
    for idx, (tail, head) in enumerate(w.edges):
        if isinstance(tail, Root) and isinstance(head, Sink):
            strands.append((("r", tail.label), ("s", head.label)))
            continue
        if isinstance(tail, Root):
            port_label[head] = ("r", tail.label)
        elif isinstance(head, Sink):
            port_label[tail] = ("s", head.label)
        else:
            port_label[tail] = idx
            port_label[head] = idx
    legs = []
    for v, t in w.vertices:
        i, o = w.sig.arity(t)
        ls = [port_label[Port(v, "in", s)] for s in range(1, i + 1)]
        ls += [port_label[Port(v, "out", s)] for s in range(1, o + 1)]
        legs.append(ls)
    open_order = [("r", i) for i in range(1, w.k + 1)] + [("s", j) for j in range(1, w.l + 1)]
    return legs, strands, open_order


def _after_merge(legs: Sequence) -> tuple[list, list]:
    """Split legs into survivors (seen once) and contracted (seen twice)."""
    seen: dict = {}
    for lab in legs:
        seen[lab] = seen.get(lab, 0) + 1
    keep = [lab for lab in dict.fromkeys(legs) if seen[lab] == 1]
    gone = [lab for lab, c in seen.items() if c > 1]
    return keep, gone


def _greedy(w: Web, legs: list[list]):
    """Yield (i, j_or_None, result_legs, contracted) choosing greedily."""
    # factor = (member vertex positions, legs)
    factors = {p: ([p], list(ls)) for p, ls in enumerate(legs)}
    while True:
        best = None
        owners: dict = {}
        for p, (_, ls) in factors.items():
            for lab in ls:
                if not isinstance(lab, tuple):
                    owners.setdefault(lab, set()).add(p)
        for p, (_, ls) in factors.items():
            keep, gone = _after_merge(ls)
            if gone:
                cand = (len(keep), p, p)
                if best is None or cand < best[0]:
                    best = (cand, p, None, keep, gone)
        pairs = set()
        for own in owners.values():
            if len(own) == 2:
                pairs.add(tuple(sorted(own)))
        for p, q in pairs:
            keep, gone = _after_merge(factors[p][1] + factors[q][1])
            cand = (len(keep), p, q)
            if best is None or cand < best[0]:
                best = (cand, p, q, keep, gone)
        if best is None:
            return
        _, p, q, keep, gone = best
        yield p, q, [m for m in factors[p][0]], (list(factors[q][0]) if q is not None else None), keep, gone
        members = factors[p][0] + (factors.pop(q)[0] if q is not None else [])
        factors[p] = (members, keep)


def plan_contraction(w: Web) -> ContractionPlan:
    """Greedy minimum-intermediate-size plan for the typed vertices of ``w``.

    Ties are broken by the smallest vertex positions involved.
    """
    legs, _, _ = _leg_labels(w)
    ids = [v for v, _ in w.vertices]
    steps = []
    for p, q, pm, qm, keep, gone in _greedy(w, legs):
        steps.append(ContractionStep(
            tuple(ids[m] for m in pm),
            tuple(ids[m] for m in qm) if qm is not None else None,
            tuple(sorted(gone)),
            len(keep),
        ))
    return ContractionPlan(tuple(steps))


def _einsum(operands, out_labels):
    """Exact einsum over arbitrary hashable leg labels."""
    index: dict = {}
    args = []
    for arr, labs in operands:
        args.append(arr)
        args.append([index.setdefault(lab, len(index)) for lab in labs])
    args.append([index[lab] for lab in out_labels])
    return np.einsum(*args, optimize=False)


def execute_plan(w: Web, arrays: Sequence[np.ndarray], dim: int, max_entries: int | None = None):
    """Contract ``w`` with one array per vertex; returns an object ndarray.

    The result's axes are the roots 1..k followed by the sinks 1..l.  Loop
    factors ``dim ** loops`` are included.
    """
    legs, strands, open_order = _leg_labels(w)
    factors = {p: (arrays[p], list(legs[p])) for p in range(len(legs))}
    for p, q, _, _, keep, gone in _greedy(w, legs):
        if max_entries is not None and dim ** len(keep) > max_entries:
            raise BudgetExceeded(f"intermediate with {dim ** len(keep)} entries exceeds {max_entries}")
        ops = [factors[p]] + ([factors.pop(q)] if q is not None else [])
        factors[p] = (_einsum(ops, keep), keep)
    eye = np.array([[int(i == j) for j in range(dim)] for i in range(dim)], dtype=object).reshape(dim, dim)
    ops = list(factors.values()) + [(eye, list(s)) for s in strands]
    if max_entries is not None and dim ** len(open_order) > max_entries:
        raise BudgetExceeded(f"result with {dim ** len(open_order)} entries exceeds {max_entries}")
    if ops:
        result = _einsum(ops, open_order)
    else:
        result = np.array(1, dtype=object)
    result = np.asarray(result, dtype=object)
    if w.loops:
        result = result * (dim ** w.loops)
    return result
