"""Deciders for independent, strongly independent and free subsets.

Each decider returns a :class:`Verdict`, which is truthy iff the property
holds and otherwise carries a counterexample that can be re-checked
directly against the definitions (see :func:`recheck`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, NamedTuple

import numpy as np

from .algebra import AlgebraError, FiniteAlgebra, GuardError, Operation, evaluate, tuple_index
from .clone import CloneSlice, clone_upto, is_clone_upto
from .hull import (
    EXHAUSTIVE_BOUND,
    HullOperator,
    check_exchange,
    elements,
    mask,
    submasks,
    term_closure_hull,
)

__all__ = [
    "Verdict",
    "DependentPoint",
    "MeetsEmptyHull",
    "HullMismatch",
    "FreenessViolation",
    "CloneCollision",
    "is_independent",
    "is_strongly_independent",
    "is_free",
    "is_free_clone",
    "extend_to_maximal_independent",
    "is_independence_algebra",
    "recheck",
]

FREE_WORK_GUARD = 5 * 10**6


@dataclass(frozen=True)
class Verdict:
    holds: bool
    check: str
    witness: Any = None

    def __bool__(self):
        return self.holds


class DependentPoint(NamedTuple):
    """``point`` lies in the hull of the rest of the set."""

    point: int


class MeetsEmptyHull(NamedTuple):
    point: int


class HullMismatch(NamedTuple):
    """h(first) & h(second) != h(first & second)."""

    first: frozenset
    second: frozenset


class FreenessViolation(NamedTuple):
    """alpha(x) == beta(y) but alpha(f o x) != beta(f o y).

    ``f`` lists the images of the points of B in increasing order.
    """

    alpha: str
    x: tuple
    beta: str
    y: tuple
    f: tuple


class CloneCollision(NamedTuple):
    """Distinct term operations agreeing on the injective tuple ``x``."""

    alpha: Operation
    beta: Operation
    x: tuple


def is_independent(h: HullOperator, subset: int) -> Verdict:
    for b in elements(subset):
        if h(subset & ~(1 << b)) >> b & 1:
            return Verdict(False, "independent", DependentPoint(b))
    return Verdict(True, "independent")


def is_strongly_independent(h: HullOperator, subset: int, bound: int = EXHAUSTIVE_BOUND) -> Verdict:
    size = bin(subset).count("1")
    if size > bound:
        raise GuardError("strong independence bound", f"|B|={size} exceeds {bound}")
    meet = subset & h(0)
    if meet:
        return Verdict(False, "strong", MeetsEmptyHull(elements(meet)[0]))
    subs = submasks(subset)
    hulls = {s: h(s) for s in subs}
    for i, b1 in enumerate(subs):
        for b2 in subs[i + 1 :]:
            inter = b1 & b2
            if inter in (b1, b2):
                continue
            if hulls[b1] & hulls[b2] != hulls[inter]:
                return Verdict(
                    False, "strong", HullMismatch(frozenset(elements(b1)), frozenset(elements(b2)))
                )
    return Verdict(True, "strong")


def is_free(algebra: FiniteAlgebra, subset: int, guard: int = FREE_WORK_GUARD) -> Verdict:
    """Freeness with respect to the given operation family: whenever
    ``alpha(x) == beta(y)`` for tuples over B, every map ``f: B -> A``
    keeps ``alpha(f o x) == beta(f o y)``."""
    n = algebra.carrier_size
    pts = elements(subset)
    pos = {p: i for i, p in enumerate(pts)}
    entries = [
        (name, x, evaluate(op, x))
        for name, op in algebra.operations.items()
        for x in itertools.product(pts, repeat=op.arity)
    ]
    work = len(entries) * n ** len(pts)
    if work > guard:
        raise GuardError("freeness bound", f"{work} evaluations exceed {guard}")
    ops = algebra.operations
    for f in itertools.product(range(n), repeat=len(pts)):
        image: dict[int, tuple] = {}
        for name, x, v in entries:
            w = evaluate(ops[name], tuple(f[pos[p]] for p in x))
            seen = image.setdefault(v, (name, x, w))
            if seen[2] != w:
                return Verdict(False, "free", FreenessViolation(seen[0], seen[1], name, x, f))
    return Verdict(True, "free")


def _as_slice(source, size: int) -> CloneSlice:
    if isinstance(source, CloneSlice):
        if source.arity_cap < size:
            raise AlgebraError(f"clone slice cap {source.arity_cap} is below |B|={size}")
        return source
    if not is_clone_upto(source, size):
        raise AlgebraError(
            "the clone-based freeness test requires a unital, empty-regular, "
            "substitution- and composition-stable family (pass a clone slice instead)"
        )
    per_arity: dict[int, list[Operation]] = {}
    for op in source:
        c = Operation(tuple(range(op.arity)), op.carrier_size, op.table)
        if c.arity <= size:
            per_arity.setdefault(c.arity, []).append(c)
    per = {r: tuple(sorted(set(per_arity.get(r, ())), key=lambda o: o.table)) for r in range(size + 1)}
    return CloneSlice(source, size, per, {})


def is_free_clone(source: CloneSlice | FiniteAlgebra, subset: int) -> Verdict:
    """Marczewski freeness: no two distinct term operations of the same
    arity r <= |B| agree on an injective r-tuple from B."""
    pts = elements(subset)
    sl = _as_slice(source, len(pts))
    n = sl.carrier_size
    for r in range(len(pts) + 1):
        ops = sl.members(r)
        if len(ops) < 2:
            continue
        tables = sl.tables(r)
        for x in itertools.permutations(pts, r):
            col = tables[:, tuple_index(x, n)]
            order = np.argsort(col, kind="stable")
            same = np.flatnonzero(col[order][1:] == col[order][:-1])
            if len(same):
                i, j = order[same[0]], order[same[0] + 1]
                return Verdict(False, "free-clone", CloneCollision(ops[i], ops[j], x))
    return Verdict(True, "free-clone")


def extend_to_maximal_independent(h: HullOperator, subset: int) -> int:
    """Greedy extension in increasing element order.  Independence is
    inherited by subsets, so one pass yields a maximal independent set."""
    if not is_independent(h, subset):
        raise AlgebraError(f"{sorted(elements(subset))} is not independent")
    current = subset
    for x in range(h.carrier_size):
        if not current >> x & 1 and is_independent(h, current | 1 << x):
            current |= 1 << x
    return current


def is_independence_algebra(algebra: FiniteAlgebra, cap: int | None = None) -> bool:
    """Exchange property of the clone hull, and every clone-independent set
    of size <= cap is free in the clone."""
    n = algebra.carrier_size
    if n > EXHAUSTIVE_BOUND:
        raise GuardError("exhaustive bound exceeded", f"carrier {n} > {EXHAUSTIVE_BOUND}")
    cap = n if cap is None else cap
    h = term_closure_hull(algebra)
    if not check_exchange(h):
        return False
    sl = clone_upto(algebra, cap)
    for b in range(1 << n):
        if bin(b).count("1") <= cap and is_independent(h, b) and not is_free_clone(sl, b):
            return False
    return True


def recheck(verdict: Verdict, *, hull: HullOperator | None = None, algebra: FiniteAlgebra | None = None,
            subset: int | None = None) -> bool:
    """True iff the witness of a negative verdict is a genuine counterexample."""
    w = verdict.witness
    if isinstance(w, DependentPoint):
        return bool(subset >> w.point & 1) and bool(hull(subset & ~(1 << w.point)) >> w.point & 1)
    if isinstance(w, MeetsEmptyHull):
        return bool(subset >> w.point & 1) and bool(hull(0) >> w.point & 1)
    if isinstance(w, HullMismatch):
        b1, b2 = mask(w.first), mask(w.second)
        return (b1 | b2) & ~subset == 0 and hull(b1) & hull(b2) != hull(b1 & b2)
    if isinstance(w, FreenessViolation):
        ops = algebra.operations
        pts = elements(subset)
        f = dict(zip(pts, w.f))
        return evaluate(ops[w.alpha], w.x) == evaluate(ops[w.beta], w.y) and evaluate(
            ops[w.alpha], [f[p] for p in w.x]
        ) != evaluate(ops[w.beta], [f[p] for p in w.y])
    if isinstance(w, CloneCollision):
        return (
            w.alpha != w.beta
            and w.alpha.support == w.beta.support
            and len(set(w.x)) == len(w.x)
            and all(subset >> p & 1 for p in w.x)
            and evaluate(w.alpha, w.x) == evaluate(w.beta, w.x)
        )
    raise TypeError(f"no witness to recheck in {verdict!r}")
