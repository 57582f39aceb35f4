"""Hull operators on finite carriers.

Subsets of ``range(carrier_size)`` are int bitmasks throughout: bit ``i`` is
set iff ``i`` is in the subset.
"""

from __future__ import annotations

import itertools
import random
from typing import Callable, Iterable, Iterator

import numpy as np

from .algebra import FiniteAlgebra, GuardError, tuple_index
from .clone import CloneSlice, clone_upto

__all__ = [
    "HullOperator",
    "mask",
    "elements",
    "submasks",
    "algebra_hull",
    "generated_subalgebra",
    "generated_hull",
    "clone_hull",
    "term_closure_hull",
    "restricted_clone_hull",
    "closure_violations",
    "exchange_violations",
    "check_closure",
    "check_exchange",
    "is_matroid_type",
    "EXHAUSTIVE_BOUND",
]

EXHAUSTIVE_BOUND = 12


def mask(items: Iterable[int]) -> int:
    m = 0
    for i in items:
        m |= 1 << i
    return m


def elements(m: int) -> tuple[int, ...]:
    out = []
    i = 0
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return tuple(out)


def submasks(m: int) -> list[int]:
    """All submasks of ``m`` in increasing numeric order."""
    out = []
    s = m
    while True:
        out.append(s)
        if s == 0:
            break
        s = (s - 1) & m
    return out[::-1]


class HullOperator:
    """A monotone, extensive map on subsets of ``range(carrier_size)``."""

    def __init__(self, carrier_size: int, hull: Callable[[int], int], name: str = ""):
        self.carrier_size = carrier_size
        self._hull = hull
        self._cache: dict[int, int] = {}
        self.name = name

    @property
    def full(self) -> int:
        return (1 << self.carrier_size) - 1

    def __call__(self, subset: int) -> int:
        try:
            return self._cache[subset]
        except KeyError:
            pass
        if subset & ~self.full:
            raise ValueError(f"subset {elements(subset)} not inside carrier of size {self.carrier_size}")
        out = self._hull(subset) | subset
        self._cache[subset] = out
        return out

    def of(self, items: Iterable[int]) -> frozenset[int]:
        return frozenset(elements(self(mask(items))))

    def __repr__(self):
        return f"HullOperator({self.name or '?'}, carrier={self.carrier_size})"


def _images(algebra: FiniteAlgebra, els: tuple[int, ...]) -> int:
    """Bitmask of all values ``op(x)`` for tuples x over ``els``."""
    n = algebra.carrier_size
    out = 0
    pts = np.asarray(els, dtype=np.int64)
    for op in algebra:
        k = op.arity
        if k == 0:
            out |= 1 << op.table[0]
            continue
        if not len(pts):
            continue
        idx = pts
        for _ in range(k - 1):
            idx = (idx[:, None] * n + pts[None, :]).ravel()
        for v in np.unique(op.array[idx]):
            out |= 1 << int(v)
    return out


def algebra_hull(algebra: FiniteAlgebra) -> HullOperator:
    """The one-step hull ``B | union of op(B^support)``.  Operations with
    non-empty support contribute nothing to the hull of the empty set."""
    return HullOperator(
        algebra.carrier_size, lambda b: b | _images(algebra, elements(b)), "one-step"
    )


def generated_subalgebra(algebra: FiniteAlgebra, subset: int) -> int:
    """The least subalgebra containing ``subset``, by iterating the one-step
    hull; each round only needs tuples touching a newly added point."""
    n = algebra.carrier_size
    current = subset | _images(algebra, elements(subset))
    frontier = current & ~subset
    while frontier:
        old = current & ~frontier
        grown = 0
        new_pts = np.asarray(elements(frontier), dtype=np.int64)
        all_pts = np.asarray(elements(current), dtype=np.int64)
        old_pts = np.asarray(elements(old), dtype=np.int64)
        for op in algebra:
            k = op.arity
            for j in range(k):
                parts = [old_pts] * j + [new_pts] + [all_pts] * (k - 1 - j)
                if any(len(p) == 0 for p in parts):
                    continue
                idx = np.zeros(1, dtype=np.int64)
                for p in parts:
                    idx = (idx[:, None] * n + p[None, :]).ravel()
                for v in np.unique(op.array[idx]):
                    grown |= 1 << int(v)
        frontier = grown & ~current
        current |= grown
    return current


def generated_hull(algebra: FiniteAlgebra) -> HullOperator:
    return HullOperator(algebra.carrier_size, lambda b: generated_subalgebra(algebra, b), "generated")


def clone_hull(slice_: CloneSlice) -> HullOperator:
    """``B | {t(x) : t in the clone slice, x a tuple over B}``.

    Exact for ``|B| <= arity_cap``, because every point of the hull is the
    value of a term operation on an injective tuple.
    """
    n = slice_.carrier_size

    def hull(b: int) -> int:
        els = elements(b)
        if len(els) > slice_.arity_cap:
            raise GuardError("arity cap", f"|B|={len(els)} exceeds clone slice cap {slice_.arity_cap}")
        out = b
        for r in range(len(els) + 1):
            tables = slice_.tables(r)
            if not len(tables):
                continue
            cols = [tuple_index(t, n) for t in itertools.product(els, repeat=r)]
            for v in np.unique(tables[:, cols]):
                out |= 1 << int(v)
        return out

    return HullOperator(n, hull, "clone")


def term_closure_hull(algebra: FiniteAlgebra) -> HullOperator:
    """The hull of the clone of ``algebra`` on every subset of the carrier.

    On non-empty sets it agrees with the generated subalgebra.  The empty
    set is sent to the values of constant term operations, which the clone
    carries as nullary operations even when ``algebra`` has none.
    """
    constants = mask(op.table[0] for op in clone_upto(algebra, 0).members(0))

    def hull(b: int) -> int:
        return generated_subalgebra(algebra, b) if b else generated_subalgebra(algebra, constants)

    return HullOperator(algebra.carrier_size, hull, "term-closure")


def _restricted_terms(algebra: FiniteAlgebra, els: tuple[int, ...], guard: int) -> set[tuple[int, ...]]:
    """Term operations of arity ``len(els)`` restricted to the tuples over
    ``els``: the closure of the restricted projections under the basic
    operations.  Rows of ``found`` are value vectors over the columns."""
    k = len(els)
    n = algebra.carrier_size
    cols = np.array(list(itertools.product(els, repeat=k)), dtype=np.int64).reshape(-1, k)
    c = len(cols)
    key = _row_keys(n, c)
    start = [cols[:, i] for i in range(k)]
    start += [np.full(c, op.table[0], dtype=np.int64) for op in algebra if op.arity == 0]
    found = _unique_rows(np.array(start, dtype=np.int64).reshape(-1, c), key)
    fresh = found
    basics = [op for op in algebra if op.arity > 0]
    while len(fresh):
        old = _minus(found, fresh, key)
        parts = []
        for op in basics:
            r = op.arity
            # split by the position of the first fresh argument
            for pos in range(r):
                groups = [old] * pos + [fresh] + [found] * (r - pos - 1)
                if any(len(g) == 0 for g in groups):
                    continue
                if np.prod([len(g) for g in groups], dtype=float) > 4 * guard:
                    raise GuardError("clone blowup guard", f"more than {guard} restricted term operations")
                idx = np.zeros((1, c), dtype=np.int64)
                for g in groups:
                    idx = (idx[:, None, :] * n + g[None, :, :]).reshape(-1, c)
                parts.append(op.array[idx])
        if not parts:
            break
        cand = _unique_rows(np.concatenate(parts), key)
        fresh = _minus(cand, found, key)
        found = np.concatenate([found, fresh])
        if len(found) > guard:
            raise GuardError("clone blowup guard", f"more than {guard} restricted term operations")
    return {tuple(row) for row in found.tolist()}


def _row_keys(n: int, c: int):
    """Weights turning a row into one int64 key, or None when they overflow."""
    if n ** c >= 2**62:
        return None
    return n ** np.arange(c - 1, -1, -1, dtype=np.int64)


def _unique_rows(a: np.ndarray, key) -> np.ndarray:
    if key is None:
        return np.unique(a, axis=0)
    _, first = np.unique(a @ key, return_index=True)
    return a[np.sort(first)]


def _minus(a: np.ndarray, b: np.ndarray, key) -> np.ndarray:
    """Rows of ``a`` not in ``b``."""
    if not len(b) or not len(a):
        return a
    if key is not None:
        return a[~np.isin(a @ key, b @ key)]
    drop = {r.tobytes() for r in b}
    return a[[r.tobytes() not in drop for r in a]]


def restricted_clone_hull(algebra: FiniteAlgebra, guard: int = 10**5) -> HullOperator:
    """The clone hull computed from term operations restricted to ``B^|B|``.

    Same result as :func:`clone_hull` with cap ``|B|``, without building
    whole operation tables, so it stays cheap on carriers where the full
    clone slice is large.  The empty set is sent to the constants of the
    clone.
    """
    constants = mask(op.table[0] for op in clone_upto(algebra, 0).members(0))
    full = (1 << algebra.carrier_size) - 1

    def hull(b: int) -> int:
        els = elements(b)
        if not els:
            return constants
        if b == full:
            return b
        out = b
        for f in _restricted_terms(algebra, els, guard):
            out |= mask(f)
        return out

    return HullOperator(algebra.carrier_size, hull, "restricted-clone")


def _subsets(h: HullOperator, bound: int, samples: int | None, seed: int) -> Iterator[int]:
    if h.carrier_size <= bound:
        yield from range(h.full + 1)
    elif samples is None:
        raise GuardError(
            "exhaustive bound exceeded",
            f"carrier {h.carrier_size} > {bound}; pass samples= to check a seeded sample",
        )
    else:
        rng = random.Random(seed)
        for _ in range(samples):
            yield rng.getrandbits(h.carrier_size)


def closure_violations(h: HullOperator, bound: int = EXHAUSTIVE_BOUND, samples: int | None = None, seed: int = 0):
    """Subsets A with h(h(A)) != h(A)."""
    for a in _subsets(h, bound, samples, seed):
        if h(h(a)) != h(a):
            yield a


def exchange_violations(h: HullOperator, bound: int = EXHAUSTIVE_BOUND, samples: int | None = None, seed: int = 0):
    """Triples (A, x, y), x < y outside h(A), where exactly one of
    ``x in h(A+y)`` and ``y in h(A+x)`` holds."""
    for a in _subsets(h, bound, samples, seed):
        ha = h(a)
        outside = [x for x in range(h.carrier_size) if not ha >> x & 1]
        for x, y in itertools.combinations(outside, 2):
            if bool(h(a | 1 << y) >> x & 1) != bool(h(a | 1 << x) >> y & 1):
                yield a, x, y


def check_closure(h: HullOperator, **kw) -> bool:
    return next(closure_violations(h, **kw), None) is None


def check_exchange(h: HullOperator, **kw) -> bool:
    return next(exchange_violations(h, **kw), None) is None


def is_matroid_type(h: HullOperator, **kw) -> bool:
    # finite supports hold automatically on a finite carrier
    return check_closure(h, **kw) and check_exchange(h, **kw)
