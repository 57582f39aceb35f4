"""Clone slices: all term operations of a finite algebra up to an arity cap.

The r-ary part of the clone is the closure of the r projections under the
basic operations, computed as a semi-naive worklist over truth tables.  A
round only composes tuples that use at least one table found in the
previous round, and tables are deduplicated by their raw bytes, so the
result does not depend on evaluation order.  The nullary part holds one
operation per value of a constant unary term operation, which realizes
the empty-regular clause of the clone ladder.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np

from .algebra import (
    FiniteAlgebra,
    GuardError,
    Operation,
    canonicalize,
    compose,
    constant,
    projection,
    substitute,
)

__all__ = [
    "CloneSlice",
    "clone_upto",
    "is_unital",
    "is_empty_regular",
    "is_substitution_stable",
    "is_composition_stable",
    "is_clone_upto",
    "empty_regularize",
    "DEFAULT_GUARD",
]

DEFAULT_GUARD = 10**5
_CHUNK_ELEMENTS = 1 << 22


@dataclass(frozen=True, eq=False)
class CloneSlice:
    algebra: FiniteAlgebra
    arity_cap: int
    per_arity: dict[int, tuple[Operation, ...]]
    generation: dict[Operation, int]

    @property
    def carrier_size(self) -> int:
        return self.algebra.carrier_size

    def counts(self) -> dict[int, int]:
        return {r: len(ops) for r, ops in sorted(self.per_arity.items())}

    def members(self, r: int) -> tuple[Operation, ...]:
        return self.per_arity.get(r, ())

    def __contains__(self, op: Operation) -> bool:
        op = canonicalize(op)
        return op in self._index.get(op.arity, {})

    @cached_property
    def _index(self) -> dict[int, dict[Operation, int]]:
        return {r: {op: i for i, op in enumerate(ops)} for r, ops in self.per_arity.items()}

    def tables(self, r: int) -> np.ndarray:
        """Member tables of arity r stacked as an (N, n**r) array."""
        return self._tables[r]

    @cached_property
    def _tables(self) -> dict[int, np.ndarray]:
        n = self.carrier_size
        out = {}
        for r, ops in self.per_arity.items():
            if ops:
                out[r] = np.array([op.table for op in ops], dtype=np.int64)
            else:
                out[r] = np.zeros((0, n**r), dtype=np.int64)
        return out

    def as_algebra(self) -> FiniteAlgebra:
        ops = {}
        for r, members in sorted(self.per_arity.items()):
            for i, op in enumerate(members):
                ops[f"t{r}_{i}"] = op
        return FiniteAlgebra(self.carrier_size, ops)


def _product_chunks(arrays: list[np.ndarray], n: int, width: int) -> Iterator[np.ndarray]:
    """Mixed-radix index rows for every tuple in the cartesian product of the
    member arrays, yielded in chunks of bounded size."""
    limit = max(1, _CHUNK_ELEMENTS // max(width, 1))

    def rec(prefix, rest):
        if not rest:
            yield prefix
            return
        a = rest[0]
        for b in range(0, len(a), limit):
            block = a[b : b + limit]
            step = max(1, limit // len(block))
            for s in range(0, len(prefix), step):
                sub = prefix[s : s + step]
                yield from rec((sub[:, None, :] * n + block[None, :, :]).reshape(-1, width), rest[1:])

    yield from rec(np.zeros((1, width), dtype=np.int64), arrays)


class _Saturated(Exception):
    pass


class _TableStore:
    """Deduplicating store of truth tables of one width.

    Tables are keyed by their base-n code; a direct-address bitmap is used
    when the code space is small, a sorted code array when codes fit in
    int64, and raw bytes otherwise.
    """

    def __init__(self, n: int, width: int):
        self.n, self.width = n, width
        self.blocks: list[np.ndarray] = []
        self.levels: list[np.ndarray] = []
        self.size = 0
        fits = width * np.log2(max(n, 2)) < 62
        self.space = n**width if fits else None
        if fits:
            self.weights = n ** np.arange(width - 1, -1, -1, dtype=np.int64)
        if self.space is not None and self.space <= 1 << 26:
            self.bitmap = np.zeros(self.space, dtype=bool)
        else:
            self.bitmap = None
            self.codes = np.zeros(0, dtype=np.int64)
            self.keys: set[bytes] = set()

    def add(self, tables: np.ndarray, level: int) -> None:
        if not len(tables):
            return
        if self.space is not None:
            codes = self.encode(tables)
            if self.bitmap is not None:
                cand = np.flatnonzero(~self.bitmap[codes])
                uniq, first = np.unique(codes[cand], return_index=True)
                self.bitmap[uniq] = True
                picked = cand[first]
            else:
                uniq, first = np.unique(codes, return_index=True)
                fresh = ~np.isin(uniq, self.codes, assume_unique=True)
                self.codes = np.union1d(self.codes, uniq[fresh])
                picked = first[fresh]
        else:
            packed = np.ascontiguousarray(tables.astype(np.uint8)).view(np.dtype((np.void, self.width))).ravel()
            uniq, first = np.unique(packed, return_index=True)
            picked = []
            for key, i in zip(uniq, first):
                b = bytes(key)
                if b not in self.keys:
                    self.keys.add(b)
                    picked.append(i)
            picked = np.array(picked, dtype=np.int64)
        if len(picked):
            self.blocks.append(tables[picked])
            self.levels.append(np.full(len(picked), level, dtype=np.int64))
            self.size += len(picked)

    def encode(self, tables: np.ndarray) -> np.ndarray:
        if self.space < 1 << 52:
            # float64 products are exact below 2**53 and go through BLAS
            return (tables.astype(np.float64) @ self.weights.astype(np.float64)).astype(np.int64)
        return tables @ self.weights

    def stacked(self) -> np.ndarray:
        if not self.blocks:
            return np.zeros((0, self.width), dtype=np.int64)
        if len(self.blocks) > 1:
            self.blocks = [np.concatenate(self.blocks)]
            self.levels = [np.concatenate(self.levels)]
        return self.blocks[0]

    @property
    def saturated(self) -> bool:
        return self.space is not None and self.size >= self.space


def _closure_at_arity(basics: list[Operation], n: int, r: int, guard: int):
    if n > 255:
        raise GuardError("carrier guard", f"carrier size {n} exceeds 255")
    width = n**r
    store = _TableStore(n, width)

    def add(tables, level):
        store.add(tables, level)
        if store.size > guard:
            raise GuardError(
                "clone blowup guard",
                f"arity {r} slice exceeds {guard} operations (reached {store.size})",
            )
        if store.saturated:
            raise _Saturated

    level = 0
    try:
        add(np.array([projection(i, r, n).table for i in range(r)], dtype=np.int64).reshape(r, width), 0)
        old_end, new_end = 0, store.size
        while new_end > old_end:
            level += 1
            stack = store.stacked()
            old, new, every = stack[:old_end], stack[old_end:new_end], stack[:new_end]
            for op in basics:
                k = op.arity
                if k == 0:
                    if level == 1:
                        add(np.full((1, width), op.table[0], dtype=np.int64), level)
                    continue
                for j in range(k):
                    parts = [old] * j + [new] + [every] * (k - 1 - j)
                    if any(len(p) == 0 for p in parts):
                        continue
                    for idx in _product_chunks(parts, n, width):
                        add(op.array[idx], level)
            old_end, new_end = new_end, store.size
    except _Saturated:
        pass
    tables = store.stacked()
    levels = store.levels[0] if store.levels else np.zeros(0, dtype=np.int64)
    order = np.lexsort(tables.T[::-1]) if len(tables) else np.zeros(0, dtype=np.int64)
    support = tuple(range(r))
    ops = tuple(Operation(support, n, tables[i].tolist()) for i in order)
    lv = {op: int(levels[i]) for op, i in zip(ops, order)}
    return ops, lv


def clone_upto(algebra: FiniteAlgebra, arity_cap: int, guard: int = DEFAULT_GUARD) -> CloneSlice:
    """All term operations of arity <= arity_cap, one canonical table each."""
    if arity_cap < 0:
        raise ValueError("arity_cap must be >= 0")
    n = algebra.carrier_size
    basics = [canonicalize(op) for op in algebra]
    per_arity: dict[int, tuple[Operation, ...]] = {}
    generation: dict[Operation, int] = {}
    # The unary slice decides the nullary part, so it is computed even at cap 0.
    unary, unary_levels = _closure_at_arity(basics, n, 1, guard)
    consts = sorted({op.table[0]: unary_levels[op] for op in unary if op.is_constant()}.items())
    nullary = tuple(Operation((), n, [c]) for c, _ in consts)
    per_arity[0] = nullary
    generation.update({op: lvl + 1 for op, (_, lvl) in zip(nullary, consts)})
    for r in range(1, arity_cap + 1):
        if r == 1:
            ops, lv = unary, unary_levels
        else:
            ops, lv = _closure_at_arity(basics, n, r, guard)
        per_arity[r] = ops
        generation.update(lv)
    return CloneSlice(algebra, arity_cap, per_arity, generation)


def _canonical_members(algebra: FiniteAlgebra) -> dict[int, set[Operation]]:
    out: dict[int, set[Operation]] = {}
    for op in algebra:
        c = canonicalize(op)
        out.setdefault(c.arity, set()).add(c)
    return out


def _has(members: dict[int, set[Operation]], op: Operation) -> bool:
    c = canonicalize(op)
    return c in members.get(c.arity, ())


def is_unital(algebra: FiniteAlgebra) -> bool:
    return _has(_canonical_members(algebra), projection(0, 1, algebra.carrier_size))


def is_empty_regular(algebra: FiniteAlgebra) -> bool:
    nullary_values = {op.table[0] for op in algebra if op.arity == 0}
    return all(op.table[0] in nullary_values for op in algebra if op.is_constant())


def is_substitution_stable(algebra: FiniteAlgebra, arity_cap: int) -> bool:
    """Every renaming ``op o sigma*`` into a support inside ``{0..cap-1}`` is
    again a member.  Members are compared up to order-preserving renaming
    of their supports."""
    members = _canonical_members(algebra)
    for op in algebra:
        for e in range(arity_cap + 1):
            target = tuple(range(e))
            for images in itertools.product(target, repeat=op.arity):
                sigma = dict(zip(op.support, images))
                if not _has(members, substitute(op, sigma, target)):
                    return False
    return True


def is_composition_stable(algebra: FiniteAlgebra, arity_cap: int) -> bool:
    members = _canonical_members(algebra)
    n = algebra.carrier_size
    for r in range(arity_cap + 1):
        inners = sorted(members.get(r, ()), key=lambda o: o.table)
        support = tuple(range(r))
        for outer in algebra:
            outer = canonicalize(outer)
            if outer.arity == 0:
                if not _has(members, constant(outer.table[0], r, n)):
                    return False
                continue
            for args in itertools.product(inners, repeat=outer.arity):
                if not _has(members, compose(outer, args, support)):
                    return False
    return True


def is_clone_upto(algebra: FiniteAlgebra, arity_cap: int) -> bool:
    return (
        is_unital(algebra)
        and is_empty_regular(algebra)
        and is_substitution_stable(algebra, arity_cap)
        and is_composition_stable(algebra, arity_cap)
    )


def empty_regularize(algebra: FiniteAlgebra) -> FiniteAlgebra:
    """Add a nullary operation for each constant value not yet available."""
    have = {op.table[0] for op in algebra if op.arity == 0}
    extra = {}
    for op in algebra:
        v = op.table[0]
        if op.is_constant() and v not in have:
            have.add(v)
            name = f"const_{v}"
            while name in algebra.operations or name in extra:
                name += "'"
            extra[name] = Operation((), algebra.carrier_size, [v])
    return algebra.with_operations(extra) if extra else algebra
