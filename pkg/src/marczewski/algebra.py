"""Finite carriers, operation tables, evaluation, substitution and composition.

An operation is stored extensionally: a strictly increasing support
``s_0 < s_1 < ... < s_{k-1}`` together with a table of length ``n**k``.
The table index of a tuple ``t`` is ``sum(t[s_j] * n**(k-1-j))``, so the
first support coordinate is the most significant digit.  Enumerating
``itertools.product(range(n), repeat=k)`` visits the table in index order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

__all__ = [
    "AlgebraError",
    "GuardError",
    "Operation",
    "FiniteAlgebra",
    "tuple_index",
    "all_tuples",
    "evaluate",
    "substitute",
    "compose",
    "canonicalize",
    "projection",
    "constant",
    "from_function",
]


class AlgebraError(ValueError):
    """Raised on malformed operations, algebras or arguments."""


class GuardError(AlgebraError):
    """Raised when an exhaustive computation would exceed a size guard."""

    def __init__(self, guard: str, message: str):
        super().__init__(f"{guard}: {message}")
        self.guard = guard


def tuple_index(values: Sequence[int], n: int) -> int:
    idx = 0
    for v in values:
        idx = idx * n + v
    return idx


def all_tuples(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """All k-tuples over range(n), in table-index order."""
    return itertools.product(range(n), repeat=k)


@dataclass(frozen=True)
class Operation:
    support: tuple[int, ...]
    carrier_size: int
    table: tuple[int, ...]

    def __post_init__(self):
        support = tuple(int(s) for s in self.support)
        table = tuple(int(v) for v in self.table)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "table", table)
        n = self.carrier_size
        if n < 1:
            raise AlgebraError(f"carrier size must be >= 1, got {n}")
        if any(s < 0 for s in support) or any(a >= b for a, b in zip(support, support[1:])):
            raise AlgebraError(f"support must be strictly increasing naturals, got {support}")
        if len(table) != n ** len(support):
            raise AlgebraError(
                f"table length {len(table)} != {n}**{len(support)} for support {support}"
            )
        bad = [v for v in table if not 0 <= v < n]
        if bad:
            raise AlgebraError(f"table entry {bad[0]} outside carrier of size {n}")

    @property
    def arity(self) -> int:
        return len(self.support)

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.table, dtype=np.int64)

    def is_constant(self) -> bool:
        return len(set(self.table)) == 1

    def __call__(self, *args: int) -> int:
        return evaluate(self, args)

    def __repr__(self) -> str:
        return f"Operation(support={self.support}, n={self.carrier_size}, table={list(self.table)})"


def _assignment(op: Operation, t) -> tuple[int, ...]:
    if isinstance(t, Mapping):
        if set(t) != set(op.support):
            raise AlgebraError("tuple/support mismatch")
        values = tuple(t[s] for s in op.support)
    else:
        values = tuple(t)
        if len(values) != op.arity:
            raise AlgebraError("tuple/support mismatch")
    for v in values:
        if not 0 <= v < op.carrier_size:
            raise AlgebraError(f"element {v} outside carrier of size {op.carrier_size}")
    return values


def evaluate(op: Operation, t) -> int:
    """Evaluate ``op`` on ``t``: a mapping support-coordinate -> element, or a
    sequence listing the values in support order."""
    return op.table[tuple_index(_assignment(op, t), op.carrier_size)]


def substitute(op: Operation, sigma: Mapping[int, int], target: Iterable[int] | None = None) -> Operation:
    """Return ``op o sigma*``, the operation on support ``target`` sending
    ``f`` to ``op(f o sigma)``.  ``target`` defaults to the image of sigma."""
    if set(sigma) != set(op.support):
        raise AlgebraError(f"sigma must be total on the support {op.support}")
    if target is None:
        target = sigma.values()
    target = tuple(sorted(set(target)))
    pos = {e: i for i, e in enumerate(target)}
    if any(v not in pos for v in sigma.values()):
        raise AlgebraError(f"sigma takes a value outside the target support {target}")
    n = op.carrier_size
    picks = [pos[sigma[s]] for s in op.support]
    table = [op.table[tuple_index([f[i] for i in picks], n)] for f in all_tuples(n, len(target))]
    return Operation(target, n, table)


def compose(outer: Operation, inners: Sequence[Operation], support: Iterable[int] | None = None) -> Operation:
    """Return ``outer o (inner_i)_i``.  The inners must share one support
    ``S``, which becomes the support of the result.  When ``outer`` is
    nullary there are no inners and ``support`` gives ``S`` (default empty)."""
    inners = list(inners)
    if len(inners) != outer.arity:
        raise AlgebraError(f"outer has arity {outer.arity} but {len(inners)} inners were given")
    n = outer.carrier_size
    if any(g.carrier_size != n for g in inners):
        raise AlgebraError("all operations must share the carrier size")
    supports = {g.support for g in inners}
    if support is not None:
        supports.add(tuple(sorted(set(support))))
    if len(supports) > 1:
        raise AlgebraError("inners must share support")
    s = supports.pop() if supports else ()
    size = n ** len(s)
    if not inners:
        return Operation(s, n, [outer.table[0]] * size)
    idx = np.zeros(size, dtype=np.int64)
    for g in inners:
        idx = idx * n + g.array
    return Operation(s, n, outer.array[idx].tolist())


def canonicalize(op: Operation) -> Operation:
    """Rename the support to ``{0..k-1}`` order-preservingly.  Dummy
    coordinates are kept, and the table is unchanged by construction."""
    canon = tuple(range(op.arity))
    if op.support == canon:
        return op
    return Operation(canon, op.carrier_size, op.table)


def projection(i: int, arity: int, n: int) -> Operation:
    """The operation on support ``{0..arity-1}`` returning coordinate ``i``."""
    if not 0 <= i < arity:
        raise AlgebraError(f"projection index {i} outside arity {arity}")
    return Operation(tuple(range(arity)), n, [t[i] for t in all_tuples(n, arity)])


def constant(value: int, arity: int, n: int) -> Operation:
    return Operation(tuple(range(arity)), n, [value] * n**arity)


def from_function(n: int, arity: int, fn) -> Operation:
    return Operation(tuple(range(arity)), n, [fn(*t) for t in all_tuples(n, arity)])


@dataclass(frozen=True)
class FiniteAlgebra:
    """A carrier ``range(carrier_size)`` with a named family of operations."""

    carrier_size: int
    operations: Mapping[str, Operation] = field(default_factory=dict)

    def __post_init__(self):
        if self.carrier_size < 1:
            raise AlgebraError(f"carrier size must be >= 1, got {self.carrier_size}")
        if not isinstance(self.operations, Mapping):
            ops = list(self.operations)
            names = [name for name, _ in ops]
            dupes = {x for x in names if names.count(x) > 1}
            if dupes:
                raise AlgebraError(f"duplicate operation names: {sorted(dupes)}")
            object.__setattr__(self, "operations", dict(ops))
        else:
            object.__setattr__(self, "operations", dict(self.operations))
        for name, op in self.operations.items():
            if op.carrier_size != self.carrier_size:
                raise AlgebraError(
                    f"operation {name!r} has carrier {op.carrier_size}, algebra has {self.carrier_size}"
                )

    def __hash__(self):
        return hash((self.carrier_size, tuple(self.operations.items())))

    def __iter__(self):
        return iter(self.operations.values())

    def __len__(self):
        return len(self.operations)

    def __getitem__(self, name: str) -> Operation:
        return self.operations[name]

    @property
    def max_arity(self) -> int:
        return max((op.arity for op in self), default=0)

    def restrict(self, names: Iterable[str]) -> "FiniteAlgebra":
        """The algebra on the same carrier with only the named operations."""
        return FiniteAlgebra(self.carrier_size, {k: self.operations[k] for k in names})

    def with_operations(self, extra: Mapping[str, Operation]) -> "FiniteAlgebra":
        ops = dict(self.operations)
        for name in extra:
            if name in ops:
                raise AlgebraError(f"duplicate operation name {name!r}")
        ops.update(extra)
        return FiniteAlgebra(self.carrier_size, ops)
