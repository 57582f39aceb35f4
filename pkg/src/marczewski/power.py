"""Power algebras A^X for finite X = range(m), and the Boolean clone.

Elements of A^X are tuples of length m.  Lifted operations act on them
pointwise, so A^X is never enumerated unless :meth:`PowerAlgebra.materialize`
is asked to do so under a size guard.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import AlgebraError, FiniteAlgebra, GuardError, Operation, all_tuples, tuple_index

__all__ = [
    "PowerElement",
    "LiftedOperation",
    "PowerAlgebra",
    "lift",
    "delta",
    "boolean_clone",
    "MATERIALIZE_GUARD",
]

PowerElement = tuple[int, ...]
MATERIALIZE_GUARD = 4096


@dataclass(frozen=True)
class LiftedOperation:
    op: Operation
    x_size: int

    @property
    def arity(self) -> int:
        return self.op.arity

    def __call__(self, *fs: Sequence[int]) -> PowerElement:
        if len(fs) != self.op.arity:
            raise AlgebraError(f"expected {self.op.arity} arguments, got {len(fs)}")
        for f in fs:
            if len(f) != self.x_size:
                raise AlgebraError(f"power element of length {len(f)}, expected {self.x_size}")
        n = self.op.carrier_size
        idx = np.zeros(self.x_size, dtype=np.int64)
        for f in fs:
            idx = idx * n + np.asarray(f, dtype=np.int64)
        return tuple(self.op.array[idx].tolist())


def lift(op: Operation, x_size: int) -> LiftedOperation:
    """The pointwise operation ``f -> (x -> op(f_0(x), ..., f_{k-1}(x)))``."""
    if x_size < 1:
        raise AlgebraError("x_size must be >= 1")
    return LiftedOperation(op, x_size)


def delta(x: int, f: Sequence[int]) -> int:
    """Coordinate projection ``f -> f(x)``."""
    if not 0 <= x < len(f):
        raise AlgebraError(f"coordinate {x} outside X of size {len(f)}")
    return f[x]


@dataclass(frozen=True)
class PowerAlgebra:
    base: FiniteAlgebra
    x_size: int

    def __post_init__(self):
        if self.x_size < 1:
            raise AlgebraError("x_size must be >= 1")

    @property
    def operations(self) -> dict[str, LiftedOperation]:
        return {name: lift(op, self.x_size) for name, op in self.base.operations.items()}

    @property
    def carrier_size(self) -> int:
        return self.base.carrier_size**self.x_size

    def encode(self, f: Sequence[int]) -> int:
        return tuple_index(f, self.base.carrier_size)

    def decode(self, code: int) -> PowerElement:
        n = self.base.carrier_size
        out = []
        for _ in range(self.x_size):
            code, v = divmod(code, n)
            out.append(v)
        return tuple(reversed(out))

    def materialize(self, guard: int = MATERIALIZE_GUARD) -> FiniteAlgebra:
        """The power algebra as a flat algebra on ``range(n**m)``, elements
        coded with coordinate 0 most significant."""
        size = self.carrier_size
        if size > guard:
            raise GuardError("materialize guard", f"|A|^|X| = {size} exceeds {guard}")
        points = list(all_tuples(self.base.carrier_size, self.x_size))
        ops = {}
        for name, lifted in self.operations.items():
            k = lifted.arity
            if size**k > guard * guard:
                raise GuardError("materialize guard", f"table of {name!r} would have {size**k} entries")
            table = [self.encode(lifted(*(points[c] for c in args))) for args in all_tuples(size, k)]
            ops[name] = Operation(tuple(range(k)), size, table)
        return FiniteAlgebra(size, ops)


def boolean_clone(arity_cap: int, guard: int = 4) -> FiniteAlgebra:
    """Carrier {0, 1} with every operation of arity <= arity_cap."""
    if arity_cap > guard:
        raise GuardError("boolean clone guard", f"arity cap {arity_cap} > {guard}")
    ops = {}
    for r in range(arity_cap + 1):
        width = 2**r
        for code in range(2**width):
            table = [(code >> (width - 1 - j)) & 1 for j in range(width)]
            ops[f"b{r}_{code}"] = Operation(tuple(range(r)), 2, table)
    return FiniteAlgebra(2, ops)

