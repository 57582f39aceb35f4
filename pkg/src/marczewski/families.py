"""Independent families of subsets of a finite base set.

Members are int bitmasks over ``range(base_size)``.  A family is
independent when every full Boolean combination of its members (each
member taken either as is or complemented) is non-empty.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .algebra import AlgebraError, GuardError
from .clone import CloneSlice, clone_upto
from .freeset import verify_free_in_power
from .hull import elements, mask
from .independence import Verdict
from .power import PowerElement, boolean_clone

__all__ = [
    "SubsetFamily",
    "is_independent_family",
    "is_independent_disjoint_form",
    "diagonal_surjective",
    "coordinate_family",
    "lex_subsets",
    "hausdorff_family",
    "family_to_functions",
    "functions_to_family",
    "boolean_slice",
    "check_prop_4_1",
    "format_family",
    "parse_family",
]

FAMILY_GUARD = 20


@dataclass(frozen=True)
class SubsetFamily:
    base_size: int
    members: tuple[int, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        full = (1 << self.base_size) - 1
        for m in members:
            if m & ~full:
                raise AlgebraError(f"member {elements(m)} not inside base of size {self.base_size}")
        if len(set(members)) != len(members):
            raise AlgebraError("family members must be pairwise distinct")
        if self.labels is not None and len(self.labels) != len(members):
            raise AlgebraError("one label per member required")

    @classmethod
    def from_sets(cls, base_size: int, sets: Iterable[Iterable[int]], labels=None) -> "SubsetFamily":
        return cls(base_size, tuple(mask(s) for s in sets), labels)

    def __len__(self):
        return len(self.members)

    def as_sets(self) -> list[frozenset[int]]:
        return [frozenset(elements(m)) for m in self.members]


def _signature(fam: SubsetFamily, point: int) -> int:
    return sum(1 << i for i, m in enumerate(fam.members) if m >> point & 1)


def is_independent_family(fam: SubsetFamily) -> Verdict:
    """Witness on failure: the empty sign pattern, as a bitmask over member
    indices (bit i set means "inside member i").  Patterns are tried from
    "inside every member" downwards."""
    k = len(fam)
    if k > FAMILY_GUARD:
        raise GuardError("family size guard", f"{k} members exceed {FAMILY_GUARD}")
    seen = {_signature(fam, x) for x in range(fam.base_size)}
    for pattern in reversed(range(1 << k)):
        if pattern not in seen:
            return Verdict(False, "independent-family", pattern)
    return Verdict(True, "independent-family")


def is_independent_disjoint_form(fam: SubsetFamily) -> bool:
    """Definition by disjoint subfamilies: for disjoint index sets I, J the
    set ``(intersection of I) minus (union of J)`` is non-empty."""
    full = (1 << fam.base_size) - 1
    k = len(fam)
    for signs in itertools.product((0, 1, 2), repeat=k):
        acc = full
        for m, s in zip(fam.members, signs):
            if s == 1:
                acc &= m
            elif s == 2:
                acc &= full & ~m
        if not acc:
            return False
    return True


def diagonal_surjective(functions: Sequence[Sequence[int]]) -> bool:
    """Every sub-list of pairwise distinct 0/1 functions has a surjective
    diagonal product onto 2**len."""
    distinct = list(dict.fromkeys(tuple(f) for f in functions))
    if not distinct:
        return True
    width = len(distinct[0])
    for r in range(1, len(distinct) + 1):
        for combo in itertools.combinations(distinct, r):
            if len({tuple(f[x] for f in combo) for x in range(width)}) != 2**r:
                return False
    return True


def coordinate_family(m: int) -> SubsetFamily:
    """Base ``range(2**m)``; member i holds the points whose bit i is 1."""
    if not 0 <= m <= FAMILY_GUARD:
        raise GuardError("family size guard", f"m={m} outside [0, {FAMILY_GUARD}]")
    base = 1 << m
    return SubsetFamily(base, tuple(mask(p for p in range(base) if p >> i & 1) for i in range(m)))


def lex_subsets(items: Sequence[int]) -> list[tuple[int, ...]]:
    """All subsets of ``items`` as sorted tuples, in lexicographic order."""
    items = sorted(items)
    out = [c for r in range(len(items) + 1) for c in itertools.combinations(items, r)]
    return sorted(out)


@lru_cache(maxsize=None)
def _hausdorff_points(n: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    points = []
    for size in range(n + 1):
        for F in itertools.combinations(range(n), size):
            for code in range(2 ** (2**size)):
                points.append((F, code))
    return tuple(points)


def hausdorff_family(n: int) -> SubsetFamily:
    """The finite skeleton of the classical independent family.

    Points are pairs ``(F, G)`` with F a subset of ``range(n)`` and G a set
    of subsets of F.  Points are ordered by ``|F|``, then F
    lexicographically, then the bitmask of G, where bit j stands for the
    j-th subset of F in lexicographic order.  For each subset A of
    ``range(n)``, taken in lexicographic order, the member ``U_A`` holds
    the points with ``A & F`` in G.
    """
    if not 0 <= n <= 3:
        raise GuardError("hausdorff guard", f"n={n} outside [0, 3]")
    points = _hausdorff_points(n)
    members, labels = [], []
    for A in lex_subsets(range(n)):
        a = set(A)
        bits = 0
        for x, (F, code) in enumerate(points):
            inter = tuple(sorted(a.intersection(F)))
            if code >> lex_subsets(F).index(inter) & 1:
                bits |= 1 << x
        members.append(bits)
        labels.append("{" + ",".join(map(str, A)) + "}")
    return SubsetFamily(len(points), tuple(members), tuple(labels))


def family_to_functions(fam: SubsetFamily) -> list[PowerElement]:
    """Characteristic functions, one 0/1 tuple of length base_size per member."""
    return [tuple(m >> x & 1 for x in range(fam.base_size)) for m in fam.members]


def functions_to_family(functions: Sequence[Sequence[int]]) -> SubsetFamily:
    functions = [tuple(f) for f in functions]
    if any(v not in (0, 1) for f in functions for v in f):
        raise AlgebraError("characteristic functions must take values in {0, 1}")
    width = len(functions[0]) if functions else 0
    if any(len(f) != width for f in functions):
        raise AlgebraError("all functions must have the same length")
    return SubsetFamily(width, tuple(mask(x for x, v in enumerate(f) if v) for f in functions))


@lru_cache(maxsize=None)
def boolean_slice(cap: int) -> CloneSlice:
    """All Boolean operations of arity <= cap, as a clone slice."""
    return clone_upto(boolean_clone(cap), cap)


def check_prop_4_1(fam: SubsetFamily) -> bool:
    """Set independence of the family agrees with freeness of its
    characteristic functions in the lifted Boolean clone.  A False return
    points at a bug, not at a property of the family."""
    if len(fam) > 3 or fam.base_size > 8:
        raise GuardError("family guard", "needs at most 3 members on a base of at most 8 points")
    independent = bool(is_independent_family(fam))
    free = bool(verify_free_in_power(boolean_slice(len(fam)), family_to_functions(fam), fam.base_size))
    return independent == free


def format_family(fam: SubsetFamily) -> str:
    return "".join("".join(str(m >> x & 1) for x in range(fam.base_size)) + "\n" for m in fam.members)


def parse_family(text: str) -> SubsetFamily:
    rows = []
    for no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if set(line) - {"0", "1"}:
            raise AlgebraError(f"line {no}: members are 0/1 strings")
        rows.append([int(c) for c in line])
    if not rows:
        return SubsetFamily(0, ())
    if len({len(r) for r in rows}) != 1:
        raise AlgebraError("all member lines must have the same length")
    return functions_to_family(rows)
