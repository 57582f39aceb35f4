"""Concrete algebras and counterexamples.

Groups are algebras with operations ``mul`` (binary), ``inv`` (unary) and
``e`` (nullary).  ``semidirect_group(k)`` is ``F_2^k x| GL(k, 2)`` with
product ``(v, f)(u, g) = (v + f(u), f o g)``: matrices are k*k bit codes,
entry (i, j) at bit ``i*k + j``, enumerated in increasing code order;
element ``(v, f)`` has index ``v * |GL| + index(f)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import AlgebraError, FiniteAlgebra, Operation, constant, from_function
from .hull import HullOperator, elements, mask
from .independence import is_independent

__all__ = [
    "GroupPresentation",
    "cyclic_group",
    "linear_algebra_f2",
    "general_linear_f2",
    "semidirect_group",
    "SemidirectGroup",
    "subgroup_hull",
    "check_group_axioms",
    "conjugation_identities_hold",
    "Prop13Report",
    "check_prop_1_3",
    "gould_algebra",
    "constant_pair_algebra",
]


@dataclass(frozen=True, eq=False)
class GroupPresentation:
    algebra: FiniteAlgebra
    labels: tuple[str, ...]

    @property
    def order(self) -> int:
        return self.algebra.carrier_size

    @property
    def identity(self) -> int:
        return self.algebra["e"].table[0]

    @property
    def mul_table(self) -> np.ndarray:
        n = self.order
        return self.algebra["mul"].array.reshape(n, n)

    def mul(self, a: int, b: int) -> int:
        return self.algebra["mul"].table[a * self.order + b]

    def inv(self, a: int) -> int:
        return self.algebra["inv"].table[a]


def _group(n: int, mul_table, inv_table, identity: int, labels) -> GroupPresentation:
    alg = FiniteAlgebra(
        n,
        {
            "mul": Operation((0, 1), n, list(mul_table)),
            "inv": Operation((0,), n, list(inv_table)),
            "e": Operation((), n, [identity]),
        },
    )
    return GroupPresentation(alg, tuple(labels))


def cyclic_group(n: int) -> GroupPresentation:
    """Z_n under addition."""
    if n < 1:
        raise AlgebraError("n must be >= 1")
    mul = [(a + b) % n for a in range(n) for b in range(n)]
    return _group(n, mul, [(-a) % n for a in range(n)], 0, [str(a) for a in range(n)])


def linear_algebra_f2(k: int) -> FiniteAlgebra:
    """F_2^k with vector addition and zero; vector v has bit i as coordinate i."""
    if not 0 <= k <= 3:
        raise AlgebraError("k must be in [0, 3]")
    n = 1 << k
    return FiniteAlgebra(n, {"add": from_function(n, 2, lambda a, b: a ^ b), "zero": constant(0, 0, n)})


def _apply(code: int, v: int, k: int) -> int:
    out = 0
    for i in range(k):
        row = (code >> (i * k)) & ((1 << k) - 1)
        out |= (bin(row & v).count("1") & 1) << i
    return out


def _from_columns(cols: list[int], k: int) -> int:
    code = 0
    for j, col in enumerate(cols):
        for i in range(k):
            if col >> i & 1:
                code |= 1 << (i * k + j)
    return code


def general_linear_f2(k: int) -> list[int]:
    """Codes of the invertible k*k matrices over F_2, increasing."""
    out = []
    for code in range(1 << (k * k)):
        images = {_apply(code, v, k) for v in range(1 << k)}
        if len(images) == 1 << k:
            out.append(code)
    return out


@dataclass(frozen=True, eq=False)
class SemidirectGroup(GroupPresentation):
    k: int = 0
    matrices: tuple[int, ...] = field(default=())

    def pair(self, index: int) -> tuple[int, int]:
        """(vector, matrix code) of an element."""
        v, mi = divmod(index, len(self.matrices))
        return v, self.matrices[mi]

    def element(self, v: int, code: int) -> int:
        return v * len(self.matrices) + self.matrices.index(code)

    def embed(self, v: int) -> int:
        return self.element(v, _identity_code(self.k))


def _identity_code(k: int) -> int:
    return _from_columns([1 << j for j in range(k)], k)


def semidirect_group(k: int) -> SemidirectGroup:
    if k not in (1, 2, 3):
        raise AlgebraError("k must be 1, 2 or 3")
    gl = general_linear_f2(k)
    pos = {c: i for i, c in enumerate(gl)}
    nv, ng = 1 << k, len(gl)
    n = nv * ng
    act = [[_apply(c, v, k) for v in range(nv)] for c in gl]
    comp = [[pos[_from_columns([act[fi][act[gi][1 << j]] for j in range(k)], k)] for gi in range(ng)]
            for fi in range(ng)]
    inv_m = [next(gi for gi in range(ng) if comp[fi][gi] == pos[_identity_code(k)]) for fi in range(ng)]
    mul = []
    for a in range(n):
        v, fi = divmod(a, ng)
        for b in range(n):
            u, gi = divmod(b, ng)
            mul.append((v ^ act[fi][u]) * ng + comp[fi][gi])
    inv = [act[inv_m[fi]][v] * ng + inv_m[fi] for v, fi in (divmod(a, ng) for a in range(n))]
    identity = pos[_identity_code(k)]
    labels = [f"({v},{gl[fi]})" for v in range(nv) for fi in range(ng)]
    base = _group(n, mul, inv, identity, labels)
    return SemidirectGroup(base.algebra, base.labels, k, tuple(gl))


def subgroup_hull(group: GroupPresentation) -> HullOperator:
    """Subgroup generation by breadth-first right multiplication; in a finite
    group this agrees with the generated subalgebra."""
    table = group.mul_table
    n = group.order
    e = group.identity

    def hull(b: int) -> int:
        gens = np.asarray(elements(b), dtype=np.int64)
        seen = np.zeros(n, dtype=bool)
        seen[e] = True
        frontier = np.array([e], dtype=np.int64)
        while len(frontier) and len(gens):
            nxt = np.unique(table[frontier][:, gens])
            nxt = nxt[~seen[nxt]]
            seen[nxt] = True
            frontier = nxt
        return mask(np.flatnonzero(seen).tolist())

    return HullOperator(n, hull, "subgroup")


def check_group_axioms(group: GroupPresentation, exhaustive_up_to: int = 256) -> bool:
    """Identity, inverses and associativity.

    Associativity is tested on all triples up to ``exhaustive_up_to``
    elements.  Above that, Light's test is used: ``(x g) y == x (g y)`` for
    all x, y and g in a generating set, which implies associativity.
    """
    t = group.mul_table
    n = group.order
    e = group.identity
    ar = np.arange(n)
    if not (np.array_equal(t[e], ar) and np.array_equal(t[:, e], ar)):
        return False
    inv = np.asarray(group.algebra["inv"].table)
    if not (np.all(t[ar, inv] == e) and np.all(t[inv, ar] == e)):
        return False
    if n <= exhaustive_up_to:
        middles = range(n)
    else:
        h = subgroup_hull(group)
        gens = mask([e])
        while h(gens) != h.full:
            gens |= 1 << next(x for x in range(n) if not h(gens) >> x & 1)
        middles = elements(gens)
    for g in middles:
        if not np.array_equal(t[t[:, g]], t[:, t[g]]):
            return False
    return True


def conjugation_identities_hold(group: SemidirectGroup) -> bool:
    """g v g^-1 = f(v) and g^-1 v g = f^-1(v) for every g = (u, f), v in V."""
    k = group.k
    for g in range(group.order):
        _, code = group.pair(g)
        gi = group.inv(g)
        _, icode = group.pair(gi)
        for v in range(1 << k):
            ev = group.embed(v)
            if group.mul(group.mul(g, ev), gi) != group.embed(_apply(code, v, k)):
                return False
            if group.mul(group.mul(gi, ev), g) != group.embed(_apply(icode, v, k)):
                return False
    return True


@dataclass
class Prop13Report:
    k: int
    group_order: int
    bases_checked: int = 0
    extensions_checked: int = 0
    deviations: list[tuple] = field(default_factory=list)

    def summary(self) -> str:
        return (
            f"{len(self.deviations)} deviations over {self.group_order}-element group "
            f"({self.bases_checked} bases, {self.extensions_checked} extensions)"
        )


def _bases(k: int) -> list[tuple[int, ...]]:
    out = []
    for combo in itertools.combinations(range(1, 1 << k), k):
        span = {0}
        for v in combo:
            span |= {s ^ v for s in span}
        if len(span) == 1 << k:
            out.append(combo)
    return out


def check_prop_1_3(k: int) -> Prop13Report:
    """Every basis M of V = F_2^k is independent in the semidirect group G,
    and M plus any further element of G is dependent."""
    if k not in (2, 3):
        raise AlgebraError("k must be 2 or 3")
    G = semidirect_group(k)
    h = subgroup_hull(G)
    rep = Prop13Report(k, G.order)
    for basis in _bases(k):
        m = mask(G.embed(v) for v in basis)
        rep.bases_checked += 1
        if not is_independent(h, m):
            rep.deviations.append(("basis not independent in G", basis))
            continue
        for g in range(G.order):
            if m >> g & 1:
                continue
            rep.extensions_checked += 1
            if is_independent(h, m | 1 << g):
                rep.deviations.append(("extension stays independent", basis, G.labels[g]))
    return rep


def gould_algebra() -> FiniteAlgebra:
    """{0, 1} with multiplication."""
    return FiniteAlgebra(2, {"mul": from_function(2, 2, lambda a, b: a * b)})


def constant_pair_algebra(n: int = 2) -> FiniteAlgebra:
    """A unary constant ``alpha`` and a nullary ``beta``, both with value 0."""
    if n < 2:
        raise AlgebraError("n must be >= 2")
    return FiniteAlgebra(n, {"alpha": constant(0, 1, n), "beta": constant(0, 0, n)})
