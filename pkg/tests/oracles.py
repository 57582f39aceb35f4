"""Slow reference implementations used only by the tests.

They share no code with the package beyond the Operation container.
"""

from __future__ import annotations

import itertools


def term_functions(n, basics, r, depth=6):
    """Value vectors (over all r-tuples, first coordinate most significant)
    of the r-ary terms of depth <= ``depth`` over ``basics``.

    ``basics`` is a list of (arity, table) pairs.  Stops early at a fixpoint.
    """
    points = list(itertools.product(range(n), repeat=r))
    funcs = {tuple(p[i] for p in points) for i in range(r)}
    funcs |= {(table[0],) * len(points) for arity, table in basics if arity == 0}
    for _ in range(depth):
        grown = set(funcs)
        for arity, table in basics:
            if arity == 0:
                continue
            for args in itertools.product(sorted(funcs), repeat=arity):
                vals = []
                for col in zip(*args):
                    idx = 0
                    for v in col:
                        idx = idx * n + v
                    vals.append(table[idx])
                grown.add(tuple(vals))
        if grown == funcs:
            break
        funcs = grown
    return funcs


def term_constants(n, basics, depth=6):
    """Values of constant terms: nullary basics and constant unary terms."""
    unary = term_functions(n, basics, 1, depth)
    out = {f[0] for f in unary if len(set(f)) == 1}
    return out | {table[0] for arity, table in basics if arity == 0}


def subalgebra(n, basics, subset):
    """Smallest set containing ``subset`` closed under every basic operation."""
    s = set(subset)
    while True:
        new = set(s)
        for arity, table in basics:
            for args in itertools.product(sorted(s), repeat=arity):
                idx = 0
                for v in args:
                    idx = idx * n + v
                new.add(table[idx])
        if new == s:
            return s
        s = new


def subgroup(mul, n, gens, e):
    s = {e}
    while True:
        new = s | {mul(a, b) for a in s for b in gens} | set(gens)
        if new == s:
            return s
        s = new


def strongly_independent(hull, B):
    """Literal definition over all pairs of subsets; hull maps frozensets."""
    B = frozenset(B)
    if B & hull(frozenset()):
        return False
    subs = [frozenset(c) for r in range(len(B) + 1) for c in itertools.combinations(sorted(B), r)]
    return all(hull(a) & hull(b) == hull(a & b) for a in subs for b in subs)


def independent(hull, B):
    B = frozenset(B)
    return all(b not in hull(B - {b}) for b in B)


def free_by_homomorphisms(n, basics, B):
    """Every map B -> A extends to a homomorphism of the generated
    subalgebra (definition of a free set, checked by building the
    extension along terms)."""
    B = sorted(B)
    k = len(B)
    if not k:
        return True
    points = list(itertools.product(range(n), repeat=k))
    col = points.index(tuple(B))
    terms = term_functions(n, basics, k, depth=12)
    for f in itertools.product(range(n), repeat=k):
        fcol = points.index(f)
        image = {}
        for t in terms:
            if image.setdefault(t[col], t[fcol]) != t[fcol]:
                return False
    return True
