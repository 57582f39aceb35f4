import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import subgroup
from marczewski import (
    AlgebraError,
    check_prop_1_3,
    constant_pair_algebra,
    cyclic_group,
    generated_hull,
    gould_algebra,
    is_free,
    is_independent,
    is_matroid_type,
    is_strongly_independent,
    linear_algebra_f2,
    semidirect_group,
)
from marczewski.corpus import (
    check_group_axioms,
    conjugation_identities_hold,
    general_linear_f2,
    subgroup_hull,
)
from marczewski.hull import elements, mask


def _matrix(code, k):
    return tuple(tuple(code >> (i * k + j) & 1 for j in range(k)) for i in range(k))


def _matvec(M, v, k):
    vec = [v >> j & 1 for j in range(k)]
    return sum((sum(M[i][j] * vec[j] for j in range(k)) % 2) << i for i in range(k))


def _matmul(A, B):
    k = len(A)
    return tuple(tuple(sum(A[i][t] * B[t][j] for t in range(k)) % 2 for j in range(k)) for i in range(k))


class TestGroups:
    @pytest.mark.parametrize("n", [1, 2, 5, 12])
    def test_cyclic_axioms(self, n):
        G = cyclic_group(n)
        assert check_group_axioms(G)
        assert G.order == n and G.identity == 0

    def test_cyclic_rejects_zero(self):
        with pytest.raises(AlgebraError):
            cyclic_group(0)

    def test_trivial_group_hull(self):
        assert generated_hull(cyclic_group(1).algebra)(0) == 0b1

    def test_gl_sizes(self):
        assert [len(general_linear_f2(k)) for k in (1, 2, 3)] == [1, 6, 168]

    def test_orders(self):
        assert semidirect_group(2).order == 24
        assert semidirect_group(3).order == 1344

    def test_k_out_of_range(self):
        with pytest.raises(AlgebraError):
            semidirect_group(4)
        with pytest.raises(AlgebraError):
            check_prop_1_3(1)

    @pytest.mark.parametrize("k", [1, 2])
    def test_axioms_exhaustive(self, k):
        assert check_group_axioms(semidirect_group(k))

    def test_axioms_large_group(self):
        assert check_group_axioms(semidirect_group(3))

    def test_broken_table_rejected(self):
        G = cyclic_group(4)
        from dataclasses import replace
        from marczewski import FiniteAlgebra, Operation

        t = list(G.algebra["mul"].table)
        t[1 * 4 + 2], t[1 * 4 + 3] = t[1 * 4 + 3], t[1 * 4 + 2]
        ops = dict(G.algebra.operations, mul=Operation((0, 1), 4, t))
        bad = replace(G, algebra=FiniteAlgebra(4, ops))
        assert not check_group_axioms(bad)

    @pytest.mark.parametrize("k", [2, 3])
    def test_product_formula(self, k):
        G = semidirect_group(k)
        rng = np.random.default_rng(k)
        pairs = rng.integers(0, G.order, size=(400, 2))
        for a, b in pairs:
            (v, f), (u, g) = G.pair(int(a)), G.pair(int(b))
            F, Gm = _matrix(f, k), _matrix(g, k)
            w = v ^ _matvec(F, u, k)
            h = _matmul(F, Gm)
            code = sum(h[i][j] << (i * k + j) for i in range(k) for j in range(k))
            assert G.mul(int(a), int(b)) == G.element(w, code)

    def test_inverse_formula(self):
        G = semidirect_group(2)
        for a in range(G.order):
            v, f = G.pair(a)
            fi = next(c for c in general_linear_f2(2) if _matmul(_matrix(f, 2), _matrix(c, 2)) == ((1, 0), (0, 1)))
            assert G.inv(a) == G.element(_matvec(_matrix(fi, 2), v, 2), fi)

    def test_v_is_subgroup(self):
        G = semidirect_group(2)
        for v, u in itertools.product(range(4), repeat=2):
            assert G.mul(G.embed(v), G.embed(u)) == G.embed(v ^ u)

    def test_element_order_deterministic(self):
        G = semidirect_group(2)
        assert [G.pair(i)[0] for i in range(G.order)] == [i // 6 for i in range(24)]
        assert G.labels[0] == "(0,%d)" % general_linear_f2(2)[0]

    def test_conjugation_identities(self):
        assert conjugation_identities_hold(semidirect_group(2))

    def test_subgroup_hull_matches_oracle(self):
        G = semidirect_group(2)
        h, gen = subgroup_hull(G), generated_hull(G.algebra)
        mul = G.mul
        for b in itertools.chain([0], (mask(c) for r in (1, 2) for c in itertools.combinations(range(24), r))):
            got = h(b)
            assert set(elements(got)) == subgroup(mul, 24, elements(b), G.identity)
            assert got == gen(b)


class TestSemidirectMaximality:
    def test_k2(self):
        rep = check_prop_1_3(2)
        assert rep.deviations == []
        assert rep.group_order == 24 and rep.bases_checked == 3
        assert rep.extensions_checked == 3 * 22
        assert rep.summary() == "0 deviations over 24-element group (3 bases, 66 extensions)"

    @pytest.mark.slow
    def test_k3(self):
        rep = check_prop_1_3(3)
        assert rep.deviations == [] and rep.bases_checked == 28

    def test_swap_extension_dependent(self):
        G = semidirect_group(2)
        swap = 0b0110  # entries (0,1) and (1,0)
        g = G.element(0, swap)
        m = mask([G.embed(1), G.embed(2)])
        h = subgroup_hull(G)
        assert is_independent(h, m)
        v = not is_independent(h, m | 1 << g)
        assert v
        # the mechanism: g e1 g^-1 = e2, so e2 lies in the hull of the rest
        assert G.mul(G.mul(g, G.embed(1)), G.inv(g)) == G.embed(2)
        assert h(mask([G.embed(1), g])) >> G.embed(2) & 1

    def test_vector_extension_dependent(self):
        G = semidirect_group(2)
        h = subgroup_hull(G)
        m = mask([G.embed(1), G.embed(2)])
        assert not is_independent(h, m | 1 << G.embed(3))


class TestLinear:
    def test_k1_bases(self):
        h = generated_hull(linear_algebra_f2(1))
        assert [b for b in range(1, 4) if is_independent(h, b) and h(b) == 0b11] == [0b10]

    def test_k2_matroid(self):
        assert is_matroid_type(generated_hull(linear_algebra_f2(2)))

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_maximal_sets(self, k):
        h = generated_hull(linear_algebra_f2(k))
        n = 1 << k
        indep = [b for b in range(1 << n) if is_independent(h, b)]
        maximal = [b for b in indep if all(not is_independent(h, b | 1 << x) for x in range(n) if not b >> x & 1)]
        assert maximal
        for b in maximal:
            assert bin(b).count("1") == k and h(b) == (1 << n) - 1

    def test_k_guard(self):
        with pytest.raises(AlgebraError):
            linear_algebra_f2(4)


class TestExamples:
    def test_gould_every_subset_closed(self):
        h = generated_hull(gould_algebra())
        assert all(h(b) == b for b in range(4))

    def test_gould_independent_not_free(self):
        alg = gould_algebra()
        assert is_independent(generated_hull(alg), 0b11)
        assert not is_free(alg, 0b11)

    def test_constant_pair_definition(self):
        alg = constant_pair_algebra(3)
        assert alg["alpha"].arity == 1 and alg["alpha"].table == (0, 0, 0)
        assert alg["beta"].arity == 0 and alg["beta"].table == (0,)
        with pytest.raises(AlgebraError):
            constant_pair_algebra(1)

    def test_constant_pair_non_monotone(self):
        both = constant_pair_algebra(3)
        only_alpha = both.restrict(["alpha"])
        b = mask([1, 2])
        assert is_strongly_independent(generated_hull(both), b)
        assert not is_strongly_independent(generated_hull(only_alpha), b)

    def test_constant_pair_subsets_with_constant(self):
        # any set containing the constant meets the hull of the empty set
        alg = constant_pair_algebra(2)
        assert not is_strongly_independent(generated_hull(alg), 0b11)

    @given(st.integers(2, 5), st.data())
    def test_constant_pair_constant_free_subsets(self, n, data):
        b = data.draw(st.integers(1, (1 << n) - 1).filter(lambda x: not x & 1))
        both = constant_pair_algebra(n)
        assert is_strongly_independent(generated_hull(both), b)
        assert bool(is_strongly_independent(generated_hull(both.restrict(["alpha"])), b)) == (bin(b).count("1") < 2)
