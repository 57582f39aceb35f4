import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import algebras
from oracles import free_by_homomorphisms, independent, strongly_independent
from marczewski import (
    AlgebraError,
    FiniteAlgebra,
    GuardError,
    Operation,
    algebra_hull,
    boolean_clone,
    clone_upto,
    constant_pair_algebra,
    cyclic_group,
    extend_to_maximal_independent,
    from_function,
    generated_hull,
    gould_algebra,
    is_free,
    is_free_clone,
    is_independence_algebra,
    is_independent,
    is_matroid_type,
    is_strongly_independent,
    linear_algebra_f2,
    term_closure_hull,
)
from marczewski.hull import HullOperator, elements, mask
from marczewski.independence import (
    CloneCollision,
    DependentPoint,
    FreenessViolation,
    HullMismatch,
    MeetsEmptyHull,
    recheck,
)

Z12 = generated_hull(cyclic_group(12).algebra)
AND = FiniteAlgebra(2, {"and": from_function(2, 2, lambda a, b: a & b)})


def _frozen(h):
    return lambda s: frozenset(elements(h(mask(s))))


class TestIndependent:
    def test_z12_two_three(self):
        v = is_independent(Z12, mask([2, 3]))
        assert v and v.witness is None

    def test_empty(self):
        assert is_independent(Z12, 0)

    def test_z12_two_four(self):
        v = is_independent(Z12, mask([2, 4]))
        assert not v
        assert v.witness == DependentPoint(4)
        assert recheck(v, hull=Z12, subset=mask([2, 4]))


class TestStronglyIndependent:
    def test_z12_two_three(self):
        v = is_strongly_independent(Z12, mask([2, 3]))
        assert not v
        assert v.witness == HullMismatch(frozenset({2}), frozenset({3}))
        assert Z12.of([2]) & Z12.of([3]) == {0, 6}
        assert recheck(v, hull=Z12, subset=mask([2, 3]))

    def test_standard_basis_of_f2_cubed(self):
        h = generated_hull(linear_algebra_f2(3))
        assert is_strongly_independent(h, mask([1, 2, 4]))

    def test_empty(self):
        assert is_strongly_independent(Z12, 0)

    def test_meets_empty_hull(self):
        v = is_strongly_independent(Z12, mask([0, 5]))
        assert v.witness == MeetsEmptyHull(0)
        assert recheck(v, hull=Z12, subset=mask([0, 5]))

    def test_bound(self):
        h = HullOperator(20, lambda b: b)
        with pytest.raises(GuardError):
            is_strongly_independent(h, (1 << 13) - 1)
        assert is_strongly_independent(h, (1 << 13) - 1, bound=13)

    def test_constant_pair_needs_both_operations(self):
        alg = constant_pair_algebra(3)
        both = algebra_hull(alg)
        alpha_only = algebra_hull(alg.restrict(["alpha"]))
        for b in (mask([1]), mask([2]), mask([1, 2])):
            assert is_strongly_independent(both, b)
        v = is_strongly_independent(alpha_only, mask([1, 2]))
        assert not v
        assert alpha_only.of([1]) & alpha_only.of([2]) == {0} and alpha_only(0) == 0

    def test_constant_pair_sets_containing_the_constant(self):
        # a set holding the shared constant value meets the hull of the empty set
        both = algebra_hull(constant_pair_algebra(2))
        assert both(0) == mask([0])
        assert is_strongly_independent(both, mask([0, 1])).witness == MeetsEmptyHull(0)

    def test_two_subsets_fail_for_alpha_only(self):
        for n in (2, 3, 4):
            h = algebra_hull(constant_pair_algebra(n).restrict(["alpha"]))
            for pair in itertools.combinations(range(n), 2):
                assert not is_strongly_independent(h, mask(pair))


class TestFree:
    def test_gould(self):
        g = gould_algebra()
        v = is_free(g, mask([0, 1]))
        assert not v
        assert v.witness == FreenessViolation("mul", (0, 0), "mul", (0, 1), (1, 0))
        assert recheck(v, algebra=g, subset=mask([0, 1]))

    def test_empty(self):
        assert is_free(gould_algebra(), 0)

    def test_single_vector(self):
        assert is_free(linear_algebra_f2(2), mask([1]))

    def test_zero_vector_depends_on_the_family(self):
        # without the identity nothing forces f-bar to extend f, so {0} is free
        # for {add, zero}; in the clone, id(0) = zero() separates them
        alg = linear_algebra_f2(2)
        assert is_free(alg, mask([0]))
        v = is_free_clone(clone_upto(alg, 1), mask([0]))
        assert not v and recheck(v, subset=mask([0]))

    def test_guard(self):
        with pytest.raises(GuardError):
            is_free(cyclic_group(12).algebra, mask(range(6)), guard=1000)


class TestFreeClone:
    def test_boolean_clone(self):
        v = is_free_clone(clone_upto(boolean_clone(2), 2), mask([0, 1]))
        assert not v
        a, b, x = v.witness
        assert len(x) == len(set(x)) and a(*x) == b(*x) and a != b
        assert recheck(v, subset=mask([0, 1]))

    def test_boolean_clone_singletons(self):
        # NOT(0) = 1 = const-1(0)
        sl = clone_upto(boolean_clone(2), 2)
        assert not is_free_clone(sl, mask([0]))
        assert not is_free_clone(sl, mask([1]))

    def test_and_clone(self):
        sl = clone_upto(AND, 2)
        v = is_free_clone(sl, mask([0, 1]))
        assert not v
        assert isinstance(v.witness, CloneCollision)
        assert recheck(v, subset=mask([0, 1]))
        # AND(0,1) = 0 = pr0(0,1) is one of the collisions
        assert Operation((0, 1), 2, [0, 0, 0, 1])(0, 1) == 0

    def test_empty(self):
        assert is_free_clone(clone_upto(AND, 0), 0)

    def test_needs_enough_arity(self):
        with pytest.raises(AlgebraError):
            is_free_clone(clone_upto(AND, 1), mask([0, 1]))

    def test_rejects_non_clone_algebra(self):
        with pytest.raises(AlgebraError, match="clone slice"):
            is_free_clone(AND, mask([0, 1]))

    def test_accepts_clone_closed_algebra(self):
        sl = clone_upto(linear_algebra_f2(2), 2)
        assert is_free_clone(sl.as_algebra(), mask([1, 2]))

    @settings(max_examples=40)
    @given(algebras(carriers=(2,), max_ops=2, max_arity=2), st.data())
    def test_agrees_with_homomorphism_extension(self, alg, data):
        b = data.draw(st.sets(st.integers(0, 1), min_size=1))
        sl = clone_upto(alg, len(b))
        assert bool(is_free_clone(sl, mask(b))) == free_by_homomorphisms(2, [(op.arity, op.table) for op in alg], b)

    def test_agrees_with_homomorphism_extension_on_three_points(self):
        rng = random.Random(11)
        for _ in range(25):
            n = 3
            ops = {"u": Operation((0,), n, [rng.randrange(n) for _ in range(n)]),
                   "c": Operation((), n, [rng.randrange(n)])}
            alg = FiniteAlgebra(n, ops)
            for b in range(1, 8):
                els = elements(b)
                sl = clone_upto(alg, len(els))
                want = free_by_homomorphisms(n, [(op.arity, op.table) for op in alg], els)
                assert bool(is_free_clone(sl, b)) == want


class TestMaximalExtension:
    def test_basis_extension(self):
        h = generated_hull(linear_algebra_f2(2))
        assert extend_to_maximal_independent(h, mask([1])) == mask([1, 2])

    def test_already_maximal(self):
        h = generated_hull(linear_algebra_f2(2))
        assert extend_to_maximal_independent(h, mask([1, 2])) == mask([1, 2])

    def test_z12_result_is_maximal(self):
        out = extend_to_maximal_independent(Z12, mask([2, 3]))
        assert is_independent(Z12, out)
        for x in range(12):
            if not out >> x & 1:
                assert not is_independent(Z12, out | 1 << x)

    def test_rejects_dependent(self):
        with pytest.raises(AlgebraError):
            extend_to_maximal_independent(Z12, mask([2, 4]))


class TestIndependenceAlgebra:
    def test_f2_squared(self):
        assert is_independence_algebra(linear_algebra_f2(2))

    def test_gould(self):
        assert not is_independence_algebra(gould_algebra())

    def test_one_element(self):
        assert is_independence_algebra(FiniteAlgebra(1, {"f": Operation((0, 1), 1, [0])}))


def _corpus_hulls():
    out = [Z12, generated_hull(cyclic_group(8).algebra), algebra_hull(cyclic_group(8).algebra)]
    out += [generated_hull(linear_algebra_f2(k)) for k in (1, 2, 3)]
    out += [algebra_hull(constant_pair_algebra(4)), algebra_hull(constant_pair_algebra(4).restrict(["alpha"]))]
    out += [generated_hull(gould_algebra()), term_closure_hull(AND)]
    rng = random.Random(5)
    for _ in range(6):
        n = rng.choice([3, 4])
        alg = FiniteAlgebra(n, {"f": Operation((0, 1), n, [rng.randrange(n) for _ in range(n * n)])})
        out += [generated_hull(alg), algebra_hull(alg)]
    return out


@pytest.mark.parametrize("h", _corpus_hulls(), ids=repr)
def test_strong_implies_independent_exhaustively(h):
    for b in range(h.full + 1):
        if is_strongly_independent(h, b):
            assert is_independent(h, b)


@pytest.mark.parametrize("h", _corpus_hulls()[:8], ids=repr)
def test_deciders_match_literal_definitions(h):
    lit = _frozen(h)
    for b in range(h.full + 1):
        s = elements(b)
        assert bool(is_independent(h, b)) == independent(lit, s)
        if len(s) <= 4:
            assert bool(is_strongly_independent(h, b)) == strongly_independent(lit, s)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_matroid_hulls_independent_iff_strong(k):
    h = generated_hull(linear_algebra_f2(k))
    assert is_matroid_type(h)
    for b in range(h.full + 1):
        assert bool(is_independent(h, b)) == bool(is_strongly_independent(h, b))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_maximal_independent_sets_span(k):
    h = generated_hull(linear_algebra_f2(k))
    for b in range(h.full + 1):
        if not is_independent(h, b):
            continue
        maximal = all(b >> x & 1 or not is_independent(h, b | 1 << x) for x in range(h.carrier_size))
        if maximal:
            assert h(b) == h.full and len(elements(b)) == k


def test_witnesses_recheck_over_corpus():
    for h in _corpus_hulls():
        for b in range(h.full + 1):
            for v in (is_independent(h, b), is_strongly_independent(h, b)):
                if not v:
                    assert recheck(v, hull=h, subset=b)
    for alg in (gould_algebra(), linear_algebra_f2(2), AND, constant_pair_algebra(2)):
        for b in range(1 << alg.carrier_size):
            v = is_free(alg, b)
            if not v:
                assert recheck(v, algebra=alg, subset=b)


def test_recheck_rejects_fake_witness():
    from marczewski.independence import Verdict

    fake = Verdict(False, "independent", DependentPoint(3))
    assert not recheck(fake, hull=Z12, subset=mask([2, 3]))
    with pytest.raises(TypeError):
        recheck(Verdict(True, "independent"), hull=Z12, subset=0)
