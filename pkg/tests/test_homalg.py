import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from homnambu.exactlin import FieldSpec, LinMap, MultiMap, Vector
from homnambu.examples import (
    BraidSpec,
    braid_algebra,
    braid_hom_algebra,
    braid_twist,
    eigenspace_algebra,
    seeded_gammas,
)
from homnambu.homalg import (
    EXHAUSTIVE,
    FAIL,
    PASS,
    SAMPLED,
    CheckFailed,
    HomAlgebra,
    NotMultiplicative,
    UnsupportedMode,
    check_morphism,
    check_multiplicative,
    check_total_hom_associativity,
    check_twisted_associator,
    check_weak_morphism,
    derived_twist_sequence,
    forget_twists,
    hom_associator,
    twisted_associator_residual,
    yau_twist,
)
from homnambu.examples import PolySpec, trunc_poly_algebra

Q = FieldSpec.Q()


def one_dim_unit():
    return HomAlgebra.untwisted(MultiMap(Q, 2, 1, [((0, 0), 0, 1)]))


def braid22_hom():
    spec = BraidSpec((2, 2), (LinMap(Q, [[1, 1], [0, 1]]), LinMap.identity(Q, 2)))
    return braid_hom_algebra(spec), spec


def random_binary(seed, dim=2, twist=None):
    rng = random.Random(seed)
    entries = {}
    for t in itertools.product(range(dim), repeat=2):
        if rng.random() < 0.6:
            entries[t] = {rng.randrange(dim): rng.randint(1, 3)}
    mu = MultiMap(Q, 2, dim, entries)
    return HomAlgebra(mu, [twist or LinMap.identity(Q, dim)])


# -- associators ---------------------------------------------------------------

def test_associator_zero_product_and_unit():
    Z = HomAlgebra(MultiMap.zero(Q, 3, 2), [LinMap(Q, [[1, 2], [3, 4]])] * 2)
    args = [Vector.from_dense(Q, [1, 1])] * 5
    for i in (1, 2):
        assert hom_associator(Z, i, args).is_zero()
    e = Vector.basis(Q, 0, 1)
    assert hom_associator(one_dim_unit(), 1, [e, e, e]).is_zero()


def test_associator_index_range():
    A = one_dim_unit()
    e = Vector.basis(Q, 0, 1)
    with pytest.raises(IndexError):
        hom_associator(A, 2, [e, e, e])
    with pytest.raises(ValueError):
        hom_associator(A, 1, [e, e])


def test_associator_uses_twists_outside_the_block():
    # binary: as^1(a,b,c) = (ab)α(c) - α(a)(bc)
    alpha = LinMap(Q, [[2]])
    A = HomAlgebra(MultiMap(Q, 2, 1, [((0, 0), 0, 1)]), [alpha])
    e = Vector.basis(Q, 0, 1)
    assert hom_associator(A, 1, [e, e, e]).is_zero()
    # e1e1 = e1, e1e2 = e2, α = diag(1, 3):
    # as^1(e1, e1, e2) = (e1e1)α(e2) - α(e1)(e1e2) = 3e2 - e2
    B = HomAlgebra(MultiMap(Q, 2, 2, [((0, 0), 0, 1), ((0, 1), 1, 1)]), [LinMap.diagonal(Q, [1, 3])])
    a, b = Vector.basis(Q, 0, 2), Vector.basis(Q, 1, 2)
    assert hom_associator(B, 1, [a, a, b]) == b.scale(2)


def test_zero_product_passes_and_dim_zero_is_vacuous():
    Z = HomAlgebra(MultiMap.zero(Q, 3, 2), [LinMap(Q, [[0, 1], [1, 0]]), LinMap.identity(Q, 2)])
    rep = check_total_hom_associativity(Z)
    assert rep.passed and rep.tuples_checked == 2 ** 5
    E = HomAlgebra(MultiMap.zero(Q, 2, 0), [LinMap.zero(Q, 0)])
    assert check_total_hom_associativity(E).passed
    assert check_multiplicative(E).passed


def test_failure_report_replays_and_counts_lex_rank():
    A, _ = braid22_hom()
    rep = check_total_hom_associativity(forget_twists(A))
    assert rep.verdict == FAIL
    cx = rep.counterexample
    args = [A.basis_vector(k) for k in cx.args]
    B = forget_twists(A)
    assert hom_associator(B, cx.index, args) == cx.lhs - cx.rhs
    assert not (cx.lhs - cx.rhs).is_zero()
    rank = 0
    for k in cx.args:
        rank = rank * A.dim + k
    assert rep.tuples_checked == rank + 1
    assert B.labels[cx.args[0]] == "f1[1,1]"


def test_parallel_scan_reports_same_first_failure():
    A, _ = braid22_hom()
    B = forget_twists(A)
    serial = check_total_hom_associativity(B, workers=1)
    parallel = check_total_hom_associativity(B, workers=3)
    assert serial.to_dict() == parallel.to_dict()


def test_exhaustive_on_lazy_is_unsupported():
    P = trunc_poly_algebra(PolySpec(1, 2, 9))
    with pytest.raises(UnsupportedMode):
        check_total_hom_associativity(P, mode=EXHAUSTIVE)
    with pytest.raises(UnsupportedMode):
        check_total_hom_associativity(braid_algebra(BraidSpec((1, 1))), mode="bogus")


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_sampled_fail_implies_exhaustive_fail(seed):
    A = random_binary(seed)
    ex = check_total_hom_associativity(A)
    sm = check_total_hom_associativity(A, mode=SAMPLED, trials=50, seed=seed)
    assert not (ex.passed and not sm.passed)
    if not sm.passed:
        cx = sm.counterexample
        again = hom_associator(A, cx.index, [A.basis_vector(k) for k in cx.args])
        assert again == cx.lhs - cx.rhs


def test_sampled_is_deterministic():
    A = random_binary(3, dim=3)
    r1 = check_total_hom_associativity(A, mode=SAMPLED, trials=200, seed=11)
    r2 = check_total_hom_associativity(A, mode=SAMPLED, trials=200, seed=11)
    assert r1.to_dict() == r2.to_dict()
    assert r1.to_dict()["seed"] == 11


# -- multiplicativity and morphisms ---------------------------------------------

def test_identity_twists_are_multiplicative():
    for seed in range(5):
        assert check_multiplicative(random_binary(seed)).passed


def test_unequal_twists_fail_fast():
    mu = MultiMap(Q, 3, 2, [((0, 0, 0), 0, 1)])
    A = HomAlgebra(mu, [LinMap.identity(Q, 2), LinMap(Q, [[0, 1], [1, 0]])])
    rep = check_multiplicative(A)
    assert rep.verdict == FAIL and rep.tuples_checked == 0
    assert rep.counterexample.identity == "equal_twists"
    assert not A.equal_twists


def test_eigenspace_m4_is_multiplicative():
    assert check_multiplicative(eigenspace_algebra(7, 3, 13, 4)).passed


def test_weak_morphisms_identity_and_zero():
    A, _ = braid22_hom()
    I = LinMap.identity(Q, A.dim)
    assert check_weak_morphism(I, A, A).passed
    assert check_morphism(I, A, A).passed
    assert check_weak_morphism(LinMap.zero(Q, A.dim), A, A).passed


def test_braid_twist_is_morphism_of_braid_algebra():
    spec = BraidSpec((2, 2)).with_gammas(seeded_gammas((2, 2), Q, 4))
    A = braid_algebra(spec)
    alpha = braid_twist(spec)
    assert check_morphism(alpha, A, A).passed


def test_morphism_requires_twist_compatibility():
    # swap commutes with the symmetric product but not with the twist diag(1, 2)
    mu = MultiMap(Q, 2, 2, [((0, 0), 0, 1), ((1, 1), 1, 1)])
    A = HomAlgebra(mu, [LinMap.diagonal(Q, [1, 2])])
    swap = LinMap(Q, [[0, 1], [1, 0]])
    assert check_weak_morphism(swap, A, A).passed
    rep = check_morphism(swap, A, A)
    assert not rep.passed and rep.counterexample.identity == "twist_compatibility"


def test_morphism_between_different_dimensions():
    # projection of e1e1=e1, e2 central-zero onto the 1-dim unit algebra
    mu = MultiMap(Q, 2, 2, [((0, 0), 0, 1)])
    A = HomAlgebra.untwisted(mu)
    f = LinMap(Q, [[1, 0]])
    assert check_morphism(f, A, one_dim_unit()).passed


# -- twisting ----------------------------------------------------------------------

def test_yau_twist_by_identity_is_identity():
    A, _ = braid22_hom()
    B = yau_twist(A, LinMap.identity(Q, A.dim))
    assert B.same_structure(A)


def test_yau_twist_of_associative_algebra():
    spec = BraidSpec((1, 2)).with_gammas(seeded_gammas((1, 2), Q, 2))
    A = braid_algebra(spec)
    beta = braid_twist(spec)
    B = yau_twist(A, beta)
    assert B.product == A.product.then(beta)
    assert all(t == beta for t in B.twists)
    assert check_total_hom_associativity(B).passed
    assert check_multiplicative(B).passed


def test_yau_twist_rejects_non_weak_morphism():
    A = braid_algebra(BraidSpec((1, 1)))
    with pytest.raises(CheckFailed):
        yau_twist(A, LinMap(Q, [[1, 1], [0, 1]]))
    B = yau_twist(A, LinMap(Q, [[1, 1], [0, 1]]), check=False)
    assert B.arity == 3


def test_twist_closure_and_multiplicativity_preservation():
    A, _ = braid22_hom()
    alpha = A.alpha
    B = yau_twist(A, alpha)
    assert check_total_hom_associativity(B).passed
    assert check_multiplicative(B).passed


def test_derived_sequence():
    A, _ = braid22_hom()
    assert derived_twist_sequence(A, 0) is A
    A1 = derived_twist_sequence(A, 1)
    assert A1.product == A.product.then(A.alpha)
    assert A1.twists[0] == A.alpha.power(2)
    A2 = derived_twist_sequence(A, 2)
    assert A2.same_structure(derived_twist_sequence(A1, 1))
    assert check_total_hom_associativity(A2).passed


def test_derived_sequence_needs_multiplicative():
    mu = MultiMap(Q, 2, 2, [((0, 0), 1, 1)])
    A = HomAlgebra(mu, [LinMap(Q, [[1, 0], [0, 2]])])
    with pytest.raises(NotMultiplicative):
        derived_twist_sequence(A, 1)


def test_eigenspace_derived_k2():
    A = eigenspace_algebra(7, 3, 13, 4)
    A2 = derived_twist_sequence(A, 2)
    alpha = A.alpha
    assert A2.product == A.product.then(alpha.power(3))
    assert A2.twists[0] == alpha.power(4)
    assert check_total_hom_associativity(A2).passed


def test_twisted_associator_residual_examples():
    A, _ = braid22_hom()
    rng = random.Random(0)
    beta = A.alpha
    for _ in range(20):
        t = [A.basis_vector(rng.randrange(A.dim)) for _ in range(5)]
        i = rng.randint(1, 2)
        left, right = twisted_associator_residual(A, beta, i, t)
        assert left == right
    I = LinMap.identity(Q, A.dim)
    left, right = twisted_associator_residual(A, I, 1, t)
    assert left == right == hom_associator(A, 1, t)
    Z = HomAlgebra(MultiMap.zero(Q, 2, 1), [LinMap.identity(Q, 1)])
    e = Vector.basis(Q, 0, 1)
    assert twisted_associator_residual(Z, LinMap(Q, [[5]]), 1, [e, e, e]) == (Vector.zero(Q, 1), Vector.zero(Q, 1))


def test_twisted_associator_on_all_tuples():
    A, _ = braid22_hom()
    assert check_twisted_associator(A, A.alpha).passed
    # also holds for a non-associative algebra and any weak morphism
    B = random_binary(5, dim=3)
    assert check_twisted_associator(B, LinMap.identity(Q, 3)).passed
