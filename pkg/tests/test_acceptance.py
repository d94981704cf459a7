"""Acceptance criteria, one test per criterion.

Each test prints a single ``[AC<k>] PASS|FAIL`` line with its runtime and
budget.  Run directly (``python3 tests/test_acceptance.py``) for just the
summary lines.
"""

import itertools
import random
import re
import sys
import time

import pytest

from homnambu.arity import (
    check_reduction_conditions,
    expand_arity,
    expand_arity_k,
    reduce_arity,
    reduce_arity_seq,
)
from homnambu.exactlin import FieldSpec, LinMap, MultiMap, Vector
from homnambu.examples import (
    BraidSpec,
    PolySpec,
    braid_algebra,
    braid_hom_algebra,
    braid_plain_associativity,
    eigenspace_algebra,
    monomial,
    seeded_gammas,
    trunc_poly_algebra,
    twisted_product_witness,
)
from homnambu.homalg import (
    SAMPLED,
    HomAlgebra,
    check_multiplicative,
    check_total_hom_associativity,
    check_twisted_associator,
    derived_twist_sequence,
    yau_twist,
)
from homnambu.nambu import (
    bracket_multimap,
    bracket_recursion_multimap,
    check_hom_nambu,
    commutator_algebra,
    commutator_words,
    n_commutator,
)
from homnambu.symbolic import cancellation_census, verify_cancellation

Q = FieldSpec.Q()

# Reference word listings, kept verbatim as an independent oracle.
LISTED_WORDS = {
    2: "X_1X_2, -X_2X_1",
    3: "X_1X_2X_3, -X_2X_1X_3, -X_3X_1X_2, X_3X_2X_1",
    4: ("X_1X_2X_3X_4, -X_2X_1X_3X_4, -X_3X_1X_2X_4, X_3X_2X_1X_4, "
        "-X_4X_1X_2X_3, X_4X_2X_1X_3, X_4X_3X_1X_2, -X_4X_3X_2X_1"),
}


def _parse_words(text):
    out = set()
    for w in text.split(","):
        w = w.strip()
        sign = -1 if w.startswith("-") else 1
        out.add((sign, tuple(int(i) for i in re.findall(r"X_(\d+)", w))))
    return out


# -- criteria -----------------------------------------------------------------------

def ac1():
    for n, text in LISTED_WORDS.items():
        got = {(w.sign, w.perm) for w in commutator_words(n)}
        if got != _parse_words(text):
            return False, f"W_{n} differs from the listing"
    for n in range(2, 13):
        if len(commutator_words(n)) != 2 ** (n - 1):
            return False, f"|W_{n}| != 2^{n - 1}"
    return True, "W_2, W_3, W_4 match; |W_n| = 2^(n-1) for n <= 12"


def ac2():
    counts = []
    for n in range(2, 7):
        r = verify_cancellation(n)
        if not r.proved or r.term_count != 2 ** (2 * n - 2) * (n + 1):
            return False, f"n={n}: {r.verdict}, {r.term_count} terms"
        counts.append(r.term_count)
        c = cancellation_census(n)
        fams = c.family_counts()
        if 2 * len(c.pairs) != r.term_count:
            return False, f"n={n}: census not perfect"
        late_empty = fams["Bi1-Bj3"] == 0 and fams["Bi2-Bj4"] == 0
        if late_empty != (n == 2):
            return False, f"n={n}: families 5-6 emptiness wrong"
    if counts != [12, 64, 320, 1536, 7168]:
        return False, f"counts {counts}"
    return True, "Proved for n=2..6, terms 12/64/320/1536/7168, perfect census"


def ac3():
    for dims in ((2, 2), (1, 2, 1)):
        if not check_total_hom_associativity(braid_algebra(BraidSpec(dims))).passed:
            return False, f"braid {dims} not totally associative"
    spec = BraidSpec((2, 2)).with_gammas(seeded_gammas((2, 2), Q, 1))
    H = braid_hom_algebra(spec)
    if not (check_total_hom_associativity(H).passed and check_multiplicative(H).passed):
        return False, "seeded braid Hom-algebra fails"
    rep = braid_plain_associativity(spec)
    if rep.passed or rep.counterexample is None:
        return False, "no plain-associativity counterexample"
    cx = rep.counterexample
    return True, f"plain associativity fails at basis tuple {cx.args}, index {cx.index}"


def ac4():
    H = braid_hom_algebra(BraidSpec((2, 2)).with_gammas(seeded_gammas((2, 2), Q, 1)))
    rep = check_hom_nambu(commutator_algebra(H))
    if not rep.passed or rep.tuples_checked != H.dim ** 5:
        return False, "braid commutator fails"
    E = commutator_algebra(eigenspace_algebra(7, 3, 13, 4))
    rep2 = check_hom_nambu(E, mode=SAMPLED, trials=100_000, seed=0)
    if not rep2.passed or rep2.tuples_checked != 100_000:
        return False, "eigenspace commutator fails"
    return True, f"braid: {rep.tuples_checked} tuples exhaustive; eigenspace: 10^5 sampled"


def _bundled():
    yield "braid", braid_hom_algebra(BraidSpec((2, 2)).with_gammas(seeded_gammas((2, 2), Q, 1)))
    yield "braid3", braid_hom_algebra(BraidSpec((1, 2, 1)).with_gammas(seeded_gammas((1, 2, 1), Q, 1)))
    yield "polytrunc", trunc_poly_algebra(PolySpec(1, 2, 13, (3,)), finite=True)
    yield "eigenspace", eigenspace_algebra(7, 3, 13, 4)


def ac5():
    done = []
    for name, A in _bundled():
        alpha = A.alpha
        for B in (yau_twist(A, alpha), derived_twist_sequence(A, 1), derived_twist_sequence(A, 2)):
            if not check_total_hom_associativity(B).passed:
                return False, f"{name}: twisted algebra not totally Hom-associative"
            if not check_multiplicative(B).passed:
                return False, f"{name}: twisted algebra not multiplicative"
        if not check_twisted_associator(A, alpha).passed:
            return False, f"{name}: twisted associator residual nonzero"
        done.append(name)
    return True, "twist closure for " + ", ".join(done)


def ac6():
    H = braid_hom_algebra(BraidSpec((1, 1)).with_gammas(seeded_gammas((1, 1), Q, 1)))
    E = expand_arity(H)
    if E.arity != 5 or not check_total_hom_associativity(E).passed:
        return False, "5-ary expansion not totally Hom-associative"
    if not expand_arity_k(H, 2).same_structure(expand_arity(E)):
        return False, "k=2 differs from iterated expansion"
    return True, f"dim {H.dim}: arity 5 passes; k=2 equals iterated expansion"


def ac7():
    A = eigenspace_algebra(7, 3, 13, 1)
    X = A.basis_vector(0)
    R = reduce_arity(A, X)
    if R.arity != 3 or not check_total_hom_associativity(R).passed:
        return False, "ternary reduction fails"
    R2 = reduce_arity_seq(A, [X, X])
    if R2.arity != 2 or not check_total_hom_associativity(R2).passed:
        return False, "binary reduction fails"
    bad = check_reduction_conditions(eigenspace_algebra(7, 3, 13, 4), X)
    if bad.passed or bad.counterexample.identity != "twist_fixes_witness":
        return False, "violating witness accepted"
    return True, "ternary and binary reductions pass; m=4 witness rejected (twist_fixes_witness)"


def ac8():
    spec = PolySpec(2, 2, 30, (3, 1))
    first, last = twisted_product_witness(spec)
    a, b = monomial(spec, (1, 27), (2, 2)), monomial(spec, (1, 15), (2, 2))
    m1, m2, n = 3, 1, 2
    ok = (first == {a: 1} and last == {b: 1} and first != last
          and a == (m1 * m1 * (n + 1), m2 * n) and b == (m1 * (m1 + n), m2 * m2 * n))
    return ok, f"exponents {next(iter(first))} vs {next(iter(last))}"


def _symmetric(rng, arity, dim):
    entries = {}
    for t in itertools.combinations_with_replacement(range(dim), arity):
        if rng.random() < 0.5:
            out = {rng.randrange(dim): rng.randint(1, 5)}
            for p in set(itertools.permutations(t)):
                entries[p] = out
    return MultiMap(Q, arity, dim, entries)


def _random(rng, arity, dim):
    entries = {}
    for t in itertools.product(range(dim), repeat=arity):
        if rng.random() < 0.3:
            entries[t] = {rng.randrange(dim): rng.randint(-3, 3) or 1}
    return MultiMap(Q, arity, dim, entries)


def ac9():
    for n in range(2, 6):
        for seed in range(100):
            mu = _symmetric(random.Random(seed), n, 3 if n <= 3 else 2)
            if bracket_multimap(mu).nnz:
                return False, f"symmetric product n={n} seed={seed} has nonzero bracket"
    for n in range(3, 6):
        for seed in range(20):
            mu = _random(random.Random(seed), n, 2)
            if bracket_multimap(mu) != bracket_recursion_multimap(mu):
                return False, f"bracket recursion fails n={n} seed={seed}"
    rng = random.Random(0)
    for seed in range(50):
        A = HomAlgebra.untwisted(_random(random.Random(seed), 2, 3))
        a, b = (Vector.from_dense(Q, [rng.randint(-3, 3) for _ in range(3)]) for _ in range(2))
        if n_commutator(A, [a, b]) != -n_commutator(A, [b, a]):
            return False, "binary bracket not antisymmetric"
    B = braid_algebra(BraidSpec((1, 1)))
    e1, e2 = B.basis_vector(0), B.basis_vector(1)
    if n_commutator(B, [e1, e2, e1]) == -n_commutator(B, [e1, e1, e2]):
        return False, "stored ternary witness is antisymmetric"
    return True, "annihilation, recursion, antisymmetry (n=2) and ternary witness"


CRITERIA = [
    ("AC1", "word sets", ac1, 1),
    ("AC2", "symbolic cancellation", ac2, 5),
    ("AC3", "braid examples", ac3, 60),
    ("AC4", "Hom-Nambu on commutator algebras", ac4, 300),
    ("AC5", "twist closure", ac5, 60),
    ("AC6", "arity expansion", ac6, 120),
    ("AC7", "arity reduction", ac7, 10),
    ("AC8", "truncated polynomial witness", ac8, 1),
    ("AC9", "bracket property suite", ac9, 30),
]


def _run(tag, title, fn, budget, out):
    t0 = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t0
    ok_time = dt < budget
    verdict = "PASS" if ok and ok_time else "FAIL"
    note = "" if ok_time else " (over budget)"
    out.write(f"[{tag}] {verdict} {title}: {detail} [{dt:.2f}s / {budget}s{note}]\n")
    out.flush()
    return ok, ok_time, detail


@pytest.mark.parametrize("tag,title,fn,budget", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(tag, title, fn, budget, capsys):
    with capsys.disabled():
        sys.stdout.write("\n")
        ok, ok_time, detail = _run(tag, title, fn, budget, sys.stdout)
    assert ok, detail
    assert ok_time, f"{tag} exceeded {budget}s"


if __name__ == "__main__":
    results = [_run(*c, sys.stdout) for c in CRITERIA]
    sys.exit(0 if all(a and b for a, b, _ in results) else 1)
