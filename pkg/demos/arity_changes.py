"""Raising and lowering arity.

Expansion composes the product with itself and twists by α^2; reduction plugs a
witness into the last slot.  On the eigenspace algebra with m = 4 the twist moves
the witness X, so the reduction conditions fail and the checker says why.
"""

from homnambu.arity import check_reduction_conditions, expand_arity_k, reduce_arity, reduce_arity_seq
from homnambu.exactlin import FieldSpec
from homnambu.examples import BraidSpec, braid_hom_algebra, eigenspace_algebra, seeded_gammas
from homnambu.homalg import check_total_hom_associativity

Q = FieldSpec.Q()

H = braid_hom_algebra(BraidSpec((1, 1)).with_gammas(seeded_gammas((1, 1), Q, 1)))
for k in (1, 2):
    E = expand_arity_k(H, k)
    print(f"expand k={k}: arity {E.arity}, totally Hom-associative:",
          check_total_hom_associativity(E).passed)

A = eigenspace_algebra(7, 3, 13, 1)
X = A.basis_vector(0)
R = reduce_arity(A, X)
print("reduce by X: arity", R.arity, "ok:", check_total_hom_associativity(R).passed)
R2 = reduce_arity_seq(A, [X, X])
print("reduce by X, X: arity", R2.arity, "ok:", check_total_hom_associativity(R2).passed)

bad = check_reduction_conditions(eigenspace_algebra(7, 3, 13, 4), X)
print("m=4 witness accepted:", bad.passed, "| failing condition:", bad.counterexample.identity)
