"""Braid algebras: associative products that only survive as Hom-algebras after a twist.

Builds the braid-type ternary algebra on F_1 x F_2, twists it by seeded invertible
gammas and shows that total Hom-associativity holds while plain associativity of
the twisted product fails at an explicit basis tuple.
"""

from homnambu.exactlin import FieldSpec
from homnambu.examples import BraidSpec, braid_algebra, braid_hom_algebra, braid_plain_associativity, seeded_gammas
from homnambu.homalg import check_multiplicative, check_total_hom_associativity

Q = FieldSpec.Q()
dims = (2, 2)

A = braid_algebra(BraidSpec(dims))
print("untwisted braid", dims, "dim", A.dim, "arity", A.arity)
print("  totally associative:", check_total_hom_associativity(A).passed)

spec = BraidSpec(dims).with_gammas(seeded_gammas(dims, Q, 1))
H = braid_hom_algebra(spec)
print("twisted by seeded gammas")
print("  totally Hom-associative:", check_total_hom_associativity(H).passed)
print("  multiplicative:", check_multiplicative(H).passed)

rep = braid_plain_associativity(spec)
cx = rep.counterexample
print("  plain associativity of α∘μ:", rep.passed)
print("  first failing tuple:", [H.labels[k] for k in cx.args], "at index", cx.index)
print("  tuples scanned:", rep.tuples_checked)
