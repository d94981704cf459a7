"""The n-commutator of a totally Hom-associative algebra is Hom-Nambu.

Checks the bracket numerically on a twisted braid algebra (exhaustively) and on the
eigenspace example over F_7 (sampled), then runs the symbolic proof for a few n.
"""

from homnambu.exactlin import FieldSpec
from homnambu.examples import BraidSpec, braid_hom_algebra, eigenspace_algebra, seeded_gammas
from homnambu.homalg import SAMPLED
from homnambu.nambu import check_hom_nambu, commutator_algebra, commutator_words
from homnambu.symbolic import cancellation_census, verify_cancellation

Q = FieldSpec.Q()

for n in (2, 3, 4):
    print(f"W_{n}:", " ".join(str(w) for w in commutator_words(n)))

H = braid_hom_algebra(BraidSpec((2, 2)).with_gammas(seeded_gammas((2, 2), Q, 1)))
rep = check_hom_nambu(commutator_algebra(H))
print("braid commutator Hom-Nambu:", rep.passed, f"({rep.tuples_checked} tuples)")

E = commutator_algebra(eigenspace_algebra(7, 3, 13, 4))
rep = check_hom_nambu(E, mode=SAMPLED, trials=5000, seed=0)
print("eigenspace commutator Hom-Nambu:", rep.passed, f"({rep.tuples_checked} sampled)")

for n in range(2, 6):
    r = verify_cancellation(n)
    fams = cancellation_census(n).family_counts()
    print(f"n={n}: {r.verdict} over {r.term_count} terms;", fams)
