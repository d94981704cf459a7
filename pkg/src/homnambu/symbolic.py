"""Symbolic proof that the n-commutator of a totally Hom-associative algebra
with equal twists satisfies the n-ary Hom-Nambu identity, for a fixed n.

The Hom-Jacobian ``J^n(x_1..x_{n-1}; y_1..y_n)`` of the n-commutator expands
into ``2^{2n-2}(n+1)`` signed terms.  Each is an outer n-product with exactly
one slot holding an inner n-product of bare generators and every other slot
holding ``α`` of a generator.  With equal twists, total Hom-associativity says
that such a term only depends on the flattened generator sequence, so two terms
with the same flattening evaluate equally in every such algebra.  The identity
is proved once every flattened sequence has net coefficient zero.

Terms are generated through ``[a_{1,n}] = Σ_{z ∈ W_{n-1}} (z(a_{1,n-1}), a_n) - (a_n, z(a_{1,n-1}))``
and tagged with the group they come from:

* ``A1..A4``: ``[α(x), [y]]``, the four sign patterns of outer/inner splitting;
* ``B{n}.1..4``: ``-[α(y_{<n}), [x, y_n]]``;
* ``B{i}.1..4``: ``-[α(y_{<i}), [x, y_i], α(y_{>i})]`` for ``i < n``.

:func:`cancellation_census` pairs every term with a partner of equal
flattening and opposite sign, following the pairing families of the proof.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .nambu import _words


class MalformedTerm(ValueError):
    pass


class MatchingFailed(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class Gen:
    """Formal generator ``x_i`` (``kind='x'``) or ``y_i`` (``kind='y'``)."""

    kind: str
    index: int

    def __str__(self):
        return f"{self.kind}{self.index}"


Block = Tuple[Gen, ...]


@dataclass(frozen=True)
class Origin:
    group: str          # "A" or "B"
    i: Optional[int]    # bracket position for B-terms (n for the last one)
    part: int           # 1..4 within the group
    z: int              # index into W_{n-1} of the word acting on the y-side
    zp: int             # index into W_{n-1} of the word acting on the x-side

    @property
    def name(self) -> str:
        return f"A{self.part}" if self.group == "A" else f"B{self.i}.{self.part}"


@dataclass(frozen=True)
class AdmissibleTerm:
    """``sign · (slot_1, .., slot_n)``; exactly one slot is an inner block.

    Non-block slots carry one ``α``; block entries carry none.
    """

    sign: int
    outer: Tuple
    origin: Optional[Origin] = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return len(self.outer)

    @property
    def block_position(self) -> int:
        return next(k for k, s in enumerate(self.outer) if isinstance(s, tuple))

    def __str__(self):
        parts = []
        for s in self.outer:
            if isinstance(s, tuple):
                parts.append("(" + " ".join(map(str, s)) + ")")
            else:
                parts.append(f"α{s}")
        return ("+" if self.sign > 0 else "-") + "(" + ", ".join(parts) + ")"


@dataclass(frozen=True)
class SignedSequence:
    sign: int
    seq: Tuple[Gen, ...]

    def __str__(self):
        return ("+" if self.sign > 0 else "-") + " ".join(map(str, self.seq))


def generators(n: int) -> List[Gen]:
    return [Gen("x", i) for i in range(1, n)] + [Gen("y", i) for i in range(1, n + 1)]


def _check_admissible(term: AdmissibleTerm) -> None:
    n = term.n
    blocks = [s for s in term.outer if isinstance(s, tuple)]
    if len(blocks) != 1:
        raise MalformedTerm(f"{term}: needs exactly one inner block")
    if len(blocks[0]) != n or not all(isinstance(g, Gen) for g in blocks[0]):
        raise MalformedTerm(f"{term}: inner block must hold {n} generators")
    if not all(isinstance(s, Gen) for s in term.outer if not isinstance(s, tuple)):
        raise MalformedTerm(f"{term}: outer slots must be generators")
    flat = _flatten(term)
    if sorted(flat) != sorted(generators(n)):
        raise MalformedTerm(f"{term}: every generator must appear exactly once")
    if term.sign not in (1, -1):
        raise MalformedTerm(f"{term}: sign must be +1 or -1")


def _flatten(term: AdmissibleTerm) -> Tuple[Gen, ...]:
    out: List[Gen] = []
    for s in term.outer:
        if isinstance(s, tuple):
            out.extend(s)
        else:
            out.append(s)
    return tuple(out)


def normalize(term: AdmissibleTerm) -> SignedSequence:
    """Signed flattened generator sequence of an admissible term."""
    _check_admissible(term)
    return SignedSequence(term.sign, _flatten(term))


# ---------------------------------------------------------------------------
# Expansion
# ---------------------------------------------------------------------------

def expand_jacobian_terms(n: int) -> List[AdmissibleTerm]:
    """All ``2^{2n-2}(n+1)`` terms of ``J^n`` for the n-commutator, unsimplified."""
    if n < 2:
        raise ValueError("the Hom-Jacobian needs n >= 2")
    W = _words(n - 1)
    x = [Gen("x", i) for i in range(1, n)]
    y = [Gen("y", i) for i in range(1, n + 1)]
    yn = y[-1]
    terms: List[AdmissibleTerm] = []

    def add(sign, outer, origin):
        terms.append(AdmissibleTerm(sign, tuple(outer), origin))

    for zi, z in enumerate(W):
        for zpi, zp in enumerate(W):
            s = z.sign * zp.sign
            zx = zp.permute(x)
            zy = z.permute(y[:-1])
            # [α(x), [y]]
            add(s, zx + [tuple(zy) + (yn,)], Origin("A", None, 1, zi, zpi))
            add(-s, zx + [(yn,) + tuple(zy)], Origin("A", None, 2, zi, zpi))
            add(-s, [tuple(zy) + (yn,)] + zx, Origin("A", None, 3, zi, zpi))
            add(s, [(yn,) + tuple(zy)] + zx, Origin("A", None, 4, zi, zpi))
            # -[α(y_{<n}), [x, y_n]]
            add(-s, zy + [tuple(zx) + (yn,)], Origin("B", n, 1, zi, zpi))
            add(s, zy + [(yn,) + tuple(zx)], Origin("B", n, 2, zi, zpi))
            add(s, [tuple(zx) + (yn,)] + zy, Origin("B", n, 3, zi, zpi))
            add(-s, [(yn,) + tuple(zx)] + zy, Origin("B", n, 4, zi, zpi))
            # -[α(y_{<i}), [x, y_i], α(y_{i+1..n})], i < n
            for i in range(1, n):
                left = tuple(zx) + (y[i - 1],)
                right = (y[i - 1],) + tuple(zx)
                u = list(y[:n - 1])
                u[i - 1] = left
                zu_left = z.permute(u)
                u[i - 1] = right
                zu_right = z.permute(u)
                add(-s, zu_left + [yn], Origin("B", i, 1, zi, zpi))
                add(s, [yn] + zu_left, Origin("B", i, 2, zi, zpi))
                add(s, zu_right + [yn], Origin("B", i, 3, zi, zpi))
                add(-s, [yn] + zu_right, Origin("B", i, 4, zi, zpi))
    return terms


def expand_by_full_words(n: int) -> List[AdmissibleTerm]:
    """Same expansion computed with ``W_n`` directly on each bracket.

    Used to cross-check :func:`expand_jacobian_terms`; terms carry no origin.
    """
    if n < 2:
        raise ValueError("the Hom-Jacobian needs n >= 2")
    Wn = _words(n)
    x = [Gen("x", i) for i in range(1, n)]
    y = [Gen("y", i) for i in range(1, n + 1)]
    hole = object()
    terms = []

    def double(sign, outer_args, inner_args):
        for w in Wn:
            for v in Wn:
                block = tuple(v.permute(inner_args))
                outer = [block if a is hole else a for a in w.permute(outer_args)]
                terms.append(AdmissibleTerm(sign * w.sign * v.sign, tuple(outer)))

    double(1, x + [hole], y)
    for i in range(1, n + 1):
        double(-1, y[:i - 1] + [hole] + y[i:], x + [y[i - 1]])
    return terms


def term_count(n: int) -> int:
    return 2 ** (2 * n - 2) * (n + 1)


@dataclass
class ProofResult:
    n: int
    term_count: int
    proved: bool
    residual: Dict[Tuple[Gen, ...], int]
    normal_forms: int

    @property
    def verdict(self) -> str:
        return "Proved" if self.proved else "Residual"

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "verdict": self.verdict,
            "terms": self.term_count,
            "expected_terms": term_count(self.n),
            "distinct_normal_forms": self.normal_forms,
            "residual": [
                {"sequence": [str(g) for g in seq], "coefficient": c}
                for seq, c in sorted(self.residual.items())
            ],
        }


def net_coefficients(terms: Sequence[AdmissibleTerm]) -> Counter:
    net: Counter = Counter()
    for t in terms:
        nf = normalize(t)
        net[nf.seq] += nf.sign
    return net


def verify_cancellation(n: int, terms: Optional[Sequence[AdmissibleTerm]] = None) -> ProofResult:
    """Proved iff every flattened sequence has net coefficient zero."""
    if terms is None:
        terms = expand_jacobian_terms(n)
    net = net_coefficients(terms)
    residual = {seq: c for seq, c in net.items() if c}
    return ProofResult(n, len(terms), not residual, residual, len(net))


def shuffled_terms(n: int, seed: int) -> List[AdmissibleTerm]:
    terms = expand_jacobian_terms(n)
    random.Random(seed).shuffle(terms)
    return terms


# ---------------------------------------------------------------------------
# Cancellation census
# ---------------------------------------------------------------------------

FAMILIES = ("A1-Bi1", "A4-Bi4", "Bn1-Bi3", "Bn4-Bi2", "Bi1-Bj3", "Bi2-Bj4")
# The A2/A3 terms cancel against B_n terms before the six families are formed.
PRELIMINARY = ("A2-Bn3", "A3-Bn2")


@dataclass
class Census:
    n: int
    pairs: List[Tuple[str, AdmissibleTerm, AdmissibleTerm]]

    def family_counts(self) -> Dict[str, int]:
        counts = {f: 0 for f in PRELIMINARY + FAMILIES}
        for label, _, _ in self.pairs:
            counts[label] += 1
        return counts

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "pairs": len(self.pairs),
            "families": self.family_counts(),
            "matching": [
                {"family": label, "terms": [a.origin.name, b.origin.name],
                 "z": a.origin.z, "z'": a.origin.zp,
                 "sequence": [str(g) for g in normalize(a).seq]}
                for label, a, b in self.pairs
            ],
        }


def _partner(o: Origin, W, n: int) -> Optional[Tuple[str, Tuple]]:
    """Label and origin key of the partner for the 'left' member of a family."""
    z = W[o.z].perm
    if o.group == "A":
        if o.part == 1:
            return "A1-Bi1", ("B", z[0], 1)
        if o.part == 4:
            return "A4-Bi4", ("B", z[-1], 4)
        if o.part == 2:
            return "A2-Bn3", ("B", n, 3)
        return "A3-Bn2", ("B", n, 2)
    if o.i == n:
        if o.part == 1:
            return "Bn1-Bi3", ("B", z[-1], 3)
        if o.part == 4:
            return "Bn4-Bi2", ("B", z[0], 2)
        return None
    if o.part in (1, 2) and z[0] != o.i:
        j = z[z.index(o.i) - 1]
        return ("Bi1-Bj3", ("B", j, 3)) if o.part == 1 else ("Bi2-Bj4", ("B", j, 4))
    return None


def cancellation_census(n: int) -> Census:
    """Perfect matching of all terms into cancelling pairs, family by family.

    Raises :class:`MatchingFailed` if a prescribed partner is missing, has a
    different flattening, does not have the opposite sign, or if some term is
    left unmatched or matched twice.
    """
    W = _words(n - 1)
    terms = expand_jacobian_terms(n)
    by_key = {}
    for t in terms:
        o = t.origin
        by_key[o.group, o.i, o.part, o.z, o.zp] = t
    used: Counter = Counter()
    pairs = []
    for t in terms:
        o = t.origin
        hit = _partner(o, W, n)
        if hit is None:
            continue
        label, (g, i, part) = hit
        other = by_key.get((g, i, part, o.z, o.zp))
        if other is None:
            raise MatchingFailed(f"{o.name}: partner {g}{i}.{part} missing")
        a, b = normalize(t), normalize(other)
        if a.seq != b.seq or a.sign != -b.sign:
            raise MatchingFailed(f"{t} and {other} do not cancel")
        used[id(t)] += 1
        used[id(other)] += 1
        pairs.append((label, t, other))
    unmatched = [t for t in terms if used[id(t)] != 1]
    if unmatched:
        raise MatchingFailed(f"{len(unmatched)} terms unmatched or matched twice, e.g. {unmatched[0]}")
    return Census(n, pairs)


def proof_report(n: int, census: bool = False) -> dict:
    result = verify_cancellation(n)
    out = result.to_dict()
    if census:
        if not result.proved:
            out["census"] = None
        else:
            try:
                c = cancellation_census(n)
                out["census"] = {"pairs": len(c.pairs), "families": c.family_counts()}
            except MatchingFailed as exc:
                out["census"] = {"error": str(exc)}
    return out


def iter_normal_forms(n: int) -> Iterator[SignedSequence]:
    for t in expand_jacobian_terms(n):
        yield normalize(t)
