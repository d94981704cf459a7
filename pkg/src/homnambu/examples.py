"""Concrete totally (Hom-)associative algebras.

* braid algebras ``⊕ Hom(V_i, V_{i+1})`` with the (n+1)-ary braid composition,
  optionally twisted by conjugation with automorphisms ``γ_i``;
* truncated polynomial algebras spanned by monomials of degree ``≡ 1 (mod n)``
  with the (n+1)-ary product ``a_1⋯a_{n+1}`` and twist ``X_i ↦ X_i^{m_i}``;
* the ζ-eigenspace of ``X ↦ ζX`` in one variable over ``F_p``.

Polynomial algebras are truncated above a degree cap ``D``.  Truncation is the
quotient by the ideal of monomials of degree ``> D``, so every identity holding
in the untruncated algebra holds exactly in the quotient.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .exactlin import FieldSpec, LinMap, MultiMap, SingularMatrix, primitive_root_of_unity, random_invertible
from .homalg import (
    CheckReport,
    HomAlgebra,
    LazyHomAlgebra,
    check_total_hom_associativity,
    forget_twists,
    yau_twist,
)


class BadExponent(ValueError):
    pass


# ---------------------------------------------------------------------------
# Braid algebras
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BraidSpec:
    dims: Tuple[int, ...]
    gammas: Optional[Tuple[LinMap, ...]] = None
    field: FieldSpec = FieldSpec.Q()

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(self.dims))
        if len(self.dims) < 2 or any(d < 1 for d in self.dims):
            raise ValueError("need n >= 2 positive dimensions")
        if self.gammas is not None:
            gammas = tuple(self.gammas)
            object.__setattr__(self, "gammas", gammas)
            if len(gammas) != self.n:
                raise ValueError(f"need {self.n} gammas")
            for g, d in zip(gammas, self.dims):
                if g.field != self.field or (g.rows, g.cols) != (d, d):
                    raise ValueError("gamma_i must be a d_i x d_i matrix over the given field")
                if not g.determinant():
                    raise SingularMatrix("gamma_i must be invertible")

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        d = self.dims
        return sum(d[i] * d[(i + 1) % self.n] for i in range(self.n))

    def with_gammas(self, gammas) -> "BraidSpec":
        return BraidSpec(self.dims, tuple(gammas), self.field)


def seeded_gammas(dims: Sequence[int], field: FieldSpec, seed: int) -> Tuple[LinMap, ...]:
    rng = random.Random(seed)
    return tuple(random_invertible(field, d, rng) for d in dims)


def _braid_basis(spec: BraidSpec):
    """Index of each matrix unit, ordered by (component, row, column)."""
    index = {}
    labels = []
    n, d = spec.n, spec.dims
    for i in range(n):
        for r in range(d[(i + 1) % n]):
            for c in range(d[i]):
                index[i, r, c] = len(labels)
                labels.append(f"f{i + 1}[{r + 1},{c + 1}]")
    return index, labels


def braid_algebra(spec: BraidSpec) -> HomAlgebra:
    """The (n+1)-ary braid composition algebra with identity twists.

    Output component ``i`` composes component ``i`` of the first argument,
    component ``i+1`` of the second, and so on cyclically.  A product of
    matrix units is the matrix unit of the composite chain, or zero.
    """
    n, d = spec.n, spec.dims
    index, labels = _braid_basis(spec)
    entries = []
    for i in range(n):
        comps = [(i + j) % n for j in range(n + 1)]
        # chain: s_0 -> r_0 -> r_1 -> ... -> r_n, arg j is E^{(c_j)}_{r_j, s_j}
        ranges = [range(d[i])] + [range(d[(c + 1) % n]) for c in comps]
        for chain in itertools.product(*ranges):
            inputs = tuple(index[c, chain[j + 1], chain[j]] for j, c in enumerate(comps))
            entries.append((inputs, index[i, chain[-1], chain[0]], 1))
    product = MultiMap(spec.field, n + 1, spec.dim, entries)
    return HomAlgebra.untwisted(product, labels=labels, meta={"example": "braid", "dims": list(d)})


def braid_twist(spec: BraidSpec) -> LinMap:
    """``α(⊕ f_i) = ⊕ γ_{i+1}^{-1} f_i γ_i`` as a matrix on the braid basis."""
    if spec.gammas is None:
        raise ValueError("braid twist needs gammas")
    n, d = spec.n, spec.dims
    index, _ = _braid_basis(spec)
    g = spec.gammas
    ginv = [x.inverse() for x in g]
    cols: List[Dict[int, object]] = [None] * spec.dim
    for i in range(n):
        nxt = (i + 1) % n
        for r in range(d[nxt]):
            for c in range(d[i]):
                col = {}
                for s in range(d[nxt]):
                    a = ginv[nxt].entries[s][r]
                    if not a:
                        continue
                    for t in range(d[i]):
                        b = g[i].entries[c][t]
                        if b:
                            col[index[i, s, t]] = a * b
                cols[index[i, r, c]] = col
    return LinMap.from_columns(spec.field, cols, spec.dim)


def braid_hom_algebra(spec: BraidSpec, check: bool = True) -> HomAlgebra:
    """``A_α = (A, α∘μ, α)`` for the braid algebra and its conjugation twist."""
    A = braid_algebra(spec)
    out = yau_twist(A, braid_twist(spec), check=check)
    out.meta.update(example="braid_hom")
    return out


def braid_plain_associativity(spec: BraidSpec, **kw) -> CheckReport:
    """Total associativity of the twisted product with the twists forgotten.

    Fails (with the lexicographically first basis tuple) whenever the twisted
    product is not itself totally associative.
    """
    return check_total_hom_associativity(forget_twists(braid_hom_algebra(spec)), **kw)


# ---------------------------------------------------------------------------
# Truncated polynomial algebras
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolySpec:
    r: int
    n: int
    D: int = 30
    m: Tuple[int, ...] = ()
    commutative: bool = True
    field: FieldSpec = FieldSpec.Q()

    def __post_init__(self):
        m = tuple(self.m) if self.m else (1,) * self.r
        object.__setattr__(self, "m", m)
        if self.r < 1 or self.n < 2 or self.D < 1:
            raise ValueError("need r >= 1, n >= 2, D >= 1")
        if len(m) != self.r:
            raise ValueError("one exponent per variable")
        for mi in m:
            if mi < 1 or mi % self.n != 1:
                raise BadExponent(f"twist exponent {mi} is not 1 mod {self.n}")


def _word_key(spec: PolySpec, word: Tuple[int, ...]):
    if spec.commutative:
        e = [0] * spec.r
        for x in word:
            e[x] += 1
        return tuple(e)
    return tuple(word)


def _as_word(spec: PolySpec, key) -> Tuple[int, ...]:
    if spec.commutative:
        return tuple(i for i, e in enumerate(key) for _ in range(e))
    return key


def _degree(spec: PolySpec, key) -> int:
    return sum(key) if spec.commutative else len(key)


def monomial_label(spec: PolySpec, key) -> str:
    word = _as_word(spec, key)
    parts = []
    for x, grp in itertools.groupby(word):
        e = len(list(grp))
        parts.append(f"X{x + 1}" + (f"^{e}" if e > 1 else ""))
    return "".join(parts) or "1"


def monomial(spec: PolySpec, *powers: Tuple[int, int]):
    """Basis key for ``X_{i1}^{e1} X_{i2}^{e2} ⋯`` given 1-based ``(i, e)`` pairs."""
    word = tuple(i - 1 for i, e in powers for _ in range(e))
    return _word_key(spec, word)


def poly_product(spec: PolySpec, keys) -> Dict:
    """Untwisted truncated product of monomials."""
    if spec.commutative:
        key = tuple(map(sum, zip(*keys)))
    else:
        key = tuple(itertools.chain.from_iterable(keys))
    return {key: 1} if _degree(spec, key) <= spec.D else {}


def poly_alpha(spec: PolySpec, key) -> Dict:
    """``X_i ↦ X_i^{m_i}``, truncated."""
    if spec.commutative:
        out = tuple(e * mi for e, mi in zip(key, spec.m))
    else:
        out = tuple(x for x in key for _ in range(spec.m[x]))
    return {out: 1} if _degree(spec, out) <= spec.D else {}


def poly_degrees(spec: PolySpec) -> List[int]:
    return list(range(1, spec.D + 1, spec.n))


def poly_basis(spec: PolySpec) -> List:
    """All basis keys, ordered by (degree, lexicographic word)."""
    keys = []
    for d in poly_degrees(spec):
        if spec.commutative:
            words = itertools.combinations_with_replacement(range(spec.r), d)
        else:
            words = itertools.product(range(spec.r), repeat=d)
        keys.extend(_word_key(spec, w) for w in words)
    return keys


def _sampler(spec: PolySpec):
    degs = poly_degrees(spec)
    small = [d for d in degs if d <= max(1, spec.D // (2 * spec.n + 1))] or degs[:1]

    def sample_key(rng):
        # half the draws stay small so that products survive truncation
        d = rng.choice(small if rng.random() < 0.5 else degs)
        return _word_key(spec, tuple(rng.randrange(spec.r) for _ in range(d)))

    return sample_key


def trunc_poly_algebra(spec: PolySpec, twisted: bool = True, finite: bool = False):
    """The (n+1)-ary truncated polynomial algebra.

    With ``twisted`` (default) the result is the multiplicative Hom-algebra
    ``(A_n, α∘μ, α)``; otherwise the totally associative ``(A_n, μ, Id)``.
    ``finite=True`` materializes structure constants (commutative only).
    """
    arity = spec.n + 1
    if twisted:
        def product(keys):
            out = {}
            for k in poly_product(spec, keys):
                out.update(poly_alpha(spec, k))
            return out

        def twist(i, key):
            return poly_alpha(spec, key)
    else:
        def product(keys):
            return poly_product(spec, keys)

        def twist(i, key):
            return {key: 1}

    meta = {"example": "polytrunc", "r": spec.r, "n": spec.n, "D": spec.D,
            "m": list(spec.m), "commutative": spec.commutative, "twisted": twisted}
    if not finite:
        return LazyHomAlgebra(spec.field, arity, product, twist, _sampler(spec),
                              equal_twists=True, label=lambda k: monomial_label(spec, k), meta=meta)
    if not spec.commutative:
        raise ValueError("only commutative truncated algebras are materialized")
    keys = poly_basis(spec)
    index = {k: i for i, k in enumerate(keys)}
    degree = [_degree(spec, k) for k in keys]
    by_degree: Dict[int, List[int]] = {}
    for i, dg in enumerate(degree):
        by_degree.setdefault(dg, []).append(i)
    entries = {}

    def extend(prefix, total):
        if len(prefix) == arity:
            outs = product(tuple(keys[i] for i in prefix))
            if outs:
                entries[tuple(prefix)] = {index[k]: c for k, c in outs.items()}
            return
        left = arity - len(prefix) - 1
        for dg, idxs in by_degree.items():
            if total + dg + left <= spec.D:
                for i in idxs:
                    extend(prefix + [i], total + dg)

    extend([], 0)
    mp = MultiMap(spec.field, arity, len(keys), entries)
    cols = [{index[k]: c for k, c in twist(1, key).items()} for key in keys]
    alpha = LinMap.from_columns(spec.field, cols, len(keys))
    labels = [monomial_label(spec, k) for k in keys]
    return HomAlgebra(mp, [alpha] * (arity - 1), labels, meta)


def twisted_product_witness(spec: PolySpec) -> Tuple[Dict, Dict]:
    """The twisted product ``α∘μ`` with identity twists on ``(X_1^{×(n+1)}, X_2^{×n})``.

    Returns the inner block in the first slot and in the last slot:
    ``X_1^{m_1²(n+1)} X_2^{m_2 n}`` versus ``X_1^{m_1(m_1+n)} X_2^{m_2² n}``
    (up to truncation).  They differ, so ``α∘μ`` is not totally associative,
    as soon as ``m_1 > 1`` or ``m_2 > 1`` and ``D`` is at least the larger
    total degree.
    """
    if spec.r < 2:
        raise ValueError("the witness uses two variables")
    A = trunc_poly_algebra(spec, twisted=True)
    n = spec.n
    x1, x2 = monomial(spec, (1, 1)), monomial(spec, (2, 1))

    def mul(args):
        return A.mul_dicts(args)

    ones = [{x1: 1}] * n
    twos = [{x2: 1}] * n
    first = mul([mul(ones + [{x1: 1}])] + twos)
    last = mul(ones + [mul([{x1: 1}] + twos)])
    return first, last


def witness_degree_bound(spec: PolySpec) -> int:
    """Smallest ``D`` at which both witness monomials survive truncation."""
    n, (m1, m2) = spec.n, spec.m[:2]
    return max(m1 * m1 * (n + 1) + m2 * n, m1 * (m1 + n) + m2 * m2 * n)


# ---------------------------------------------------------------------------
# Eigenspace algebra
# ---------------------------------------------------------------------------

def eigenspace_exponents(n: int, D: int) -> List[int]:
    return list(range(1, D + 1, n))


def eigenspace_algebra(p: int, n: int, D: int, m: int, twisted: bool = True) -> HomAlgebra:
    """ζ-eigenspace of ``f(X) = ζX`` in ``X F_p[X] / (X^{D+1})`` as an
    (n+1)-ary algebra under ``a_1⋯a_{n+1}``, twisted by ``α(X) = X^m``.

    The basis is ``{X^k : k ≡ 1 (mod n), k ≤ D}``.  With ``twisted`` the
    product is ``α(a_1⋯a_{n+1})`` and all twists are ``α``; otherwise the
    product is ``a_1⋯a_{n+1}`` with identity twists.
    """
    F = FieldSpec.Fp(p)
    zeta = primitive_root_of_unity(p, n)
    if m < 1 or m % n != 1:
        raise BadExponent(f"twist exponent {m} is not 1 mod {n}")
    ks = eigenspace_exponents(n, D)
    index = {k: i for i, k in enumerate(ks)}

    # f(X^k) = ζ^k X^k on the ambient algebra; the basis must be its ζ-eigenspace
    if any(pow(zeta, k, p) != zeta for k in ks):
        raise ValueError("basis is not the zeta-eigenspace")
    # α f = f α on every ambient monomial X^k, k <= D
    for k in range(1, D + 1):
        if m * k <= D and pow(zeta, m * k, p) != pow(zeta, k, p):
            raise ValueError("twist does not commute with the eigen-map")

    def alpha_of(k):
        return {index[m * k]: 1} if m * k <= D else {}

    alpha = LinMap.from_columns(F, [alpha_of(k) for k in ks], len(ks))
    entries = {}
    for t in itertools.product(range(len(ks)), repeat=n + 1):
        s = sum(ks[i] for i in t)
        if s <= D:
            entries[t] = alpha_of(s) if twisted else {index[s]: 1}
    product = MultiMap(F, n + 1, len(ks), entries)
    twists = [alpha if twisted else LinMap.identity(F, len(ks))] * n
    meta = {"example": "eigenspace", "p": p, "n": n, "D": D, "m": m, "zeta": zeta, "twisted": twisted}
    return HomAlgebra(product, twists, [f"X^{k}" for k in ks], meta)


def eigenspace_twist(p: int, n: int, D: int, m: int) -> LinMap:
    """The morphism ``α(X^k) = X^{mk}`` restricted to the eigenspace."""
    return eigenspace_algebra(p, n, D, m, twisted=True).twists[0]
