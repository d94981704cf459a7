"""n-commutator words, the n-commutator bracket and the Hom-Nambu identity."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .exactlin import DimensionMismatch, MultiMap, Vector, accumulate, clean
from .homalg import (
    EXHAUSTIVE,
    CheckFailed,
    CheckReport,
    HomAlgebra,
    LazyHomAlgebra,
    SAMPLED,
    _Algebra,
    check_multiplicative,
    check_total_hom_associativity,
    run_check,
)


class UnequalTwists(ValueError):
    pass


@dataclass(frozen=True)
class CommutatorWord:
    """``sign · X_{i_1} ⋯ X_{i_n}`` with ``perm = (i_1, .., i_n)`` 1-based."""

    sign: int
    perm: Tuple[int, ...]

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if sorted(self.perm) != list(range(1, len(self.perm) + 1)):
            raise ValueError(f"{self.perm} is not a permutation")

    @property
    def n(self) -> int:
        return len(self.perm)

    def __str__(self):
        return ("+" if self.sign > 0 else "-") + "(" + ",".join(map(str, self.perm)) + ")"

    def permute(self, args: Sequence):
        return [args[i - 1] for i in self.perm]


def _words(n: int) -> List[CommutatorWord]:
    words = [CommutatorWord(1, (1,))]
    for k in range(2, n + 1):
        nxt = []
        for z in words:
            nxt.append(CommutatorWord(z.sign, z.perm + (k,)))
            nxt.append(CommutatorWord(-z.sign, (k,) + z.perm))
        words = nxt
    return words


def commutator_words(n: int) -> List[CommutatorWord]:
    """``W_n`` in recursion order: for each ``z`` in ``W_{n-1}``, ``zX_n`` then ``-X_n z``."""
    if n < 2:
        raise ValueError("commutator words need n >= 2")
    return _words(n)


def word_apply(w: CommutatorWord, args: Sequence[Vector], A: _Algebra) -> Vector:
    if len(args) != A.arity or w.n != A.arity:
        raise DimensionMismatch(f"word of length {w.n} on {len(args)} arguments of a {A.arity}-ary algebra")
    return A.mul(*w.permute(args)).scale(w.sign)


def _bracket_dicts(A: _Algebra, args: Sequence[Mapping], words) -> Dict:
    acc: Dict = {}
    for w in words:
        accumulate(acc, A.mul_dicts(w.permute(args)), w.sign)
    return clean(A.field, acc)


def n_commutator(A: _Algebra, args: Sequence[Vector]) -> Vector:
    """``[a_1, .., a_n] = Σ_{w ∈ W_n} μ(w(a_1, .., a_n))``."""
    if len(args) != A.arity:
        raise DimensionMismatch(f"{A.arity}-ary bracket applied to {len(args)} arguments")
    A._check_args(args)
    return A._vec(_bracket_dicts(A, [a._c for a in args], commutator_words(A.arity)))


def bracket_multimap(product: MultiMap) -> MultiMap:
    """Structure constants of the n-commutator bracket of ``product``."""
    acc: Dict[Tuple[int, ...], Dict] = {}
    for w in commutator_words(product.arity):
        for t, outs in product.table.items():
            # μ(e_{k_{i_1}}, .., e_{k_{i_n}}) = μ(e_t)  when  k_{i_r} = t_r
            k = [0] * product.arity
            for r, i in enumerate(w.perm):
                k[i - 1] = t[r]
            accumulate(acc.setdefault(tuple(k), {}), outs, w.sign)
    return MultiMap(product.field, product.arity, product.dim, acc)


class NambuAlgebra(HomAlgebra):
    """A finite n-ary Hom-algebra read as a bracket algebra with equal twists."""

    def __init__(self, product, twists, labels=None, meta=None):
        super().__init__(product, twists, labels, meta)
        if not self.equal_twists:
            raise UnequalTwists("a Hom-Nambu algebra here has all twisting maps equal")

    @classmethod
    def of(cls, A: HomAlgebra) -> "NambuAlgebra":
        return cls(A.product, A.twists, A.labels, A.meta)

    @property
    def bracket(self) -> MultiMap:
        return self.product


def commutator_algebra(A: _Algebra, check: bool = True, mode: Optional[str] = None,
                       trials: int = 10_000, seed: int = 0, verify_multiplicative: bool = False):
    """``N(A) = (A, [·,..,·], α)`` for a totally Hom-associative ``A`` with equal twists.

    Finite algebras get materialized bracket constants.  Lazy algebras get a
    lazy bracket; their precondition can only be checked in sampled mode.
    """
    if not A.equal_twists:
        raise UnequalTwists("the commutator construction needs equal twisting maps")
    if mode is None:
        mode = EXHAUSTIVE if A.is_finite else SAMPLED
    if check:
        rep = check_total_hom_associativity(A, mode=mode, trials=trials, seed=seed)
        if not rep.passed:
            raise CheckFailed("input is not totally Hom-associative", rep)
    meta = dict(A.meta, construction="commutator")
    if A.is_finite:
        N = NambuAlgebra(bracket_multimap(A.product), A.twists, A.labels, meta)
    else:
        words = commutator_words(A.arity)
        N = LazyHomAlgebra(
            A.field, A.arity,
            product=lambda keys: _bracket_dicts(A, [{k: 1} for k in keys], words),
            twist=A.twist_basis, sample_key=A.sample_key, equal_twists=True,
            label=A.label, meta=meta)
    if verify_multiplicative:
        rep = check_multiplicative(N, mode=mode, trials=trials, seed=seed)
        N.meta["multiplicative"] = rep.passed
    return N


# ---------------------------------------------------------------------------
# Hom-Jacobian
# ---------------------------------------------------------------------------

def _jacobian_terms(V: _Algebra, x: Sequence[Mapping], y: Sequence[Mapping], twisted) -> Tuple[Dict, Dict]:
    """``([α(x), [y]], Σ_i [α(y_{<i}), [x, y_i], α(y_{>i})])`` as two dicts.

    ``twisted(r, d)`` applies the 1-based twist ``α_r``.
    """
    n = V.arity
    br = V.mul_dicts
    first = br([twisted(r + 1, x[r]) for r in range(n - 1)] + [br(y)])
    acc: Dict = {}
    for i in range(1, n + 1):
        args = ([twisted(r + 1, y[r]) for r in range(i - 1)]
                + [br(list(x) + [y[i - 1]])]
                + [twisted(i + r, y[i + r]) for r in range(n - i)])
        accumulate(acc, br(args))
    return first, clean(V.field, acc)


def hom_jacobian(V: _Algebra, xs: Sequence[Vector], ys: Sequence[Vector]) -> Vector:
    """``J^n_V(x_1..x_{n-1}; y_1..y_n)`` computed with ``V``'s product as the bracket."""
    n = V.arity
    if len(xs) != n - 1 or len(ys) != n:
        raise DimensionMismatch(f"Hom-Jacobian takes {n - 1} + {n} arguments, got {len(xs)} + {len(ys)}")
    V._check_args(list(xs) + list(ys))
    first, rest = _jacobian_terms(V, [a._c for a in xs], [a._c for a in ys], V.twist_dict)
    acc = dict(first)
    accumulate(acc, rest, -1)
    return V._vec(acc)


def check_hom_nambu(V: _Algebra, mode: str = EXHAUSTIVE, trials: int = 10_000, seed: int = 0,
                    workers: Optional[int] = None) -> CheckReport:
    """``J^n_V = 0`` on every (or on sampled) basis (2n-1)-tuples."""
    if not V.equal_twists:
        raise UnequalTwists("the Hom-Nambu check is run with equal twisting maps")
    n = V.arity

    def twist_unit(r, d):
        (k,) = d  # arguments are basis vectors here
        return V.twist_basis(r, k)

    def evaluate(t):
        x = [{k: 1} for k in t[:n - 1]]
        y = [{k: 1} for k in t[n - 1:]]
        lhs, rhs = _jacobian_terms(V, x, y, twist_unit)
        return None if lhs == rhs else (None, lhs, rhs)

    return run_check(V, "hom_nambu", 2 * n - 1, evaluate, mode, trials, seed, workers)


def bracket_recursion_multimap(product: MultiMap) -> MultiMap:
    """Right-hand side of ``[a_{1,n}] = Σ_{z ∈ W_{n-1}} (z(a_{1,n-1}), a_n) - (a_n, z(a_{1,n-1}))``.

    Built from ``W_{n-1}`` alone, independently of the ``W_n`` recursion.
    """
    n = product.arity
    acc: Dict[Tuple[int, ...], Dict] = {}
    for z in _words(n - 1):
        for t, outs in product.table.items():
            k = [0] * n
            # (z(a), a_n): slot r holds a_{z_r}
            for r, i in enumerate(z.perm):
                k[i - 1] = t[r]
            k[n - 1] = t[n - 1]
            accumulate(acc.setdefault(tuple(k), {}), outs, z.sign)
            # (a_n, z(a)): slot 0 holds a_n, slot r+1 holds a_{z_r}
            k = [0] * n
            k[n - 1] = t[0]
            for r, i in enumerate(z.perm):
                k[i - 1] = t[r + 1]
            accumulate(acc.setdefault(tuple(k), {}), outs, -z.sign)
    return MultiMap(product.field, n, product.dim, acc)
