"""n-ary Hom-algebras, Hom-associators, identity checkers and Yau twists.

Two carriers share one interface:

* :class:`HomAlgebra` -- finite basis, product stored as a :class:`MultiMap`,
  twists as :class:`LinMap` matrices.
* :class:`LazyHomAlgebra` -- basis keys drawn from an unbounded set (e.g.
  monomials), product and twists given as evaluators on basis keys.

Every identity below is multilinear, so checking it on all tuples of basis
vectors proves it on the whole space.  Exhaustive scans walk the tuples in
lexicographic order and always report the lexicographically first failure,
whatever the number of worker processes.
"""

from __future__ import annotations

import itertools
import multiprocessing
import os
import random
from dataclasses import dataclass, field as dc_field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .exactlin import (
    DimensionMismatch,
    FieldMismatch,
    FieldSpec,
    LinMap,
    MultiMap,
    Vector,
    accumulate,
    clean,
)

EXHAUSTIVE = "exhaustive"
SAMPLED = "sampled"
PASS = "pass"
FAIL = "fail"


class UnsupportedMode(ValueError):
    pass


class CheckFailed(ValueError):
    """A verified precondition did not hold; ``report`` holds the counterexample."""

    def __init__(self, message: str, report: "CheckReport"):
        super().__init__(message)
        self.report = report


class NotMultiplicative(CheckFailed):
    pass


# ---------------------------------------------------------------------------
# Algebras
# ---------------------------------------------------------------------------

class _Algebra:
    field: FieldSpec
    arity: int
    is_finite: bool
    meta: dict

    def mul_basis(self, keys: Tuple) -> Mapping:
        raise NotImplementedError

    def twist_basis(self, i: int, key) -> Mapping:
        """Image of a basis vector under the 1-based twist ``α_i``."""
        raise NotImplementedError

    @property
    def equal_twists(self) -> bool:
        raise NotImplementedError

    def mul_dicts(self, args: Sequence[Mapping]) -> Dict:
        acc: Dict = {}
        for combo in itertools.product(*(a.items() for a in args)):
            outs = self.mul_basis(tuple(k for k, _ in combo))
            if outs:
                s = 1
                for _, c in combo:
                    s = s * c
                accumulate(acc, outs, s)
        return clean(self.field, acc)

    def twist_dict(self, i: int, d: Mapping) -> Dict:
        acc: Dict = {}
        for k, c in d.items():
            accumulate(acc, self.twist_basis(i, k), c)
        return clean(self.field, acc)

    def _vec(self, d: Mapping) -> Vector:
        return Vector(self.field, d, self.dim if self.is_finite else None)

    def _check_args(self, args: Sequence[Vector]):
        for a in args:
            if a.field != self.field:
                raise FieldMismatch(f"{a.field} vs {self.field}")
            if self.is_finite and a.dim is not None and a.dim != self.dim:
                raise DimensionMismatch(f"vector of dim {a.dim} in algebra of dim {self.dim}")

    def mul(self, *args: Vector) -> Vector:
        if len(args) != self.arity:
            raise DimensionMismatch(f"{self.arity}-ary product applied to {len(args)} arguments")
        self._check_args(args)
        return self._vec(self.mul_dicts([a._c for a in args]))

    def twist(self, i: int, v: Vector) -> Vector:
        if not 1 <= i <= self.arity - 1:
            raise IndexError(f"twist index {i} outside 1..{self.arity - 1}")
        self._check_args([v])
        return self._vec(self.twist_dict(i, v._c))

    def basis_vector(self, key) -> Vector:
        return Vector.basis(self.field, key, self.dim if self.is_finite else None)


class HomAlgebra(_Algebra):
    """Finite-dimensional n-ary Hom-algebra ``(V, μ, (α_1..α_{n-1}))``."""

    is_finite = True

    def __init__(self, product: MultiMap, twists: Sequence[LinMap],
                 labels: Optional[Sequence[str]] = None, meta: Optional[dict] = None):
        if product.arity < 2:
            raise ValueError("arity must be at least 2")
        twists = tuple(twists)
        if len(twists) != product.arity - 1:
            raise ValueError(f"a {product.arity}-ary algebra needs {product.arity - 1} twists, got {len(twists)}")
        for t in twists:
            if t.field != product.field:
                raise FieldMismatch("twist field differs from product field")
            if (t.rows, t.cols) != (product.dim, product.dim):
                raise DimensionMismatch(f"twist of shape {t.rows}x{t.cols} on a {product.dim}-dim space")
        self.product = product
        self.twists = twists
        self.field = product.field
        self.arity = product.arity
        self.dim = product.dim
        self.labels = tuple(labels) if labels is not None else tuple(f"e{i + 1}" for i in range(self.dim))
        if len(self.labels) != self.dim:
            raise ValueError("one label per basis vector")
        self.meta = dict(meta or {})

    @classmethod
    def untwisted(cls, product: MultiMap, **kw) -> "HomAlgebra":
        """An ordinary n-ary algebra, all twists the identity."""
        I = LinMap.identity(product.field, product.dim)
        return cls(product, [I] * (product.arity - 1), **kw)

    def keys(self):
        return range(self.dim)

    def mul_basis(self, keys):
        return self.product.table.get(keys, {})

    def mul_dicts(self, args):
        return self.product.apply_dicts(args)

    def twist_basis(self, i, key):
        return self.twists[i - 1].column(key)

    @property
    def equal_twists(self) -> bool:
        return all(t == self.twists[0] for t in self.twists)

    @property
    def alpha(self) -> LinMap:
        """The common twist; only meaningful when :attr:`equal_twists`."""
        if not self.equal_twists:
            raise ValueError("twists are not all equal")
        return self.twists[0]

    def replace(self, product: Optional[MultiMap] = None, twists=None, meta=None) -> "HomAlgebra":
        return HomAlgebra(product if product is not None else self.product,
                          twists if twists is not None else self.twists,
                          self.labels, meta if meta is not None else self.meta)

    def same_structure(self, other: "HomAlgebra") -> bool:
        return self.product == other.product and self.twists == other.twists

    def __repr__(self):
        return (f"HomAlgebra(arity={self.arity}, dim={self.dim}, field={self.field}, "
                f"nnz={self.product.nnz}, equal_twists={self.equal_twists})")


class LazyHomAlgebra(_Algebra):
    """Hom-algebra over an unbounded basis of hashable keys.

    ``product`` maps a tuple of ``arity`` keys to a sparse dict, ``twist`` maps
    ``(i, key)`` (``i`` 1-based) to a sparse dict and ``sample_key(rng)`` draws
    a random basis key for sampled checks.
    """

    is_finite = False
    dim = None

    def __init__(self, field: FieldSpec, arity: int, product: Callable, twist: Callable,
                 sample_key: Callable, equal_twists: bool = False,
                 label: Callable = str, meta: Optional[dict] = None):
        if arity < 2:
            raise ValueError("arity must be at least 2")
        self.field = field
        self.arity = arity
        self._product = product
        self._twist = twist
        self.sample_key = sample_key
        self._equal = equal_twists
        self.label = label
        self.meta = dict(meta or {})
        self._pcache: Dict = {}
        self._tcache: Dict = {}

    def mul_basis(self, keys):
        try:
            return self._pcache[keys]
        except KeyError:
            v = self._pcache[keys] = clean(self.field, self._product(keys))
            return v

    def twist_basis(self, i, key):
        try:
            return self._tcache[i, key]
        except KeyError:
            v = self._tcache[i, key] = clean(self.field, self._twist(i, key))
            return v

    @property
    def equal_twists(self) -> bool:
        return self._equal

    def __repr__(self):
        return f"LazyHomAlgebra(arity={self.arity}, field={self.field})"


# ---------------------------------------------------------------------------
# Reports and the scan engine
# ---------------------------------------------------------------------------

@dataclass
class Counterexample:
    identity: str
    index: Optional[int]
    args: tuple
    lhs: Vector
    rhs: Vector

    def to_dict(self, labels: Optional[Callable] = None) -> dict:
        F = self.lhs.field
        lab = labels or (lambda k: k + 1 if isinstance(k, int) else str(k))

        def vec(v):
            return {str(lab(k)): F.format(c) for k, c in v}

        return {
            "identity": self.identity,
            "index": self.index,
            "args": [lab(a) for a in self.args],
            "lhs": vec(self.lhs),
            "rhs": vec(self.rhs),
        }


@dataclass
class CheckReport:
    identity: str
    verdict: str
    mode: str
    tuples_checked: int
    counterexample: Optional[Counterexample] = None
    trials: Optional[int] = None
    seed: Optional[int] = None
    notes: List[str] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def __bool__(self):
        return self.passed

    def to_dict(self, labels: Optional[Callable] = None) -> dict:
        d = {
            "identity": self.identity,
            "verdict": self.verdict,
            "mode": self.mode,
            "tuples_checked": self.tuples_checked,
        }
        if self.mode == SAMPLED:
            d["trials"] = self.trials
            d["seed"] = self.seed
        d["counterexample"] = self.counterexample.to_dict(labels) if self.counterexample else None
        if self.notes:
            d["notes"] = list(self.notes)
        return d


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("HOMNAMBU_THREADS", "1")))
    except ValueError:
        return 1


# The active scan is stashed here so forked workers inherit it without pickling.
_ACTIVE = None


def _scan_block(first: int):
    evaluate, dim, nargs = _ACTIVE
    for rest in itertools.product(range(dim), repeat=nargs - 1):
        t = (first,) + rest
        bad = evaluate(t)
        if bad is not None:
            return t, bad
    return None


def _lex_rank(t: Sequence[int], dim: int) -> int:
    r = 0
    for k in t:
        r = r * dim + k
    return r


def run_check(alg: _Algebra, identity: str, nargs: int, evaluate: Callable,
              mode: str = EXHAUSTIVE, trials: int = 10_000, seed: int = 0,
              workers: Optional[int] = None) -> CheckReport:
    """Drive ``evaluate(basis_key_tuple) -> None | (index, lhs, rhs)``.

    Exhaustive mode needs a finite carrier; sampled mode draws uniformly
    random basis tuples from ``random.Random(seed)``.
    """
    if mode == EXHAUSTIVE:
        if not alg.is_finite:
            raise UnsupportedMode("exhaustive checking needs a finite basis")
        dim = alg.dim
        total = dim ** nargs
        if nargs == 0:
            bad = evaluate(())
            hit = ((), bad) if bad is not None else None
        elif dim == 0:
            hit = None
        else:
            workers = default_workers() if workers is None else workers
            hit = _exhaustive(evaluate, dim, nargs, workers)
        if hit is None:
            return CheckReport(identity, PASS, EXHAUSTIVE, total)
        t, (idx, lhs, rhs) = hit
        cx = Counterexample(identity, idx, t, alg._vec(lhs), alg._vec(rhs))
        return CheckReport(identity, FAIL, EXHAUSTIVE, _lex_rank(t, dim) + 1 if nargs else 1, cx)

    if mode != SAMPLED:
        raise UnsupportedMode(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    if alg.is_finite:
        if alg.dim == 0:
            return CheckReport(identity, PASS, SAMPLED, 0, trials=trials, seed=seed)
        draw = lambda: tuple(rng.randrange(alg.dim) for _ in range(nargs))
    else:
        draw = lambda: tuple(alg.sample_key(rng) for _ in range(nargs))
    for n_done in range(1, trials + 1):
        t = draw()
        bad = evaluate(t)
        if bad is not None and evaluate(t) is not None:  # replay before reporting
            idx, lhs, rhs = bad
            cx = Counterexample(identity, idx, t, alg._vec(lhs), alg._vec(rhs))
            return CheckReport(identity, FAIL, SAMPLED, n_done, cx, trials=trials, seed=seed)
    return CheckReport(identity, PASS, SAMPLED, trials, trials=trials, seed=seed)


def _exhaustive(evaluate, dim, nargs, workers):
    global _ACTIVE
    _ACTIVE = (evaluate, dim, nargs)
    try:
        if workers <= 1 or dim == 1:
            for first in range(dim):
                hit = _scan_block(first)
                if hit is not None:
                    return hit
            return None
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(min(workers, dim)) as pool:
            # imap preserves block order, so the first hit is the lex-first failure.
            for hit in pool.imap(_scan_block, range(dim)):
                if hit is not None:
                    pool.terminate()
                    return hit
        return None
    finally:
        _ACTIVE = None


# ---------------------------------------------------------------------------
# Hom-associators and total Hom-associativity
# ---------------------------------------------------------------------------

def _assoc_pair(alg: _Algebra, i: int, a: Sequence[Mapping]) -> Tuple[Dict, Dict]:
    """The two parenthesizations whose difference is ``as^i``."""
    n = alg.arity
    tw = alg.twist_dict
    lhs_args = ([tw(r + 1, a[r]) for r in range(i - 1)]
                + [alg.mul_dicts(a[i - 1:i - 1 + n])]
                + [tw(i + r, a[i - 1 + n + r]) for r in range(n - i)])
    rhs_args = ([tw(r + 1, a[r]) for r in range(i)]
                + [alg.mul_dicts(a[i:i + n])]
                + [tw(i + 1 + r, a[i + n + r]) for r in range(n - i - 1)])
    return alg.mul_dicts(lhs_args), alg.mul_dicts(rhs_args)


def _assoc_pair_basis(alg: _Algebra, i: int, t: Tuple) -> Tuple[Dict, Dict]:
    """:func:`_assoc_pair` on basis keys, reading twists and products from tables."""
    n = alg.arity
    tw = alg.twist_basis
    lhs_args = ([tw(r + 1, t[r]) for r in range(i - 1)]
                + [alg.mul_basis(t[i - 1:i - 1 + n])]
                + [tw(i + r, t[i - 1 + n + r]) for r in range(n - i)])
    rhs_args = ([tw(r + 1, t[r]) for r in range(i)]
                + [alg.mul_basis(t[i:i + n])]
                + [tw(i + 1 + r, t[i + n + r]) for r in range(n - i - 1)])
    return alg.mul_dicts(lhs_args), alg.mul_dicts(rhs_args)


def hom_associator(A: _Algebra, i: int, args: Sequence[Vector]) -> Vector:
    """``as^i_A(a_1..a_{2n-1})`` for ``1 <= i <= n-1``."""
    n = A.arity
    if not 1 <= i <= n - 1:
        raise IndexError(f"associator index {i} outside 1..{n - 1}")
    if len(args) != 2 * n - 1:
        raise DimensionMismatch(f"associator takes {2 * n - 1} arguments, got {len(args)}")
    A._check_args(args)
    lhs, rhs = _assoc_pair(A, i, [a._c for a in args])
    acc = dict(lhs)
    accumulate(acc, rhs, -1)
    return A._vec(acc)


def check_total_hom_associativity(A: _Algebra, mode: str = EXHAUSTIVE, trials: int = 10_000,
                                  seed: int = 0, workers: Optional[int] = None) -> CheckReport:
    n = A.arity

    def evaluate(t):
        for i in range(1, n):
            lhs, rhs = _assoc_pair_basis(A, i, t)
            if lhs != rhs:
                return i, lhs, rhs
        return None

    return run_check(A, "total_hom_associativity", 2 * n - 1, evaluate, mode, trials, seed, workers)


# ---------------------------------------------------------------------------
# Multiplicativity and morphisms
# ---------------------------------------------------------------------------

def _unequal_twists(A: _Algebra) -> Optional[Counterexample]:
    if not A.is_finite:
        return None if A.equal_twists else Counterexample("equal_twists", None, (), Vector.zero(A.field), Vector.zero(A.field))
    base = A.twists[0]
    for i, t in enumerate(A.twists[1:], start=2):
        if t != base:
            j = next(j for j in range(A.dim) if t.column(j) != base.column(j))
            return Counterexample("equal_twists", i, (j,), A._vec(base.column(j)), A._vec(t.column(j)))
    return None


def check_multiplicative(A: _Algebra, mode: str = EXHAUSTIVE, trials: int = 10_000,
                         seed: int = 0, workers: Optional[int] = None) -> CheckReport:
    """Equal twists and ``α∘μ = μ∘α^{⊗n}``; fails fast on unequal twists."""
    cx = _unequal_twists(A)
    if cx is not None:
        return CheckReport("multiplicativity", FAIL, mode, 0, cx,
                           trials=trials if mode == SAMPLED else None,
                           seed=seed if mode == SAMPLED else None)

    def evaluate(t):
        lhs = A.twist_dict(1, A.mul_basis(t))
        rhs = A.mul_dicts([A.twist_basis(1, k) for k in t])
        return None if lhs == rhs else (None, lhs, rhs)

    return run_check(A, "multiplicativity", A.arity, evaluate, mode, trials, seed, workers)


def is_multiplicative(A: _Algebra, **kw) -> bool:
    return check_multiplicative(A, **kw).passed


def _check_pair(A, B):
    if A.arity != B.arity:
        raise DimensionMismatch(f"arity {A.arity} vs {B.arity}")
    if A.field != B.field:
        raise FieldMismatch(f"{A.field} vs {B.field}")


def check_weak_morphism(f: LinMap, A: HomAlgebra, B: HomAlgebra, mode: str = EXHAUSTIVE,
                        trials: int = 10_000, seed: int = 0,
                        workers: Optional[int] = None) -> CheckReport:
    """``f∘μ_A = μ_B∘f^{⊗n}`` on basis tuples of ``A``."""
    _check_pair(A, B)
    if (f.rows, f.cols) != (B.dim, A.dim):
        raise DimensionMismatch(f"map of shape {f.rows}x{f.cols} between dims {A.dim} and {B.dim}")

    def evaluate(t):
        lhs = f.apply_dict(A.mul_basis(t))
        rhs = B.mul_dicts([f.column(k) for k in t])
        return None if lhs == rhs else (None, lhs, rhs)

    rep = run_check(A, "weak_morphism", A.arity, evaluate, mode, trials, seed, workers)
    if rep.counterexample is not None:
        # lhs/rhs live in B
        cx = rep.counterexample
        cx.lhs = Vector(B.field, cx.lhs.coeffs, B.dim)
        cx.rhs = Vector(B.field, cx.rhs.coeffs, B.dim)
    return rep


def check_morphism(f: LinMap, A: HomAlgebra, B: HomAlgebra, mode: str = EXHAUSTIVE,
                   trials: int = 10_000, seed: int = 0,
                   workers: Optional[int] = None) -> CheckReport:
    """Weak morphism plus ``f∘α_i^A = α_i^B∘f`` for every ``i``."""
    rep = check_weak_morphism(f, A, B, mode, trials, seed, workers)
    rep.identity = "morphism"
    if not rep.passed:
        return rep
    for i, (ta, tb) in enumerate(zip(A.twists, B.twists), start=1):
        left, right = f @ ta, tb @ f
        if left != right:
            j = next(j for j in range(A.dim) if left.column(j) != right.column(j))
            rep.verdict = FAIL
            rep.counterexample = Counterexample(
                "twist_compatibility", i, (j,),
                Vector(B.field, left.column(j), B.dim), Vector(B.field, right.column(j), B.dim))
            return rep
    rep.notes.append(f"{len(A.twists)} twist compatibilities verified")
    return rep


# ---------------------------------------------------------------------------
# Twisting constructions
# ---------------------------------------------------------------------------

def forget_twists(A: HomAlgebra) -> HomAlgebra:
    """Same product, every twist replaced by the identity."""
    return HomAlgebra.untwisted(A.product, labels=A.labels, meta=dict(A.meta, construction="forget_twists"))


def yau_twist(A: _Algebra, beta, check: bool = True, mode: str = EXHAUSTIVE,
              trials: int = 10_000, seed: int = 0):
    """``A_β = (A, β∘μ, (β∘α_1, .., β∘α_{n-1}))``.

    ``beta`` is a :class:`LinMap` for finite algebras or a key evaluator
    ``key -> sparse dict`` for lazy ones.  With ``check`` the weak-morphism
    property of ``beta`` is verified first.
    """
    if A.is_finite:
        if not isinstance(beta, LinMap):
            raise TypeError("a finite algebra is twisted by a LinMap")
        if check:
            rep = check_weak_morphism(beta, A, A, mode, trials, seed)
            if not rep.passed:
                raise CheckFailed("twisting map is not a weak morphism", rep)
        meta = dict(A.meta, construction="yau_twist")
        return HomAlgebra(A.product.then(beta), [beta @ t for t in A.twists], A.labels, meta)

    F = A.field

    def beta_dict(d):
        acc = {}
        for k, c in d.items():
            accumulate(acc, beta(k), c)
        return clean(F, acc)

    if check:
        def evaluate(t):
            lhs = beta_dict(A.mul_basis(t))
            rhs = A.mul_dicts([clean(F, beta(k)) for k in t])
            return None if lhs == rhs else (None, lhs, rhs)

        rep = run_check(A, "weak_morphism", A.arity, evaluate, SAMPLED, trials, seed)
        if not rep.passed:
            raise CheckFailed("twisting map is not a weak morphism", rep)
    return LazyHomAlgebra(
        F, A.arity,
        product=lambda keys: beta_dict(A.mul_basis(keys)),
        twist=lambda i, key: beta_dict(A.twist_basis(i, key)),
        sample_key=A.sample_key, equal_twists=A.equal_twists, label=A.label,
        meta=dict(A.meta, construction="yau_twist"))


def derived_twist_sequence(A: HomAlgebra, k: int, check: bool = True) -> HomAlgebra:
    """``A_k = (A, α^{2^k-1}∘μ, α^{2^k})`` for a multiplicative ``A``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if check:
        rep = check_multiplicative(A)
        if not rep.passed:
            raise NotMultiplicative("derived twists need a multiplicative algebra", rep)
    elif not A.equal_twists:
        raise ValueError("derived twists need equal twisting maps")
    if k == 0:
        return A
    alpha = A.twists[0]
    e = 2 ** k
    twist = alpha.power(e)
    meta = dict(A.meta, construction="derived_twist", k=k)
    return HomAlgebra(A.product.then(alpha.power(e - 1)), [twist] * (A.arity - 1), A.labels, meta)


def twisted_associator_residual(A: HomAlgebra, beta: LinMap, i: int, args: Sequence[Vector],
                     twisted: Optional[HomAlgebra] = None) -> Tuple[Vector, Vector]:
    """``(β²(as^i_A(args)), as^i_{A_β}(args))``; equal whenever ``β`` is a weak morphism.

    Pass a precomputed ``twisted = yau_twist(A, beta)`` to avoid rebuilding it.
    """
    if twisted is None:
        twisted = yau_twist(A, beta, check=False)
    b2 = beta @ beta
    return b2(hom_associator(A, i, args)), hom_associator(twisted, i, args)


def check_twisted_associator(A: HomAlgebra, beta: LinMap, mode: str = EXHAUSTIVE, trials: int = 10_000,
                  seed: int = 0, workers: Optional[int] = None) -> CheckReport:
    """Compare the two sides of :func:`twisted_associator_residual` on every basis tuple."""
    twisted = yau_twist(A, beta, check=False)
    b2 = beta @ beta
    n = A.arity

    def evaluate(t):
        for i in range(1, n):
            l1, r1 = _assoc_pair_basis(A, i, t)
            diff = dict(l1)
            accumulate(diff, r1, -1)
            lhs = b2.apply_dict(clean(A.field, diff))
            l2, r2 = _assoc_pair_basis(twisted, i, t)
            rhs = dict(l2)
            accumulate(rhs, r2, -1)
            rhs = clean(A.field, rhs)
            if lhs != rhs:
                return i, lhs, rhs
        return None

    return run_check(A, "twisted_associator", 2 * n - 1, evaluate, mode, trials, seed, workers)
