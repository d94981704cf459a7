"""Arity-changing constructions.

Expansion: a multiplicative n-ary totally Hom-associative algebra gives one of
arity ``2n-1`` with product ``μ(μ(a_1..a_n), α(a_{n+1})..α(a_{2n-1}))`` and
twist ``α²``, and by iteration one of arity ``2^k(n-1)+1``.

Reduction: a distinguished element ``a`` with ``α_{n-1}(a) = a`` that can swap
with the second-to-last argument gives an (n-1)-ary algebra by plugging ``a``
into the last slot.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .exactlin import LinMap, MultiMap, Vector
from .homalg import (
    EXHAUSTIVE,
    FAIL,
    PASS,
    CheckFailed,
    CheckReport,
    Counterexample,
    HomAlgebra,
    NotMultiplicative,
    check_multiplicative,
    run_check,
)


class ArityTooSmall(ValueError):
    pass


class ConditionsFailed(CheckFailed):
    def __init__(self, message, report, stage: Optional[int] = None):
        super().__init__(message, report)
        self.stage = stage


@dataclass
class ReductionWitness:
    elements: List[Vector]
    checked: bool

    def to_dict(self):
        out = []
        for v in self.elements:
            out.append({str(k + 1): v.field.format(c) for k, c in v})
        return {"elements": out, "checked": self.checked}


def _require_multiplicative(A: HomAlgebra, check: bool):
    if check:
        rep = check_multiplicative(A)
        if not rep.passed:
            raise NotMultiplicative("arity expansion needs a multiplicative algebra", rep)
    elif not A.equal_twists:
        raise ValueError("arity expansion needs equal twisting maps")


def expand_arity(A: HomAlgebra, check: bool = True) -> HomAlgebra:
    """The (2n-1)-ary algebra ``(A, μ^{(1)}, α²)``.

    ``check=False`` skips the multiplicativity test (equal twists are still
    required), e.g. to experiment with binary Hom-associative algebras.
    """
    _require_multiplicative(A, check)
    n = A.arity
    alpha = A.twists[0]
    inner = A.product
    product = A.product.compose([inner] + [alpha] * (n - 1))
    twist = alpha @ alpha
    meta = dict(A.meta, construction="expand_arity")
    return HomAlgebra(product, [twist] * (2 * n - 2), A.labels, meta)


def expand_arity_k(A: HomAlgebra, k: int, check: bool = True) -> HomAlgebra:
    """The ``(2^k(n-1)+1)``-ary algebra ``(A, μ^{(k)}, α^{2^k})``.

    Built by the inductive rule: ``μ^{(k)}`` feeds ``μ^{(k-1)}`` into the
    first slot of ``μ^{(k-1)}`` and ``α^{2^{k-1}}`` into every other slot.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    _require_multiplicative(A, check)
    if k == 0:
        return A
    alpha = A.twists[0]
    mu = A.product
    for j in range(1, k + 1):
        beta = alpha.power(2 ** (j - 1))
        mu = mu.compose([mu] + [beta] * (mu.arity - 1))
    twist = alpha.power(2 ** k)
    meta = dict(A.meta, construction="expand_arity", k=k)
    return HomAlgebra(mu, [twist] * (mu.arity - 1), A.labels, meta)


# ---------------------------------------------------------------------------
# Reduction
# ---------------------------------------------------------------------------

def _fixed_point(A: HomAlgebra, twist_index: int, a: Vector, stage: Optional[int]) -> Optional[Counterexample]:
    image = A.twist(twist_index, a)
    if image != a:
        return Counterexample("twist_fixes_witness", stage, (), image, a)
    return None


def _swap_condition(A: HomAlgebra, free: int, tail: Sequence[Vector], identity: str, stage):
    """``(x_1..x_free, tail) = (x_1..x_{free-1}, tail[0], x_free, tail[1:])`` on basis tuples."""
    tail_dicts = [dict(v.items()) for v in tail]
    mul = A.mul_dicts

    def evaluate(t):
        x = [{k: 1} for k in t]
        lhs = mul(x + tail_dicts)
        rhs = mul(x[:-1] + tail_dicts[:1] + x[-1:] + tail_dicts[1:])
        return None if lhs == rhs else (stage, lhs, rhs)

    return run_check(A, identity, free, evaluate, EXHAUSTIVE)


def check_reduction_conditions(A: HomAlgebra, a: Vector) -> CheckReport:
    """``α_{n-1}(a) = a`` exactly and ``(x_{1,n-1}, a) = (x_{1,n-2}, a, x_{n-1})`` on all basis tuples."""
    n = A.arity
    if n < 3:
        raise ArityTooSmall("reduction needs arity at least 3")
    cx = _fixed_point(A, n - 1, a, None)
    if cx is not None:
        return CheckReport("reduction_conditions", FAIL, EXHAUSTIVE, 0, cx)
    rep = _swap_condition(A, n - 1, [a], "witness_swap", None)
    rep.identity = "reduction_conditions"
    return rep


def reduce_arity(A: HomAlgebra, a: Vector, check: bool = True) -> HomAlgebra:
    """``(A, (x_{1,n-1}, a), (α_1..α_{n-2}))``."""
    if A.arity < 3:
        raise ArityTooSmall("reduction needs arity at least 3")
    if check:
        rep = check_reduction_conditions(A, a)
        if not rep.passed:
            raise ConditionsFailed("witness violates the reduction conditions", rep, stage=1)
    product = A.product.compose([None] * (A.arity - 1) + [a])
    meta = dict(A.meta, construction="reduce_arity")
    meta["witnesses"] = meta.get("witnesses", []) + [ReductionWitness([a], check).to_dict()]
    return HomAlgebra(product, A.twists[:-1], A.labels, meta)


def check_staged_conditions(A: HomAlgebra, witnesses: Sequence[Vector]) -> CheckReport:
    """Staged conditions for plugging ``a_k, .., a_1`` into the last ``k`` slots.

    Stage ``i`` requires ``α_{n-i}(a_i) = a_i`` and
    ``(x_{1,n-i}, a_i, a_{i-1}, .., a_1) = (x_{1,n-i-1}, a_i, x_{n-i}, a_{i-1}, .., a_1)``.
    A failure's counterexample ``index`` is the stage.
    """
    n = A.arity
    k = len(witnesses)
    if n < 3:
        raise ArityTooSmall("reduction needs arity at least 3")
    if k > n - 2:
        raise ValueError(f"at most {n - 2} witnesses for a {n}-ary algebra")
    checked = 0
    for i in range(1, k + 1):
        a_i = witnesses[i - 1]
        cx = _fixed_point(A, n - i, a_i, i)
        if cx is not None:
            return CheckReport("reduction_conditions", FAIL, EXHAUSTIVE, checked, cx)
        tail = [witnesses[j - 1] for j in range(i, 0, -1)]  # a_i, a_{i-1}, .., a_1
        rep = _swap_condition(A, n - i, tail, "reduction_conditions", i)
        checked += rep.tuples_checked
        if not rep.passed:
            rep.tuples_checked = checked
            return rep
    return CheckReport("reduction_conditions", PASS, EXHAUSTIVE, checked)


def reduce_arity_seq(A: HomAlgebra, witnesses: Sequence[Vector], check: bool = True) -> HomAlgebra:
    """``(A, (x_{1,n-k}, a_k, .., a_1), (α_1..α_{n-1-k}))``."""
    n = A.arity
    k = len(witnesses)
    if k == 0:
        return A
    if check:
        rep = check_staged_conditions(A, witnesses)
        if not rep.passed:
            stage = rep.counterexample.index
            raise ConditionsFailed(f"reduction conditions fail at stage {stage}", rep, stage=stage)
    elif n < 3 or k > n - 2:
        raise ArityTooSmall(f"cannot plug {k} witnesses into a {n}-ary product")
    tail = [witnesses[j - 1] for j in range(k, 0, -1)]
    product = A.product.compose([None] * (n - k) + tail)
    meta = dict(A.meta, construction="reduce_arity")
    meta["witnesses"] = meta.get("witnesses", []) + [ReductionWitness(list(witnesses), check).to_dict()]
    return HomAlgebra(product, A.twists[:n - 1 - k], A.labels, meta)
