"""Exact scalars, sparse vectors, dense linear maps and sparse multilinear maps.

Scalars are plain Python numbers.  Over the rationals a value is an ``int``
when integral and a reduced :class:`fractions.Fraction` otherwise (the two
compare and hash equal, so canonical forms stay unique); over a prime field it
is an ``int`` residue in ``[0, p)``.  Hot loops accumulate with ordinary
``+``/``*`` and call :meth:`FieldSpec.reduce` once at the end, which is exact
in both cases.

Basis indices are 0-based internally; the file format shifts them to 1-based.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple


class FieldMismatch(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class NoRootExists(ValueError):
    pass


class SingularMatrix(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient domain: ``FieldSpec.Q()`` or ``FieldSpec.Fp(p)``."""

    kind: str
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind == "Q":
            if self.p is not None:
                raise ValueError("the rational field takes no modulus")
        elif self.kind == "Fp":
            if self.p is None or not is_prime(self.p):
                raise ValueError(f"prime field needs a prime modulus, got {self.p!r}")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def Q(cls) -> "FieldSpec":
        return cls("Q")

    @classmethod
    def Fp(cls, p: int) -> "FieldSpec":
        return cls("Fp", p)

    @property
    def is_prime_field(self) -> bool:
        return self.kind == "Fp"

    def __str__(self):
        return "Q" if self.kind == "Q" else f"F_{self.p}"

    # -- scalar arithmetic -------------------------------------------------

    def reduce(self, x):
        """Canonical representative of an integer or rational value."""
        if self.kind == "Q":
            if type(x) is int:
                return x
            x = Fraction(x)
            return x.numerator if x.denominator == 1 else x
        if type(x) is Fraction:
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return x % self.p

    def __call__(self, x):
        return self.reduce(x)

    @property
    def zero(self):
        return self.reduce(0)

    @property
    def one(self):
        return self.reduce(1)

    def add(self, a, b):
        return self.reduce(a + b)

    def sub(self, a, b):
        return self.reduce(a - b)

    def mul(self, a, b):
        return self.reduce(a * b)

    def neg(self, a):
        return self.reduce(-a)

    def inv(self, a):
        a = self.reduce(a)
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.kind == "Q":
            return self.reduce(1 / Fraction(a))
        return pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, k: int):
        if k < 0:
            return self.power(self.inv(a), -k)
        if self.kind == "Q":
            return self.reduce(self.reduce(a) ** k)
        return pow(self.reduce(a), k, self.p)

    def random(self, rng, bound: int = 5):
        """A random scalar; rationals get small numerators/denominators."""
        if self.kind == "Fp":
            return rng.randrange(self.p)
        return self.reduce(Fraction(rng.randint(-bound, bound), rng.randint(1, bound)))

    # -- text form ---------------------------------------------------------

    def format(self, x) -> str:
        x = self.reduce(x)
        if self.kind == "Fp" or type(x) is int:
            return str(x)
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"

    def parse(self, s: str):
        s = s.strip()
        if self.kind == "Fp":
            if "/" in s:
                num, den = s.split("/")
                return self.div(int(num), int(den))
            return self.reduce(int(s))
        return self.reduce(Fraction(s))


def primitive_root_of_unity(p: int, n: int) -> int:
    """Smallest residue of multiplicative order exactly ``n`` modulo ``p``."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 2:
        raise ValueError("root order must be at least 2")
    if (p - 1) % n:
        raise NoRootExists(f"{n} does not divide {p} - 1")
    divisors = [d for d in range(1, n) if n % d == 0]
    for z in range(2, p):
        if pow(z, n, p) == 1 and all(pow(z, d, p) != 1 for d in divisors):
            return z
    raise NoRootExists(f"no element of order {n} mod {p}")  # unreachable for prime p


# ---------------------------------------------------------------------------
# Sparse dict helpers (the representation used inside every hot loop)
# ---------------------------------------------------------------------------

def clean(field: FieldSpec, d: Mapping) -> Dict:
    out = {}
    for k, c in d.items():
        c = field.reduce(c)
        if c:
            out[k] = c
    return out


def accumulate(acc: Dict, d: Mapping, scale=1) -> None:
    for k, c in d.items():
        acc[k] = acc.get(k, 0) + scale * c


class Vector:
    """Immutable sparse vector; zero coefficients are never stored."""

    __slots__ = ("field", "dim", "_c", "_hash")

    def __init__(self, field: FieldSpec, coeffs: Mapping = (), dim: Optional[int] = None):
        self.field = field
        self.dim = dim
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c = {}
        for k, v in items:
            c[k] = c.get(k, 0) + v
        c = clean(field, c)
        if dim is not None:
            for k in c:
                if not (isinstance(k, int) and 0 <= k < dim):
                    raise DimensionMismatch(f"basis index {k!r} outside 0..{dim - 1}")
        self._c = c
        self._hash = None

    @classmethod
    def basis(cls, field: FieldSpec, key, dim: Optional[int] = None) -> "Vector":
        return cls(field, {key: 1}, dim)

    @classmethod
    def zero(cls, field: FieldSpec, dim: Optional[int] = None) -> "Vector":
        return cls(field, {}, dim)

    @classmethod
    def from_dense(cls, field: FieldSpec, entries: Sequence) -> "Vector":
        return cls(field, dict(enumerate(entries)), len(entries))

    @property
    def coeffs(self) -> Dict:
        return dict(self._c)

    def items(self):
        return self._c.items()

    def support(self) -> List:
        return sorted(self._c)

    def __getitem__(self, key):
        return self._c.get(key, self.field.zero)

    def __len__(self):
        return len(self._c)

    def __iter__(self) -> Iterator:
        return iter(sorted(self._c.items()))

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def _check(self, other: "Vector"):
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        if self.dim is not None and other.dim is not None and self.dim != other.dim:
            raise DimensionMismatch(f"dimension {self.dim} vs {other.dim}")

    def _dim_with(self, other):
        return self.dim if self.dim is not None else other.dim

    def __add__(self, other: "Vector") -> "Vector":
        self._check(other)
        acc = dict(self._c)
        accumulate(acc, other._c)
        return Vector(self.field, acc, self._dim_with(other))

    def __sub__(self, other: "Vector") -> "Vector":
        self._check(other)
        acc = dict(self._c)
        accumulate(acc, other._c, -1)
        return Vector(self.field, acc, self._dim_with(other))

    def __neg__(self) -> "Vector":
        return Vector(self.field, {k: -c for k, c in self._c.items()}, self.dim)

    def scale(self, s) -> "Vector":
        return Vector(self.field, {k: s * c for k, c in self._c.items()}, self.dim)

    def __rmul__(self, s) -> "Vector":
        return self.scale(s)

    def __eq__(self, other):
        if not isinstance(other, Vector):
            return NotImplemented
        return self.field == other.field and self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, frozenset(self._c.items())))
        return self._hash

    def dense(self) -> list:
        if self.dim is None:
            raise ValueError("vector over a lazy basis has no dense form")
        return [self[i] for i in range(self.dim)]

    def __repr__(self):
        if not self._c:
            return "0"
        terms = [f"{self.field.format(c)}*e[{k}]" for k, c in sorted(self._c.items(), key=lambda kv: repr(kv[0]))]
        return " + ".join(terms)


# ---------------------------------------------------------------------------
# Dense linear maps
# ---------------------------------------------------------------------------

class LinMap:
    """Exact matrix acting on column vectors; ``rows`` is the target dimension."""

    __slots__ = ("field", "rows", "cols", "entries", "_colcache", "_rowcache")

    def __init__(self, field: FieldSpec, entries: Sequence[Sequence], cols: Optional[int] = None):
        self.field = field
        self.entries = tuple(tuple(field.reduce(x) for x in row) for row in entries)
        self.rows = len(self.entries)
        if cols is None:
            cols = len(self.entries[0]) if self.entries else 0
        self.cols = cols
        if any(len(r) != cols for r in self.entries):
            raise DimensionMismatch("ragged matrix")
        self._colcache = None
        self._rowcache = None

    @classmethod
    def identity(cls, field: FieldSpec, dim: int) -> "LinMap":
        return cls(field, [[1 if i == j else 0 for j in range(dim)] for i in range(dim)], dim)

    @classmethod
    def zero(cls, field: FieldSpec, rows: int, cols: Optional[int] = None) -> "LinMap":
        cols = rows if cols is None else cols
        return cls(field, [[0] * cols for _ in range(rows)], cols)

    @classmethod
    def diagonal(cls, field: FieldSpec, diag: Sequence) -> "LinMap":
        d = len(diag)
        return cls(field, [[diag[i] if i == j else 0 for j in range(d)] for i in range(d)], d)

    @classmethod
    def from_columns(cls, field: FieldSpec, columns: Sequence[Mapping], rows: int) -> "LinMap":
        """Build from sparse images of the basis vectors."""
        m = [[0] * len(columns) for _ in range(rows)]
        for j, col in enumerate(columns):
            for i, c in col.items():
                m[i][j] = c
        return cls(field, m, len(columns))

    @property
    def dim(self) -> int:
        if self.rows != self.cols:
            raise DimensionMismatch(f"{self.rows}x{self.cols} map is not square")
        return self.rows

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def column(self, j: int) -> Dict[int, object]:
        """Sparse image of basis vector ``j``."""
        if self._colcache is None:
            self._colcache = [
                {i: self.entries[i][c] for i in range(self.rows) if self.entries[i][c]}
                for c in range(self.cols)
            ]
        return self._colcache[j]

    def row(self, i: int) -> Dict[int, object]:
        """Sparse row ``i``: the basis vectors whose image has an ``e_i`` component."""
        if self._rowcache is None:
            self._rowcache = [
                {j: x for j, x in enumerate(self.entries[r]) if x} for r in range(self.rows)
            ]
        return self._rowcache[i]

    def apply_dict(self, d: Mapping) -> Dict:
        acc: Dict = {}
        for j, c in d.items():
            accumulate(acc, self.column(j), c)
        return clean(self.field, acc)

    def __call__(self, v: Vector) -> Vector:
        if v.field != self.field:
            raise FieldMismatch(f"{v.field} vs {self.field}")
        if v.dim is not None and v.dim != self.cols:
            raise DimensionMismatch(f"vector of dim {v.dim} into {self.rows}x{self.cols} map")
        return Vector(self.field, self.apply_dict(v._c), self.rows)

    def compose(self, other: "LinMap") -> "LinMap":
        """``self ∘ other``."""
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}")
        cols = [self.apply_dict(other.column(j)) for j in range(other.cols)]
        return LinMap.from_columns(self.field, cols, self.rows)

    def __matmul__(self, other: "LinMap") -> "LinMap":
        return self.compose(other)

    def power(self, k: int) -> "LinMap":
        if k < 0:
            raise ValueError("negative power")
        result = LinMap.identity(self.field, self.dim)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def __add__(self, other: "LinMap") -> "LinMap":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch")
        return LinMap(self.field, [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)], self.cols)

    def scale(self, s) -> "LinMap":
        return LinMap(self.field, [[s * a for a in r] for r in self.entries], self.cols)

    def transpose(self) -> "LinMap":
        return LinMap(self.field, [list(c) for c in zip(*self.entries)] if self.rows else [], self.rows)

    def is_identity(self) -> bool:
        return self.is_square and self == LinMap.identity(self.field, self.rows)

    def inverse(self) -> "LinMap":
        """Gauss-Jordan inverse; raises :class:`SingularMatrix`."""
        n = self.dim
        F = self.field
        a = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(self.entries)]
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col]), None)
            if piv is None:
                raise SingularMatrix("matrix is not invertible")
            a[col], a[piv] = a[piv], a[col]
            inv = F.inv(a[col][col])
            a[col] = [F.mul(x, inv) for x in a[col]]
            for r in range(n):
                if r != col and a[r][col]:
                    f = a[r][col]
                    a[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(a[r], a[col])]
        return LinMap(F, [row[n:] for row in a], n)

    def determinant(self):
        n = self.dim
        F = self.field
        a = [list(r) for r in self.entries]
        det = F.one
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col]), None)
            if piv is None:
                return F.zero
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                det = F.neg(det)
            det = F.mul(det, a[col][col])
            inv = F.inv(a[col][col])
            for r in range(col + 1, n):
                if a[r][col]:
                    f = F.mul(a[r][col], inv)
                    a[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(a[r], a[col])]
        return det

    def __eq__(self, other):
        if not isinstance(other, LinMap):
            return NotImplemented
        return (self.field, self.rows, self.cols, self.entries) == (other.field, other.rows, other.cols, other.entries)

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(x) for x in r) for r in self.entries)
        return f"LinMap[{self.field}]({body})"


def linmap_compose(L: LinMap, M: LinMap) -> LinMap:
    return L.compose(M)


def linmap_pow(L: LinMap, k: int) -> LinMap:
    return L.power(k)


def random_invertible(field: FieldSpec, dim: int, rng, bound: int = 3) -> LinMap:
    """Seeded random invertible matrix (rejection sampling)."""
    while True:
        if field.is_prime_field:
            m = [[rng.randrange(field.p) for _ in range(dim)] for _ in range(dim)]
        else:
            m = [[rng.randint(-bound, bound) for _ in range(dim)] for _ in range(dim)]
        L = LinMap(field, m, dim)
        if L.determinant():
            return L


# ---------------------------------------------------------------------------
# Sparse multilinear maps
# ---------------------------------------------------------------------------

class MultiMap:
    """Structure constants ``c[(i1..in) -> j]`` of an n-linear map on a
    ``dim``-dimensional space.

    ``table`` maps an input tuple to a sparse ``{output: coeff}`` dict.
    """

    __slots__ = ("field", "arity", "dim", "table", "_by_output")

    def __init__(self, field: FieldSpec, arity: int, dim: int, entries: Iterable = ()):
        if arity < 1:
            raise ValueError("arity must be positive")
        self.field = field
        self.arity = arity
        self.dim = dim
        self._by_output = None
        if isinstance(entries, Mapping):
            raw = entries
        else:
            raw = {}
            for inputs, out, c in entries:
                inputs = tuple(inputs)
                slot = raw.setdefault(inputs, {})
                if out in slot:
                    raise ValueError(f"duplicate structure constant for {inputs} -> {out}")
                slot[out] = c
        table = {}
        for inputs, outs in raw.items():
            inputs = tuple(inputs)
            if len(inputs) != arity or any(not 0 <= i < dim for i in inputs):
                raise DimensionMismatch(f"bad input tuple {inputs} for arity {arity}, dim {dim}")
            outs = clean(field, outs)
            if any(not 0 <= j < dim for j in outs):
                raise DimensionMismatch(f"bad output index in {outs}")
            if outs:
                table[inputs] = outs
        self.table = table

    @classmethod
    def zero(cls, field: FieldSpec, arity: int, dim: int) -> "MultiMap":
        return cls(field, arity, dim)

    @classmethod
    def from_function(cls, field: FieldSpec, arity: int, dim: int, fn) -> "MultiMap":
        """Tabulate ``fn(basis tuple) -> sparse dict`` over every basis tuple."""
        table = {}
        for t in itertools.product(range(dim), repeat=arity):
            table[t] = fn(t)
        return cls(field, arity, dim, table)

    def entries(self) -> List[Tuple[Tuple[int, ...], int, object]]:
        return sorted((t, j, c) for t, outs in self.table.items() for j, c in outs.items())

    @property
    def nnz(self) -> int:
        return sum(len(o) for o in self.table.values())

    def basis_product(self, t: Tuple[int, ...]) -> Dict:
        return self.table.get(t, {})

    def apply_dicts(self, args: Sequence[Mapping]) -> Dict:
        acc: Dict = {}
        table = self.table
        for combo in itertools.product(*(a.items() for a in args)):
            outs = table.get(tuple(k for k, _ in combo))
            if outs:
                s = 1
                for _, c in combo:
                    s = s * c
                accumulate(acc, outs, s)
        return clean(self.field, acc)

    def __call__(self, *args: Vector) -> Vector:
        return multimap_apply(self, args)

    def by_output(self) -> Dict[int, List[Tuple[Tuple[int, ...], object]]]:
        """Index ``output -> [(inputs, coeff)]`` used for composition."""
        if self._by_output is None:
            idx: Dict[int, list] = {}
            for t, outs in self.table.items():
                for j, c in outs.items():
                    idx.setdefault(j, []).append((t, c))
            self._by_output = idx
        return self._by_output

    def then(self, L: LinMap) -> "MultiMap":
        """Post-compose with a linear map: ``L ∘ self``."""
        if L.cols != self.dim or L.field != self.field:
            raise DimensionMismatch("linear map does not fit the multilinear map")
        return MultiMap(self.field, self.arity, L.rows,
                        {t: L.apply_dict(outs) for t, outs in self.table.items()})

    def compose(self, slots: Sequence) -> "MultiMap":
        """Pre-compose slot by slot.

        Each slot is ``None`` (identity, one input), a :class:`LinMap` (one
        input) or a :class:`MultiMap` (consumes its own arity of inputs).
        Slots that are :class:`Vector` instances are fixed arguments and
        consume no inputs.
        """
        if len(slots) != self.arity:
            raise ValueError(f"need {self.arity} slot maps, got {len(slots)}")
        preimages = []
        for s in slots:
            if s is None:
                preimages.append(lambda b: [((b,), 1)])
            elif isinstance(s, LinMap):
                preimages.append(lambda b, s=s: [((k,), x) for k, x in s.row(b).items()])
            elif isinstance(s, MultiMap):
                idx = s.by_output()
                preimages.append(lambda b, idx=idx: idx.get(b, []))
            elif isinstance(s, Vector):
                preimages.append(lambda b, s=s: [((), s[b])] if s[b] else [])
            else:
                raise TypeError(f"unsupported slot {s!r}")
        new_arity = sum(0 if isinstance(s, Vector) else s.arity if isinstance(s, MultiMap) else 1 for s in slots)
        acc: Dict[Tuple[int, ...], Dict] = {}
        for t, outs in self.table.items():
            for combo in itertools.product(*(pre(b) for pre, b in zip(preimages, t))):
                key = tuple(itertools.chain.from_iterable(k for k, _ in combo))
                s = 1
                for _, c in combo:
                    s = s * c
                accumulate(acc.setdefault(key, {}), outs, s)
        return MultiMap(self.field, new_arity, self.dim, acc)

    def __eq__(self, other):
        if not isinstance(other, MultiMap):
            return NotImplemented
        return (self.field, self.arity, self.dim, self.table) == (other.field, other.arity, other.dim, other.table)

    def __hash__(self):
        return hash((self.field, self.arity, self.dim, frozenset((t, frozenset(o.items())) for t, o in self.table.items())))

    def __repr__(self):
        return f"MultiMap(arity={self.arity}, dim={self.dim}, nnz={self.nnz}, field={self.field})"


def multimap_apply(T: MultiMap, args: Sequence[Vector]) -> Vector:
    if len(args) != T.arity:
        raise DimensionMismatch(f"arity {T.arity} map applied to {len(args)} arguments")
    for a in args:
        if a.field != T.field:
            raise FieldMismatch(f"{a.field} vs {T.field}")
        if a.dim is not None and a.dim != T.dim:
            raise DimensionMismatch(f"argument of dim {a.dim} for map on dim {T.dim}")
    return Vector(T.field, T.apply_dicts([a._c for a in args]), T.dim)
