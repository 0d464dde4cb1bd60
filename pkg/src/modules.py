"""
Graded Free Modules and Maps
============================

Free modules are lists of twists: R(a) has its generator in degree -a.
A map F -> G is a matrix whose rows index G and columns index F; entry
(i, j) is homogeneous of degree b_i - a_j for F = sum R(a_j), G = sum R(b_i),
so every map is of degree zero.

Exterior and symmetric powers use the bases of `src.utils.math_utils`:
k-subsets and multisets in lexicographic order.

Classes:
    GradedFreeModule: Twist list with the usual multilinear constructions.
    ModuleMap: Degree-0 homomorphism of graded free modules.
    FreeComplex: Sequence of composable maps.

Functions:
    minors: All k x k minors of a map in a fixed order.
    random_map: Generic map with uniformly random coefficients.
"""

# Standard library imports
import logging
from collections import Counter
from dataclasses import dataclass
from functools import reduce
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

# Third-party imports
import numpy as np

# Local imports
from src.hilbert import HilbertSeries
from src.ring import GradedRing, Polynomial, Terms, terms_add, terms_mul
from src.utils.error_utils import AlgebraError, HomogeneityError, ParameterError
from src.utils.math_utils import multisets, subsets

Vector = Dict[Tuple[int, Tuple[int, ...]], int]


@dataclass(frozen=True)
class GradedFreeModule:
    """Direct sum of twisted copies of the ring."""

    twists: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "twists", tuple(int(a) for a in self.twists))

    @property
    def rank(self) -> int:
        return len(self.twists)

    def __len__(self):
        return len(self.twists)

    @property
    def degrees(self) -> Tuple[int, ...]:
        """Degrees of the basis elements."""
        return tuple(-a for a in self.twists)

    def dual(self) -> "GradedFreeModule":
        return GradedFreeModule(tuple(-a for a in self.twists))

    def twisted(self, shift: int) -> "GradedFreeModule":
        """F(shift)."""
        return GradedFreeModule(tuple(a + shift for a in self.twists))

    def __add__(self, other: "GradedFreeModule") -> "GradedFreeModule":
        return GradedFreeModule(self.twists + other.twists)

    def tensor(self, other: "GradedFreeModule") -> "GradedFreeModule":
        return GradedFreeModule(tuple(a + b for a in self.twists for b in other.twists))

    def exterior_power(self, k: int) -> "GradedFreeModule":
        return GradedFreeModule(
            tuple(sum(self.twists[i] for i in s) for s in subsets(self.rank, k))
        )

    def symmetric_power(self, k: int) -> "GradedFreeModule":
        return GradedFreeModule(
            tuple(
                sum(e * a for e, a in zip(mu, self.twists))
                for mu in multisets(self.rank, k)
            )
        )

    def hilbert_series(self, ring: GradedRing) -> HilbertSeries:
        return ring.hilbert_series.times_twists(self.twists)

    def __str__(self):
        if not self.twists:
            return "0"
        counts = Counter(self.twists)
        parts = []
        for a in sorted(counts, reverse=True):
            base = "R" if a == 0 else f"R({a})"
            parts.append(base if counts[a] == 1 else f"{base}^{counts[a]}")
        return " + ".join(parts)


def direct_sum(*modules: GradedFreeModule) -> GradedFreeModule:
    return reduce(lambda a, b: a + b, modules, GradedFreeModule(()))


class ModuleMap:
    """
    Homomorphism source -> target of graded free modules over `ring`.

    Raises:
        HomogeneityError: If an entry is not homogeneous of degree b_i - a_j
    """

    def __init__(
        self,
        ring: GradedRing,
        source: GradedFreeModule,
        target: GradedFreeModule,
        entries: Sequence[Sequence[Polynomial]],
        check: bool = True,
    ):
        self.ring = ring
        self.source = source
        self.target = target
        rows = [tuple(row) for row in entries]
        if len(rows) != target.rank or any(len(row) != source.rank for row in rows):
            raise ParameterError(
                f"matrix shape does not match {target.rank} x {source.rank}"
            )
        self.entries: Tuple[Tuple[Polynomial, ...], ...] = tuple(rows)
        if check:
            self._check_degrees()

    def _check_degrees(self):
        for i, row in enumerate(self.entries):
            for j, entry in enumerate(row):
                if entry.is_zero():
                    continue
                expected = self.target.twists[i] - self.source.twists[j]
                if not entry.is_homogeneous() or entry.degree() != expected:
                    raise HomogeneityError(
                        f"entry ({i},{j}) = {entry} is not a form of degree {expected}"
                    )

    # Constructors
    @classmethod
    def zero(cls, ring, source, target) -> "ModuleMap":
        z = ring.zero()
        return cls(ring, source, target, [[z] * source.rank for _ in range(target.rank)], check=False)

    @classmethod
    def identity(cls, ring, module: GradedFreeModule) -> "ModuleMap":
        one, z = ring.one(), ring.zero()
        entries = [[one if i == j else z for j in range(module.rank)] for i in range(module.rank)]
        return cls(ring, module, module, entries, check=False)

    @classmethod
    def from_columns(
        cls,
        ring: GradedRing,
        source: GradedFreeModule,
        target: GradedFreeModule,
        vectors: Sequence[Vector],
        check: bool = False,
    ) -> "ModuleMap":
        columns: List[List[Terms]] = [[{} for _ in vectors] for _ in range(target.rank)]
        for j, vec in enumerate(vectors):
            for (row, mono), coeff in vec.items():
                columns[row][j][mono] = coeff
        entries = [[Polynomial._raw(ring, t) for t in row] for row in columns]
        return cls(ring, source, target, entries, check=check)

    @classmethod
    def from_strings(cls, ring, source, target, rows: Sequence[Sequence[str]]) -> "ModuleMap":
        entries = [[ring.parse(text) for text in row] for row in rows]
        return cls(ring, source, target, entries)

    def over(self, ring: GradedRing) -> "ModuleMap":
        """The same matrix read over another ring with the same variables."""
        if ring == self.ring:
            return self
        if ring.variables != self.ring.variables or ring.characteristic != self.ring.characteristic:
            raise ParameterError("rings do not share variables and characteristic")
        entries = [[Polynomial._raw(ring, e.terms) for e in row] for row in self.entries]
        return ModuleMap(ring, self.source, self.target, entries, check=False)

    # Shape
    @property
    def shape(self) -> Tuple[int, int]:
        return self.target.rank, self.source.rank

    def __getitem__(self, index) -> Polynomial:
        i, j = index
        return self.entries[i][j]

    def column(self, j: int) -> Vector:
        return {
            (i, mono): coeff
            for i, row in enumerate(self.entries)
            for mono, coeff in row[j].terms.items()
        }

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.source.rank)]

    # Algebra
    def reduced(self) -> "ModuleMap":
        """Entries in normal form modulo the defining equations of the ring."""
        if not self.ring.quotient:
            return self
        entries = [[self.ring.reduce(e) for e in row] for row in self.entries]
        return ModuleMap(self.ring, self.source, self.target, entries, check=False)

    def is_zero(self) -> bool:
        return all(self.ring.reduce(e).is_zero() for row in self.entries for e in row)

    def __eq__(self, other):
        if not isinstance(other, ModuleMap):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def transpose(self) -> "ModuleMap":
        """The dual map target* -> source*."""
        entries = [
            [self.entries[i][j] for i in range(self.target.rank)]
            for j in range(self.source.rank)
        ]
        return ModuleMap(self.ring, self.target.dual(), self.source.dual(), entries, check=False)

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        """Composition self o other."""
        if other.target != self.source:
            raise ParameterError("maps are not composable")
        p = self.ring.characteristic
        entries = []
        for i in range(self.target.rank):
            row = []
            for j in range(other.source.rank):
                acc: Terms = {}
                for k in range(self.source.rank):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if a.terms and b.terms:
                        acc = terms_add(acc, terms_mul(a.terms, b.terms, p), p)
                row.append(Polynomial._raw(self.ring, acc))
            entries.append(row)
        return ModuleMap(self.ring, other.source, self.target, entries, check=False)

    def _elementwise(self, other: "ModuleMap", sign: int) -> "ModuleMap":
        if self.shape != other.shape:
            raise ParameterError("maps have different shapes")
        entries = [
            [a + b if sign > 0 else a - b for a, b in zip(ra, rb)]
            for ra, rb in zip(self.entries, other.entries)
        ]
        return ModuleMap(self.ring, self.source, self.target, entries, check=False)

    def __add__(self, other):
        return self._elementwise(other, 1)

    def __sub__(self, other):
        return self._elementwise(other, -1)

    def scale(self, c) -> "ModuleMap":
        entries = [[e * c for e in row] for row in self.entries]
        return ModuleMap(self.ring, self.source, self.target, entries, check=False)

    def hstack(self, other: "ModuleMap") -> "ModuleMap":
        """[self | other] : source + other.source -> target."""
        if self.target != other.target:
            raise ParameterError("hstack needs a common target")
        entries = [ra + rb for ra, rb in zip(self.entries, other.entries)]
        return ModuleMap(self.ring, self.source + other.source, self.target, entries, check=False)

    def submatrix(self, rows: Optional[Sequence[int]] = None, cols: Optional[Sequence[int]] = None) -> "ModuleMap":
        rows = range(self.target.rank) if rows is None else rows
        cols = range(self.source.rank) if cols is None else cols
        source = GradedFreeModule(tuple(self.source.twists[j] for j in cols))
        target = GradedFreeModule(tuple(self.target.twists[i] for i in rows))
        entries = [[self.entries[i][j] for j in cols] for i in rows]
        return ModuleMap(self.ring, source, target, entries, check=False)

    def tensor(self, other: "ModuleMap") -> "ModuleMap":
        """Kronecker product; basis (i, j) sits at i * rank(other) + j."""
        entries = [
            [a * b for a in ra for b in rb]
            for ra in self.entries
            for rb in other.entries
        ]
        return ModuleMap(
            self.ring,
            self.source.tensor(other.source),
            self.target.tensor(other.target),
            entries,
            check=False,
        )

    def minors(self, k: int) -> List[Polynomial]:
        return minors(self, k)

    def exterior_power(self, k: int) -> "ModuleMap":
        """The induced map on k-th exterior powers (entries are k x k minors)."""
        row_sets = subsets(self.target.rank, k)
        col_sets = subsets(self.source.rank, k)
        table = minor_table(self, k)
        entries = [[table[(rs, cs)] for cs in col_sets] for rs in row_sets]
        return ModuleMap(
            self.ring, self.source.exterior_power(k), self.target.exterior_power(k),
            entries, check=False,
        )

    def symmetric_power(self, k: int) -> "ModuleMap":
        """The induced map S_k(source) -> S_k(target)."""
        p = self.ring.characteristic
        target_index = {mu: i for i, mu in enumerate(multisets(self.target.rank, k))}
        columns: List[Vector] = []
        for mu in multisets(self.source.rank, k):
            # element of S(target): target multiset -> term dict
            product: Dict[Tuple[int, ...], Terms] = {(0,) * self.target.rank: {(0,) * self.ring.nvars: 1}}
            for j, power in enumerate(mu):
                for _ in range(power):
                    product = _symmetric_multiply(
                        product, [self.entries[i][j].terms for i in range(self.target.rank)], p
                    )
            vec: Vector = {}
            for nu, terms in product.items():
                for mono, coeff in terms.items():
                    vec[(target_index[nu], mono)] = coeff
            columns.append(vec)
        return ModuleMap.from_columns(
            self.ring, self.source.symmetric_power(k), self.target.symmetric_power(k), columns
        )

    def to_strings(self) -> List[List[str]]:
        return [[str(e) for e in row] for row in self.entries]

    def __repr__(self):
        return f"ModuleMap({self.source} -> {self.target}, {self.shape[0]}x{self.shape[1]})"


def _symmetric_multiply(element, linear_form: List[Terms], p: int):
    result: Dict[Tuple[int, ...], Terms] = {}
    for nu, coeff_terms in element.items():
        for i, entry in enumerate(linear_form):
            if not entry:
                continue
            new_nu = tuple(e + (1 if idx == i else 0) for idx, e in enumerate(nu))
            product = terms_mul(coeff_terms, entry, p)
            merged = terms_add(result.get(new_nu, {}), product, p)
            if merged:
                result[new_nu] = merged
            else:
                result.pop(new_nu, None)
    return result


def minor_table(m: ModuleMap, k: int) -> Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Polynomial]:
    """All k x k minors keyed by (row subset, column subset), by first-row expansion."""
    ring = m.ring
    p = ring.characteristic
    memo: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Terms] = {}

    def det(rows: Tuple[int, ...], cols: Tuple[int, ...]) -> Terms:
        if not rows:
            return {(0,) * ring.nvars: 1}
        key = (rows, cols)
        if key in memo:
            return memo[key]
        acc: Terms = {}
        first = rows[0]
        for pos, c in enumerate(cols):
            entry = m.entries[first][c].terms
            if not entry:
                continue
            sub = det(rows[1:], cols[:pos] + cols[pos + 1:])
            if sub:
                acc = terms_add(acc, terms_mul(entry, sub, p), p, -1 if pos % 2 else 1)
        memo[key] = acc
        return acc

    return {
        (rs, cs): Polynomial._raw(ring, det(rs, cs))
        for rs in subsets(m.target.rank, k)
        for cs in subsets(m.source.rank, k)
    }


def minors(m: ModuleMap, k: int) -> List[Polynomial]:
    """
    All k x k minors of m, ordered by row subset then column subset.

    Returns [1] for k = 0 and [] when k exceeds either dimension.
    """
    if k == 0:
        return [m.ring.one()]
    table = minor_table(m, k)
    return list(table.values())


def random_map(
    ring: GradedRing,
    source: GradedFreeModule,
    target: GradedFreeModule,
    rng: np.random.Generator,
) -> ModuleMap:
    """A map with uniformly random forms of the forced degrees (zero where negative)."""
    entries = [
        [ring.random_form(b - a, rng) for a in source.twists] for b in target.twists
    ]
    return ModuleMap(ring, source, target, entries, check=False)


class FreeComplex:
    """
    Complex of graded free modules.

    `differentials[i]` maps `modules[i]` to `modules[i - 1]`; missing indices
    are the zero module.
    """

    def __init__(
        self,
        ring: GradedRing,
        modules: Dict[int, GradedFreeModule],
        differentials: Dict[int, ModuleMap],
        check: bool = True,
    ):
        self.ring = ring
        self.modules = {i: m for i, m in modules.items()}
        self.differentials = dict(differentials)
        for i, d in self.differentials.items():
            if d.source != self.module(i) or d.target != self.module(i - 1):
                raise ParameterError(f"differential {i} does not match the terms")
        if check and not self.is_complex():
            raise AlgebraError("composite of consecutive differentials is nonzero")

    @classmethod
    def from_maps(
        cls, ring: GradedRing, maps: Sequence[ModuleMap], start: int = 0, check: bool = True
    ) -> "FreeComplex":
        """maps[k] : C_{start+k+1} -> C_{start+k}."""
        modules: Dict[int, GradedFreeModule] = {}
        differentials: Dict[int, ModuleMap] = {}
        for k, d in enumerate(maps):
            modules[start + k] = d.target
            modules[start + k + 1] = d.source
            differentials[start + k + 1] = d
        return cls(ring, modules, differentials, check=check)

    def module(self, i: int) -> GradedFreeModule:
        return self.modules.get(i, GradedFreeModule(()))

    def differential(self, i: int) -> ModuleMap:
        if i in self.differentials:
            return self.differentials[i]
        return ModuleMap.zero(self.ring, self.module(i), self.module(i - 1))

    @property
    def indices(self) -> List[int]:
        return sorted(i for i, m in self.modules.items() if m.rank)

    @property
    def length(self) -> int:
        idx = self.indices
        return idx[-1] - idx[0] if idx else 0

    def is_complex(self) -> bool:
        """True when every composite d_{i-1} o d_i vanishes (modulo the quotient)."""
        for i in self.differentials:
            if i - 1 in self.differentials and not (self.differentials[i - 1] @ self.differentials[i]).is_zero():
                logging.warning(f"d o d is nonzero at position {i}")
                return False
        return True

    def euler_hilbert_series(self) -> HilbertSeries:
        """Alternating sum of the Hilbert series of the terms."""
        total = HilbertSeries.zero(self.ring.krull_dim)
        for i in self.indices:
            series = self.module(i).hilbert_series(self.ring)
            total = total + series if i % 2 == 0 else total - series
        return total

    def __repr__(self):
        terms = ", ".join(f"{i}: {self.module(i)}" for i in self.indices)
        return f"FreeComplex({terms})"


def euler_hilbert_series(ring: GradedRing, terms: Dict[int, GradedFreeModule]) -> HilbertSeries:
    """Alternating sum of Hilbert series of a list of free modules by position."""
    total = HilbertSeries.zero(ring.krull_dim)
    for i, module in terms.items():
        series = module.hilbert_series(ring)
        total = total + series if i % 2 == 0 else total - series
    return total


def vectors_from_polys(polys: Iterable[Polynomial]) -> List[Vector]:
    """Single-component vectors of polynomials."""
    return [{(0, m): c for m, c in f.terms.items()} for f in polys]


def dual(x):
    """F* for a free module, the transpose for a map."""
    if isinstance(x, GradedFreeModule):
        return x.dual()
    if isinstance(x, ModuleMap):
        return x.transpose()
    raise ParameterError(f"cannot dualize {type(x).__name__}")
