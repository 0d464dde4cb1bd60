"""
Free Resolutions and Ext
========================

Minimal graded free resolutions over the ambient polynomial ring S, Betti
tables, and the Ext modules Ext^i(M, R) of a module over R = S/(q).

For R a complete intersection of codimension c cut out by forms of degrees
d_1..d_c, Ext^i_R(M, R) = Ext^{i+c}_S(M, S)(-sum d) for every R-module M, so
every Ext computation runs on the S-resolution.

Classes:
    BettiTable: Graded Betti numbers with a pandas rendering.
    Resolution: A minimal free resolution over S with its Ext data.

Functions:
    minimal_free_resolution: Resolve a module presentation over S (or R).
    minimize_complex: Cancel unit entries of a free complex.
    ext_module: Presentation of Ext^i(M, R).
    depth: depth of M via Auslander-Buchsbaum.
"""

# Standard library imports
import logging
from functools import cached_property
from typing import Dict, List, Optional, Tuple

# Third-party imports
import pandas as pd

# Local imports
from src.groebner import (
    ModulePresentation,
    groebner_basis,
    kernel,
    minimal_generators,
    quotient_vectors,
    syzygy_vectors,
    vector_degree,
)
from src.hilbert import HilbertSeries
from src.modules import FreeComplex, GradedFreeModule, ModuleMap
from src.ring import GradedRing
from src.utils.error_utils import AlgebraError
from src.utils.logging_utils import LogContext, with_log_context
from src.utils.math_utils import mod_inverse


class BettiTable:
    """
    Graded Betti numbers beta_{i,d}: generators of degree d at position i.

    Rendered the usual way: column i, row j = d - i.
    """

    def __init__(self, entries: Optional[Dict[Tuple[int, int], int]] = None):
        self.entries = {k: int(v) for k, v in (entries or {}).items() if v}

    @classmethod
    def from_complex(cls, complex_: FreeComplex) -> "BettiTable":
        entries: Dict[Tuple[int, int], int] = {}
        for i in complex_.indices:
            for d in complex_.module(i).degrees:
                entries[(i, d)] = entries.get((i, d), 0) + 1
        return cls(entries)

    @classmethod
    def from_terms(cls, terms: Dict[int, GradedFreeModule]) -> "BettiTable":
        entries: Dict[Tuple[int, int], int] = {}
        for i, module in terms.items():
            for d in module.degrees:
                entries[(i, d)] = entries.get((i, d), 0) + 1
        return cls(entries)

    def __getitem__(self, key: Tuple[int, int]) -> int:
        return self.entries.get(key, 0)

    def __eq__(self, other):
        if not isinstance(other, BettiTable):
            return NotImplemented
        return self.entries == other.entries

    __hash__ = None

    def total(self, i: int) -> int:
        return sum(v for (j, _), v in self.entries.items() if j == i)

    @property
    def length(self) -> int:
        return max((i for i, _ in self.entries), default=0)

    def shifted(self, degree_shift: int = 0, index_shift: int = 0) -> "BettiTable":
        return BettiTable(
            {(i + index_shift, d + degree_shift): v for (i, d), v in self.entries.items()}
        )

    def __add__(self, other: "BettiTable") -> "BettiTable":
        merged = dict(self.entries)
        for key, v in other.entries.items():
            merged[key] = merged.get(key, 0) + v
        return BettiTable(merged)

    def to_frame(self) -> pd.DataFrame:
        if not self.entries:
            return pd.DataFrame()
        positions = sorted({i for i, _ in self.entries})
        rows = sorted({d - i for i, d in self.entries})
        data = {
            i: [self.entries.get((i, j + i), 0) for j in rows]
            for i in range(positions[0], positions[-1] + 1)
        }
        frame = pd.DataFrame(data, index=rows)
        frame.index.name = "row"
        return frame

    def to_dict(self) -> Dict[str, Dict[str, int]]:
        out: Dict[str, Dict[str, int]] = {}
        for (i, d), v in sorted(self.entries.items()):
            out.setdefault(str(i), {})[str(d)] = v
        return out

    @classmethod
    def from_dict(cls, data: Dict[str, Dict[str, int]]) -> "BettiTable":
        return cls({(int(i), int(d)): v for i, row in data.items() for d, v in row.items()})

    def __str__(self):
        frame = self.to_frame()
        if frame.empty:
            return "(zero)"
        return frame.replace(0, ".").to_string()

    __repr__ = __str__


class Resolution:
    """
    Minimal free resolution 0 <- F_0 <- F_1 <- ... <- F_s <- 0 of a module
    over the ring of `complex_` (normally the ambient polynomial ring).
    """

    def __init__(self, module: ModulePresentation, complex_: FreeComplex):
        self.module = module
        self.complex = complex_
        self._dual_cokernels: Dict[int, HilbertSeries] = {}

    @property
    def ring(self) -> GradedRing:
        return self.complex.ring

    @cached_property
    def betti(self) -> BettiTable:
        return BettiTable.from_complex(self.complex)

    @property
    def length(self) -> int:
        """Projective dimension of the module over the resolving ring."""
        return max((i for i in self.complex.indices), default=0)

    def differential(self, i: int) -> ModuleMap:
        return self.complex.differential(i)

    def _dual_cokernel_series(self, i: int) -> HilbertSeries:
        """Series of coker(d_i^T : F_{i-1}* -> F_i*); d_0^T is the zero map."""
        if i not in self._dual_cokernels:
            module = self.complex.module(i).dual()
            if i == 0 or i - 1 not in self.complex.modules:
                columns = []
            else:
                columns = self.differential(i).transpose().columns()
            basis = groebner_basis(self.ring, module, columns, include_quotient=False)
            self._dual_cokernels[i] = basis.hilbert_series()
        return self._dual_cokernels[i]

    def ext_series(self, i: int) -> HilbertSeries:
        """Hilbert series of Ext^i(M, S) over the resolving ring."""
        nvars = self.ring.nvars
        if i < 0 or i > self.length:
            return HilbertSeries.zero(nvars)
        next_free = self.complex.module(i + 1).dual()
        next_series = (
            next_free.hilbert_series(self.ring) if next_free.rank else HilbertSeries.zero(nvars)
        )
        return self._dual_cokernel_series(i) + self._dual_cokernel_series(i + 1) - next_series

    def nonvanishing_ext(self) -> List[int]:
        return [i for i in range(self.length + 1) if not self.ext_series(i).is_zero()]


def _ambient_relations(module: ModulePresentation) -> List[dict]:
    """Relations of M as an S-module: its relations plus q * e_c."""
    ring = module.ring
    return module.relations.columns() + quotient_vectors(ring, module.generators)


@with_log_context(module="resolution", operation="minimal_free_resolution")
def minimal_free_resolution(
    module: ModulePresentation,
    over_ring: bool = False,
    max_length: Optional[int] = None,
) -> Resolution:
    """
    Minimal graded free resolution of coker(relations).

    Args:
        module: The module to resolve (its generators become F_0 after pruning)
        over_ring: Resolve over R = S/(q) instead of S; the resolution is then
            cut after max_length steps
        max_length: Length cap; defaults to nvars for S (Hilbert's bound)

    Raises:
        AlgebraError: If an S-resolution exceeds nvars steps
    """
    ring = module.ring
    module = module.pruned()
    base = ring if over_ring else ring.ambient
    limit = max_length if max_length is not None else ring.nvars
    F0 = module.generators
    if over_ring:
        candidates = module.relations.columns()
    else:
        candidates = _ambient_relations(module)
    candidates = [c for c in candidates if c]
    keep = minimal_generators(base, F0, candidates)
    kept = sorted((candidates[i] for i in keep), key=lambda v: vector_degree(v, F0))
    F1 = GradedFreeModule(tuple(-vector_degree(v, F0) for v in kept))
    maps = [ModuleMap.from_columns(base, F1, F0, kept)]
    while maps[-1].source.rank:
        if len(maps) >= limit + 1:
            if over_ring:
                break
            raise AlgebraError(f"resolution did not terminate after {limit} steps")
        with LogContext(step=len(maps) + 1):
            maps.append(kernel(maps[-1], minimal=True, ambient=not over_ring))
    if not maps[-1].source.rank and len(maps) > 1:
        maps.pop()
    complex_ = FreeComplex.from_maps(base, maps, check=False)
    if not F1.rank:
        complex_ = FreeComplex(base, {0: F0}, {}, check=False)
    resolution = Resolution(module, complex_)
    logging.info(f"Resolution of length {resolution.length}, ranks {[complex_.module(i).rank for i in complex_.indices]}")
    return resolution


def minimize_complex(complex_: FreeComplex) -> FreeComplex:
    """
    Homotopy-equivalent complex without unit entries in its differentials.

    A unit u at (row r, column c) of d_i cancels basis vector c of C_i
    against basis vector r of C_{i-1}: d_i becomes e - g u^{-1} b on the
    remaining blocks, d_{i+1} loses row c and d_{i-1} loses column r.
    """
    ring = complex_.ring
    p = ring.characteristic
    modules = dict(complex_.modules)
    maps = {i: [list(row) for row in d.entries] for i, d in complex_.differentials.items()}
    twists = {i: list(m.twists) for i, m in modules.items()}

    def find_unit():
        for i, rows in maps.items():
            for r, row in enumerate(rows):
                for c, entry in enumerate(row):
                    if entry.terms and entry.is_constant():
                        return i, r, c
        return None

    while True:
        hit = find_unit()
        if hit is None:
            break
        i, r, c = hit
        d = maps[i]
        inv = mod_inverse(next(iter(d[r][c].terms.values())), p)
        new_rows = []
        for rr, row in enumerate(d):
            if rr == r:
                continue
            g = row[c]
            new_row = []
            for cc, entry in enumerate(row):
                if cc == c:
                    continue
                if g.terms and d[r][cc].terms:
                    entry = ring.reduce(entry - g * d[r][cc] * inv)
                new_row.append(entry)
            new_rows.append(new_row)
        maps[i] = new_rows
        if i + 1 in maps:
            del maps[i + 1][c]
        if i - 1 in maps:
            for row in maps[i - 1]:
                del row[r]
        del twists[i][c]
        del twists[i - 1][r]

    new_modules = {i: GradedFreeModule(tuple(t)) for i, t in twists.items()}
    new_maps = {
        i: ModuleMap(ring, new_modules[i], new_modules[i - 1], rows, check=False)
        for i, rows in maps.items()
    }
    return FreeComplex(ring, new_modules, new_maps, check=False)


def _codim_shift(ring: GradedRing) -> Tuple[int, int]:
    return len(ring.quotient), sum(ring.quotient_degrees)


def ext_series(resolution: Resolution, i: int, ring: GradedRing) -> HilbertSeries:
    """Hilbert series of Ext^i_R(M, R), R = `ring`, from an S-resolution."""
    c, total = _codim_shift(ring)
    return resolution.ext_series(i + c).shifted(total)


@with_log_context(module="resolution", operation="ext_module")
def ext_module(resolution: Resolution, i: int, ring: GradedRing) -> ModulePresentation:
    """
    Presentation of Ext^i_R(M, R) from an S-resolution of M.

    ker(d_{i+1}^T) is generated by the columns of K; the relations are the
    syzygies of [K | d_i^T] projected to the K block.
    """
    c, total = _codim_shift(ring)
    index = i + c
    S = resolution.ring
    Fi = resolution.complex.module(index).dual()
    if index < 0 or not Fi.rank:
        return ModulePresentation.free(ring, GradedFreeModule(()))
    if resolution.complex.module(index + 1).rank:
        K = kernel(resolution.differential(index + 1).transpose(), minimal=True, ambient=True)
    else:
        K = ModuleMap.identity(S, Fi)
    if index >= 1 and resolution.complex.module(index - 1).rank:
        image = resolution.differential(index).transpose()
        stacked_columns = K.columns() + image.columns()
        source = K.source + image.source
    else:
        stacked_columns = K.columns()
        source = K.source
    syz = syzygy_vectors(S, Fi, stacked_columns, source)
    width = K.source.rank
    relations = [{(col, m): v for (col, m), v in s.items() if col < width} for s in syz]
    relations = [r for r in relations if r]
    keep = minimal_generators(S, K.source, relations)
    relations = [relations[k] for k in keep]
    rel_source = GradedFreeModule(tuple(-vector_degree(v, K.source) for v in relations))
    rel_map = ModuleMap.from_columns(S, rel_source, K.source, relations)
    presentation = ModulePresentation(rel_map.over(ring)).twisted(-total)
    return presentation


def depth(resolution: Resolution) -> int:
    """depth M = nvars - pd_S M (Auslander-Buchsbaum)."""
    return resolution.ring.nvars - resolution.length


def depth_via_ext(resolution: Resolution) -> int:
    """nvars - max{e : Ext^e_S(M, S) != 0}, computed from Hilbert series."""
    nonzero = resolution.nonvanishing_ext()
    return resolution.ring.nvars - (max(nonzero) if nonzero else 0)


def _cokernel_series(ring: GradedRing, module: GradedFreeModule, columns) -> HilbertSeries:
    if not module.rank:
        return HilbertSeries.zero(ring.nvars)
    return groebner_basis(ring, module, columns).hilbert_series()


@with_log_context(module="resolution", operation="homology_series")
def homology_series(complex_: FreeComplex, i: int) -> HilbertSeries:
    """
    HS(H_i) of a complex of free modules over its ring:
    HS(F_i / im d_{i+1}) - HS(F_{i-1}) + HS(F_{i-1} / im d_i).
    """
    ring = complex_.ring
    here = complex_.module(i)
    below = complex_.module(i - 1)
    upper = complex_.differential(i + 1).columns() if i + 1 in complex_.differentials else []
    lower = complex_.differential(i).columns() if i in complex_.differentials else []
    total = _cokernel_series(ring, here, upper)
    if below.rank:
        total = total - below.hilbert_series(ring) + _cokernel_series(ring, below, lower)
    return total


def is_acyclic(complex_: FreeComplex, start: int = 1) -> bool:
    """True when H_i vanishes for every i >= start."""
    return all(homology_series(complex_, i).is_zero() for i in complex_.indices if i >= start)
