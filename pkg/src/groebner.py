"""
Groebner Engine
===============

Homogeneous Buchberger algorithm for submodules of graded free modules over
the polynomial ring S, plus the operations built on it: minimal generators,
syzygies and module presentations.

Vectors are sparse dicts {(component, exponents): coefficient}. Terms are
ordered position-over-term: a lower component wins, ties are broken by
grevlex on the exponents. The algorithm runs degree by degree, so it can
stop after any degree and resume later; every loop is bounded by the degree
cap of ENGINE_SETTINGS and raises DegreeCapExceeded beyond it.

Modules over a quotient ring R = S/(q) are handled by adding q * e_c for
every component c to the submodule, so all Groebner bases live over S.

Classes:
    Buchberger: Resumable degree-by-degree Groebner basis computation.
    GroebnerBasis: Reduced Groebner basis with normal forms and Hilbert series.
    ModulePresentation: Cokernel of a map of graded free modules.

Functions:
    groebner_basis: Reduced Groebner basis of a list of vectors.
    minimal_generators: Minimal homogeneous generators among given vectors.
    syzygies: Generators of the kernel of a map.
    lift: Preimages of vectors under a map.
    ideal_hilbert_series: Hilbert series of S/I for polynomials of S.
"""

# Standard library imports
import heapq
import logging
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Set, Tuple

# Third-party imports
from sympy.polys.monomials import monomial_div, monomial_divides, monomial_lcm, monomial_mul

# Local imports
from src.config import ENGINE_SETTINGS
from src.hilbert import HilbertSeries, hilbert_series_from_leads
from src.modules import GradedFreeModule, ModuleMap, Vector
from src.ring import GradedRing, Polynomial, grevlex_key
from src.utils.error_utils import DegreeCapExceeded, HomogeneityError, ParameterError
from src.utils.logging_utils import with_log_context
from src.utils.math_utils import mod_inverse

Term = Tuple[int, Tuple[int, ...]]


def _term_key(term: Term):
    comp, mono = term
    return (-comp, grevlex_key(mono))


def _heap_key(term: Term):
    # smallest heap key = largest term
    comp, mono = term
    degree, rev = grevlex_key(mono)
    return (comp, -degree, tuple(-x for x in rev))


def lead_term(vec: Vector) -> Optional[Term]:
    if not vec:
        return None
    return max(vec, key=_term_key)


def vector_degree(vec: Vector, module: GradedFreeModule) -> int:
    """Degree of a homogeneous vector (taken from any of its terms)."""
    comp, mono = next(iter(vec))
    return module.degrees[comp] + sum(mono)


def check_homogeneous(vec: Vector, module: GradedFreeModule) -> int:
    degrees = {module.degrees[c] + sum(m) for c, m in vec}
    if len(degrees) != 1:
        raise HomogeneityError(f"vector with terms in degrees {sorted(degrees)} is not homogeneous")
    return degrees.pop()


def quotient_vectors(ring: GradedRing, module: GradedFreeModule) -> List[Vector]:
    """q * e_c for every defining equation q of the ring and component c."""
    return [
        {(c, mono): coeff for mono, coeff in q.terms.items()}
        for c in range(module.rank)
        for q in ring.quotient
    ]


class _LeadIndex:
    """Monic reducers indexed by lead component, with full normal forms."""

    def __init__(self, characteristic: int):
        self.p = characteristic
        self.elements: List[Vector] = []
        self.leads: List[Term] = []
        self.by_comp: Dict[int, List[int]] = {}

    def divisor(self, term: Term) -> Optional[int]:
        comp, mono = term
        for idx in self.by_comp.get(comp, ()):
            if monomial_divides(self.leads[idx][1], mono):
                return idx
        return None

    def reduce(self, vec: Vector) -> Vector:
        """Full normal form of vec with respect to the current elements."""
        p = self.p
        f = dict(vec)
        heap = [(_heap_key(t), t) for t in f]
        heapq.heapify(heap)
        result: Vector = {}
        while heap:
            _, term = heapq.heappop(heap)
            coeff = f.get(term)
            if coeff is None:
                continue
            idx = self.divisor(term)
            if idx is None:
                result[term] = f.pop(term)
                continue
            shift = monomial_div(term[1], self.leads[idx][1])
            for (c, mono), value in self.elements[idx].items():
                target = (c, monomial_mul(mono, shift))
                new = (f.get(target, 0) - coeff * value) % p
                if new:
                    if target not in f:
                        heapq.heappush(heap, (_heap_key(target), target))
                    f[target] = new
                else:
                    f.pop(target, None)
        return result

    def _append(self, vec: Vector) -> int:
        lead = lead_term(vec)
        inv = mod_inverse(vec[lead], self.p)
        monic = {t: (c * inv) % self.p for t, c in vec.items()}
        self.elements.append(monic)
        self.leads.append(lead)
        self.by_comp.setdefault(lead[0], []).append(len(self.elements) - 1)
        return len(self.elements) - 1


class Buchberger(_LeadIndex):
    """
    Degree-by-degree Buchberger algorithm with the chain criterion.

    Example:
        >>> engine = Buchberger(S, F)
        >>> engine.queue_generators(columns)
        >>> engine.run(until=3)      # basis is complete up to degree 3
        >>> engine.run()             # complete basis
    """

    def __init__(self, ring: GradedRing, module: GradedFreeModule, max_degree: Optional[int] = None):
        super().__init__(ring.characteristic)
        self.ring = ring
        self.module = module
        self.max_degree = ENGINE_SETTINGS["max_degree"] if max_degree is None else max_degree
        self.pairs: Dict[int, Set[Tuple[int, int]]] = {}
        self.pending: Set[Tuple[int, int]] = set()
        self.queue: Dict[int, List[Vector]] = {}

    def queue_generators(self, vectors: Sequence[Vector]):
        for vec in vectors:
            if not vec:
                continue
            degree = check_homogeneous(vec, self.module)
            self.queue.setdefault(degree, []).append(vec)

    def _lcm_degree(self, i: int, j: int) -> Tuple[Tuple[int, ...], int]:
        lcm = monomial_lcm(self.leads[i][1], self.leads[j][1])
        return lcm, self.module.degrees[self.leads[i][0]] + sum(lcm)

    def insert(self, vec: Vector) -> int:
        """Add a reduced nonzero vector and create its critical pairs."""
        new = self._append(vec)
        comp = self.leads[new][0]
        for old in self.by_comp[comp][:-1]:
            _, degree = self._lcm_degree(old, new)
            self.pairs.setdefault(degree, set()).add((old, new))
            self.pending.add((old, new))
        return new

    def _chain_criterion(self, i: int, j: int) -> bool:
        lcm, _ = self._lcm_degree(i, j)
        comp = self.leads[i][0]
        for k in self.by_comp[comp]:
            if k in (i, j):
                continue
            if monomial_divides(self.leads[k][1], lcm):
                if (min(i, k), max(i, k)) not in self.pending and (min(j, k), max(j, k)) not in self.pending:
                    return True
        return False

    def _s_vector(self, i: int, j: int) -> Vector:
        lcm, _ = self._lcm_degree(i, j)
        p = self.p
        result: Vector = {}
        for idx, sign in ((i, 1), (j, -1)):
            shift = monomial_div(lcm, self.leads[idx][1])
            for (c, mono), value in self.elements[idx].items():
                key = (c, monomial_mul(mono, shift))
                new = (result.get(key, 0) + sign * value) % p
                if new:
                    result[key] = new
                else:
                    result.pop(key, None)
        return result

    def next_degree(self) -> Optional[int]:
        degrees = [d for d, s in self.pairs.items() if s] + [d for d, q in self.queue.items() if q]
        return min(degrees) if degrees else None

    def step(self, degree: int):
        """Process every pair and queued generator of one degree."""
        if degree > self.max_degree:
            raise DegreeCapExceeded(degree, self.max_degree, "Groebner basis")
        for i, j in sorted(self.pairs.pop(degree, set())):
            self.pending.discard((i, j))
            if self._chain_criterion(i, j):
                continue
            h = self.reduce(self._s_vector(i, j))
            if h:
                self.insert(h)
        for vec in self.queue.pop(degree, []):
            h = self.reduce(vec)
            if h:
                self.insert(h)

    def run(self, until: Optional[int] = None) -> bool:
        """
        Complete the basis up to degree `until` (or entirely).

        Returns:
            True when no pairs or generators remain in any degree
        """
        while True:
            degree = self.next_degree()
            if degree is None:
                return True
            if until is not None and degree > until:
                return False
            self.step(degree)

    def result(self) -> "GroebnerBasis":
        return GroebnerBasis.from_elements(self.ring, self.module, self.elements)


class GroebnerBasis(_LeadIndex):
    """Reduced monic Groebner basis of a submodule U of a free module F over S."""

    def __init__(self, ring: GradedRing, module: GradedFreeModule):
        super().__init__(ring.characteristic)
        self.ring = ring
        self.module = module

    @classmethod
    def from_elements(cls, ring, module, elements: Sequence[Vector]) -> "GroebnerBasis":
        raw = _LeadIndex(ring.characteristic)
        for vec in elements:
            raw._append(vec)
        reduced = []
        for vec, lead in zip(raw.elements, raw.leads):
            tail = {t: c for t, c in vec.items() if t != lead}
            # the lead of vec never divides its own tail
            body = raw.reduce(tail)
            body[lead] = 1
            reduced.append(body)
        reduced.sort(key=lambda v: _term_key(lead_term(v)))
        basis = cls(ring, module)
        for vec in reduced:
            basis._append(vec)
        return basis

    def __len__(self):
        return len(self.elements)

    def contains(self, vec: Vector) -> bool:
        return not self.reduce(vec)

    def contains_all(self, vectors: Sequence[Vector]) -> bool:
        return all(self.contains(v) for v in vectors)

    def leads_by_comp(self) -> Dict[int, List[Tuple[int, ...]]]:
        result: Dict[int, List[Tuple[int, ...]]] = {}
        for comp, mono in self.leads:
            result.setdefault(comp, []).append(mono)
        return result

    def hilbert_series(self) -> HilbertSeries:
        """Series of F / U over the ambient polynomial ring."""
        return hilbert_series_from_leads(self.ring.nvars, self.module.twists, self.leads_by_comp())

    def is_whole_module(self) -> bool:
        zero = (0,) * self.ring.nvars
        comps = {c for c, m in self.leads if m == zero}
        return comps == set(range(self.module.rank))


@with_log_context(module="groebner", operation="groebner_basis")
def groebner_basis(
    ring: GradedRing,
    module: GradedFreeModule,
    vectors: Sequence[Vector],
    include_quotient: bool = True,
    max_degree: Optional[int] = None,
) -> GroebnerBasis:
    """
    Reduced Groebner basis of the submodule generated by `vectors`.

    Args:
        ring: Ring of the module; its defining equations are added unless
            include_quotient is False
        module: Ambient free module
        vectors: Homogeneous generators
        max_degree: Degree cap (ENGINE_SETTINGS default)
    """
    ambient = ring.ambient
    engine = Buchberger(ambient, module, max_degree)
    engine.queue_generators(vectors)
    if include_quotient:
        engine.queue_generators(quotient_vectors(ring, module))
    engine.run()
    basis = engine.result()
    logging.debug(f"Groebner basis with {len(basis)} elements in a rank {module.rank} module")
    return basis


def ideal_hilbert_series(ring: GradedRing, polys: Sequence[Polynomial]) -> HilbertSeries:
    """Series of R/I for forms generating I (the quotient of R included)."""
    module = GradedFreeModule((0,))
    vectors = [{(0, m): c for m, c in f.terms.items()} for f in polys if not f.is_zero()]
    return groebner_basis(ring, module, vectors).hilbert_series()


@with_log_context(module="groebner", operation="minimal_generators")
def minimal_generators(
    ring: GradedRing,
    module: GradedFreeModule,
    vectors: Sequence[Vector],
    modulo: Sequence[Vector] = (),
    max_degree: Optional[int] = None,
) -> List[int]:
    """
    Indices of a minimal generating subset of the given vectors.

    A candidate of degree d is kept iff it is not in the submodule generated
    by `modulo`, the quotient relations and the candidates kept so far plus
    everything of lower degree. The result generates the same submodule
    modulo `modulo` and is minimal over the local ring at the maximal ideal.

    Args:
        vectors: Homogeneous candidates
        modulo: Vectors of a submodule the count is taken modulo
    """
    ambient = ring.ambient
    engine = Buchberger(ambient, module, max_degree)
    engine.queue_generators(list(modulo) + quotient_vectors(ring, module))
    by_degree: Dict[int, List[int]] = {}
    for idx, vec in enumerate(vectors):
        if vec:
            by_degree.setdefault(check_homogeneous(vec, module), []).append(idx)
    kept: List[int] = []
    for degree in sorted(by_degree):
        engine.run(until=degree)
        # pairs of this degree are finished; candidates see the complete basis
        for idx in by_degree[degree]:
            h = engine.reduce(vectors[idx])
            if h:
                kept.append(idx)
                engine.insert(h)
    return kept


def _columns_with_unit_source(vectors, target: GradedFreeModule) -> GradedFreeModule:
    return GradedFreeModule(tuple(-vector_degree(v, target) for v in vectors))


@with_log_context(module="groebner", operation="syzygies")
def syzygy_vectors(
    ring: GradedRing,
    target: GradedFreeModule,
    columns: Sequence[Vector],
    source: GradedFreeModule,
    max_degree: Optional[int] = None,
) -> List[Vector]:
    """
    Generators of the S-module of relations sum a_j g_j = 0 among columns.

    Uses the Groebner basis of the augmented vectors (g_j, e_j) in
    target + source under position-over-term: elements whose lead lies in
    the source block project to a generating set of the syzygies.

    Args:
        ring: The polynomial ring S (quotients are ignored here)
        target: Module the columns live in
        columns: Homogeneous vectors g_j
        source: Twists making e_j -> g_j a degree-0 map
    """
    ambient = ring.ambient
    offset = target.rank
    augmented_module = target + source
    augmented = []
    for j, col in enumerate(columns):
        vec = dict(col)
        vec[(offset + j, (0,) * ambient.nvars)] = 1
        augmented.append(vec)
    engine = Buchberger(ambient, augmented_module, max_degree)
    engine.queue_generators(augmented)
    engine.run()
    result = []
    for vec, (comp, _) in zip(engine.elements, engine.leads):
        if comp >= offset:
            result.append({(c - offset, m): v for (c, m), v in vec.items() if c >= offset})
    return result


def kernel(m: ModuleMap, minimal: bool = True, ambient: bool = False) -> ModuleMap:
    """
    A map K -> m.source whose image is the kernel of m.

    Over a quotient ring the kernel is taken over R unless ambient is True:
    the columns q * e_c of the target are adjoined before the syzygy step
    and projected away after.
    """
    ring = m.ring
    columns = m.columns()
    source = m.source
    extra: List[Vector] = []
    if ring.quotient and not ambient:
        extra = quotient_vectors(ring, m.target)
        columns = columns + extra
        source = m.source + _columns_with_unit_source(extra, m.target)
    syz = syzygy_vectors(ring, m.target, columns, source)
    n_orig = m.source.rank
    projected = [{(c, mono): v for (c, mono), v in s.items() if c < n_orig} for s in syz]
    projected = [s for s in projected if s]
    if minimal:
        # over R the quotient relations of the source are counted as zero
        base = ring.ambient if ambient else ring
        keep = minimal_generators(base, m.source, projected)
        projected = [projected[i] for i in keep]
    projected.sort(key=lambda v: (vector_degree(v, m.source), _heap_key(lead_term(v))))
    kernel_source = _columns_with_unit_source(projected, m.source)
    return ModuleMap.from_columns(ring, kernel_source, m.source, projected)


@with_log_context(module="groebner", operation="lift")
def lift(m: ModuleMap, vectors: Sequence[Vector]) -> List[Vector]:
    """
    Coefficient vectors a with m(a) = v for every v, over the ring of m.

    The normal form of (v, 0) modulo the augmented vectors (m(e_j), e_j) has
    no target part exactly when v lies in the image, and then its source part
    is -a.

    Raises:
        ParameterError: If some vector is not in the image of m
    """
    ring = m.ring
    ambient = ring.ambient
    columns = m.columns()
    source = m.source
    if ring.quotient:
        extra = quotient_vectors(ring, m.target)
        columns = columns + extra
        source = m.source + _columns_with_unit_source(extra, m.target)
    offset = m.target.rank
    engine = Buchberger(ambient, m.target + source)
    for j, col in enumerate(columns):
        vec = dict(col)
        vec[(offset + j, (0,) * ambient.nvars)] = 1
        engine.queue_generators([vec])
    engine.run()
    p = ring.characteristic
    result = []
    for v in vectors:
        normal = engine.reduce(v)
        if any(c < offset for c, _ in normal):
            raise ParameterError("vector is not in the image of the map")
        result.append({
            (c - offset, mono): (-value) % p
            for (c, mono), value in normal.items()
            if c - offset < m.source.rank
        })
    return result


def syzygies(m: ModuleMap, minimal: bool = True) -> ModuleMap:
    """Syzygies of the columns of m over the ring of m."""
    return kernel(m, minimal=minimal)


class ModulePresentation:
    """
    The module coker(relations: F1 -> F0) over relations.ring.

    Groebner data is computed lazily and cached. Over a quotient ring the
    defining equations are part of every relation set.
    """

    def __init__(self, relations: ModuleMap):
        self.relations = relations
        self.ring = relations.ring

    @classmethod
    def free(cls, ring: GradedRing, module: GradedFreeModule) -> "ModulePresentation":
        return cls(ModuleMap.zero(ring, GradedFreeModule(()), module))

    @classmethod
    def cyclic(cls, ring: GradedRing, polys: Sequence[Polynomial], twist: int = 0) -> "ModulePresentation":
        """R(twist)/I for forms generating I."""
        polys = [f for f in polys if not f.is_zero()]
        target = GradedFreeModule((twist,))
        source = GradedFreeModule(tuple(twist - f.degree() for f in polys))
        return cls(ModuleMap(ring, source, target, [polys]))

    @property
    def generators(self) -> GradedFreeModule:
        return self.relations.target

    @cached_property
    def gb(self) -> GroebnerBasis:
        return groebner_basis(self.ring, self.generators, self.relations.columns())

    def hilbert_series(self) -> HilbertSeries:
        return self.gb.hilbert_series()

    def is_zero(self) -> bool:
        return self.gb.is_whole_module()

    def dimension(self) -> int:
        return self.hilbert_series().dimension()

    def contains(self, vec: Vector) -> bool:
        """True when vec (in the generators' free module) is zero in the cokernel."""
        return self.gb.contains(vec)

    def twisted(self, shift: int) -> "ModulePresentation":
        rel = self.relations
        return ModulePresentation(
            ModuleMap(
                self.ring, rel.source.twisted(shift), rel.target.twisted(shift),
                rel.entries, check=False,
            )
        )

    def minimal_generator_count(self) -> int:
        """Number of minimal generators of the module."""
        basis = [{(c, (0,) * self.ring.nvars): 1} for c in range(self.generators.rank)]
        return len(
            minimal_generators(self.ring, self.generators, basis, modulo=self.relations.columns())
        )

    def pruned(self) -> "ModulePresentation":
        """
        The same module with every generator that a relation solves for removed.

        A relation column with a nonzero constant entry in row c expresses e_c
        through the other generators; it is used to clear row c and both are
        dropped. Afterwards no relation has a unit entry, so the generators
        are minimal.
        """
        ring = self.ring
        rows = [list(r) for r in self.relations.reduced().entries]
        row_twists = list(self.generators.twists)
        col_twists = list(self.relations.source.twists)
        while True:
            pivot = None
            for j in range(len(col_twists)):
                for c in range(len(row_twists)):
                    entry = rows[c][j]
                    if entry.terms and entry.is_constant():
                        pivot = (c, j)
                        break
                if pivot:
                    break
            if pivot is None:
                break
            c, j = pivot
            inv = mod_inverse(next(iter(rows[c][j].terms.values())), ring.characteristic)
            for k in range(len(col_twists)):
                if k == j or not rows[c][k].terms:
                    continue
                factor = rows[c][k] * inv
                for i in range(len(row_twists)):
                    if rows[i][j].terms:
                        rows[i][k] = ring.reduce(rows[i][k] - factor * rows[i][j])
            del rows[c]
            del row_twists[c]
            for row in rows:
                del row[j]
            del col_twists[j]
        relations = ModuleMap(
            ring, GradedFreeModule(tuple(col_twists)), GradedFreeModule(tuple(row_twists)),
            rows, check=False,
        )
        # drop relations that became zero
        keep = [j for j in range(len(col_twists)) if any(rows[i][j].terms for i in range(len(rows)))]
        return ModulePresentation(relations.submatrix(cols=keep))

    def annihilated_by(self, polys: Sequence[Polynomial]) -> bool:
        """True when every form in polys kills every generator."""
        for f in polys:
            for c in range(self.generators.rank):
                vec = {(c, m): v for m, v in f.terms.items()}
                if vec and not self.contains(vec):
                    return False
        return True

    def __repr__(self):
        return f"ModulePresentation(coker {self.relations.source} -> {self.generators})"
