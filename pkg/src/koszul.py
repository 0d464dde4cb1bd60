"""
Koszul-Type Complexes
=====================

Explicit free complexes attached to a map phi: F -> G of free modules
(f = rank F > g = rank G, r = f - g) and to a lifted multiple section
Psi: P -> F with phi o Psi = 0 (t = rank P).

C_i(phi):  0 -> /\^i F -> /\^{i-1} F (x) G -> ... -> S_i G -> 0
    positions k = i..0, /\^k F (x) S_{i-k} G at position k, Koszul
    contraction by phi.

D_i(phi):  C_i(phi) spliced through nu_i with the dual Koszul side
    /\^{g+i+m} F (x) D_m(G*) (x) /\^g G*  at position i+1+m, m = 0..r-i.
    D_0 is the Eagon-Northcott complex of phi, D_1 the Buchsbaum-Rim complex.

E_. : /\^i B* (x) D_{i-t}(P) at position i (t <= i < r), the free module
    /\^f F* (x) /\^g G (x) D_{r-t}(P) at position r, followed by the maximal
    minors of Psi into R(p). Every E_i is carried as a presentation V_i / Rel_i
    with V_i = /\^i F* (x) D_{i-t}(P) below r, so all homology is read off
    cokernel Groebner bases. The top map lifts Psi through the Cramer syzygies
    nu_1, which generate B = ker phi when I(phi) has depth at least 2.

Divided powers D_m use the monomial basis with contraction
p^(mu) -> p^(mu - e_l); symmetric powers use multiplication g^mu -> g^(mu + e_m).

Classes:
    SpliceData: phi, i and the connecting map nu_i.
    EagonNorthcott: The complex E_. with its relations and homology.
    DualEagonNorthcott: The dual complex E_.* with its cohomology.
"""

# Standard library imports
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Tuple

# Local imports
from src.groebner import ModulePresentation, groebner_basis, kernel, lift
from src.hilbert import HilbertSeries
from src.modules import (
    FreeComplex,
    GradedFreeModule,
    ModuleMap,
    Vector,
    euler_hilbert_series,
    minor_table,
)
from src.ring import GradedRing, Polynomial
from src.utils.error_utils import ParameterError
from src.utils.logging_utils import with_log_context
from src.utils.math_utils import (
    contraction_sign,
    multiset_positions,
    multisets,
    remove_index,
    subset_positions,
    subsets,
)


def _check_phi(phi: ModuleMap):
    if phi.source.rank <= phi.target.rank:
        raise ParameterError(
            f"need rank F > rank G, got f={phi.source.rank}, g={phi.target.rank}"
        )


def _vectors_to_map(ring, source, target, columns: List[Dict[Tuple[int, Tuple[int, ...]], int]]) -> ModuleMap:
    return ModuleMap.from_columns(ring, source, target, columns)


def _add_poly(vec: Vector, index: int, poly: Polynomial, sign: int, p: int):
    for mono, coeff in poly.terms.items():
        key = (index, mono)
        value = (vec.get(key, 0) + sign * coeff) % p
        if value:
            vec[key] = value
        else:
            vec.pop(key, None)


# Generalized Koszul complexes C_i
def koszul_terms_C(F: GradedFreeModule, G: GradedFreeModule, i: int) -> Dict[int, GradedFreeModule]:
    """Terms of C_i(phi) by position."""
    return {k: F.exterior_power(k).tensor(G.symmetric_power(i - k)) for k in range(i + 1)}


def _koszul_differential(phi: ModuleMap, i: int, k: int) -> ModuleMap:
    """/\\^k F (x) S_{i-k} G -> /\\^{k-1} F (x) S_{i-k+1} G."""
    ring = phi.ring
    p = ring.characteristic
    f, g = phi.source.rank, phi.target.rank
    src_mu = multisets(g, i - k)
    tgt_mu_pos = multiset_positions(g, i - k + 1)
    tgt_width = len(multisets(g, i - k + 1))
    tgt_L_pos = subset_positions(f, k - 1)
    columns = []
    for L in subsets(f, k):
        for mu in src_mu:
            vec: Vector = {}
            for j in L:
                sign = contraction_sign(L, j)
                rest = tgt_L_pos[remove_index(L, j)]
                for m in range(g):
                    entry = phi[m, j]
                    if not entry.terms:
                        continue
                    nu = tuple(e + (1 if idx == m else 0) for idx, e in enumerate(mu))
                    _add_poly(vec, rest * tgt_width + tgt_mu_pos[nu], entry, sign, p)
            columns.append(vec)
    terms = koszul_terms_C(phi.source, phi.target, i)
    return _vectors_to_map(ring, terms[k], terms[k - 1], columns)


@with_log_context(module="koszul", operation="koszul_complex_C")
def koszul_complex_C(phi: ModuleMap, i: int) -> FreeComplex:
    """C_i(phi); the cokernel of its last map is S_i(coker phi)."""
    if i < 0:
        raise ParameterError("C_i needs i >= 0")
    terms = koszul_terms_C(phi.source, phi.target, i)
    differentials = {k: _koszul_differential(phi, i, k) for k in range(1, i + 1)}
    return FreeComplex(phi.ring, terms, differentials)


def symmetric_power_presentation(phi: ModuleMap, i: int) -> ModulePresentation:
    """S_i(M) for M = coker phi, presented by the last map of C_i(phi)."""
    if i == 0:
        return ModulePresentation.free(phi.ring, GradedFreeModule((0,)))
    return ModulePresentation(_koszul_differential(phi, i, 1))


# Spliced complexes D_i
def _divided_dual_twists(G: GradedFreeModule, m: int) -> GradedFreeModule:
    return G.dual().symmetric_power(m)


def spliced_terms_D(F: GradedFreeModule, G: GradedFreeModule, i: int) -> Dict[int, GradedFreeModule]:
    """Terms of D_i(phi) by position (S_i G at position 0)."""
    f, g = F.rank, G.rank
    r = f - g
    if not 0 <= i <= r:
        raise ParameterError(f"D_i is defined for 0 <= i <= r = {r}, got {i}")
    terms = koszul_terms_C(F, G, i)
    top_dual = G.dual().exterior_power(g)
    for m in range(r - i + 1):
        terms[i + 1 + m] = F.exterior_power(g + i + m).tensor(_divided_dual_twists(G, m)).tensor(top_dual)
    return terms


@dataclass(frozen=True)
class SpliceData:
    """The connecting map nu_i : /\\^{g+i} F (x) /\\^g G* -> /\\^i F."""

    phi: ModuleMap
    index: int
    nu: ModuleMap

    @property
    def c(self) -> int:
        """R(c) = /\\^f F (x) /\\^g G*."""
        return sum(self.phi.source.twists) - sum(self.phi.target.twists)

    @property
    def c1(self) -> int:
        """R(-c1) = /\\^f F* (x) /\\^g G."""
        return self.c


def splice_map(phi: ModuleMap, i: int) -> SpliceData:
    """
    nu_i(e_L (x) top) = sum over g-subsets K of L of det phi[:, K] * iota_K e_L,
    contracting k_1 first, so nu_0 is the row of maximal minors.
    """
    ring = phi.ring
    p = ring.characteristic
    f, g = phi.source.rank, phi.target.rank
    minors = minor_table(phi, g)
    all_rows = tuple(range(g))
    target_pos = subset_positions(f, i)
    columns = []
    for L in subsets(f, g + i):
        vec: Vector = {}
        for K in subsets(len(L), g):
            K = tuple(L[k] for k in K)
            det = minors[(all_rows, K)]
            if not det.terms:
                continue
            sign, current = 1, L
            for k in K:
                sign *= contraction_sign(current, k)
                current = remove_index(current, k)
            _add_poly(vec, target_pos[current], det, sign, p)
        columns.append(vec)
    source = phi.source.exterior_power(g + i).tensor(phi.target.dual().exterior_power(g))
    target = phi.source.exterior_power(i)
    nu = _vectors_to_map(ring, source, target, columns)
    return SpliceData(phi, i, nu)


def _dual_koszul_differential(phi: ModuleMap, i: int, m: int) -> ModuleMap:
    """Position i+1+m -> i+m for m >= 1: contraction by phi*(g*_m') lowering D_m."""
    ring = phi.ring
    p = ring.characteristic
    f, g = phi.source.rank, phi.target.rank
    src_mu = multisets(g, m)
    tgt_mu_pos = multiset_positions(g, m - 1)
    tgt_width = len(multisets(g, m - 1))
    tgt_L_pos = subset_positions(f, g + i + m - 1)
    columns = []
    for L in subsets(f, g + i + m):
        for mu in src_mu:
            vec: Vector = {}
            for mp in range(g):
                if mu[mp] == 0:
                    continue
                nu = tuple(e - (1 if idx == mp else 0) for idx, e in enumerate(mu))
                for j in L:
                    entry = phi[mp, j]
                    if not entry.terms:
                        continue
                    rest = tgt_L_pos[remove_index(L, j)]
                    _add_poly(vec, rest * tgt_width + tgt_mu_pos[nu], entry, contraction_sign(L, j), p)
            columns.append(vec)
    terms = spliced_terms_D(phi.source, phi.target, i)
    return _vectors_to_map(ring, terms[i + 1 + m], terms[i + m], columns)


@with_log_context(module="koszul", operation="spliced_complex_D")
def spliced_complex_D(phi: ModuleMap, i: int) -> FreeComplex:
    """
    D_i(phi). For phi with codim I(phi) = r + 1 it resolves S_i(coker phi)
    (R/I(phi) for i = 0).
    """
    _check_phi(phi)
    terms = spliced_terms_D(phi.source, phi.target, i)
    r = phi.source.rank - phi.target.rank
    differentials = {k: _koszul_differential(phi, i, k) for k in range(1, i + 1)}
    differentials[i + 1] = splice_map(phi, i).nu
    for m in range(1, r - i + 1):
        differentials[i + 1 + m] = _dual_koszul_differential(phi, i, m)
    complex_ = FreeComplex(phi.ring, terms, differentials)
    logging.debug(f"D_{i} built with ranks {[terms[k].rank for k in sorted(terms)]}")
    return complex_


def predicted_symmetric_power_series(
    ring: GradedRing, F: GradedFreeModule, G: GradedFreeModule, i: int
) -> HilbertSeries:
    """HS(S_i(coker phi)) for generic phi, as the Euler characteristic of D_i."""
    return euler_hilbert_series(ring, spliced_terms_D(F, G, i))


# Exterior powers of B*
def exterior_dual_relations(phi: ModuleMap, i: int) -> ModuleMap:
    """
    /\\^{i-1} F* (x) G* -> /\\^i F*, e*_K (x) g*_m -> phi*(g*_m) /\\ e*_K.

    For i < r its cokernel is /\\^i B* for B = ker phi (the dual of the top
    map of C_i); at i = r it is I(phi) times /\\^f F* (x) /\\^g G.
    """
    if i == 0:
        return ModuleMap.zero(phi.ring, GradedFreeModule(()), GradedFreeModule((0,)))
    return _koszul_differential(phi, i, i).transpose()


def wedge_dual_presentation(phi: ModuleMap, i: int) -> ModulePresentation:
    return ModulePresentation(exterior_dual_relations(phi, i))


# Eagon-Northcott complex of a multiple section
class EagonNorthcott:
    """
    E_. for a section with lift psi: P -> F (phi o psi = 0).

    Position i in t..r-1 holds V_i / Rel_i with V_i = /\\^i F* (x) D_{i-t}(P),
    position r the free module /\\^f F* (x) /\\^g G (x) D_{r-t}(P);
    position t - 1 holds R(p), p = -sum(P twists), which receives the
    maximal minors of psi.
    """

    def __init__(self, phi: ModuleMap, psi: ModuleMap):
        _check_phi(phi)
        if psi.target != phi.source:
            raise ParameterError("the lifted section must map into the source of phi")
        self.phi = phi
        self.psi = psi
        self.ring = phi.ring
        self.f = phi.source.rank
        self.g = phi.target.rank
        self.r = self.f - self.g
        self.t = psi.source.rank
        if not 1 <= self.t < self.r:
            raise ParameterError(f"need 1 <= t < r, got t={self.t}, r={self.r}")
        self.p = -sum(psi.source.twists)

    def free_module(self, i: int) -> GradedFreeModule:
        if i == self.t - 1:
            return GradedFreeModule((self.p,))
        if i == self.r:
            top = GradedFreeModule((sum(self.phi.target.twists) - sum(self.phi.source.twists),))
            return top.tensor(self.psi.source.symmetric_power(self.r - self.t))
        if not self.t <= i < self.r:
            return GradedFreeModule(())
        return self.phi.source.dual().exterior_power(i).tensor(self.psi.source.symmetric_power(i - self.t))

    @cached_property
    def _relations(self) -> Dict[int, ModuleMap]:
        result = {}
        for i in range(self.t, self.r):
            wedge = exterior_dual_relations(self.phi, i)
            divided = self.psi.source.symmetric_power(i - self.t)
            result[i] = wedge.tensor(ModuleMap.identity(self.ring, divided))
        return result

    def relations(self, i: int) -> ModuleMap:
        """Rel_i : W_i -> V_i with coker = /\\^i B* (x) D_{i-t}(P); empty at i = r."""
        if i in self._relations:
            return self._relations[i]
        return ModuleMap.zero(self.ring, GradedFreeModule(()), self.free_module(i))

    @cached_property
    def minors(self) -> List[Polynomial]:
        """The t x t minors of psi, in the order of t-subsets of F."""
        table = minor_table(self.psi, self.t)
        cols = tuple(range(self.t))
        return [table[(J, cols)] for J in subsets(self.f, self.t)]

    @cached_property
    def _section_in_cramer_syzygies(self) -> List[Vector]:
        """Columns of psi written in the columns of nu_1, which generate ker phi."""
        nu = splice_map(self.phi, 1).nu
        return lift(nu, self.psi.columns())

    def _top_delta(self) -> ModuleMap:
        """delta_r(omega (x) p^(mu)) = sum_l z(psi_l) (x) p^(mu - e_l) into V_{r-1}."""
        ring = self.ring
        prime = ring.characteristic
        t, f, g, r = self.t, self.f, self.g, self.r
        cramer = subsets(f, g + 1)
        tgt_mu_pos = multiset_positions(t, r - t - 1)
        tgt_width = len(multisets(t, r - t - 1))
        tgt_J_pos = subset_positions(f, r - 1)
        complements = []
        for L in cramer:
            outside = tuple(x for x in range(f) if x not in L)
            shuffle = sum(sum(1 for x in outside if x < k) for k in L)
            complements.append((tgt_J_pos[outside], -1 if (shuffle + g) % 2 else 1))
        columns = []
        for mu in multisets(t, r - t):
            vec: Vector = {}
            for l in range(t):
                if mu[l] == 0:
                    continue
                nu = tuple(e - (1 if idx == l else 0) for idx, e in enumerate(mu))
                for (comp, mono), coeff in self._section_in_cramer_syzygies[l].items():
                    rest, sign = complements[comp]
                    key = (rest * tgt_width + tgt_mu_pos[nu], mono)
                    value = (vec.get(key, 0) + sign * coeff) % prime
                    if value:
                        vec[key] = value
                    else:
                        vec.pop(key, None)
            columns.append(vec)
        return ModuleMap.from_columns(ring, self.free_module(r), self.free_module(r - 1), columns)

    def delta(self, i: int) -> ModuleMap:
        """delta_i : V_i -> V_{i-1}."""
        ring = self.ring
        prime = ring.characteristic
        if i == self.t:
            source = self.free_module(self.t)
            target = self.free_module(self.t - 1)
            return ModuleMap(ring, source, target, [self.minors], check=False)
        if i == self.r:
            return self._top_delta()
        t, f = self.t, self.f
        src_mu = multisets(t, i - t)
        tgt_mu_pos = multiset_positions(t, i - t - 1)
        tgt_width = len(multisets(t, i - t - 1))
        tgt_J_pos = subset_positions(f, i - 1)
        columns = []
        for J in subsets(f, i):
            for mu in src_mu:
                vec: Vector = {}
                for l in range(t):
                    if mu[l] == 0:
                        continue
                    nu = tuple(e - (1 if idx == l else 0) for idx, e in enumerate(mu))
                    for j in J:
                        entry = self.psi[j, l]
                        if not entry.terms:
                            continue
                        rest = tgt_J_pos[remove_index(J, j)]
                        _add_poly(vec, rest * tgt_width + tgt_mu_pos[nu], entry, contraction_sign(J, j), prime)
                columns.append(vec)
        return ModuleMap.from_columns(ring, self.free_module(i), self.free_module(i - 1), columns)

    def _cokernel_series(self, module: GradedFreeModule, columns: List[Vector]) -> HilbertSeries:
        if not module.rank:
            return HilbertSeries.zero(self.ring.nvars)
        return groebner_basis(self.ring, module, columns).hilbert_series()

    def term_series(self, i: int) -> HilbertSeries:
        """HS(E_i) (HS(R(p)) at position t - 1)."""
        return self._cokernel_series(self.free_module(i), self.relations(i).columns())

    def image_cokernel_series(self, i: int) -> HilbertSeries:
        """HS(E_i / im delta_{i+1})."""
        columns = self.relations(i).columns()
        if i + 1 <= self.r:
            columns = columns + self.delta(i + 1).columns()
        return self._cokernel_series(self.free_module(i), columns)

    @with_log_context(module="koszul", operation="en_homology")
    def homology_series(self, i: int) -> HilbertSeries:
        """HS(H_i(E_.)) for t <= i <= r."""
        if not self.t <= i <= self.r:
            return HilbertSeries.zero(self.ring.nvars)
        return self.image_cokernel_series(i) - self.term_series(i - 1) + self.image_cokernel_series(i - 1)

    def ideal_series(self) -> HilbertSeries:
        """HS(R/I(psi))."""
        return self._cokernel_series(
            GradedFreeModule((0,)), [{(0, m): c for m, c in f.terms.items()} for f in self.minors if f.terms]
        )


def eagon_northcott_E(phi: ModuleMap, psi: ModuleMap) -> EagonNorthcott:
    return EagonNorthcott(phi, psi)


class DualEagonNorthcott:
    """
    E_.* : 0 -> R(-p) -> E_t* -> ... -> E_r* -> Ext^c(R/I, R)(-p) -> 0,
    positions t - 1 .. r + 1, with E_i* = ker(Rel_i^T) inside V_i*.
    """

    def __init__(self, complex_: EagonNorthcott):
        self.E = complex_
        self.ring = complex_.ring
        self.t = complex_.t
        self.r = complex_.r

    @cached_property
    def _kernels(self) -> Dict[int, ModuleMap]:
        result = {}
        for i in range(self.t, self.r + 1):
            rel = self.E.relations(i)
            if rel.source.rank:
                result[i] = kernel(rel.transpose(), minimal=True)
            else:
                result[i] = ModuleMap.identity(self.ring, self.E.free_module(i).dual())
        result[self.t - 1] = ModuleMap.identity(self.ring, self.E.free_module(self.t - 1).dual())
        return result

    def _coker(self, m: ModuleMap) -> HilbertSeries:
        if not m.target.rank:
            return HilbertSeries.zero(self.ring.nvars)
        return groebner_basis(self.ring, m.target, m.columns()).hilbert_series()

    def _dual_free_series(self, i: int) -> HilbertSeries:
        return self.E.free_module(i).dual().hilbert_series(self.ring)

    def term_series(self, i: int) -> HilbertSeries:
        """HS(E_i*)."""
        return self._dual_free_series(i) - self._coker(self._kernels[i])

    def _image_series(self, i: int) -> HilbertSeries:
        """HS of the image of delta_{i+1}^* : E_i* -> E_{i+1}*."""
        image = self.E.delta(i + 1).transpose() @ self._kernels[i]
        return self._dual_free_series(i + 1) - self._coker(image)

    @with_log_context(module="koszul", operation="dual_en_cohomology")
    def cohomology_series(self, i: int) -> HilbertSeries:
        """HS(H^i(E_.*)) for t <= i <= r - 1."""
        if not self.t <= i <= self.r - 1:
            raise ParameterError(f"cohomology is computed directly for t <= i < r, got {i}")
        return self.term_series(i) - self._image_series(i) - self._image_series(i - 1)

    def tail_series(self) -> HilbertSeries:
        """HS(E_r* / im delta_r^*), the source of the last map."""
        return self.term_series(self.r) - self._image_series(self.r - 1)


def dual_complex_E_star(complex_: EagonNorthcott) -> DualEagonNorthcott:
    return DualEagonNorthcott(complex_)
