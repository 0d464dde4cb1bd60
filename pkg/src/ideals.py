"""
Ideal Operations
================

Homogeneous ideals of a graded ring R, given by lists of generating forms.
Every operation reduces to a Groebner basis or a syzygy computation of the
engine, with the defining equations of R adjoined.

Functions:
    ideal_basis: Groebner basis of an ideal.
    contains / equal: Containment and equality of ideals.
    codim: Codimension of an ideal in R.
    intersect: Intersection of two ideals.
    colon / colon_ideal: I : g and I : J.
    saturate: I : m^infinity.
    annihilator: Ann of a presented module.
    equidimensional_hull: Intersection of the top-dimensional primary components.
    maximal_ideal_power: Generators of m^k.
"""

# Standard library imports
import logging
from typing import List, Sequence

# Local imports
from src.config import ENGINE_SETTINGS
from src.groebner import (
    GroebnerBasis,
    ModulePresentation,
    groebner_basis,
    kernel,
    minimal_generators,
)
from src.hilbert import HilbertSeries
from src.modules import GradedFreeModule, ModuleMap, vectors_from_polys
from src.ring import GradedRing, Polynomial
from src.utils.error_utils import DegreeCapExceeded
from src.utils.logging_utils import with_log_context

Ideal = List[Polynomial]
_CYCLIC = GradedFreeModule((0,))


def _nonzero(polys: Sequence[Polynomial]) -> Ideal:
    return [f for f in polys if not f.is_zero()]


def ideal_basis(ring: GradedRing, polys: Sequence[Polynomial]) -> GroebnerBasis:
    return groebner_basis(ring, _CYCLIC, vectors_from_polys(_nonzero(polys)))


def hilbert_series(ring: GradedRing, polys: Sequence[Polynomial]) -> HilbertSeries:
    """Series of R/I."""
    return ideal_basis(ring, polys).hilbert_series()


def contains(ring: GradedRing, big: Sequence[Polynomial], small: Sequence[Polynomial]) -> bool:
    """True when every form of `small` lies in the ideal generated by `big`."""
    basis = ideal_basis(ring, big)
    return basis.contains_all(vectors_from_polys(_nonzero(small)))


def equal(ring: GradedRing, first: Sequence[Polynomial], second: Sequence[Polynomial]) -> bool:
    return contains(ring, first, second) and contains(ring, second, first)


def is_unit_ideal(ring: GradedRing, polys: Sequence[Polynomial]) -> bool:
    return ideal_basis(ring, polys).is_whole_module()


def dimension(ring: GradedRing, polys: Sequence[Polynomial]) -> int:
    """Krull dimension of R/I; -1 for the unit ideal."""
    return hilbert_series(ring, polys).dimension()


def codim(ring: GradedRing, polys: Sequence[Polynomial]) -> int:
    """Codimension of I in R (krull_dim + 1 for the unit ideal)."""
    dim = dimension(ring, polys)
    if dim < 0:
        return ring.krull_dim + 1
    return ring.krull_dim - dim


def minimalize(ring: GradedRing, polys: Sequence[Polynomial]) -> Ideal:
    """A minimal generating subset of the given forms (modulo the quotient of R)."""
    polys = _nonzero(polys)
    keep = minimal_generators(ring, _CYCLIC, vectors_from_polys(polys))
    return [polys[i] for i in keep]


def _row_map(ring: GradedRing, polys: Sequence[Polynomial], twist: int = 0) -> ModuleMap:
    """The 1 x k map R(twist - deg f_j) -> R(twist) with the given forms."""
    source = GradedFreeModule(tuple(twist - f.degree() for f in polys))
    return ModuleMap(ring, source, GradedFreeModule((twist,)), [list(polys)])


def _first_block_combination(ring, syz: ModuleMap, polys: Sequence[Polynomial], width: int) -> Ideal:
    """sum_j a_j f_j over the first `width` coordinates of every syzygy."""
    result = []
    for j in range(syz.source.rank):
        total = ring.zero()
        for k in range(width):
            a = syz[k, j]
            if a.terms:
                total = total + a * polys[k]
        total = ring.reduce(total)
        if total.terms:
            result.append(total)
    return result


@with_log_context(module="ideals", operation="intersect")
def intersect(ring: GradedRing, first: Sequence[Polynomial], second: Sequence[Polynomial]) -> Ideal:
    """I cap J from the syzygies of [I | J]."""
    first, second = _nonzero(first), _nonzero(second)
    if not first or not second:
        return []
    syz = kernel(_row_map(ring, first + second), minimal=False)
    return minimalize(ring, _first_block_combination(ring, syz, first, len(first)))


def intersect_all(ring: GradedRing, ideals: Sequence[Sequence[Polynomial]]) -> Ideal:
    result = list(ideals[0])
    for other in ideals[1:]:
        result = intersect(ring, result, other)
    return result


@with_log_context(module="ideals", operation="colon")
def colon(ring: GradedRing, polys: Sequence[Polynomial], g: Polynomial) -> Ideal:
    """I : g, read off the syzygies of [g | I]."""
    polys = _nonzero(polys)
    if g.is_zero():
        return [ring.one()]
    syz = kernel(_row_map(ring, [g] + polys), minimal=False)
    result = [ring.reduce(syz[0, j]) for j in range(syz.source.rank)]
    return minimalize(ring, result)


def colon_ideal(ring: GradedRing, polys: Sequence[Polynomial], others: Sequence[Polynomial]) -> Ideal:
    """I : J as the intersection of I : g over the generators g of J."""
    others = _nonzero(others)
    if not others:
        return [ring.one()]
    return intersect_all(ring, [colon(ring, polys, g) for g in others])


def maximal_ideal_power(ring: GradedRing, k: int) -> Ideal:
    """All monomials of degree k."""
    return [ring.monomial(m) for m in ring.monomials(k)]


@with_log_context(module="ideals", operation="saturate")
def saturate(ring: GradedRing, polys: Sequence[Polynomial], max_steps: int = None) -> Ideal:
    """
    I : m^infinity by repeated colon with the maximal ideal.

    Raises:
        DegreeCapExceeded: If the chain has not stabilized after max_steps
    """
    max_steps = max_steps or ENGINE_SETTINGS["max_degree"]
    current = minimalize(ring, polys)
    series = hilbert_series(ring, current)
    maximal = ring.gens
    for step in range(max_steps):
        bigger = colon_ideal(ring, current, maximal)
        bigger_series = hilbert_series(ring, bigger)
        # I is contained in I : m, so equal series means equal ideals
        if bigger_series == series:
            logging.debug(f"Saturation stabilized after {step} colon steps")
            return current
        current, series = bigger, bigger_series
    raise DegreeCapExceeded(max_steps, max_steps, "saturation")


@with_log_context(module="ideals", operation="annihilator")
def annihilator(module: ModulePresentation) -> Ideal:
    """Ann(M) = intersection over generators e_c of (U : e_c)."""
    ring = module.ring
    relations = module.relations
    F0 = module.generators
    if F0.rank == 0:
        return [ring.one()]
    parts = []
    for c in range(F0.rank):
        unit_column = ModuleMap.zero(ring, GradedFreeModule((F0.twists[c],)), F0)
        entries = [list(row) for row in unit_column.entries]
        entries[c][0] = ring.one()
        e_c = ModuleMap(ring, unit_column.source, F0, entries, check=False)
        syz = kernel(e_c.hstack(relations), minimal=False)
        parts.append(minimalize(ring, [ring.reduce(syz[0, j]) for j in range(syz.source.rank)]))
    return intersect_all(ring, parts)


@with_log_context(module="ideals", operation="equidimensional_hull")
def equidimensional_hull(ring: GradedRing, polys: Sequence[Polynomial]) -> Ideal:
    """
    Intersection of the primary components of I of maximal dimension,
    computed as Ann Ext^c_R(R/I, R) with c = codim I.
    """
    from src.resolution import ext_module, minimal_free_resolution

    c = codim(ring, polys)
    if c > ring.krull_dim:
        return [ring.one()]
    quotient = ModulePresentation.cyclic(ring, _nonzero(polys))
    resolution = minimal_free_resolution(quotient)
    top = ext_module(resolution, c, ring)
    return minimalize(ring, annihilator(top))


def is_unmixed(ring: GradedRing, polys: Sequence[Polynomial]) -> bool:
    """True when I equals its equidimensional hull (no embedded or lower components)."""
    return equal(ring, equidimensional_hull(ring, polys), polys)


def is_saturated(ring: GradedRing, polys: Sequence[Polynomial]) -> bool:
    return equal(ring, saturate(ring, polys), polys)


def product(ring: GradedRing, first: Sequence[Polynomial], second: Sequence[Polynomial]) -> Ideal:
    return minimalize(ring, [f * g for f in first for g in second])
