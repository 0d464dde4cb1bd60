"""
Applications
============

Constructions built on multiple sections: embedding a given equidimensional
scheme X of odd codimension into an arithmetically Gorenstein Y, the even
codimension variant through a hypersurface ring, and sections of the null
correlation type obtained by adjoining a nowhere vanishing section.

Classes:
    Embedding: Result of an AG embedding.

Functions:
    random_points_ideal: Ideal of general points of P^n.
    sections_vanishing_on: Basis of the degree-j sections with coordinates in I_X.
    ag_embed: Y arithmetically Gorenstein with X contained in Y.
    ag_embed_even: Even codimension X through a hypersurface ring.
    lift_through_quotient: Adjoin a section R(-c) -> F to a section P -> B_phi.

Example:
    >>> inst = cotangent_instance(3, twist=3)
    >>> points = random_points_ideal(inst.ring, 4, seed=1)
    >>> ag_embed(inst, points).hull_degree
    5
"""

# Standard library imports
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence

# Third-party imports
import numpy as np
from sympy import GF
from sympy.polys.matrices import DomainMatrix

# Local imports
from src.buchsbaum_rim import BRInstance, generic_instance, resample
from src.groebner import ModulePresentation
from src.ideals import codim as ideal_codim
from src.ideals import contains, ideal_basis, intersect_all, minimalize
from src.modules import GradedFreeModule, ModuleMap
from src.resolution import depth
from src.ring import GradedRing, Polynomial
from src.sections import SectionInstance, build_section, section_from_lift
from src.utils.error_utils import NoSectionFound, ParameterError, ResampleExhausted
from src.utils.logging_utils import LogContext, with_log_context


@dataclass
class Embedding:
    """X inside Y = V(J(psi)) for a section psi vanishing on X."""

    section: SectionInstance
    ideal_X: List[Polynomial]
    ideal_Y: List[Polynomial]
    contains_X: bool
    ag: bool
    hull_degree: int
    solution_dimension: int
    metadata: Dict = field(default_factory=dict)


def random_points_ideal(ring: GradedRing, count: int, seed: int = 0) -> List[Polynomial]:
    """Intersection of the ideals (x_i - a_i x_0) of `count` random points."""
    if count < 1:
        raise ParameterError("need at least one point")
    rng = np.random.default_rng(seed)
    x = ring.gens
    points = []
    for _ in range(count):
        a = rng.integers(0, ring.characteristic, size=ring.nvars - 1)
        points.append([x[i + 1] - x[0] * int(a[i]) for i in range(ring.nvars - 1)])
    return intersect_all(ring, points)


def sections_vanishing_on(br: BRInstance, ideal_X: Sequence[Polynomial], degree: int = 0) -> List[ModuleMap]:
    """
    Basis of the coefficient maps C: R(-degree) -> B0 whose lift syz o C has
    every F-coordinate in I_X, found as the nullspace over GF(p) of the
    normal forms modulo I_X.
    """
    ring = br.ring
    p = ring.characteristic
    basis = ideal_basis(ring, ideal_X)
    syz = br.syzygy
    B0 = br.generators
    unknowns = [(b, mono) for b, beta in enumerate(B0.twists) for mono in ring.monomials(beta + degree)]
    if not unknowns:
        return []

    rows: Dict = {}
    columns = []
    for b, mono in unknowns:
        shifted = syz.column(b)
        residues = {}
        for (i, m), c in shifted.items():
            term = tuple(e + f for e, f in zip(m, mono))
            residues[(i, term)] = (residues.get((i, term), 0) + c) % p
        reduced = {}
        for i in range(br.f):
            coordinate = {(0, m): c for (j, m), c in residues.items() if j == i and c}
            for (_, m), c in basis.reduce(coordinate).items():
                reduced[(i, m)] = c
        for key in reduced:
            rows.setdefault(key, len(rows))
        columns.append(reduced)

    K = GF(p)
    matrix = [[K(0)] * len(unknowns) for _ in range(max(len(rows), 1))]
    for j, reduced in enumerate(columns):
        for key, c in reduced.items():
            matrix[rows[key]][j] = K(c)
    nullspace = DomainMatrix(matrix, (len(matrix), len(unknowns)), K).nullspace().to_list()

    P = GradedFreeModule((-degree,))
    solutions = []
    for vector in nullspace:
        entries = [ring.zero() for _ in range(B0.rank)]
        for (b, mono), value in zip(unknowns, vector):
            value = int(value) % p
            if value:
                entries[b] = entries[b] + ring.monomial(mono, value)
        solutions.append(ModuleMap(ring, P, B0, [[e] for e in entries], check=False))
    logging.debug(f"{len(solutions)} independent sections of degree {degree} vanish on X")
    return solutions


@with_log_context(module="applications", operation="ag_embed")
def ag_embed(br: BRInstance, ideal_X: Sequence[Polynomial], degree: int = 0, seed: int = 0) -> Embedding:
    """
    Y = V(J(psi)) for a general section psi: R(-degree) -> B_phi vanishing on X.

    X must be equidimensional of odd codimension r = rank B_phi; this is not
    checked beyond its codimension.

    Raises:
        ParameterError: If r is even or codim X differs from r
        NoSectionFound: If no regular section of this degree vanishes on X
    """
    ring = br.ring
    if br.r % 2 == 0:
        raise ParameterError(f"rank r = {br.r} must be odd")
    ideal_X = minimalize(ring, ideal_X)
    codim_X = ideal_codim(ring, ideal_X)
    if codim_X != br.r:
        raise ParameterError(f"codim X = {codim_X} differs from r = {br.r}")

    solutions = sections_vanishing_on(br, ideal_X, degree)
    if not solutions:
        raise NoSectionFound(f"no section of degree {degree} vanishes on X; increase the degree")
    rng = np.random.default_rng(seed)
    P = GradedFreeModule((-degree,))

    def combine(attempt):
        with LogContext(seed=seed, attempt=attempt):
            weights = rng.integers(1, ring.characteristic, size=len(solutions))
            C = solutions[0].scale(int(weights[0]))
            for w, s in zip(weights[1:], solutions[1:]):
                C = C + s.scale(int(w))
            return build_section(br, P, coefficients=C)

    try:
        section = resample(combine, what="section vanishing on X")
    except ResampleExhausted as e:
        raise NoSectionFound(f"no regular section of degree {degree} vanishes on X: {e}") from e

    ideal_Y = section.hull
    dimension = ModulePresentation.cyclic(ring, ideal_Y).hilbert_series().dimension()
    betti = section.hull_betti
    ag = depth(section.hull_resolution) == dimension and betti.total(betti.length) == 1
    hull_degree = ModulePresentation.cyclic(ring, ideal_Y).hilbert_series().multiplicity()
    embedding = Embedding(
        section=section,
        ideal_X=ideal_X,
        ideal_Y=ideal_Y,
        contains_X=contains(ring, ideal_X, ideal_Y),
        ag=ag,
        hull_degree=hull_degree,
        solution_dimension=len(solutions),
        metadata={"degree": degree, "seed": seed},
    )
    logging.info(f"Embedded X into Y of degree {hull_degree} (AG {ag}) from {len(solutions)} sections")
    return embedding


@with_log_context(module="applications", operation="ag_embed_even")
def ag_embed_even(
    ideal_X: Sequence[Polynomial], ring: GradedRing, twist: int = 3, degree: int = 0, seed: int = 0
) -> Embedding:
    """
    X of even codimension r: pass to R = S/(f) for a form f in I_X, where X has
    odd codimension r - 1, and embed there with a generic linear phi.
    """
    ideal_X = minimalize(ring, ideal_X)
    r = ideal_codim(ring, ideal_X)
    if r % 2:
        raise ParameterError(f"codim X = {r} is odd; use ag_embed")
    rng = np.random.default_rng(seed)
    low = min(f.degree() for f in ideal_X)
    hypersurface = ring.zero()
    for f in ideal_X:
        if f.degree() == low:
            hypersurface = hypersurface + f * int(rng.integers(1, ring.characteristic))
    quotient = ring.with_quotient([hypersurface])
    F = GradedFreeModule((twist - 1,) * r)
    G = GradedFreeModule((twist,))
    br = generic_instance(quotient, F, G, seed, label="hypersurface")
    lifted = [Polynomial(quotient, f.terms) for f in ideal_X]
    embedding = ag_embed(br, lifted, degree, seed)
    embedding.metadata["hypersurface"] = str(hypersurface)
    return embedding


@with_log_context(module="applications", operation="lift_through_quotient")
def lift_through_quotient(sec: SectionInstance, extra: ModuleMap) -> SectionInstance:
    """
    alpha = (psi, s): P + R(-c) -> B_phi for a section s: R(-c) -> F in ker phi.

    Raises:
        ParameterError: If t + 1 >= r or s is not in ker phi
        CodimFailure: If I(alpha) does not have codim r - t
    """
    if sec.t + 1 >= sec.br.r:
        raise ParameterError(f"t + 1 = {sec.t + 1} must stay below r = {sec.br.r}")
    alpha = sec.psi.hstack(extra.over(sec.ring))
    lifted = section_from_lift(sec.br, alpha)
    lifted.metadata.update({"adjoined": str(extra.source)})
    return lifted
