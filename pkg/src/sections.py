"""
Multiple Sections and Degeneracy Loci
=====================================

A multiple section psi: P -> B_phi is stored through its lift psi: P -> F
(columns lie in ker phi). Its degeneracy ideal I(psi) is generated by the
t x t minors of the lift; J(psi) is the equidimensional hull of I(psi).

`analyze` computes everything about R/I(psi) and R/J(psi) with the engine
and compares it with the closed-form predictions claim by claim.

Classes:
    SectionInstance: A validated section with cached locus computations.
    LocusReport: Computed invariants, predictions and verdicts of one section.

Functions:
    build_section: Random or supplied section with codim validation.
    top_dimensional_part: J(psi).
    analyze: Full computed-versus-predicted analysis.
    verify_resolution: Betti table of R/J against A_k + C_k.
    tor_splitting_check: Tor of a module against Tor of its Ext modules.
    k_buchsbaum_check: Annihilators of the intermediate Ext modules.
"""

# Standard library imports
import logging
import time
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional

# Third-party imports
import numpy as np

# Local imports
from src.buchsbaum_rim import (
    BRInstance,
    canonical_symmetric_power_check,
    characterization_checks,
    exterior_power_ext_check,
    resample,
)
from src.claims import ClaimResult, check, compare_series, merge, not_applicable
from src.groebner import ModulePresentation, groebner_basis
from src.hilbert import HilbertSeries
from src.ideals import (
    annihilator,
    contains,
    equal,
    equidimensional_hull,
    maximal_ideal_power,
    minimalize,
    saturate,
)
from src.ideals import codim as ideal_codim
from src.koszul import EagonNorthcott, dual_complex_E_star
from src.modules import GradedFreeModule, ModuleMap, minors, random_map
from src.predictions import PredictionReport, predict_all, quotient_betti
from src.resolution import (
    BettiTable,
    Resolution,
    depth,
    ext_module,
    ext_series,
    minimal_free_resolution,
)
from src.utils.error_utils import CodimFailure, DegreeInfeasible, ParameterError
from src.utils.logging_utils import LogContext, with_log_context


@dataclass
class SectionInstance:
    """A section psi: P -> B_phi with codim I(psi) = r - t + 1."""

    br: BRInstance
    psi: ModuleMap
    codim: int
    coefficients: Optional[ModuleMap] = None
    metadata: Dict = field(default_factory=dict)

    @property
    def ring(self):
        return self.br.ring

    @property
    def P(self) -> GradedFreeModule:
        return self.psi.source

    @property
    def t(self) -> int:
        return self.P.rank

    @property
    def p(self) -> int:
        """R(p) = /\\^t P*."""
        return -sum(self.P.twists)

    @cached_property
    def ideal(self) -> List:
        """I(psi): the t x t minors of the lift."""
        return minimalize(self.ring, minors(self.psi, self.t))

    @cached_property
    def resolution(self) -> Resolution:
        """S-resolution of R/I(psi)."""
        return minimal_free_resolution(ModulePresentation.cyclic(self.ring, self.ideal))

    @cached_property
    def hull(self) -> List:
        return top_dimensional_part(self)

    @cached_property
    def saturation(self) -> List:
        return saturate(self.ring, self.ideal)

    @cached_property
    def hull_resolution(self) -> Resolution:
        """S-resolution of R/J(psi)."""
        return minimal_free_resolution(ModulePresentation.cyclic(self.ring, self.hull))

    @cached_property
    def hull_betti(self) -> BettiTable:
        """Betti table of R/J over R (over S when R is a polynomial ring)."""
        if not self.ring.quotient:
            return self.hull_resolution.betti
        over_ring = minimal_free_resolution(
            ModulePresentation.cyclic(self.ring, self.hull), over_ring=True, max_length=self.ring.nvars + 1
        )
        return over_ring.betti

    @cached_property
    def predictions(self) -> PredictionReport:
        return predict_all(self.ring, self.br.F, self.br.G, self.P)

    def __repr__(self):
        return f"SectionInstance(t={self.t}, P={self.P}, {self.br!r})"


def _validate_lift(br: BRInstance, psi: ModuleMap):
    if psi.target != br.F:
        raise ParameterError("the lift must map into F")
    if not (br.phi @ psi).is_zero():
        raise ParameterError("the columns of the lift are not in ker phi")
    t = psi.source.rank
    if not 1 <= t < br.r:
        raise ParameterError(f"need 1 <= t < r = {br.r}, got t={t}")


def _check_codim(br: BRInstance, psi: ModuleMap) -> int:
    t = psi.source.rank
    expected = br.r - t + 1
    actual = ideal_codim(br.ring, minors(psi, t))
    if actual != expected:
        raise CodimFailure(actual, expected, "I(psi)")
    return actual


def section_from_lift(br: BRInstance, psi: ModuleMap, coefficients: Optional[ModuleMap] = None) -> SectionInstance:
    """Validate a given lift P -> F."""
    psi = psi.over(br.ring)
    _validate_lift(br, psi)
    return SectionInstance(br, psi, _check_codim(br, psi), coefficients)


@with_log_context(module="sections", operation="build_section")
def build_section(
    br: BRInstance,
    P: GradedFreeModule,
    coefficients: Optional[ModuleMap] = None,
    seed: int = 0,
) -> SectionInstance:
    """
    psi = syz o C for C: P -> B0 supplied or random, resampled until
    codim I(psi) = r - t + 1.

    Raises:
        ParameterError: If t is outside 1..r-1
        DegreeInfeasible: If some column of P admits no nonzero map into B_phi
        ResampleExhausted: If no random section is regular
    """
    t = P.rank
    if not 1 <= t < br.r:
        raise ParameterError(f"need 1 <= t < r = {br.r}, got t={t}")
    B0 = br.generators
    for l, pi in enumerate(P.twists):
        if all(b - pi < 0 for b in B0.twists):
            raise DegreeInfeasible(
                f"column {l} of P = {P} admits no map into B_phi (generator twists {B0.twists})"
            )
    if coefficients is not None:
        psi = br.syzygy @ coefficients
        return section_from_lift(br, psi, coefficients)

    rng = np.random.default_rng(seed)

    def attempt_section(attempt):
        with LogContext(seed=seed, attempt=attempt):
            C = random_map(br.ring, P, B0, rng)
            psi = br.syzygy @ C
            _validate_lift(br, psi)
            return SectionInstance(br, psi, _check_codim(br, psi), C, {"seed": seed})

    section = resample(attempt_section, what="section")
    logging.debug(f"Section with I(psi) of codim {section.codim} from {len(section.ideal)} minors")
    return section


@with_log_context(module="sections", operation="top_dimensional_part")
def top_dimensional_part(sec: SectionInstance) -> List:
    """J(psi) = Ann Ext^c(R/I, R), c = r - t + 1."""
    return equidimensional_hull(sec.ring, sec.ideal)


def section_ideal_second_route(sec: SectionInstance) -> ClaimResult:
    """I(psi) through /\\^t syz o /\\^t C against the minors of the lift."""
    if sec.coefficients is None:
        return not_applicable("section_ideal_routes", "section given by its lift only")
    composite = sec.br.syzygy.exterior_power(sec.t) @ sec.coefficients.exterior_power(sec.t)
    routed = [e for row in composite.entries for e in row if not e.is_zero()]
    same = equal(sec.ring, routed, sec.ideal)
    return check("section_ideal_routes", same, "minors of the lift and of the factored map agree" if same else "ideals differ")


def minimality_precondition(sec: SectionInstance) -> ClaimResult:
    """Every column of psi lies in m B_phi, i.e. no column is a minimal generator."""
    ring = sec.ring
    syz = sec.br.syzygy
    spanning = []
    for j in range(syz.source.rank):
        column = syz.column(j)
        for x in range(ring.nvars):
            unit = tuple(1 if k == x else 0 for k in range(ring.nvars))
            spanning.append({(c, tuple(a + b for a, b in zip(m, unit))): v for (c, m), v in column.items()})
    basis = groebner_basis(ring, syz.target, spanning)
    offending = [l for l in range(sec.t) if not basis.contains(sec.psi.column(l))]
    if offending:
        return check(
            "minimality_precondition", False,
            f"columns {offending} of psi are minimal generators of B_phi",
        )
    return check("minimality_precondition", True, "psi avoids the minimal generators of B_phi")


@with_log_context(module="sections", operation="verify_resolution")
def verify_resolution(sec: SectionInstance) -> ClaimResult:
    """
    Minimal Betti table of R/J(psi) against the predicted A_k + C_k table.

    A mismatch is NOT-APPLICABLE instead of FAIL when psi hits a minimal
    generator of B_phi; the detail then lists the cancelled entries.
    """
    predicted = sec.predictions.betti
    computed = sec.hull_betti
    if predicted == computed:
        return check("resolution_shape", True, "Betti tables agree",
                     predicted.to_dict(), computed.to_dict())
    precondition = minimality_precondition(sec)
    missing = Counter(predicted.entries)
    missing.subtract(Counter(computed.entries))
    detail = "differences " + ", ".join(
        f"beta_{i},{d}: {v:+d}" for (i, d), v in sorted(missing.items()) if v
    )
    if precondition.failed:
        result = not_applicable("resolution_shape", f"{precondition.detail}; {detail}")
        result.predicted, result.computed = predicted.to_dict(), computed.to_dict()
        return result
    return check("resolution_shape", False, detail, predicted.to_dict(), computed.to_dict())


def _shape_check(sec: SectionInstance) -> ClaimResult:
    pred = sec.predictions
    claim = {"gorenstein": "gorenstein_symmetry", "even_rank": "even_rank_shape"}.get(pred.shape_name)
    if claim is None:
        reason = "needs one section of degree zero"
        return merge("gorenstein_symmetry", [not_applicable("gorenstein_symmetry", reason)], reason)
    closed = quotient_betti(pred.shape_terms, pred.p)
    parts = [check(claim, closed == pred.betti, "closed shape equals the A_k + C_k table")]
    if pred.shape_name == "gorenstein":
        parts.append(check(claim, pred.is_consistent(), "predicted table is self-dual"))
    if minimality_precondition(sec).failed:
        parts.append(not_applicable(claim, "psi hits a minimal generator"))
    else:
        parts.append(check(claim, closed == sec.hull_betti, "closed shape equals the computed table"))
    return merge(claim, parts)


def _betti_counter(betti: BettiTable, i: int, negate: bool = False) -> Counter:
    return Counter({(-d if negate else d): v for (j, d), v in betti.entries.items() if j == i})


@with_log_context(module="sections", operation="tor_splitting_check")
def tor_splitting_check(module: ModulePresentation) -> ClaimResult:
    """
    For a torsion module N of projective dimension s and every j:
    Tor_{s-j}(N, K)^dual <= sum_{i<=j} Tor_{j-i}(Ext^{s-i}(N, R), K) degreewise,
    with equality for j = 0 and Tor_1(Ext^s) <= Tor_{s-1}(N)^dual.
    """
    ring = module.ring
    if ring.quotient:
        return not_applicable("tor_splitting", "needs a polynomial ring")
    if module.hilbert_series().dimension() >= ring.nvars:
        return not_applicable("tor_splitting", "module is not torsion")
    resolution = minimal_free_resolution(module)
    s = resolution.length
    ext_bettis = {}
    for i in range(s + 1):
        ext = ext_module(resolution, s - i, ring)
        ext_bettis[i] = minimal_free_resolution(ext).betti if ext.generators.rank else BettiTable()
    parts = []
    for j in range(s + 1):
        left = _betti_counter(resolution.betti, s - j, negate=True)
        right = Counter()
        for i in range(j + 1):
            right.update(_betti_counter(ext_bettis[i], j - i))
        ok = all(right[d] >= v for d, v in left.items())
        parts.append(check("tor_splitting", ok, f"j = {j}: {dict(left)} <= {dict(right)}"))
        if j == 0:
            parts.append(check("tor_splitting", left == right, f"j = 0 equality: {dict(left)} == {dict(right)}"))
        if j == 1 and s >= 1:
            first = _betti_counter(ext_bettis[0], 1)
            ok = all(left[d] >= v for d, v in first.items())
            parts.append(check("tor_splitting", ok, f"Tor_1(Ext^s) {dict(first)} <= {dict(left)}"))
    return merge("tor_splitting", parts, f"projective dimension {s}")


@with_log_context(module="sections", operation="k_buchsbaum_check")
def k_buchsbaum_check(sec: SectionInstance, k: int) -> ClaimResult:
    """Every intermediate Ext^e(R/I, R) is annihilated by m^k and not by m^(k-1)."""
    ring = sec.ring
    c, n = sec.br.r - sec.t + 1, sec.br.n
    parts = []
    for e in range(c + 1, n + 2):
        if ext_series(sec.resolution, e, ring).is_zero():
            continue
        ann = annihilator(ext_module(sec.resolution, e, ring))
        by_k = contains(ring, ann, maximal_ideal_power(ring, k))
        by_lower = contains(ring, ann, maximal_ideal_power(ring, k - 1)) if k > 1 else contains(ring, ann, [ring.one()])
        parts.append(
            check("k_buchsbaum", by_k and not by_lower,
                  f"Ext^{e}: annihilated by m^{k} {by_k}, by m^{k - 1} {by_lower}")
        )
    if not parts:
        return not_applicable("k_buchsbaum", "no intermediate cohomology")
    return merge("k_buchsbaum", parts)


@dataclass
class LocusReport:
    """Computed data of R/I(psi), R/J(psi), the predictions and the verdicts."""

    section: SectionInstance
    predictions: PredictionReport
    codim: int
    dimension: int
    degree: int
    depth: int
    hull_degree: int
    hull_dimension: int
    ideal_unmixed: bool
    hull_equals_saturation: bool
    saturated: bool
    acm: bool
    ag: bool
    cm_type: Optional[int]
    canonical_generators: int
    betti_I: BettiTable
    betti_J: BettiTable
    j_over_i: HilbertSeries
    ext_table: Dict[int, HilbertSeries]
    intermediate_positions: List[int]
    claims: List[ClaimResult] = field(default_factory=list)
    timing: Dict[str, float] = field(default_factory=dict)

    @property
    def failed(self) -> List[ClaimResult]:
        return [c for c in self.claims if c.failed]

    def claim(self, claim_id: str) -> ClaimResult:
        for result in self.claims:
            if result.claim == claim_id:
                return result
        raise KeyError(claim_id)


def _en_checks(sec: SectionInstance, canonical: HilbertSeries) -> List[ClaimResult]:
    pred = sec.predictions
    ring = sec.ring
    zero = HilbertSeries.zero(ring.nvars)
    E = EagonNorthcott(sec.br.phi, sec.psi)
    parts = []
    for i in range(sec.t, sec.br.r + 1):
        diff = compare_series(pred.en_homology.get(i, zero), E.homology_series(i), f"H_{i}(E)")
        parts.append(check("en_homology", diff is None, diff or f"H_{i} agrees"))
    en = merge("en_homology", parts)

    dual = dual_complex_E_star(E)
    parts = []
    for i in range(sec.t, sec.br.r):
        diff = compare_series(pred.dual_en_cohomology.get(i, zero), dual.cohomology_series(i), f"H^{i}(E*)")
        parts.append(check("dual_en_cohomology", diff is None, diff or f"H^{i} agrees"))
    tail = dual.tail_series() - canonical.twisted(-sec.p)
    diff = compare_series(pred.dual_en_tail, tail, "H^r - H^(r+1) of E*")
    parts.append(check("dual_en_cohomology", diff is None, diff or "top cohomology agrees"))
    return [en, merge("dual_en_cohomology", parts)]


@with_log_context(module="sections", operation="analyze")
def analyze(sec: SectionInstance, full: bool = True) -> LocusReport:
    """
    Compute every invariant of the locus and check it against the predictions.

    Args:
        sec: Validated section
        full: Also run the complex, Tor and instance-level checks
    """
    started = time.perf_counter()
    timing: Dict[str, float] = {}
    ring = sec.ring
    pred = sec.predictions
    br = sec.br
    c = sec.codim
    claims: List[ClaimResult] = []

    res_I = sec.resolution
    series_I = ModulePresentation.cyclic(ring, sec.ideal).hilbert_series()
    depth_I = depth(res_I)
    claims.append(check("depth_dichotomy", depth_I == pred.depth, f"depth R/I = {depth_I}", pred.depth, depth_I))

    ext_table = {e: ext_series(res_I, e, ring) for e in range(c, br.n + 2)}
    parts = []
    for e in pred.ext_range:
        computed = ext_table[e]
        if e in pred.ext_table:
            diff = compare_series(pred.ext_table[e], computed, f"Ext^{e}(R/I)")
            parts.append(check("cohomology_table", diff is None, diff or f"Ext^{e} agrees"))
        else:
            parts.append(check("cohomology_table", computed.is_zero(), f"Ext^{e}(R/I) predicted zero"))
    claims.append(merge("cohomology_table", parts, "no intermediate positions"))
    intermediate = sorted(br.n + 1 - e for e in pred.ext_range if not ext_table[e].is_zero())
    timing["cohomology"] = time.perf_counter() - started

    hull, saturation = sec.hull, sec.saturation
    ideal_unmixed = equal(ring, hull, sec.ideal)
    hull_is_sat = equal(ring, hull, saturation)
    saturated = equal(ring, saturation, sec.ideal)
    claims.append(
        merge("unmixedness_parity", [
            check("unmixedness_parity", ideal_unmixed == pred.unmixed, f"I unmixed: {ideal_unmixed}"),
            check("unmixedness_parity", hull_is_sat == pred.hull_equals_saturation,
                  f"hull equals saturation: {hull_is_sat}"),
        ])
    )
    claims.append(check("saturation_defect", saturated == pred.saturated, f"I saturated: {saturated}"))

    series_J = ModulePresentation.cyclic(ring, hull).hilbert_series()
    j_over_i = series_I - series_J
    diff = compare_series(pred.j_over_i, j_over_i, "J/I")
    claims.append(check("j_over_i", diff is None, diff or "J/I agrees",
                        pred.j_over_i.to_dict(), j_over_i.to_dict()))
    timing["hull"] = time.perf_counter() - started

    res_J = sec.hull_resolution
    betti_J = sec.hull_betti
    hull_dimension = series_J.dimension()
    acm = depth(res_J) == hull_dimension
    cm_type = res_J.betti.total(res_J.length) if acm else None
    ag = acm and cm_type == 1
    claims.append(
        check("classification", acm == pred.acm and ag == pred.ag,
              f"ACM {acm}, AG {ag}", {"acm": pred.acm, "ag": pred.ag}, {"acm": acm, "ag": ag})
    )

    canonical_module = ext_module(res_I, c, ring)
    canonical_generators = canonical_module.minimal_generator_count()
    parts = [
        check("cm_type_bound", canonical_generators <= pred.canonical_generator_bound,
              f"mu(K_R/I) = {canonical_generators} <= {pred.canonical_generator_bound}")
    ]
    if pred.cm_type_bound is None or cm_type is None:
        parts.append(not_applicable("cm_type_bound", "X is not ACM"))
    elif pred.ag:
        parts.append(check("cm_type_bound", cm_type == 1, f"type {cm_type} == 1"))
    else:
        parts.append(check("cm_type_bound", cm_type <= pred.cm_type_bound, f"type {cm_type} <= {pred.cm_type_bound}"))
    claims.append(merge("cm_type_bound", parts))

    claims.append(verify_resolution(sec))
    claims.append(_shape_check(sec))
    claims.append(minimality_precondition(sec))
    timing["resolution"] = time.perf_counter() - started

    canonical = ext_table[c]
    canonical_depth = depth(minimal_free_resolution(canonical_module))
    claims.append(
        check("canonical_depth", canonical_depth >= pred.canonical_depth_bound,
              f"depth K = {canonical_depth} >= {pred.canonical_depth_bound}")
    )
    diff = compare_series(canonical, ext_series(res_J, c, ring), "K_S against K_X")
    claims.append(check("canonical_agreement", diff is None, diff or "canonical modules agree"))

    family = br.metadata.get("family")
    if family == "mk":
        claims.append(k_buchsbaum_check(sec, br.metadata["k"]))
    elif family == "cotangent":
        claims.append(k_buchsbaum_check(sec, 1))
    else:
        claims.append(not_applicable("k_buchsbaum", "instance is not of the m^k family"))

    if full:
        claims.extend(_en_checks(sec, canonical))
        claims.append(tor_splitting_check(ModulePresentation.cyclic(ring, sec.ideal)))
        claims.append(section_ideal_second_route(sec))
        claims.append(characterization_checks(br))
        claims.append(merge("symmetric_duality",
                            [canonical_symmetric_power_check(br, i) for i in range(1, br.r)]))
        claims.append(merge("exterior_power_ext",
                            [exterior_power_ext_check(br, i) for i in range(1, br.r)]))
    timing["total"] = time.perf_counter() - started

    report = LocusReport(
        section=sec,
        predictions=pred,
        codim=c,
        dimension=series_I.dimension(),
        degree=series_I.multiplicity(),
        depth=depth_I,
        hull_degree=series_J.multiplicity(),
        hull_dimension=hull_dimension,
        ideal_unmixed=ideal_unmixed,
        hull_equals_saturation=hull_is_sat,
        saturated=saturated,
        acm=acm,
        ag=ag,
        cm_type=cm_type,
        canonical_generators=canonical_generators,
        betti_I=res_I.betti,
        betti_J=betti_J,
        j_over_i=j_over_i,
        ext_table=ext_table,
        intermediate_positions=intermediate,
        claims=claims,
        timing=timing,
    )
    logging.info(
        f"Analyzed locus: codim {c}, degree {report.hull_degree}, depth {depth_I}, "
        f"ACM {acm}, AG {ag}, {len(report.failed)} failed claims"
    )
    return report
