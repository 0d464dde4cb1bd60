"""
Buchsbaum-Rim Modules
=====================

Construction and validation of Buchsbaum-Rim modules B_phi = ker(phi: F -> G)
for maps whose maximal minors have the expected codimension f - g + 1, the
cokernel M_phi, the exterior powers of B_phi*, and the instance families used
throughout (cotangent, m^k, generic, complete intersection).

B_phi is stored twice: as the syzygy map syz: B0 -> F (columns are the
generators in F-coordinates) and as the presentation coker(K -> B0).

Classes:
    BRInstance: A validated map phi with B_phi and M_phi.

Functions:
    validate_and_build: Check codim I(phi) and build the instance.
    generic_instance: Seeded random phi with validate-and-resample.
    cotangent_instance / mk_instance / complete_intersection_instance: Families.
    null_correlation_recipe: Complete intersection phi with a nowhere zero section.
    characterization_checks: Ext profile of B_phi.
    canonical_symmetric_power_check: Ext^{r+1}(S_i(M), R) against S_{r-i}(M)(-c1).
    exterior_power_ext_check: Ext profile of /\\^i B_phi*.

Example:
    >>> inst = cotangent_instance(3, twist=3)
    >>> inst.r, inst.codim
    (3, 4)
"""

# Standard library imports
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

# Third-party imports
import numpy as np

# Local imports
from src.claims import ClaimResult, check, compare_series, merge, not_applicable
from src.config import ENGINE_SETTINGS
from src.groebner import ModulePresentation, kernel
from src.hilbert import HilbertSeries
from src.ideals import codim as ideal_codim
from src.ideals import equal as ideals_equal
from src.ideals import maximal_ideal_power
from src.koszul import symmetric_power_presentation
from src.koszul import wedge_dual_presentation as _wedge_dual_presentation
from src.modules import GradedFreeModule, ModuleMap, minors, random_map
from src.resolution import Resolution, depth, ext_series, minimal_free_resolution
from src.ring import GradedRing
from src.utils.error_utils import CodimFailure, ParameterError, ResampleExhausted
from src.utils.logging_utils import LogContext, with_log_context


@dataclass
class BRInstance:
    """A map phi: F -> G with codim I(phi) = f - g + 1 and its modules."""

    ring: GradedRing
    phi: ModuleMap
    codim: int
    syzygy: ModuleMap
    label: str = ""
    metadata: Dict = field(default_factory=dict)

    @property
    def F(self) -> GradedFreeModule:
        return self.phi.source

    @property
    def G(self) -> GradedFreeModule:
        return self.phi.target

    @property
    def f(self) -> int:
        return self.F.rank

    @property
    def g(self) -> int:
        return self.G.rank

    @property
    def r(self) -> int:
        return self.f - self.g

    @property
    def n(self) -> int:
        return self.ring.krull_dim - 1

    @property
    def c1(self) -> int:
        return sum(self.F.twists) - sum(self.G.twists)

    @property
    def generators(self) -> GradedFreeModule:
        """B0: the free module mapping onto B_phi."""
        return self.syzygy.source

    @cached_property
    def B(self) -> ModulePresentation:
        """B_phi = coker(relations among the generators of ker phi)."""
        if not self.generators.rank:
            return ModulePresentation.free(self.ring, GradedFreeModule(()))
        return ModulePresentation(kernel(self.syzygy))

    @cached_property
    def M(self) -> ModulePresentation:
        """M_phi = coker phi."""
        return ModulePresentation(self.phi)

    @cached_property
    def minors(self):
        return minors(self.phi, self.g)

    def symmetric_power(self, i: int) -> ModulePresentation:
        return symmetric_power_presentation(self.phi, i)

    def __repr__(self):
        return f"BRInstance({self.label or 'phi'}: {self.F} -> {self.G}, r={self.r})"


def _check_shape(ring: GradedRing, phi: ModuleMap):
    n = ring.krull_dim - 1
    f, g = phi.source.rank, phi.target.rank
    if g < 1 or f <= g:
        raise ParameterError(f"need f > g >= 1, got f={f}, g={g}")
    if f - g > n:
        raise ParameterError(f"need r = f - g <= n, got r={f - g}, n={n}")


@with_log_context(module="buchsbaum_rim", operation="validate_and_build")
def validate_and_build(ring: GradedRing, phi: ModuleMap, label: str = "") -> BRInstance:
    """
    Validate phi and build B_phi, M_phi.

    Raises:
        ParameterError: If f <= g or r > n
        CodimFailure: If codim I(phi) != f - g + 1
    """
    _check_shape(ring, phi)
    phi = phi.over(ring)
    expected = phi.source.rank - phi.target.rank + 1
    actual = ideal_codim(ring, minors(phi, phi.target.rank))
    if actual != expected:
        raise CodimFailure(actual, expected, "I(phi)")
    syzygy = kernel(phi)
    inst = BRInstance(ring, phi, actual, syzygy, label)
    logging.debug(f"Built {inst} with {syzygy.source.rank} generators of B_phi in degrees {syzygy.source.degrees}")
    return inst


def resample(build, attempts: Optional[int] = None, what: str = "instance"):
    """
    Call build(attempt) until it stops raising CodimFailure.

    Raises:
        ResampleExhausted: After `attempts` failures
    """
    attempts = attempts or ENGINE_SETTINGS["resample_attempts"]
    last = None
    for attempt in range(attempts):
        try:
            return build(attempt)
        except CodimFailure as exc:
            last = exc
            logging.info(f"Resampling {what} after attempt {attempt + 1}: {exc}")
    raise ResampleExhausted(f"{what} not generic after {attempts} attempts: {last}")


def default_ring(n: int, characteristic: Optional[int] = None, quotient: Sequence = ()) -> GradedRing:
    variables = [f"x{i}" for i in range(n + 1)]
    return GradedRing(variables, characteristic or ENGINE_SETTINGS["characteristic"], quotient)


def generic_instance(
    ring: GradedRing,
    F: GradedFreeModule,
    G: GradedFreeModule,
    seed: int = 0,
    label: str = "generic",
) -> BRInstance:
    """Random phi of the forced degrees, resampled until I(phi) has the expected codimension."""
    rng = np.random.default_rng(seed)

    def build(attempt):
        with LogContext(seed=seed, attempt=attempt):
            phi = random_map(ring, F, G, rng)
            return validate_and_build(ring, phi, label)

    inst = resample(build, what=label)
    inst.metadata.update({"family": label, "seed": seed})
    return inst


def cotangent_instance(n: int, twist: int = 0, characteristic: Optional[int] = None) -> BRInstance:
    """phi = (x0, ..., xn): R(twist-1)^(n+1) -> R(twist); B_phi is the twisted cotangent module."""
    ring = default_ring(n, characteristic)
    F = GradedFreeModule((twist - 1,) * (n + 1))
    G = GradedFreeModule((twist,))
    phi = ModuleMap(ring, F, G, [ring.gens])
    inst = validate_and_build(ring, phi, f"cotangent-p{n}")
    inst.metadata.update({"family": "cotangent", "n": n, "twist": twist})
    return inst


def mk_instance(n: int, k: int, seed: int = 0, twist: int = 0, characteristic: Optional[int] = None) -> BRInstance:
    """Generic linear phi: R(twist-1)^(n+k) -> R(twist)^k, so that I(phi) = m^k."""
    if k < 1:
        raise ParameterError("k must be positive")
    ring = default_ring(n, characteristic)
    F = GradedFreeModule((twist - 1,) * (n + k))
    G = GradedFreeModule((twist,) * k)
    inst = generic_instance(ring, F, G, seed, label=f"m{k}-p{n}")
    inst.metadata.update({"family": "mk", "n": n, "k": k, "twist": twist})
    return inst


def is_power_of_maximal_ideal(inst: BRInstance, k: int) -> bool:
    return ideals_equal(inst.ring, inst.minors, maximal_ideal_power(inst.ring, k))


def complete_intersection_instance(
    n: int, degrees: Sequence[int], seed: int = 0, characteristic: Optional[int] = None
) -> BRInstance:
    """phi = (f_0, ..., f_n) generic forms of the given degrees, F = sum R(-d_i) -> R."""
    if len(degrees) != n + 1 or min(degrees) < 1:
        raise ParameterError(f"need n+1 = {n + 1} positive degrees, got {list(degrees)}")
    ring = default_ring(n, characteristic)
    F = GradedFreeModule(tuple(-d for d in degrees))
    inst = generic_instance(ring, F, GradedFreeModule((0,)), seed, label=f"ci-p{n}")
    inst.metadata.update({"family": "complete_intersection", "n": n, "degrees": list(degrees)})
    return inst


def battery_instance(n: int, r: int, seed: int, twist: int) -> BRInstance:
    """The battery family: r+1 generic linear forms, phi: R(twist-1)^(r+1) -> R(twist)."""
    ring = default_ring(n)
    F = GradedFreeModule((twist - 1,) * (r + 1))
    G = GradedFreeModule((twist,))
    inst = generic_instance(ring, F, G, seed, label=f"battery-n{n}-r{r}")
    inst.metadata.update({"family": "battery", "n": n, "r": r, "twist": twist})
    return inst


@with_log_context(module="buchsbaum_rim", operation="null_correlation_recipe")
def null_correlation_recipe(
    n: int, degrees: Sequence[int], seed: int = 0, characteristic: Optional[int] = None
) -> Tuple[BRInstance, ModuleMap]:
    """
    Complete intersection phi with the paired Koszul section
    s = sum_k (f_{2k+1} e_{2k} - f_{2k} e_{2k+1}): R(-c) -> F.

    Raises:
        ParameterError: If n is even or the degrees do not pair to a constant c
        ConstructionError: If the coordinate ideal of s has codim <= n
    """
    if n % 2 == 0:
        raise ParameterError("the null correlation construction needs n odd")
    if len(degrees) != n + 1:
        raise ParameterError(f"need n+1 = {n + 1} degrees")
    sums = {degrees[2 * k] + degrees[2 * k + 1] for k in range((n + 1) // 2)}
    if len(sums) != 1:
        raise ParameterError(f"degrees {list(degrees)} do not pair to a constant sum")
    c = sums.pop()
    inst = complete_intersection_instance(n, degrees, seed, characteristic)
    ring = inst.ring
    forms = list(inst.phi.entries[0])
    column = [ring.zero()] * (n + 1)
    for k in range((n + 1) // 2):
        column[2 * k] = forms[2 * k + 1]
        column[2 * k + 1] = -forms[2 * k]
    section = ModuleMap(ring, GradedFreeModule((-c,)), inst.F, [[e] for e in column])
    if not (inst.phi @ section).is_zero():
        raise ParameterError("paired section is not a syzygy")
    coordinate_codim = ideal_codim(ring, column)
    if coordinate_codim <= n:
        raise CodimFailure(coordinate_codim, n + 1, "coordinates of the section")
    inst.metadata.update({"family": "null_correlation", "c": c})
    logging.info(f"Null correlation datum on P^{n} with c = {c}")
    return inst, section


def wedge_dual_presentation(inst: BRInstance, i: int) -> ModulePresentation:
    """/\\^i B_phi* = coker(/\\^{i-1} F* (x) G* -> /\\^i F*), 1 <= i <= r."""
    if not 1 <= i <= inst.r:
        raise ParameterError(f"need 1 <= i <= r = {inst.r}, got {i}")
    return _wedge_dual_presentation(inst.phi, i)


def _ext_profile(resolution: Resolution, ring: GradedRing, top: int) -> Dict[int, HilbertSeries]:
    return {j: ext_series(resolution, j, ring) for j in range(0, top + 1)}


@with_log_context(module="buchsbaum_rim", operation="characterization_checks")
def characterization_checks(inst: BRInstance) -> ClaimResult:
    """
    B_phi has depth n - r + 2 and a single non-vanishing Ext^j(B_phi, R),
    j >= 1, at j = r - 1 with the Hilbert function of S_{r-1}(M)(-c1).
    """
    ring = inst.ring
    if inst.r == 1:
        free = inst.B.pruned()
        passed = not free.relations.source.rank and free.generators.rank == 1
        return check("characterization", passed, "r = 1: B_phi is free of rank one")
    resolution = minimal_free_resolution(inst.B)
    results: List[ClaimResult] = []
    computed_depth = depth(resolution)
    results.append(
        check("characterization", computed_depth == inst.n - inst.r + 2,
              f"depth B_phi = {computed_depth}", inst.n - inst.r + 2, computed_depth)
    )
    profile = _ext_profile(resolution, ring, inst.n + 1)
    for j, series in profile.items():
        if j == 0:
            continue
        if j == inst.r - 1:
            expected = inst.symmetric_power(inst.r - 1).hilbert_series().twisted(-inst.c1)
            diff = compare_series(expected, series, f"Ext^{j}(B_phi)")
            results.append(check("characterization", diff is None, diff or f"Ext^{j} matches"))
        elif not series.is_zero():
            results.append(check("characterization", False, f"Ext^{j}(B_phi) is nonzero"))
    return merge("characterization", results, "single non-vanishing Ext module")


@with_log_context(module="buchsbaum_rim", operation="canonical_symmetric_power_check")
def canonical_symmetric_power_check(inst: BRInstance, i: int) -> ClaimResult:
    """Ext^{r+1}(S_i(M), R) against S_{r-i}(M)(-c1); all other Ext^j vanish."""
    if not 1 <= i < inst.r:
        return not_applicable("symmetric_duality", f"i = {i} outside 1..r-1")
    ring = inst.ring
    module = inst.symmetric_power(i)
    resolution = minimal_free_resolution(module)
    results = []
    for j, series in _ext_profile(resolution, ring, inst.n + 1).items():
        if j == inst.r + 1:
            expected = inst.symmetric_power(inst.r - i).hilbert_series().twisted(-inst.c1)
            diff = compare_series(expected, series, f"Ext^{j}(S_{i}(M))")
            results.append(check("symmetric_duality", diff is None, diff or ""))
        elif not series.is_zero():
            results.append(check("symmetric_duality", False, f"Ext^{j}(S_{i}(M)) is nonzero"))
    return merge("symmetric_duality", results, f"S_{i}(M) is perfect of grade r + 1")


@with_log_context(module="buchsbaum_rim", operation="exterior_power_ext_check")
def exterior_power_ext_check(inst: BRInstance, i: int) -> ClaimResult:
    """Ext^j(/\\^i B*, R) = 0 for 1 <= j <= n, j != i, and Ext^i has the series of S_i(M)."""
    if not 1 <= i < inst.r:
        return not_applicable("exterior_power_ext", f"i = {i} outside 1..r-1")
    ring = inst.ring
    resolution = minimal_free_resolution(wedge_dual_presentation(inst, i))
    results = []
    for j in range(1, inst.n + 1):
        series = ext_series(resolution, j, ring)
        if j == i:
            diff = compare_series(inst.symmetric_power(i).hilbert_series(), series, f"Ext^{i}")
            results.append(check("exterior_power_ext", diff is None, diff or ""))
        elif not series.is_zero():
            results.append(check("exterior_power_ext", False, f"Ext^{j} of the exterior power {i} is nonzero"))
    return merge("exterior_power_ext", results, f"exterior power {i} of B*")
