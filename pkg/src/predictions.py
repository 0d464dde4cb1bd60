"""
Closed-Form Predictions
=======================

Everything the structure theory of Buchsbaum-Rim modules predicts about the
degeneracy locus of a multiple section, computed from twist data alone:
F, G (phi: F -> G), P (psi: P -> B_phi) and the ring. Nothing here touches
a Groebner basis; the verification layer compares these values with what the
engine computes.

Local cohomology is expressed through graded duality as Ext modules:
H^j_m(R/I) corresponds to Ext^{n+1-j}(R/I, R), and the r(R) shifts cancel,
so Ext^{2i+1-t}(R/I, R) is predicted as S_i(M) (x) S_{i-t}(P)* (x) /\\^t P*.

Classes:
    PredictionReport: Every predicted invariant of one parameter set.

Functions:
    predict_all: Build the PredictionReport.
    resolution_terms: A_k + C_k, the predicted resolution of I_X (x) /\\^t P*.
    gorenstein_shape / even_rank_shape: The closed one-section shapes.
    cm_type_bound / canonical_generator_bound: Type and mu(K) bounds.

Example:
    >>> report = predict_all(ring, F, G, P)
    >>> report.depth, report.acm
    (1, True)
"""

# Standard library imports
import logging
from dataclasses import dataclass, field
from math import comb
from typing import Dict, List, Optional

# Local imports
from src.hilbert import HilbertSeries
from src.koszul import predicted_symmetric_power_series
from src.modules import GradedFreeModule, direct_sum
from src.resolution import BettiTable
from src.ring import GradedRing
from src.utils.error_utils import ParameterError
from src.utils.logging_utils import with_log_context


def first_chern_twist(F: GradedFreeModule, G: GradedFreeModule) -> int:
    """c1 with R(-c1) = /\\^f F* (x) /\\^g G."""
    return sum(F.twists) - sum(G.twists)


def section_twist(P: GradedFreeModule) -> int:
    """p with R(p) = /\\^t P*."""
    return -sum(P.twists)


def _tensor(*modules: GradedFreeModule) -> GradedFreeModule:
    result = GradedFreeModule((0,))
    for module in modules:
        result = result.tensor(module)
    return result


def symmetric_series(ring: GradedRing, F: GradedFreeModule, G: GradedFreeModule, i: int) -> HilbertSeries:
    """HS(S_i(M)) for M = coker phi; zero for i < 0."""
    if i < 0:
        return HilbertSeries.zero(ring.nvars)
    return predicted_symmetric_power_series(ring, F, G, i)


# Resolution shapes
def direct_block(F: GradedFreeModule, G: GradedFreeModule, P: GradedFreeModule, k: int) -> GradedFreeModule:
    """
    A_k: sum over i + 2j = k + t - 1 with t <= i + j <= (r + t - 1) / 2 of
    /\\^i F* (x) S_j(G)* (x) S_{i+j-t}(P).
    """
    r, t = F.rank - G.rank, P.rank
    parts = []
    for j in range(0, (k + t - 1) // 2 + 1):
        i = k + t - 1 - 2 * j
        if i < 0 or i + j < t or 2 * (i + j) > r + t - 1:
            continue
        parts.append(_tensor(F.dual().exterior_power(i), G.symmetric_power(j).dual(), P.symmetric_power(i + j - t)))
    return direct_sum(*parts)


def dual_block(F: GradedFreeModule, G: GradedFreeModule, P: GradedFreeModule, k: int) -> GradedFreeModule:
    """
    C_k: sum over i + 2j = r + 1 - t - k with i + j <= (r - t) / 2 of
    /\\^i F (x) S_j(G) (x) S_{r-t-i-j}(P) (x) R(-c1).
    """
    r, t = F.rank - G.rank, P.rank
    total = r + 1 - t - k
    if total < 0:
        return GradedFreeModule(())
    c1 = first_chern_twist(F, G)
    parts = []
    for j in range(0, total // 2 + 1):
        i = total - 2 * j
        if 2 * (i + j) > r - t:
            continue
        parts.append(
            _tensor(
                F.exterior_power(i), G.symmetric_power(j), P.symmetric_power(r - t - i - j),
                GradedFreeModule((-c1,)),
            )
        )
    return direct_sum(*parts)


def resolution_terms(F: GradedFreeModule, G: GradedFreeModule, P: GradedFreeModule) -> Dict[int, GradedFreeModule]:
    """Position k -> A_k + C_k for k = 1..r, resolving I_X (x) /\\^t P*."""
    r = F.rank - G.rank
    terms = {k: direct_block(F, G, P, k) + dual_block(F, G, P, k) for k in range(1, r + 1)}
    return {k: m for k, m in terms.items() if m.rank}


def quotient_betti(terms: Dict[int, GradedFreeModule], p: int) -> BettiTable:
    """Betti table of R/J from the terms resolving J(p)."""
    shifted = {k: m.twisted(-p) for k, m in terms.items()}
    shifted[0] = GradedFreeModule((0,))
    return BettiTable.from_terms(shifted)


def _one_section_summand(F: GradedFreeModule, G: GradedFreeModule, i: int, bound: int) -> GradedFreeModule:
    """sum_{j=0}^{bound} /\\^{2j+e} F* (x) S_{(i-e-2j)/2}(G)*, e = i mod 2."""
    e = i % 2
    parts = [
        F.dual().exterior_power(2 * j + e).tensor(G.symmetric_power((i - e - 2 * j) // 2).dual())
        for j in range(bound + 1)
    ]
    return direct_sum(*parts)


def gorenstein_shape(F: GradedFreeModule, G: GradedFreeModule) -> Dict[int, GradedFreeModule]:
    """Self-dual resolution of I_X for r odd and one section of degree zero."""
    r = F.rank - G.rank
    if r % 2 == 0:
        raise ParameterError("the self-dual shape needs odd r")
    c1 = first_chern_twist(F, G)

    def A(i):
        if i % 2:
            return _one_section_summand(F, G, i, min((i - 1) // 2, (r - i - 2) // 2))
        return _one_section_summand(F, G, i, min(i // 2, (r - i - 1) // 2))

    terms = {k: A(k) + A(r - k).dual().twisted(-c1) for k in range(1, r)}
    terms[r] = GradedFreeModule((-c1,))
    return {k: m for k, m in terms.items() if m.rank}


def even_rank_shape(F: GradedFreeModule, G: GradedFreeModule) -> Dict[int, GradedFreeModule]:
    """Resolution of I_S for r even and one section of degree zero."""
    r = F.rank - G.rank
    if r % 2:
        raise ParameterError("the even-rank shape needs even r")
    c1 = first_chern_twist(F, G)

    def A(i):
        if i % 2:
            return _one_section_summand(F, G, i, min((i - 1) // 2, (r - i - 1) // 2))
        return _one_section_summand(F, G, i, min(i // 2, (r - i) // 2))

    def B(i):
        if i % 2:
            return _one_section_summand(F, G, i, min((i - 1) // 2, (r - i - 3) // 2))
        return _one_section_summand(F, G, i, min(i // 2, (r - i - 2) // 2))

    terms = {1: A(1)}
    for k in range(2, r):
        terms[k] = B(r - k).dual().twisted(-c1) + A(k)
    terms[r] = GradedFreeModule((-c1,)) + A(r)
    return {k: m for k, m in terms.items() if m.rank}


# Bounds
def cm_type_bound(r: int, t: int, g: int) -> Optional[int]:
    """
    Bound on the Cohen-Macaulay type of X, or None when X is not ACM.

    r + t odd, t = 1: 1 + C(r/2 + g - 1, g - 1)
    r + t even, t = 1: exactly 1
    r + t even, t = 2: r - 1 + C(r/2 + g - 1, g - 1) * (r/2 - 1)
    """
    if (r + t) % 2 and t == 1:
        return 1 + comb(r // 2 + g - 1, g - 1)
    if (r + t) % 2 == 0 and t == 1:
        return 1
    if (r + t) % 2 == 0 and t == 2:
        return r - 1 + comb(r // 2 + g - 1, g - 1) * (r // 2 - 1)
    return None


def canonical_generator_bound(r: int, t: int, g: int) -> int:
    """Bound on the number of minimal generators of K_{R/I}."""
    bound = comb(r - 1, t - 1)
    if r % 2 == 0 and 1 <= t <= r // 2:
        bound += comb(r // 2 + g - 1, g - 1) * comb(r // 2 - 1, t - 1)
    return bound


@dataclass
class PredictionReport:
    """
    Predicted invariants of R/I(psi) and R/J(psi) for one parameter set.

    Ext tables map an Ext index (or a complex position) to the predicted
    Hilbert series; positions absent from a table are predicted zero.
    """

    n: int
    f: int
    g: int
    r: int
    t: int
    c1: int
    p: int
    codim: int
    dimension: int
    depth: int
    ext_table: Dict[int, HilbertSeries]
    ext_range: List[int]
    intermediate_positions: List[int]
    unmixed: bool
    hull_equals_saturation: bool
    saturated: bool
    j_over_i: HilbertSeries
    acm: bool
    ag: bool
    cm_type_bound: Optional[int]
    canonical_generator_bound: int
    canonical_depth_bound: int
    resolution_terms: Dict[int, GradedFreeModule]
    betti: BettiTable
    en_homology: Dict[int, HilbertSeries]
    dual_en_cohomology: Dict[int, HilbertSeries]
    dual_en_tail: HilbertSeries
    shape_name: Optional[str] = None
    shape_terms: Dict[int, GradedFreeModule] = field(default_factory=dict)

    @property
    def odd(self) -> bool:
        return (self.r + self.t) % 2 == 1

    def is_consistent(self) -> bool:
        """Internal consistency of the predicted values."""
        if self.ag and self.cm_type_bound != 1:
            return False
        if self.acm and self.intermediate_positions and self.odd:
            return False
        if self.shape_name == "gorenstein":
            top = self.betti.length
            mirrored = BettiTable(
                {(top - i, self.c1 - d): v for (i, d), v in self.betti.entries.items()}
            )
            # beta_{i,d} = beta_{r-i, c1-d}
            if mirrored != self.betti:
                return False
        return True

    def to_dict(self) -> Dict:
        return {
            "n": self.n, "f": self.f, "g": self.g, "r": self.r, "t": self.t,
            "c1": self.c1, "p": self.p,
            "codim": self.codim,
            "dimension": self.dimension,
            "depth": self.depth,
            "ext_table": {str(e): s.to_dict() for e, s in sorted(self.ext_table.items())},
            "intermediate_positions": list(self.intermediate_positions),
            "unmixed": self.unmixed,
            "hull_equals_saturation": self.hull_equals_saturation,
            "saturated": self.saturated,
            "j_over_i": self.j_over_i.to_dict(),
            "acm": self.acm,
            "ag": self.ag,
            "cm_type_bound": self.cm_type_bound,
            "canonical_generator_bound": self.canonical_generator_bound,
            "canonical_depth_bound": self.canonical_depth_bound,
            "betti": self.betti.to_dict(),
            "en_homology": {str(i): s.to_dict() for i, s in sorted(self.en_homology.items())},
            "dual_en_cohomology": {str(i): s.to_dict() for i, s in sorted(self.dual_en_cohomology.items())},
            "shape": self.shape_name,
        }


def _check_parameters(ring: GradedRing, F, G, P):
    n = ring.krull_dim - 1
    f, g, t = F.rank, G.rank, P.rank
    r = f - g
    if g < 1 or f <= g:
        raise ParameterError(f"need f > g >= 1, got f={f}, g={g}")
    if not 1 <= t < r:
        raise ParameterError(f"need 1 <= t < r, got t={t}, r={r}")
    if r > n:
        raise ParameterError(f"need r <= n, got r={r}, n={n}")
    return n, f, g, r, t


def ext_predictions(ring: GradedRing, F, G, P) -> Dict[int, HilbertSeries]:
    """Ext^{2i+1-t}(R/I, R) for max{t, (r+1)/2} <= i <= floor((r+t)/2)."""
    r, t = F.rank - G.rank, P.rank
    p = section_twist(P)
    table = {}
    for i in range(t, (r + t) // 2 + 1):
        if 2 * i < r + 1:
            continue
        twists = P.symmetric_power(i - t).dual().twisted(p).twists
        table[2 * i + 1 - t] = symmetric_series(ring, F, G, i).times_twists(twists)
    return table


def j_over_i_series(ring: GradedRing, F, G, P) -> HilbertSeries:
    """HS(J/I): S_{(r-t)/2}(M) (x) S_{(r-t)/2}(P) (x) R(-c1) (x) /\\^t P for r + t even."""
    r, t = F.rank - G.rank, P.rank
    if (r + t) % 2:
        return HilbertSeries.zero(ring.nvars)
    half = (r - t) // 2
    c1, p = first_chern_twist(F, G), section_twist(P)
    twists = P.symmetric_power(half).twisted(-c1 - p).twists
    return symmetric_series(ring, F, G, half).times_twists(twists)


def en_homology_predictions(ring: GradedRing, F, G, P) -> Dict[int, HilbertSeries]:
    """H_i(E_.) = S_j(M) (x) S_{r-t-j}(P) (x) R(-c1) for i = r - 1 - 2j, t <= i <= r - 3."""
    r, t = F.rank - G.rank, P.rank
    c1 = first_chern_twist(F, G)
    table = {}
    for i in range(t, r - 2):
        if (r - 1 - i) % 2:
            continue
        j = (r - 1 - i) // 2
        twists = P.symmetric_power(r - t - j).twisted(-c1).twists
        table[i] = symmetric_series(ring, F, G, j).times_twists(twists)
    return table


def dual_en_predictions(ring: GradedRing, F, G, P) -> Dict[int, HilbertSeries]:
    """H^i(E_.*) = S_j(M) (x) S_{j-t}(P)* for i = 2j + 1, 2t + 1 <= i <= r + 1."""
    r, t = F.rank - G.rank, P.rank
    table = {}
    for j in range(t, r // 2 + 1):
        i = 2 * j + 1
        if i > r + 1:
            break
        table[i] = symmetric_series(ring, F, G, j).times_twists(P.symmetric_power(j - t).dual().twists)
    return table


@with_log_context(module="predictions", operation="predict_all")
def predict_all(ring: GradedRing, F: GradedFreeModule, G: GradedFreeModule, P: GradedFreeModule) -> PredictionReport:
    """
    Every closed-form prediction for a section psi: P -> B_phi, phi: F -> G.

    Raises:
        ParameterError: If f <= g, t is outside 1..r-1 or r > n
    """
    n, f, g, r, t = _check_parameters(ring, F, G, P)
    odd = (r + t) % 2 == 1
    c1, p = first_chern_twist(F, G), section_twist(P)
    codim = r - t + 1
    dimension = n - r + t
    depth = n - r + 1 if odd else n - r

    ext_table = ext_predictions(ring, F, G, P)
    intermediate = sorted(n + 1 - e for e in ext_table)

    acm = t == 1 if odd else t <= 2
    ag = (not odd) and t == 1
    terms = resolution_terms(F, G, P)

    shape_name, shape_terms = None, {}
    if t == 1 and not any(P.twists):
        if r % 2:
            shape_name, shape_terms = "gorenstein", gorenstein_shape(F, G)
        else:
            shape_name, shape_terms = "even_rank", even_rank_shape(F, G)

    dual_table = dual_en_predictions(ring, F, G, P)
    tail = dual_table.get(r, HilbertSeries.zero(ring.nvars)) - dual_table.get(r + 1, HilbertSeries.zero(ring.nvars))
    report = PredictionReport(
        n=n, f=f, g=g, r=r, t=t, c1=c1, p=p,
        codim=codim,
        dimension=dimension,
        depth=depth,
        ext_table=ext_table,
        ext_range=list(range(codim + 1, n + 2)),
        intermediate_positions=intermediate,
        unmixed=odd,
        hull_equals_saturation=odd or r == n,
        saturated=not (r == n and not odd),
        j_over_i=j_over_i_series(ring, F, G, P),
        acm=acm,
        ag=ag,
        cm_type_bound=cm_type_bound(r, t, g),
        canonical_generator_bound=canonical_generator_bound(r, t, g),
        canonical_depth_bound=min(n - r + t, n - r + 2),
        resolution_terms=terms,
        betti=quotient_betti(terms, p),
        en_homology=en_homology_predictions(ring, F, G, P),
        dual_en_cohomology=dual_table,
        dual_en_tail=tail,
        shape_name=shape_name,
        shape_terms=shape_terms,
    )
    logging.debug(f"Predicted depth {depth}, ACM {acm}, AG {ag}, Betti totals {[report.betti.total(i) for i in range(r + 1)]}")
    return report
