"""
Claim Results
=============

Verdict records shared by every verification routine. A claim compares a
predicted value with a computed one and ends as PASS, FAIL or
NOT-APPLICABLE; each record carries the traceability anchor configured in
CLAIMS.

Classes:
    ClaimResult: One verdict with predicted/computed values.

Functions:
    check: Build a PASS/FAIL result from a boolean.
    not_applicable: Build a NOT-APPLICABLE result.
    compare_series: Compare two Hilbert series and describe the first difference.
"""

# Standard library imports
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

# Local imports
from src.config import CLAIMS, FAIL, NOT_APPLICABLE, PASS
from src.hilbert import HilbertSeries


@dataclass
class ClaimResult:
    claim: str
    status: str
    detail: str = ""
    predicted: Any = None
    computed: Any = None
    parts: List["ClaimResult"] = field(default_factory=list)

    @property
    def anchor(self) -> str:
        return CLAIMS[self.claim]["anchor"]

    @property
    def quote(self) -> str:
        return CLAIMS[self.claim]["quote"]

    @property
    def failed(self) -> bool:
        return self.status == FAIL

    def to_dict(self) -> Dict:
        data = {
            "claim": self.claim,
            "anchor": self.anchor,
            "quote": self.quote,
            "status": self.status,
            "detail": self.detail,
        }
        if self.predicted is not None:
            data["predicted"] = self.predicted
        if self.computed is not None:
            data["computed"] = self.computed
        return data


def check(claim: str, passed: bool, detail: str = "", predicted=None, computed=None) -> ClaimResult:
    if claim not in CLAIMS:
        raise KeyError(f"unknown claim {claim}")
    status = PASS if passed else FAIL
    if not passed:
        logging.warning(f"Claim {claim} failed: {detail}")
    return ClaimResult(claim, status, detail, predicted, computed)


def not_applicable(claim: str, reason: str) -> ClaimResult:
    if claim not in CLAIMS:
        raise KeyError(f"unknown claim {claim}")
    return ClaimResult(claim, NOT_APPLICABLE, reason)


def merge(claim: str, results: List[ClaimResult], detail: str = "") -> ClaimResult:
    """One verdict for a family of sub-checks: FAIL if any part fails."""
    decided = [r for r in results if r.status != NOT_APPLICABLE]
    if not decided:
        merged = not_applicable(claim, detail or "no applicable case")
    else:
        failed = [r.detail for r in decided if r.failed]
        merged = check(claim, not failed, "; ".join(failed) or detail)
    merged.parts = list(results)
    return merged


def series_window(series: HilbertSeries, width: int = 8) -> Dict[str, int]:
    """Hilbert function values from the initial degree on."""
    if series.is_zero():
        return {}
    low = series.initial_degree()
    return {str(d): series.value(d) for d in range(low, low + width)}


def compare_series(predicted: HilbertSeries, computed: HilbertSeries, label: str = "") -> Optional[str]:
    """None when the series agree, else the first degree where they differ."""
    if predicted == computed:
        return None
    difference = predicted - computed
    low = difference.initial_degree()
    return (
        f"{label} Hilbert functions differ from degree {low}: "
        f"predicted {predicted.value(low)}, computed {computed.value(low)}"
    ).strip()
