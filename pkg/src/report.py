"""
Reports
=======

ReportJSON assembly, schema validation and rendering. A report carries the
instance echo, the prediction block, the computed block, one diff entry per
claim and the timing; everything except `timing` is deterministic for a
fixed instance and seed.

Functions:
    locus_report: ReportJSON of an analyzed section.
    instance_report: ReportJSON of a BR instance without a section.
    validate_report: jsonschema validation against the shipped schema.
    write_report: Canonical JSON on disk.
    claims_frame: Claims of a report as a pandas DataFrame.
"""

# Standard library imports
import json
import logging
from collections import Counter
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Union

# Third-party imports
import pandas as pd
from jsonschema import Draft202012Validator

# Local imports
from src.buchsbaum_rim import (
    BRInstance,
    canonical_symmetric_power_check,
    characterization_checks,
    exterior_power_ext_check,
)
from src.claims import ClaimResult, merge
from src.config import FAIL, NOT_APPLICABLE, PASS, REPORT_VERSION, SCHEMA_FILE
from src.resolution import BettiTable
from src.sections import LocusReport, SectionInstance
from src.utils.error_utils import ExceptionContext, ReportError, SchemaValidationError, handle_exception
from src.utils.logging_utils import with_log_context


def betti_triples(betti: BettiTable) -> List[List[int]]:
    """Sorted (i, d, beta_{i,d}) triples."""
    return [[i, d, v] for (i, d), v in sorted(betti.entries.items())]


def _instance_block(br: BRInstance, section: Optional[SectionInstance] = None, seed: Optional[int] = None) -> Dict:
    block = {
        "label": br.label,
        "ring": str(br.ring),
        "n": br.n,
        "f": br.f,
        "g": br.g,
        "r": br.r,
        "t": None,
        "F": list(br.F.twists),
        "G": list(br.G.twists),
        "P": None,
        "phi": br.phi.to_strings(),
        "psi": None,
        "seed": seed,
        "metadata": {k: v for k, v in sorted(br.metadata.items()) if isinstance(v, (int, str, list))},
    }
    if section is not None:
        block.update({"t": section.t, "P": list(section.P.twists), "psi": section.psi.to_strings()})
    return block


def _summary(claims: List[ClaimResult]) -> Dict[str, int]:
    counts = Counter(c.status for c in claims)
    return {status: counts.get(status, 0) for status in (PASS, FAIL, NOT_APPLICABLE)}


def locus_report(report: LocusReport, seed: Optional[int] = None) -> Dict:
    sec = report.section
    computed = {
        "codim": report.codim,
        "dimension": report.dimension,
        "degree": report.degree,
        "depth": report.depth,
        "hull_degree": report.hull_degree,
        "hull_dimension": report.hull_dimension,
        "ideal_unmixed": report.ideal_unmixed,
        "hull_equals_saturation": report.hull_equals_saturation,
        "saturated": report.saturated,
        "acm": report.acm,
        "ag": report.ag,
        "cm_type": report.cm_type,
        "canonical_generators": report.canonical_generators,
        "ideal_I": [str(f) for f in sec.ideal],
        "ideal_J": [str(f) for f in sec.hull],
        "betti_I": betti_triples(report.betti_I),
        "betti_J": betti_triples(report.betti_J),
        "j_over_i": report.j_over_i.to_dict(),
        "ext_table": {str(e): s.to_dict() for e, s in sorted(report.ext_table.items())},
        "intermediate_positions": report.intermediate_positions,
    }
    prediction = report.predictions.to_dict()
    prediction["betti"] = betti_triples(report.predictions.betti)
    return {
        "version": REPORT_VERSION,
        "instance": _instance_block(sec.br, sec, seed),
        "prediction": prediction,
        "computed": computed,
        "diff": [c.to_dict() for c in report.claims],
        "summary": _summary(report.claims),
        "timing": {k: round(v, 4) for k, v in report.timing.items()},
    }


@with_log_context(module="report", operation="instance_report")
def instance_report(br: BRInstance, seed: Optional[int] = None) -> Dict:
    """Module-level checks of B_phi when the instance has no section."""
    claims = [
        characterization_checks(br),
        merge("symmetric_duality", [canonical_symmetric_power_check(br, i) for i in range(1, br.r)]),
        merge("exterior_power_ext", [exterior_power_ext_check(br, i) for i in range(1, br.r)]),
    ]
    computed = {
        "codim": br.codim,
        "minors": [str(f) for f in br.minors],
        "generators_of_B": list(br.generators.twists),
    }
    return {
        "version": REPORT_VERSION,
        "instance": _instance_block(br, None, seed),
        "prediction": None,
        "computed": computed,
        "diff": [c.to_dict() for c in claims],
        "summary": _summary(claims),
        "timing": {},
    }


@lru_cache(maxsize=1)
def _validator() -> Draft202012Validator:
    with ExceptionContext("Loading the report schema", ReportError):
        schema = json.loads(Path(SCHEMA_FILE).read_text(encoding="utf-8"))
    return Draft202012Validator(schema)


def validate_report(data: Dict) -> Dict:
    """
    Raises:
        SchemaValidationError: Listing the first violations
    """
    errors = sorted(_validator().iter_errors(data), key=lambda e: list(e.path))
    if errors:
        messages = "; ".join(f"{'/'.join(map(str, e.path)) or '<root>'}: {e.message}" for e in errors[:5])
        raise SchemaValidationError(f"report violates the schema: {messages}")
    return data


def dumps(data: Dict, compact: bool = False) -> str:
    if compact:
        return json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


@handle_exception(custom_mapping={OSError: ReportError, PermissionError: ReportError, TypeError: ReportError})
def write_report(data: Dict, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(validate_report(data)), encoding="utf-8")
    logging.info(f"Wrote report {path}")
    return path


def claims_frame(data: Dict) -> pd.DataFrame:
    """One row per claim: id, status, anchor and detail."""
    rows = [
        {"claim": c["claim"], "status": c["status"], "anchor": c["anchor"], "detail": c["detail"]}
        for c in data["diff"]
    ]
    return pd.DataFrame(rows, columns=["claim", "status", "anchor", "detail"])


def failed(data: Dict) -> bool:
    return data["summary"][FAIL] > 0
