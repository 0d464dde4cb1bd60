"""
Instance Files
==============

Plain text instance format. Blocks open with a bracketed header; `#` starts
a comment; blank lines are ignored.

    [ring]
    p = 32003
    vars = x0,x1,x2,x3
    quotient = x0^2+x1^2+x2^2+x3^2      (optional, ';'-separated forms)
    [F]
    twists = 2,2,2,2
    [G]
    twists = 3
    [phi]
    x0, x1, x2, x3                      (one row per line, comma-separated)
    [P]                                 (optional)
    twists = 0
    [psi]                               (optional: rows of the lift, or seed)
    seed = 7
    [meta]                              (optional key = value pairs)
    family = cotangent

Classes:
    InstanceSpec: Parsed, not yet validated instance.

Functions:
    parse_instance: Text to InstanceSpec with line-numbered errors.
    format_instance: Canonical text of an InstanceSpec.
    load_instance / write_instance: File round trips.
    build_instance: Validated BRInstance and optional SectionInstance.
    spec_from_section: InstanceSpec of a constructed instance.
"""

# Standard library imports
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

# Local imports
from src.buchsbaum_rim import BRInstance, validate_and_build
from src.modules import GradedFreeModule, ModuleMap
from src.ring import GradedRing
from src.sections import SectionInstance, build_section, section_from_lift
from src.utils.error_utils import (
    AppError,
    ConstructionError,
    InstanceParseError,
    InstanceValidationError,
    ParameterError,
    handle_exception,
)
from src.utils.logging_utils import LogContext, with_log_context

BLOCKS = ("ring", "F", "G", "phi", "P", "psi", "meta")
REQUIRED = ("ring", "F", "G", "phi")


@dataclass
class InstanceSpec:
    ring: GradedRing
    F: GradedFreeModule
    G: GradedFreeModule
    phi: ModuleMap
    P: Optional[GradedFreeModule] = None
    psi: Optional[ModuleMap] = None
    psi_seed: Optional[int] = None
    metadata: Dict[str, str] = field(default_factory=dict)

    @property
    def has_section(self) -> bool:
        return self.P is not None


def _split_blocks(text: str) -> Dict[str, List[Tuple[int, str]]]:
    blocks: Dict[str, List[Tuple[int, str]]] = {}
    current = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise InstanceParseError(f"unterminated block header '{line}'", number)
            current = line[1:-1].strip()
            if current not in BLOCKS:
                raise InstanceParseError(f"unknown block [{current}]", number)
            if current in blocks:
                raise InstanceParseError(f"duplicate block [{current}]", number)
            blocks[current] = [(number, "")]
            continue
        if current is None:
            raise InstanceParseError("content before the first block header", number)
        blocks[current].append((number, line))
    for name in REQUIRED:
        if name not in blocks:
            raise InstanceParseError(f"missing block [{name}]")
    return blocks


def _header_line(block: List[Tuple[int, str]]) -> int:
    return block[0][0]


def _key_values(block: List[Tuple[int, str]]) -> Dict[str, Tuple[int, str]]:
    values = {}
    for number, line in block[1:]:
        if "=" not in line:
            raise InstanceParseError(f"expected key = value, got '{line}'", number)
        key, value = (part.strip() for part in line.split("=", 1))
        values[key] = (number, value)
    return values


def _integers(number: int, text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise InstanceParseError(f"expected comma-separated integers, got '{text}'", number)


def _parse_ring(block) -> GradedRing:
    values = _key_values(block)
    for key in ("p", "vars"):
        if key not in values:
            raise InstanceParseError(f"[ring] needs '{key}'", _header_line(block))
    number, p = values["p"]
    try:
        characteristic = int(p)
    except ValueError:
        raise InstanceParseError(f"p must be an integer, got '{p}'", number)
    variables = [v.strip() for v in values["vars"][1].split(",") if v.strip()]
    quotient = []
    if "quotient" in values:
        quotient = [q.strip() for q in values["quotient"][1].split(";") if q.strip()]
    try:
        return GradedRing(variables, characteristic, quotient)
    except AppError as e:
        raise InstanceParseError(str(e), values["vars"][0]) from e


def _parse_twists(block, name: str) -> GradedFreeModule:
    values = _key_values(block)
    if "twists" not in values:
        raise InstanceParseError(f"[{name}] needs 'twists'", _header_line(block))
    return GradedFreeModule(_integers(*values["twists"]))


def _parse_rows(ring: GradedRing, block, source, target, name: str) -> ModuleMap:
    lines = block[1:]
    if len(lines) != target.rank:
        raise InstanceParseError(
            f"[{name}] has {len(lines)} rows, the target has rank {target.rank}", _header_line(block)
        )
    rows = []
    for number, line in lines:
        entries = [e.strip() for e in line.split(",")]
        if len(entries) != source.rank:
            raise InstanceParseError(
                f"row has {len(entries)} entries, the source has rank {source.rank}", number
            )
        try:
            rows.append([ring.parse(e) for e in entries])
        except AppError as e:
            raise InstanceParseError(str(e), number) from e
    try:
        return ModuleMap(ring, source, target, rows)
    except AppError as e:
        raise InstanceParseError(f"[{name}]: {e}", _header_line(block)) from e


@with_log_context(module="instance_io", operation="parse_instance")
def parse_instance(text: str) -> InstanceSpec:
    """
    Parse instance text.

    Raises:
        InstanceParseError: With the 1-based line number of the offending line
    """
    blocks = _split_blocks(text)
    ring = _parse_ring(blocks["ring"])
    F = _parse_twists(blocks["F"], "F")
    G = _parse_twists(blocks["G"], "G")
    phi = _parse_rows(ring, blocks["phi"], F, G, "phi")
    spec = InstanceSpec(ring, F, G, phi)

    if "P" in blocks:
        spec.P = _parse_twists(blocks["P"], "P")
    if "psi" in blocks:
        if spec.P is None:
            raise InstanceParseError("[psi] needs a [P] block", _header_line(blocks["psi"]))
        lines = blocks["psi"][1:]
        if len(lines) == 1 and lines[0][1].replace(" ", "").startswith("seed="):
            number, line = lines[0]
            try:
                spec.psi_seed = int(line.split("=", 1)[1])
            except ValueError:
                raise InstanceParseError(f"seed must be an integer, got '{line}'", number)
            if spec.psi_seed < 0:
                raise InstanceParseError("seed must be non-negative", number)
        else:
            spec.psi = _parse_rows(ring, blocks["psi"], spec.P, F, "psi")
    if "meta" in blocks:
        spec.metadata = {k: v for k, (_, v) in _key_values(blocks["meta"]).items()}
    logging.debug(f"Parsed instance over {ring} with f={F.rank}, g={G.rank}")
    return spec


def _twists_text(module: GradedFreeModule) -> str:
    return ",".join(str(a) for a in module.twists)


def _rows_text(m: ModuleMap) -> List[str]:
    return [", ".join(row) for row in m.to_strings()]


def format_instance(spec: InstanceSpec) -> str:
    """Canonical text: fixed block order, canonical polynomial printing."""
    ring = spec.ring
    lines = ["[ring]", f"p = {ring.characteristic}", f"vars = {','.join(ring.variables)}"]
    if ring.quotient:
        lines.append(f"quotient = {'; '.join(str(q) for q in ring.quotient)}")
    lines += ["[F]", f"twists = {_twists_text(spec.F)}"]
    lines += ["[G]", f"twists = {_twists_text(spec.G)}"]
    lines += ["[phi]"] + _rows_text(spec.phi)
    if spec.P is not None:
        lines += ["[P]", f"twists = {_twists_text(spec.P)}"]
        if spec.psi is not None:
            lines += ["[psi]"] + _rows_text(spec.psi)
        elif spec.psi_seed is not None:
            lines += ["[psi]", f"seed = {spec.psi_seed}"]
    if spec.metadata:
        lines += ["[meta]"] + [f"{k} = {v}" for k, v in sorted(spec.metadata.items())]
    return "\n".join(lines) + "\n"


@handle_exception(
    custom_mapping={
        OSError: InstanceParseError,
        FileNotFoundError: InstanceParseError,
        IsADirectoryError: InstanceParseError,
        PermissionError: InstanceParseError,
        UnicodeDecodeError: InstanceParseError,
    }
)
def load_instance(path: Union[str, Path]) -> InstanceSpec:
    path = Path(path)
    with LogContext(instance=path.name):
        return parse_instance(path.read_text(encoding="utf-8"))


def write_instance(spec: InstanceSpec, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_instance(spec), encoding="utf-8")
    logging.info(f"Wrote instance file {path}")
    return path


def _typed_metadata(metadata: Dict[str, str]) -> Dict:
    typed = {}
    for key, value in metadata.items():
        try:
            typed[key] = int(value)
        except ValueError:
            typed[key] = value
    return typed


@with_log_context(module="instance_io", operation="build_instance")
def build_instance(spec: InstanceSpec, seed: Optional[int] = None) -> Tuple[BRInstance, Optional[SectionInstance]]:
    """
    Validate a parsed instance and build its modules.

    Raises:
        InstanceValidationError: Naming the violated invariant
    """
    try:
        br = validate_and_build(spec.ring, spec.phi, spec.metadata.get("label", ""))
    except ConstructionError as e:
        raise InstanceValidationError("codim I(phi) = f - g + 1", str(e)) from e
    except ParameterError as e:
        raise InstanceValidationError("f > g and phi homogeneous", str(e)) from e
    br.metadata.update(_typed_metadata(spec.metadata))
    if spec.P is None:
        return br, None

    try:
        if spec.psi is not None:
            section = section_from_lift(br, spec.psi)
        else:
            chosen = spec.psi_seed if spec.psi_seed is not None else (seed or 0)
            section = build_section(br, spec.P, seed=chosen)
    except ParameterError as e:
        raise InstanceValidationError("phi o psi = 0 and 1 <= t < r", str(e)) from e
    except ConstructionError as e:
        raise InstanceValidationError("codim I(psi) = r - t + 1", str(e)) from e
    return br, section


def spec_from_section(br: BRInstance, section: Optional[SectionInstance] = None, seed: Optional[int] = None) -> InstanceSpec:
    """InstanceSpec of a constructed instance; the section is written as its lift."""
    metadata = {k: str(v) for k, v in br.metadata.items() if isinstance(v, (int, str))}
    if br.label:
        metadata["label"] = br.label
    spec = InstanceSpec(br.ring, br.F, br.G, br.phi, metadata=metadata)
    if section is not None:
        spec.P = section.P
        spec.psi = section.psi
    elif seed is not None:
        spec.psi_seed = seed
    return spec
