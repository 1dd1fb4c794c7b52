"""
Report envelopes and their JSON encoding.

Every JSON document the CLI prints is a ReportEnvelope whose ``payload_type`` tags the shape
of ``payload`` (see docs/schema.json).
"""

from __future__ import annotations

from datetime import datetime, timezone

UTC = timezone.utc
from enum import Enum
from typing import Any

import numpy as np
import orjson
from pydantic import BaseModel, ConfigDict, Field

from . import __version__
from .core.validation import ConstructionSpec
from .oracle import OracleEstimate
from .tensor_core import SubspaceBasis


class PayloadType(str, Enum):
    WITNESS_REPORT = "witness_report"
    REGION_SCAN = "region_scan"
    ORACLE_ESTIMATE = "oracle_estimate"
    CENSUS = "census"
    CONSTRUCTION = "construction"
    ERROR = "error"


class ReportEnvelope(BaseModel):
    """Versioned, timestamped wrapper around one command result."""

    model_config = ConfigDict(frozen=True)

    tool_version: str = Field(default=__version__)
    command: str
    timestamp: str = Field(default_factory=lambda: datetime.now(UTC).isoformat())
    seed: int = Field(..., ge=0)
    payload_type: PayloadType
    payload: dict[str, Any]


def make_envelope(command: str, seed: int, payload_type: PayloadType, payload: dict[str, Any]) -> ReportEnvelope:
    return ReportEnvelope(command=command, seed=seed, payload_type=payload_type, payload=payload)


def _default(obj: Any) -> Any:
    if isinstance(obj, complex | np.complexfloating):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, Enum):
        return obj.value
    raise TypeError(f"Type is not JSON serializable: {type(obj).__name__}")


def dumps(envelope: ReportEnvelope) -> bytes:
    """Pretty JSON; floats use the shortest repr that round-trips exactly."""
    return orjson.dumps(
        envelope.model_dump(mode="python"),
        default=_default,
        option=orjson.OPT_INDENT_2 | orjson.OPT_SERIALIZE_NUMPY | orjson.OPT_APPEND_NEWLINE,
    )


def loads(data: bytes | str) -> ReportEnvelope:
    return ReportEnvelope.model_validate(orjson.loads(data))


def construction_summary(
    spec: ConstructionSpec, basis: SubspaceBasis, max_schmidt: OracleEstimate | None, **extra: Any
) -> dict[str, Any]:
    """Dimension, ambient factors, orthonormality residual and the max-Schmidt oracle value of W."""
    return {
        "spec": spec.model_dump(mode="json"),
        "dimension": basis.dim,
        "ambient_dims": list(basis.ambient_dims),
        "orthonormality_residual": basis.orthonormality_residual(),
        "max_schmidt": max_schmidt.to_dict() if max_schmidt else None,
        **extra,
    }
