"""Instance files: versioned JSON envelopes around hermitian matrix payloads.

An instance file carries the matrix to factor plus optional planted ground
truth (a factorization and/or scalar class list) used by the test corpus.
Serialization is canonical -- sorted keys, two-space indent, exact decimal
coefficient strings, trailing newline -- so identical instances produce
byte-identical files and every parse/serialize round-trip is lossless.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Union

from .errors import SchemaError, VerificationFailure
from .matrix import COMPLEX, REAL, PolyMatrix
from .twosquares import TwoSquares

SCHEMA_VERSION = 1

MODE_EXACT = "exact"
MODE_APPROX = "approx"
_MODES = (MODE_EXACT, MODE_APPROX)

_TOP_KEYS = {"version", "mode", "field", "matrix", "ground_truth"}
_GROUND_TRUTH_KEYS = {"family", "seed", "factorization", "classes"}


@dataclass(frozen=True)
class InstanceFile:
    """A parsed instance: hermitian payload plus optional planted ground truth.

    The ground-truth block is kept as the raw JSON object (validated on
    construction) so serialization reproduces the original bytes.
    """

    mode: str
    field: str
    matrix: PolyMatrix
    ground_truth: Optional[dict] = None
    version: int = SCHEMA_VERSION

    def __post_init__(self):
        if self.version != SCHEMA_VERSION:
            raise SchemaError(
                f"schema version {self.version} is not supported (expected {SCHEMA_VERSION})"
            )
        if self.mode not in _MODES:
            raise SchemaError(f"unknown mode {self.mode!r}")
        if self.field not in (REAL, COMPLEX):
            raise SchemaError(f"unknown field tag {self.field!r}")
        if self.matrix.field != self.field:
            raise SchemaError(
                f"field tag {self.field!r} does not match the matrix payload ({self.matrix.field!r})"
            )
        self.matrix.require_hermitian()
        _validate_ground_truth(self.ground_truth, self.matrix)

    # -- ground-truth accessors --------------------------------------------

    def planted_factorization(self) -> Optional[PolyMatrix]:
        if self.ground_truth is None or "factorization" not in self.ground_truth:
            return None
        return PolyMatrix.from_json(self.ground_truth["factorization"])

    def planted_classes(self) -> Optional[list]:
        if self.ground_truth is None or "classes" not in self.ground_truth:
            return None
        return [TwoSquares.from_json(c) for c in self.ground_truth["classes"]]

    def to_json(self) -> dict:
        doc = {
            "version": self.version,
            "mode": self.mode,
            "field": self.field,
            "matrix": self.matrix.to_json(),
        }
        if self.ground_truth is not None:
            doc["ground_truth"] = self.ground_truth
        return doc


def _validate_ground_truth(gt: Optional[dict], M: PolyMatrix) -> None:
    """Planted data, when present, must verify exactly against the payload."""
    if gt is None:
        return
    if not isinstance(gt, dict):
        raise SchemaError("ground_truth must be an object")
    extra = set(gt) - _GROUND_TRUTH_KEYS
    if extra:
        raise SchemaError(f"unknown ground_truth fields {sorted(extra)}")
    if "seed" in gt and not isinstance(gt["seed"], int):
        raise SchemaError("ground_truth seed must be an integer")
    if "family" in gt and not isinstance(gt["family"], str):
        raise SchemaError("ground_truth family must be a string")
    if "factorization" in gt:
        Q = PolyMatrix.from_json(gt["factorization"])
        if Q.star() * Q != M.to_ratfn():
            raise VerificationFailure("planted factorization does not square to the payload")
    if "classes" in gt:
        if not isinstance(gt["classes"], list):
            raise SchemaError("ground_truth classes must be a list")
        det = M.det().to_poly()
        for c in gt["classes"]:
            cls = TwoSquares.from_json(c)
            if cls.target != det:
                raise VerificationFailure(
                    f"planted class targets {cls.target}, but det of the payload is {det}"
                )


def canonical_dumps(doc) -> bytes:
    """Stable JSON bytes: sorted keys, two-space indent, trailing newline."""
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode("utf-8")


def parse_instance(data: Union[bytes, str]) -> InstanceFile:
    """Decode and validate an instance file; hermitian payload enforced."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("instance file must be a JSON object")
    missing = {"version", "mode", "field", "matrix"} - set(doc)
    if missing:
        raise SchemaError(f"instance file missing keys: {sorted(missing)}")
    extra = set(doc) - _TOP_KEYS
    if extra:
        raise SchemaError(f"unknown instance fields {sorted(extra)}")
    if not isinstance(doc["version"], int):
        raise SchemaError("version must be an integer")
    return InstanceFile(
        mode=doc["mode"],
        field=doc["field"],
        matrix=PolyMatrix.from_json(doc["matrix"]),
        ground_truth=doc.get("ground_truth"),
        version=doc["version"],
    )


def serialize_instance(inst: InstanceFile) -> bytes:
    return canonical_dumps(inst.to_json())


def load_instance(path) -> InstanceFile:
    with open(path, "rb") as fh:
        return parse_instance(fh.read())


def save_instance(inst: InstanceFile, path) -> None:
    with open(path, "wb") as fh:
        fh.write(serialize_instance(inst))
