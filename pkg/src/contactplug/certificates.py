"""Structured pass/fail records for every verified inequality.

A Certificate is a flat list of named checks plus metadata.  The JSON payload
is canonical (sorted keys, shortest round-trip float repr) so that two runs
with identical parameters and seed produce byte-identical payloads; volatile
fields (timestamps) live outside the payload.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

SCHEMA_VERSION = 1


def _plain(obj):
    """Recursively convert numpy scalars/arrays to plain python for JSON."""
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return [_plain(x) for x in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    return obj


@dataclass
class Check:
    """One verified inequality: claim, measurement, evidence, verdict."""

    name: str
    passed: bool
    claimed: str = ""
    measured: object = None
    tol: float | None = None
    evidence: dict = field(default_factory=dict)
    mandatory: bool = True
    note: str = ""

    def to_dict(self) -> dict:
        return _plain(
            {
                "name": self.name,
                "passed": bool(self.passed),
                "claimed": self.claimed,
                "measured": self.measured,
                "tol": self.tol,
                "evidence": self.evidence,
                "mandatory": self.mandatory,
                "note": self.note,
            }
        )

    @staticmethod
    def from_dict(d: dict) -> "Check":
        return Check(
            name=d["name"],
            passed=d["passed"],
            claimed=d.get("claimed", ""),
            measured=d.get("measured"),
            tol=d.get("tol"),
            evidence=d.get("evidence", {}),
            mandatory=d.get("mandatory", True),
            note=d.get("note", ""),
        )


@dataclass
class Certificate:
    """Roll-up of checks; passes iff every mandatory check passes."""

    name: str
    params: dict = field(default_factory=dict)
    seed: int | None = None
    checks: list = field(default_factory=list)
    subcertificates: list = field(default_factory=list)
    created: float = field(default_factory=time.time)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, checks) -> None:
        self.checks.extend(checks)

    @property
    def passed(self) -> bool:
        ok = all(c.passed for c in self.checks if c.mandatory)
        return ok and all(s.passed for s in self.subcertificates)

    def failures(self) -> list:
        out = [c for c in self.checks if c.mandatory and not c.passed]
        for s in self.subcertificates:
            out.extend(s.failures())
        return out

    def payload_dict(self) -> dict:
        """Deterministic content: everything except wall-clock fields."""
        return _plain(
            {
                "schema_version": SCHEMA_VERSION,
                "name": self.name,
                "params": self.params,
                "seed": self.seed,
                "passed": self.passed,
                "checks": [c.to_dict() for c in self.checks],
                "subcertificates": [s.payload_dict() for s in self.subcertificates],
            }
        )

    def payload_bytes(self) -> bytes:
        return json.dumps(self.payload_dict(), sort_keys=True, indent=1).encode()

    def to_dict(self) -> dict:
        d = self.payload_dict()
        d["created"] = self.created
        return d

    def write_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, sort_keys=True, indent=1)
            fh.write("\n")

    @staticmethod
    def from_dict(d: dict) -> "Certificate":
        cert = Certificate(
            name=d["name"],
            params=d.get("params", {}),
            seed=d.get("seed"),
            created=d.get("created", 0.0),
        )
        cert.checks = [Check.from_dict(c) for c in d.get("checks", [])]
        cert.subcertificates = [
            Certificate.from_dict(s) for s in d.get("subcertificates", [])
        ]
        return cert

    @staticmethod
    def read_json(path) -> "Certificate":
        with open(path) as fh:
            return Certificate.from_dict(json.load(fh))


def summarize(cert: Certificate) -> str:
    """One line per check, acceptance-suite style."""
    lines = []

    def walk(c: Certificate, depth: int):
        pad = "  " * depth
        lines.append(f"{pad}[{'PASS' if c.passed else 'FAIL'}] {c.name}")
        for ch in c.checks:
            status = "pass" if ch.passed else "FAIL"
            lines.append(f"{pad}  {status:4s}  {ch.name}: measured={ch.measured} {ch.claimed}")
        for s in c.subcertificates:
            walk(s, depth + 1)

    walk(cert, 0)
    return "\n".join(lines)
