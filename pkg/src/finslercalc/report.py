"""Suite reports and emission.

JSON rows carry the keys ``suite, identity, anchor, max_residual,
tolerance, passed, samples, seconds``; rows are sorted by (anchor,
identity) so concurrency or evaluation order never changes the bytes.
With a fixed seed the JSON output is byte-identical across runs: the
``seconds`` field is therefore emitted as null in JSON (wall time would
break reproducibility) and is only shown in the text rendering.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


@dataclass(frozen=True)
class IdentityResult:
    suite: str
    identity: str
    anchor: str
    max_residual: float
    tolerance: float
    passed: bool
    samples: int
    seconds: float


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    seed: int
    results: tuple

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


JSON_SCHEMA = {
    "type": "object",
    "required": ["suite", "seed", "passed", "results"],
    "properties": {
        "suite": {"type": "string"},
        "seed": {"type": "integer"},
        "passed": {"type": "boolean"},
        "results": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["suite", "identity", "anchor", "max_residual",
                             "tolerance", "passed", "samples", "seconds"],
                "properties": {
                    "suite": {"type": "string"},
                    "identity": {"type": "string"},
                    "anchor": {"type": "string"},
                    "max_residual": {"type": "number"},
                    "tolerance": {"type": "number"},
                    "passed": {"type": "boolean"},
                    "samples": {"type": "integer"},
                    "seconds": {"type": ["number", "null"]},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}


def _sorted_results(report: SuiteReport):
    return sorted(report.results, key=lambda r: (r.suite, r.anchor, r.identity))


def to_json(report: SuiteReport) -> str:
    rows = [
        {
            "suite": r.suite,
            "identity": r.identity,
            "anchor": r.anchor,
            "max_residual": float(r.max_residual),
            "tolerance": float(r.tolerance),
            "passed": bool(r.passed),
            "samples": int(r.samples),
            "seconds": None,
        }
        for r in _sorted_results(report)
    ]
    doc = {"suite": report.suite, "seed": report.seed,
           "passed": report.passed, "results": rows}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def to_text(report: SuiteReport) -> str:
    lines = []
    width = max((len(r.identity) for r in report.results), default=10)
    for r in _sorted_results(report):
        status = "PASS" if r.passed else "FAIL"
        lines.append(
            f"[{status}] {r.suite:<11} {r.identity:<{width}}  "
            f"max_residual={r.max_residual:.3e}  tol={r.tolerance:.1e}  "
            f"samples={r.samples}  anchor={r.anchor}  ({r.seconds:.2f}s)"
        )
    verdict = "PASS" if report.passed else "FAIL"
    lines.append(f"suite {report.suite}: {verdict} "
                 f"({sum(r.passed for r in report.results)}/{len(report.results)} identities)")
    return "\n".join(lines) + "\n"


def emit_report(report: SuiteReport, path: str | None, fmt: str = "text") -> str:
    if fmt == "json":
        rendered = to_json(report)
    elif fmt == "text":
        rendered = to_text(report)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path:
        with open(path, "w") as fh:
            fh.write(rendered)
    return rendered
