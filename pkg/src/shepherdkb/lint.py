"""Pitfall scanner: the seven modelling-defect codes with fixed severities.

Rules operate on a snapshot that already passed check_integrity; findings
are order-normalized (code, then subject) so reports are reproducible.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from . import builtin, kb, kbx
from .reasoner import IntegrityFailure

SEVERITY = {
    "P4": "minor",
    "P7": "minor",
    "P8": "minor",
    "P11": "important",
    "P13": "minor",
    "P19": "critical",
    "P41": "important",
}

CODES = tuple(sorted(SEVERITY, key=lambda c: int(c[1:])))

# infix "And"/"Or" between capitalized words, e.g. BlockAndHold
_MERGED_NAME_RE = re.compile(r"[a-z0-9](?:And|Or)(?=[A-Z])")


class MissingFixture(Exception):
    pass


@dataclass(frozen=True)
class LintFinding:
    code: str
    severity: str
    subject: str
    message: str


@dataclass(frozen=True)
class LintReport:
    findings: tuple

    @property
    def counts_by_code(self):
        counts = {}
        for f in self.findings:
            counts[f.code] = counts.get(f.code, 0) + 1
        return counts

    @property
    def total(self):
        return len(self.findings)

    def as_dict(self):
        return {
            "findings": [vars(f) for f in self.findings],
            "counts_by_code": self.counts_by_code,
            "total": self.total,
        }

    def to_text(self):
        lines = [f"{f.code} [{f.severity}] {f.subject}: {f.message}"
                 for f in self.findings]
        lines.append(f"total: {self.total}")
        return "\n".join(lines)

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)


def _finding(code, subject, message):
    return LintFinding(code, SEVERITY[code], subject, message)


def _connected_concepts(o: kb.Ontology):
    connected = set()
    for c in o.concepts.values():
        if c.parents:
            connected.add(c.name)
            connected |= c.parents
        if c.definition is not None:
            connected.add(c.name)
            connected |= kb.expr_concept_names(c.definition)
    for r in o.relations.values():
        connected |= set(r.domain) | set(r.range)
    for i in o.individuals.values():
        connected |= i.types
    return connected


def scan(o: kb.Ontology) -> LintReport:
    errors = kb.check_integrity(o)
    if errors:
        raise IntegrityFailure(errors)

    findings = []

    connected = _connected_concepts(o)
    for name in o.concepts:
        if name not in connected:
            findings.append(_finding(
                "P4", name, "unconnected ontology element: no subclass "
                "edge, domain/range use, definition use, or typed "
                "individual"))

    for name in o.concepts:
        if _MERGED_NAME_RE.search(name):
            findings.append(_finding(
                "P7", name, "class name merges several concepts "
                "(infix And/Or)"))

    for pool, kind in ((o.concepts, "class"), (o.relations, "property"),
                       (o.attributes, "data property"),
                       (o.individuals, "individual")):
        for e in pool.values():
            if e.label is None or e.comment is None:
                missing = [w for w, v in (("label", e.label),
                                          ("comment", e.comment))
                           if v is None]
                findings.append(_finding(
                    "P8", e.name,
                    f"{kind} missing annotations: {', '.join(missing)}"))

    for r in o.relations.values():
        if not r.domain or not r.range:
            findings.append(_finding(
                "P11", r.name, "property missing domain or range"))
        if r.inverse is None:
            findings.append(_finding(
                "P13", r.name, "inverse relationship not explicitly "
                "declared"))
        if len(r.domain) >= 2 or len(r.range) >= 2:
            findings.append(_finding(
                "P19", r.name, "multiple domains or ranges defined"))

    if o.license is None:
        findings.append(_finding("P41", "ontology", "no license declared"))

    findings.sort(key=lambda f: (int(f.code[1:]), f.subject))
    return LintReport(findings=tuple(findings))


def load_fixture_dirty() -> kb.Ontology:
    try:
        text = builtin.data_text("dirty.kbx")
    except FileNotFoundError as exc:
        raise MissingFixture("dirty.kbx") from exc
    return kbx.parse(text)


def load_fixture_manifest() -> dict:
    """Hand-written defect inventory for the dirty fixture."""
    try:
        text = builtin.data_text("dirty.manifest")
    except FileNotFoundError as exc:
        raise MissingFixture("dirty.manifest") from exc
    counts = {}
    subjects = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        code, subject = line.split(None, 1)
        counts[code] = counts.get(code, 0) + 1
        subjects.setdefault(code, []).append(subject)
    return {"counts": counts, "subjects": subjects,
            "total": sum(counts.values())}


def scan_fixture_dirty() -> LintReport:
    return scan(load_fixture_dirty())
