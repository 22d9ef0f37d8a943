"""Meta-property profiles and subsumption-constraint checking.

Assignments live in a sidecar ``.meta`` file, one concept per line. The
constraint rules are the classic ones for rigidity, identity, unity and
dependence; only anti-rigid (~R) parents constrain rigidity, plain non-
rigid (-R) never does.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .reasoner import InferredModel

RIGIDITY = ("+", "-", "~")
IDENTITY = ("+", "-")
UNITY = ("+", "-", "~")
DEPENDENCE = ("+", "-")


class ProfileParseError(Exception):
    def __init__(self, line_no, message):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class UnknownValue(ProfileParseError):
    pass


class UncoveredConcepts(Exception):
    def __init__(self, names):
        self.names = sorted(names)
        super().__init__(f"profile does not cover: {', '.join(self.names)}")


@dataclass(frozen=True)
class MetaProperties:
    rigidity: str    # + | - | ~
    identity: str    # + | -
    unity: str       # + | - | ~
    dependence: str  # + | -


@dataclass(frozen=True)
class MetaProfile:
    assignments: dict  # concept name -> MetaProperties

    def with_assignment(self, name, props):
        return MetaProfile({**self.assignments, name: props})


@dataclass(frozen=True)
class MetaViolation:
    rule: str
    parent: str
    child: str
    explanation: str

    def as_dict(self):
        return vars(self)


def load_profile(text: str) -> MetaProfile:
    assignments = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if parts[0] != "meta" or len(parts) != 6:
            raise ProfileParseError(
                line_no, "expected: meta NAME R=<+|-|~> I=<+|-> U=<+|-|~> "
                "D=<+|->")
        name = parts[1]
        values = {}
        for field, allowed, token in (("R", RIGIDITY, parts[2]),
                                      ("I", IDENTITY, parts[3]),
                                      ("U", UNITY, parts[4]),
                                      ("D", DEPENDENCE, parts[5])):
            if not token.startswith(field + "=") or token[2:] not in allowed:
                raise UnknownValue(line_no, f"bad {field} value: {token}")
            values[field] = token[2:]
        assignments[name] = MetaProperties(
            rigidity=values["R"], identity=values["I"],
            unity=values["U"], dependence=values["D"])
    return MetaProfile(assignments)


def profile_text(profile: MetaProfile) -> str:
    lines = []
    for name in sorted(profile.assignments):
        p = profile.assignments[name]
        lines.append(f"meta {name} R={p.rigidity} I={p.identity} "
                     f"U={p.unity} D={p.dependence}")
    return "\n".join(lines) + "\n"


def check(m: InferredModel, profile: MetaProfile) -> list:
    """Evaluate constraint rules over every entailed child/parent pair."""
    uncovered = set(m.base.concepts) - set(profile.assignments)
    if uncovered:
        raise UncoveredConcepts(uncovered)

    violations = []
    for child, parent in m.subsumptions:
        if child == parent:
            continue
        cp = profile.assignments[child]
        pp = profile.assignments[parent]
        if pp.rigidity == "~" and cp.rigidity == "+":
            violations.append(MetaViolation(
                "RIG", parent, child,
                f"anti-rigid {parent} cannot subsume rigid {child}"))
        if pp.identity == "+" and cp.identity == "-":
            violations.append(MetaViolation(
                "IDEN", parent, child,
                f"{parent} carries identity but {child} does not"))
        if pp.unity == "+" and cp.unity in ("-", "~"):
            violations.append(MetaViolation(
                "UNI-a", parent, child,
                f"{parent} carries unity but {child} does not"))
        if pp.unity == "~" and cp.unity == "+":
            violations.append(MetaViolation(
                "UNI-b", parent, child,
                f"anti-unity {parent} cannot subsume unified {child}"))
        if pp.dependence == "+" and cp.dependence == "-":
            violations.append(MetaViolation(
                "DEP", parent, child,
                f"dependent {parent} cannot subsume independent {child}"))

    violations.sort(key=lambda v: (v.rule, v.parent, v.child))
    return violations


def report_text(violations) -> str:
    lines = [f"{v.rule} {v.child} <= {v.parent}: {v.explanation}"
             for v in violations]
    lines.append(f"total: {len(violations)}")
    return "\n".join(lines)


def report_json(violations) -> str:
    return json.dumps({"violations": [v.as_dict() for v in violations],
                       "total": len(violations)}, indent=2, sort_keys=True)
