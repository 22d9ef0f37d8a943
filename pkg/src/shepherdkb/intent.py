"""Commander intent resolved through the ontology into an approvable
mission plan, with the mandatory human gate enforced as a status machine."""

from __future__ import annotations

import re
import uuid
from dataclasses import dataclass, field, replace

from . import kb
from .reasoner import InferredModel, infer_behaviours_for_tactic

TACTIC_ROOT = "Tactic"
MATCH_THRESHOLD = 2

STATUSES = ("draft", "briefed", "approved", "rejected", "running",
            "succeeded", "failed")
TRANSITIONS = {
    "draft": ("briefed",),
    "briefed": ("approved", "rejected"),
    "approved": ("running",),
    "running": ("succeeded", "failed"),
    "rejected": (),
    "succeeded": (),
    "failed": (),
}


class IntentError(Exception):
    pass


class NoTacticMatch(IntentError):
    def __init__(self, closest, distance):
        self.closest = closest
        self.distance = distance
        super().__init__(
            f"no tactic within distance {MATCH_THRESHOLD}; closest is "
            f"{closest!r} at distance {distance}")


class EmptyBehaviourSet(IntentError):
    pass


class GoalOutsidePaddock(IntentError):
    pass


class InvalidStatus(IntentError):
    pass


@dataclass(frozen=True)
class IntentRequest:
    intent_text: str
    goal: tuple            # (x, y) in paddock units
    flock_size: int
    paddock: tuple = (50.0, 50.0)
    max_steps: int = 5000
    seed: int = 0

    def validate(self):
        if self.flock_size < 1:
            raise IntentError("flock size must be >= 1")
        if self.max_steps < 1:
            raise IntentError("max_steps must be >= 1")
        x, y = self.goal
        w, h = self.paddock
        if not (0 <= x <= w and 0 <= y <= h):
            raise GoalOutsidePaddock(f"goal {self.goal} outside "
                                     f"paddock {self.paddock}")


@dataclass(frozen=True)
class MissionPlan:
    id: str
    intent: str
    tactic: str
    behaviours: tuple
    goal: tuple
    flock: tuple
    paddock: tuple
    max_steps: int
    seed: int
    status: str = "draft"

    def advance(self, status) -> "MissionPlan":
        if status not in TRANSITIONS[self.status]:
            raise InvalidStatus(
                f"cannot move {self.status} -> {status}")
        if status != "draft" and not self.behaviours:
            raise EmptyBehaviourSet(self.tactic)
        return replace(self, status=status)

    def as_dict(self):
        return {
            "id": self.id, "intent": self.intent, "tactic": self.tactic,
            "behaviours": list(self.behaviours), "goal": list(self.goal),
            "flock": list(self.flock), "paddock": list(self.paddock),
            "max_steps": self.max_steps, "seed": self.seed,
            "status": self.status,
        }

    @staticmethod
    def from_dict(d):
        return MissionPlan(
            id=d["id"], intent=d["intent"], tactic=d["tactic"],
            behaviours=tuple(d["behaviours"]), goal=tuple(d["goal"]),
            flock=tuple(d["flock"]), paddock=tuple(d["paddock"]),
            max_steps=d["max_steps"], seed=d["seed"], status=d["status"])


@dataclass(frozen=True)
class MissionBrief:
    plan_id: str
    narrative: str
    inferred: dict
    warnings: tuple = ()

    def as_dict(self):
        return {"plan_id": self.plan_id, "narrative": self.narrative,
                "inferred": dict(self.inferred),
                "warnings": list(self.warnings)}


def normalize_intent(text: str) -> str:
    return re.sub(r"[^a-z0-9]+", " ", text.lower()).strip()


def edit_distance(a: str, b: str) -> int:
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1,
                           prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def tactic_individuals(m: InferredModel):
    tactic_concepts = {c for c in m.base.concepts
                       if (c, TACTIC_ROOT) in m.subsumptions}
    return sorted(i for i, mem in m.memberships.items()
                  if mem & tactic_concepts)


def resolve_intent(m: InferredModel, req: IntentRequest) -> MissionPlan:
    req.validate()
    candidates = tactic_individuals(m)
    if not candidates:
        raise IntentError("ontology declares no tactic individuals")

    wanted = normalize_intent(req.intent_text)
    best, best_d = None, None
    for cand in candidates:
        d = edit_distance(wanted, normalize_intent(cand))
        if best_d is None or d < best_d:
            best, best_d = cand, d
    if best_d > MATCH_THRESHOLD:
        raise NoTacticMatch(best, best_d)

    behaviours = tuple(sorted(infer_behaviours_for_tactic(m, best)))
    if not behaviours:
        raise EmptyBehaviourSet(best)

    flock = tuple(f"sheep{i}" for i in range(1, req.flock_size + 1))
    return MissionPlan(
        id=uuid.uuid4().hex[:12],
        intent=best,
        tactic=best,
        behaviours=behaviours,
        goal=tuple(float(v) for v in req.goal),
        flock=flock,
        paddock=tuple(float(v) for v in req.paddock),
        max_steps=req.max_steps,
        seed=req.seed,
    )


BOUNDARY_MARGIN = 15.0  # one sheepdog influence radius, in paddock units


def brief(plan: MissionPlan, m: InferredModel) -> MissionBrief:
    if plan.status not in ("draft", "briefed"):
        raise InvalidStatus(f"cannot brief a {plan.status} plan")

    warnings = []
    x, y = plan.goal
    w, h = plan.paddock
    if min(x, w - x, y, h - y) < BOUNDARY_MARGIN:
        warnings.append(
            f"goal ({x:g}, {y:g}) lies within {BOUNDARY_MARGIN:g} units of "
            "the paddock boundary")

    narrative = (
        f"Mission {plan.id}: intent {plan.intent!r} resolves to "
        f"tactic: {plan.tactic}. "
        f"behaviours: {', '.join(plan.behaviours)}. "
        f"goal: ({x:g}, {y:g}). "
        f"flock size: {len(plan.flock)} sheep ({plan.flock[0]}.."
        f"{plan.flock[-1]}). "
        f"paddock: {w:g} x {h:g}. "
        f"max_steps: {plan.max_steps}. seed: {plan.seed}. "
        "Approval is required before the simulation may run."
    )
    inferred = {"tactic": plan.tactic, "behaviours": list(plan.behaviours),
                "goal": [x, y], "flock_size": len(plan.flock)}
    return MissionBrief(plan_id=plan.id, narrative=narrative,
                        inferred=inferred, warnings=tuple(warnings))


def decide(plan: MissionPlan, decision: str) -> MissionPlan:
    if decision not in ("approve", "reject"):
        raise IntentError(f"unknown decision: {decision}")
    if plan.status != "briefed":
        raise InvalidStatus(
            f"cannot {decision} a plan in status {plan.status}")
    return plan.advance("approved" if decision == "approve" else "rejected")


def register_flock(o: kb.Ontology, flock) -> kb.Ontology:
    """Type mission-generated sheep identifiers as Sheep individuals for
    the mission's lifetime (the shipped ABox already has sheep1..3)."""
    for name in flock:
        if name not in o.individuals:
            o = kb.assert_axiom(o, kb.declaration("individual", name))
        if "Sheep" not in o.individuals[name].types:
            o = kb.assert_axiom(o, kb.class_assertion(name, "Sheep"))
    return o
