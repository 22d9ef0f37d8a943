"""Mission records persisted as one JSON file per mission.

Writes are atomic (write-temp-then-rename) and updates are guarded by
compare-and-swap on the record's ``updated`` timestamp, so two concurrent
deciders cannot both win.
"""

from __future__ import annotations

import json
import os
import tempfile
import time
from dataclasses import dataclass, replace

from .intent import MissionBrief, MissionPlan, STATUSES
from .sim import RNG_ALGORITHM

DEFAULT_STORE_ENV = "O4M_STORE"


class StoreError(Exception):
    pass


class NotFound(StoreError):
    pass


class SchemaViolation(StoreError):
    pass


class ConcurrentModification(StoreError):
    pass


@dataclass(frozen=True)
class MissionRecord:
    plan: MissionPlan
    brief: MissionBrief
    config: dict               # SimConfig snapshot for the mission
    trajectory_path: str = None
    created: float = 0.0
    updated: float = 0.0
    rng_algorithm: str = RNG_ALGORITHM
    note: str = None

    def as_dict(self):
        return {
            "plan": self.plan.as_dict(),
            "brief": self.brief.as_dict(),
            "config": dict(self.config),
            "trajectory_path": self.trajectory_path,
            "created": self.created,
            "updated": self.updated,
            "rng_algorithm": self.rng_algorithm,
            "note": self.note,
        }

    @staticmethod
    def from_dict(d):
        try:
            plan = MissionPlan.from_dict(d["plan"])
            brief = MissionBrief(
                plan_id=d["brief"]["plan_id"],
                narrative=d["brief"]["narrative"],
                inferred=d["brief"]["inferred"],
                warnings=tuple(d["brief"].get("warnings", ())))
            rec = MissionRecord(
                plan=plan, brief=brief, config=d["config"],
                trajectory_path=d.get("trajectory_path"),
                created=d["created"], updated=d["updated"],
                rng_algorithm=d.get("rng_algorithm", RNG_ALGORITHM),
                note=d.get("note"))
        except (KeyError, TypeError) as exc:
            raise SchemaViolation(str(exc)) from exc
        if plan.status not in STATUSES:
            raise SchemaViolation(f"unknown status {plan.status!r}")
        return rec


def record_path(store_dir, mission_id):
    return os.path.join(store_dir, f"{mission_id}.mission.json")


def _atomic_write(path, text):
    directory = os.path.dirname(path)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def store(record: MissionRecord, store_dir, expected_updated=None) -> str:
    """Persist a record; returns its path.

    ``expected_updated`` enables compare-and-swap: pass the ``updated``
    stamp of the version this write was derived from, and the write fails
    with ConcurrentModification if someone got there first.
    """
    os.makedirs(store_dir, exist_ok=True)
    path = record_path(store_dir, record.plan.id)
    if expected_updated is not None and os.path.exists(path):
        with open(path) as fh:
            on_disk = json.load(fh)
        if on_disk.get("updated") != expected_updated:
            raise ConcurrentModification(record.plan.id)
    now = time.time()
    record = replace(record, created=record.created or now, updated=now)
    _atomic_write(path, json.dumps(record.as_dict(), indent=2))
    return path


def load(store_dir, mission_id) -> MissionRecord:
    path = record_path(store_dir, mission_id)
    if not os.path.exists(path):
        raise NotFound(mission_id)
    with open(path) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaViolation(str(exc)) from exc
    rec = MissionRecord.from_dict(d)
    # crash recovery: a run that never produced a trajectory did not finish
    if rec.plan.status == "running" and rec.trajectory_path is None:
        rec = replace(rec, plan=rec.plan.advance("failed"),
                      note="normalized from running on load "
                      "(no trajectory after restart)")
        store(rec, store_dir)
    return rec


def list_ids(store_dir):
    if not os.path.isdir(store_dir):
        return []
    return sorted(f[:-len(".mission.json")] for f in os.listdir(store_dir)
                  if f.endswith(".mission.json"))
