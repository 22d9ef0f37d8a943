"""Persistence: atomic JSON records, compare-and-swap, crash recovery."""

import json
import os
from dataclasses import replace

import pytest

from shepherdkb import store
from shepherdkb.intent import MissionBrief, MissionPlan


def make_record(mission_id="m1", status="briefed", trajectory_path=None):
    plan = MissionPlan(
        id=mission_id, intent="mustering", tactic="mustering",
        behaviours=("collect", "drive"), goal=(40.0, 40.0),
        flock=("sheep1", "sheep2"), paddock=(50.0, 50.0),
        max_steps=100, seed=3, status=status)
    brief = MissionBrief(plan_id=mission_id, narrative="tactic: mustering",
                         inferred={"tactic": "mustering"}, warnings=())
    return store.MissionRecord(plan=plan, brief=brief,
                               config={"v_dog": 1.5, "seed": 3},
                               trajectory_path=trajectory_path)


class TestRoundTrip:
    def test_store_then_load_deep_equality(self, tmp_path):
        d = str(tmp_path)
        store.store(make_record(), d)
        rec = store.load(d, "m1")
        original = make_record()
        assert rec.plan == original.plan
        assert rec.brief == original.brief
        assert rec.config == original.config
        assert rec.rng_algorithm == "numpy-pcg64"
        assert rec.created == rec.updated > 0

    def test_update_bumps_updated_only(self, tmp_path):
        d = str(tmp_path)
        store.store(make_record(), d)
        first = store.load(d, "m1")
        store.store(first, d, expected_updated=first.updated)
        second = store.load(d, "m1")
        assert second.created == first.created
        assert second.updated > first.updated

    def test_record_path_naming(self, tmp_path):
        d = str(tmp_path)
        path = store.store(make_record("alpha"), d)
        assert path == os.path.join(d, "alpha.mission.json")
        assert os.path.exists(path)


class TestCompareAndSwap:
    def test_interleaved_writers(self, tmp_path):
        """Both writers read the same version; the second write loses."""
        d = str(tmp_path)
        store.store(make_record(), d)
        base = store.load(d, "m1")
        writer_a = replace(base, plan=base.plan.advance("approved"))
        writer_b = replace(base, plan=base.plan.advance("rejected"))
        store.store(writer_a, d, expected_updated=base.updated)
        with pytest.raises(store.ConcurrentModification):
            store.store(writer_b, d, expected_updated=base.updated)
        assert store.load(d, "m1").plan.status == "approved"

    def test_unconditional_write_always_wins(self, tmp_path):
        d = str(tmp_path)
        store.store(make_record(), d)
        base = store.load(d, "m1")
        store.store(replace(base, plan=base.plan.advance("approved")), d)
        store.store(base, d)  # no expected_updated: last write wins
        assert store.load(d, "m1").plan.status == "briefed"


class TestCrashRecovery:
    def test_running_without_trajectory_becomes_failed(self, tmp_path):
        d = str(tmp_path)
        plan = make_record().plan.advance("approved").advance("running")
        store.store(replace(make_record(), plan=plan), d)
        rec = store.load(d, "m1")
        assert rec.plan.status == "failed"
        assert "running" in rec.note
        # the normalization is persisted, not just returned
        on_disk = json.loads(
            open(store.record_path(d, "m1")).read())
        assert on_disk["plan"]["status"] == "failed"

    def test_running_with_trajectory_left_alone(self, tmp_path):
        d = str(tmp_path)
        plan = make_record().plan.advance("approved").advance("running")
        rec = replace(make_record(trajectory_path="m1.trajectory.jsonl"),
                      plan=plan)
        store.store(rec, d)
        assert store.load(d, "m1").plan.status == "running"


class TestErrors:
    def test_not_found(self, tmp_path):
        with pytest.raises(store.NotFound):
            store.load(str(tmp_path), "ghost")

    def test_schema_violation_missing_field(self, tmp_path):
        d = str(tmp_path)
        path = store.store(make_record(), d)
        doc = json.loads(open(path).read())
        del doc["plan"]["tactic"]
        open(path, "w").write(json.dumps(doc))
        with pytest.raises(store.SchemaViolation):
            store.load(d, "m1")

    def test_schema_violation_bad_status(self, tmp_path):
        d = str(tmp_path)
        path = store.store(make_record(), d)
        doc = json.loads(open(path).read())
        doc["plan"]["status"] = "paused"
        open(path, "w").write(json.dumps(doc))
        with pytest.raises(store.SchemaViolation):
            store.load(d, "m1")

    def test_schema_violation_truncated_json(self, tmp_path):
        d = str(tmp_path)
        path = store.store(make_record(), d)
        text = open(path).read()
        open(path, "w").write(text[: len(text) // 2])
        with pytest.raises(store.SchemaViolation):
            store.load(d, "m1")


class TestListing:
    def test_sorted_ids_ignore_foreign_files(self, tmp_path):
        d = str(tmp_path)
        for mission_id in ("b", "a", "c"):
            store.store(make_record(mission_id), d)
        open(os.path.join(d, "notes.txt"), "w").write("x")
        assert store.list_ids(d) == ["a", "b", "c"]

    def test_missing_directory_is_empty(self, tmp_path):
        assert store.list_ids(str(tmp_path / "nope")) == []


def test_atomic_write_leaves_no_temp_files(tmp_path):
    d = str(tmp_path)
    for _ in range(5):
        store.store(make_record(), d)
    assert [f for f in os.listdir(d) if f.endswith(".tmp")] == []
