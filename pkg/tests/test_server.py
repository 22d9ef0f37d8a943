"""HTTP service: REST endpoints, the approval gate, and SSE streaming."""

import json
import time

import pytest
from fastapi.testclient import TestClient

from shepherdkb import builtin, kb
from shepherdkb.server import FrameBus, create_app
from shepherdkb.sim import Frame


@pytest.fixture
def client(service):
    return TestClient(create_app(service))


def post_intent(client, sheep=5, seed=1, max_steps=2000, **extra):
    body = {"intent": "mustering", "goal": [40.0, 40.0], "sheep": sheep,
            "seed": seed, "max_steps": max_steps}
    body.update(extra)
    return client.post("/api/intent", json=body)


def wait_terminal(client, mission_id, timeout=30.0):
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        status = client.get(f"/api/mission/{mission_id}") \
            .json()["plan"]["status"]
        if status in ("succeeded", "failed"):
            return status
        time.sleep(0.05)
    raise AssertionError("mission never reached a terminal status")


def sse_events(text):
    events = []
    for block in text.strip().split("\n\n"):
        lines = block.splitlines()
        name = lines[0].split("event: ")[1]
        data = json.loads(lines[1].split("data: ", 1)[1])
        events.append((name, data))
    return events


class TestOntologyEndpoints:
    def test_metrics(self, client):
        doc = client.get("/api/ontology/metrics").json()
        m = kb.metrics(builtin.load_builtin())
        assert doc == {f: getattr(m, f) for f in kb.Metrics.FIELDS}

    def test_classes_sorted_with_parents(self, client):
        classes = client.get("/api/ontology/classes").json()["classes"]
        names = [c["name"] for c in classes]
        assert names == sorted(names)
        by_name = {c["name"]: c for c in classes}
        assert by_name["Sheep"]["parents"] == ["Agent"]
        assert by_name["Team"]["kind"] == "defined"

    def test_individuals(self, client):
        doc = client.get("/api/ontology/individuals").json()
        by_name = {i["name"]: i for i in doc["individuals"]}
        assert "IndividualTactic" in by_name["mustering"]["types"]

    def test_config(self, client):
        doc = client.get("/api/config").json()
        assert doc["paddock"] == [50.0, 50.0]
        assert doc["v_dog"] == 1.5

    def test_query(self, client):
        r = client.post("/api/query",
                        json={"expr": "min(2, teamHasAgent, Agent)"})
        assert r.status_code == 200
        assert r.json()["individuals"] == ["herd"]

    def test_query_parse_error(self, client):
        r = client.post("/api/query", json={"expr": "min(x)"})
        assert r.status_code == 400
        assert r.json()["error"] == "parse_error"

    def test_query_missing_expr(self, client):
        assert client.post("/api/query", json={}).status_code == 400

    def test_lint_clean(self, client):
        assert client.get("/api/lint").json()["total"] == 0


class TestIntentAndGate:
    def test_intent_resolves_behaviours(self, client):
        r = post_intent(client)
        assert r.status_code == 200
        doc = r.json()
        assert doc["plan"]["tactic"] == "mustering"
        assert doc["plan"]["behaviours"] == ["collect", "drive"]
        assert doc["plan"]["status"] == "briefed"
        assert "tactic: mustering" in doc["brief"]["narrative"]

    def test_intent_no_match_is_400(self, client):
        r = post_intent(client, intent="juggling")
        assert r.status_code == 400
        assert r.json()["error"] == "NoTacticMatch"

    def test_intent_bad_goal(self, client):
        r = post_intent(client, goal=[1.0])
        assert r.status_code == 400

    def test_run_before_approve_409(self, client):
        mission_id = post_intent(client).json()["id"]
        r = client.post(f"/api/mission/{mission_id}/run")
        assert r.status_code == 409
        assert r.json()["error"] == "plan_not_approved"

    def test_run_after_reject_409(self, client):
        mission_id = post_intent(client).json()["id"]
        client.post(f"/api/mission/{mission_id}/reject")
        assert client.post(f"/api/mission/{mission_id}/run") \
            .status_code == 409

    def test_double_approve_409(self, client):
        mission_id = post_intent(client).json()["id"]
        assert client.post(f"/api/mission/{mission_id}/approve") \
            .status_code == 200
        r = client.post(f"/api/mission/{mission_id}/approve")
        assert r.status_code == 409
        assert r.json()["error"] == "invalid_status"

    def test_unknown_mission_404(self, client):
        assert client.get("/api/mission/ghost").status_code == 404
        assert client.post("/api/mission/ghost/approve").status_code == 404

    def test_stream_before_run_409(self, client):
        mission_id = post_intent(client).json()["id"]
        assert client.get(f"/api/mission/{mission_id}/stream") \
            .status_code == 409

    def test_trajectory_before_run_404(self, client):
        mission_id = post_intent(client).json()["id"]
        assert client.get(f"/api/mission/{mission_id}/trajectory") \
            .status_code == 404


class TestRunAndStream:
    def test_full_mission(self, client):
        mission_id = post_intent(client).json()["id"]
        client.post(f"/api/mission/{mission_id}/approve")
        r = client.post(f"/api/mission/{mission_id}/run")
        assert r.status_code == 200
        assert r.json() == {"id": mission_id, "status": "running"}
        outcome = wait_terminal(client, mission_id)
        assert outcome in ("succeeded", "failed")

        # replayed stream from the stored trajectory
        stream = client.get(f"/api/mission/{mission_id}/stream")
        assert stream.status_code == 200
        assert stream.headers["content-type"].startswith(
            "text/event-stream")
        events = sse_events(stream.text)
        frames = [d for e, d in events if e == "frame"]
        ts = [f["t"] for f in frames]
        assert ts == sorted(ts) and len(set(ts)) == len(ts)
        assert events[-1] == ("done", {"outcome": outcome})

        # downloadable trajectory agrees with the stream
        download = client.get(f"/api/mission/{mission_id}/trajectory")
        assert download.status_code == 200
        lines = [json.loads(ln) for ln in download.text.splitlines()
                 if ln.strip()]
        assert lines == frames

    def test_record_carries_rng_algorithm(self, client):
        mission_id = post_intent(client).json()["id"]
        doc = client.get(f"/api/mission/{mission_id}").json()
        assert doc["rng_algorithm"] == "numpy-pcg64"


class TestFrameBus:
    def frame(self, t):
        return Frame(t=t, dog=(0.0, 0.0), sheep=((1.0, 1.0),),
                     gcm=(1.0, 1.0), behaviour="drive", complete=False)

    def test_snapshot_semantics_skip_stale_frames(self):
        bus = FrameBus()
        for t in (1, 2, 3):
            bus.publish(self.frame(t))
        bus.finish("succeeded")
        events = list(bus.follow())
        # a late reader sees only the latest frame, then done
        assert [e for e, _ in events] == ["frame", "done"]
        assert events[0][1].t == 3
        assert events[1][1] == "succeeded"

    def test_done_without_frames(self):
        bus = FrameBus()
        bus.finish("failed")
        assert list(bus.follow()) == [("done", "failed")]
