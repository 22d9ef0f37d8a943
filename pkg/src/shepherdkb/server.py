"""HTTP service consumed by the browser console.

All mutations go through the same MissionService the CLI uses; frames are
pushed to observers over server-sent events with snapshot semantics (a
slow reader sees the latest frame, never blocks the simulation).
"""

from __future__ import annotations

import json
import os
import threading

from fastapi import FastAPI, Request
from fastapi.responses import FileResponse, JSONResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles

from . import builtin, intent, kb, kbx, lint, sim, store
from .missions import MissionService, _config_dict
from .reasoner import query

STATIC_DIR = os.environ.get(
    "O4M_CONSOLE_DIR",
    os.path.join(os.path.dirname(os.path.dirname(
        os.path.dirname(os.path.abspath(__file__)))),
        "frontend", "dist"))


class FrameBus:
    """Latest-frame fanout for one mission run."""

    def __init__(self):
        self.cond = threading.Condition()
        self.latest = None
        self.done = False
        self.outcome = None

    def publish(self, frame):
        with self.cond:
            self.latest = frame
            self.cond.notify_all()

    def finish(self, outcome):
        with self.cond:
            self.done = True
            self.outcome = outcome
            self.cond.notify_all()

    def follow(self):
        last_t = -1
        while True:
            with self.cond:
                self.cond.wait_for(
                    lambda: self.done or (self.latest is not None
                                          and self.latest.t > last_t),
                    timeout=30.0)
                frame, done, outcome = self.latest, self.done, self.outcome
            if frame is not None and frame.t > last_t:
                last_t = frame.t
                yield ("frame", frame)
            if done and (frame is None or frame.t == last_t):
                yield ("done", outcome)
                return


def _sse(event, data):
    return f"event: {event}\ndata: {json.dumps(data)}\n\n"


def _record_json(record):
    return record.as_dict()


def create_app(service: MissionService = None) -> FastAPI:
    service = service or MissionService()
    app = FastAPI(title="shepherdkb")
    buses = {}
    buses_lock = threading.Lock()

    def error(status, detail, name=None):
        return JSONResponse(status_code=status,
                            content={"error": name or "error",
                                     "detail": detail})

    @app.exception_handler(store.NotFound)
    async def _not_found(request: Request, exc):
        return error(404, str(exc), "not_found")

    @app.exception_handler(intent.InvalidStatus)
    async def _invalid_status(request: Request, exc):
        return error(409, str(exc), "invalid_status")

    @app.exception_handler(sim.PlanNotApproved)
    async def _not_approved(request: Request, exc):
        return error(409, str(exc), "plan_not_approved")

    @app.exception_handler(store.ConcurrentModification)
    async def _concurrent(request: Request, exc):
        return error(409, str(exc), "concurrent_modification")

    @app.exception_handler(intent.IntentError)
    async def _intent_error(request: Request, exc):
        return error(400, str(exc), type(exc).__name__)

    @app.exception_handler(kb.KbError)
    async def _kb_error(request: Request, exc):
        return error(400, str(exc), type(exc).__name__)

    @app.exception_handler(kbx.ParseError)
    async def _parse_error(request: Request, exc):
        return error(400, str(exc), "parse_error")

    @app.get("/api/ontology/metrics")
    def ontology_metrics():
        m = kb.metrics(service.ontology)
        return {f: getattr(m, f) for f in kb.Metrics.FIELDS}

    @app.get("/api/ontology/classes")
    def ontology_classes():
        o = service.ontology
        return {"classes": [
            {"name": c.name, "kind": c.kind, "parents": sorted(c.parents),
             "label": c.label}
            for c in sorted(o.concepts.values(), key=lambda c: c.name)]}

    @app.get("/api/ontology/individuals")
    def ontology_individuals():
        o = service.ontology
        return {"individuals": [
            {"name": i.name, "types": sorted(i.types),
             "facts": sorted([r, ob] for r, ob in i.facts)}
            for i in sorted(o.individuals.values(), key=lambda i: i.name)]}

    @app.get("/api/config")
    def config():
        return _config_dict(service.defaults)

    @app.post("/api/query")
    async def run_query(request: Request):
        body = await request.json()
        if not isinstance(body, dict) or "expr" not in body:
            return error(400, "body must be a JSON object with 'expr'",
                         "bad_request")
        expr = kbx.parse_expr_text(body["expr"])
        result = query(service.model, expr)
        return {"expr": body["expr"],
                "individuals": list(result.individuals)}

    @app.get("/api/lint")
    def lint_report():
        return lint.scan(builtin.load_builtin()).as_dict()

    @app.post("/api/intent")
    async def post_intent(request: Request):
        body = await request.json()
        try:
            intent_text = body["intent"]
            goal = body["goal"]
            sheep = int(body["sheep"])
        except (KeyError, TypeError, ValueError):
            return error(400, "expected {intent, goal:[x,y], sheep, seed?}",
                         "bad_request")
        if (not isinstance(goal, (list, tuple)) or len(goal) != 2):
            return error(400, "goal must be [x, y]", "bad_request")
        record = service.create(intent_text, goal, sheep,
                                seed=int(body.get("seed", 0)),
                                max_steps=body.get("max_steps"))
        return {"id": record.plan.id, "brief": record.brief.as_dict(),
                "plan": record.plan.as_dict()}

    @app.get("/api/mission/{mission_id}")
    def get_mission(mission_id: str):
        return _record_json(service.get(mission_id))

    @app.post("/api/mission/{mission_id}/approve")
    def approve(mission_id: str):
        return _record_json(service.decide(mission_id, "approve"))

    @app.post("/api/mission/{mission_id}/reject")
    def reject(mission_id: str):
        return _record_json(service.decide(mission_id, "reject"))

    @app.post("/api/mission/{mission_id}/run")
    def run_mission(mission_id: str):
        record = service.get(mission_id)
        if record.plan.status != "approved":
            raise sim.PlanNotApproved(
                f"mission {mission_id} is {record.plan.status}")
        bus = FrameBus()
        with buses_lock:
            buses[mission_id] = bus

        def worker():
            try:
                service.run(mission_id, on_frame=bus.publish,
                            on_done=bus.finish)
            except Exception as exc:  # surfaced through the stream
                bus.finish(f"error: {exc}")

        threading.Thread(target=worker, daemon=True).start()
        return {"id": mission_id, "status": "running"}

    @app.get("/api/mission/{mission_id}/stream")
    def stream(mission_id: str):
        record = service.get(mission_id)

        def from_bus(bus):
            for event, payload in bus.follow():
                if event == "frame":
                    yield _sse("frame", payload.as_dict())
                else:
                    yield _sse("done", {"outcome": payload})

        def from_file(path, outcome):
            with open(path) as fh:
                for line in fh:
                    if line.strip():
                        yield _sse("frame", json.loads(line))
            yield _sse("done", {"outcome": outcome})

        with buses_lock:
            bus = buses.get(mission_id)
        if bus is not None and not bus.done:
            gen = from_bus(bus)
        elif record.trajectory_path and \
                os.path.exists(record.trajectory_path):
            gen = from_file(record.trajectory_path, record.plan.status)
        elif bus is not None:
            gen = from_bus(bus)
        else:
            return error(409, f"mission {mission_id} has not run",
                         "no_stream")
        return StreamingResponse(gen, media_type="text/event-stream")

    @app.get("/api/mission/{mission_id}/trajectory")
    def trajectory(mission_id: str):
        record = service.get(mission_id)
        if not record.trajectory_path or \
                not os.path.exists(record.trajectory_path):
            return error(404, "no trajectory for this mission",
                         "not_found")
        return FileResponse(record.trajectory_path,
                            media_type="application/jsonl")

    if os.path.isdir(STATIC_DIR):
        app.mount("/", StaticFiles(directory=STATIC_DIR, html=True),
                  name="console")

    return app
