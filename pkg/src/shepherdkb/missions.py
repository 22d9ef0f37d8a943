"""Mission lifecycle shared by the CLI and the HTTP service.

Both surfaces drive exactly this code, so the approval gate cannot differ
between them. Per-mission writes go through the store's compare-and-swap;
the ontology snapshot only ever grows (flock registration) and is swapped
atomically under a lock.
"""

from __future__ import annotations

import os
import threading

from . import builtin, sim, store
from .intent import (IntentRequest, brief, decide as decide_plan,
                     register_flock, resolve_intent)
from .reasoner import classify
from .store import MissionRecord


def default_store_dir():
    return os.environ.get(store.DEFAULT_STORE_ENV, "missions")


def load_defaults(path=None) -> sim.SimConfig:
    if path is None:
        text = builtin.data_text("defaults.kbxsim")
    else:
        with open(path) as fh:
            text = fh.read()
    return sim.load_config(text)


class MissionService:
    def __init__(self, store_dir=None, defaults=None, ontology=None):
        self.store_dir = store_dir or default_store_dir()
        self.defaults = defaults or load_defaults()
        self._lock = threading.Lock()
        self.ontology = ontology or builtin.load_builtin()
        self.model = classify(self.ontology)

    def create(self, intent_text, goal, flock_size, seed=0, max_steps=None):
        req = IntentRequest(
            intent_text=intent_text,
            goal=tuple(goal),
            flock_size=flock_size,
            paddock=(self.defaults.paddock[0], self.defaults.paddock[1]),
            max_steps=max_steps or self.defaults.max_steps,
            seed=seed,
        )
        plan = resolve_intent(self.model, req)
        with self._lock:
            extended = register_flock(self.ontology, plan.flock)
            if extended is not self.ontology:
                self.ontology = extended
                self.model = classify(extended)
        mission_brief = brief(plan, self.model)
        plan = plan.advance("briefed")
        record = MissionRecord(
            plan=plan, brief=mission_brief,
            config=_config_dict(sim.config_for_plan(plan, self.defaults)))
        store.store(record, self.store_dir)
        return store.load(self.store_dir, plan.id)

    def get(self, mission_id) -> MissionRecord:
        return store.load(self.store_dir, mission_id)

    def decide(self, mission_id, decision) -> MissionRecord:
        record = self.get(mission_id)
        updated = decide_plan(record.plan, decision)
        new = store.MissionRecord(
            plan=updated, brief=record.brief, config=record.config,
            trajectory_path=record.trajectory_path, created=record.created,
            rng_algorithm=record.rng_algorithm, note=record.note)
        store.store(new, self.store_dir, expected_updated=record.updated)
        return self.get(mission_id)

    def run(self, mission_id, export_path=None, on_frame=None,
            on_done=None) -> MissionRecord:
        record = self.get(mission_id)
        plan = record.plan
        if plan.status != "approved":
            raise sim.PlanNotApproved(
                f"mission {mission_id} is {plan.status}")
        cfg = sim.config_for_plan(plan, self.defaults)
        trajectory_path = export_path or os.path.join(
            self.store_dir, f"{mission_id}.trajectory.jsonl")

        running = store.MissionRecord(
            plan=plan.advance("running"), brief=record.brief,
            config=record.config, trajectory_path=trajectory_path,
            created=record.created, rng_algorithm=record.rng_algorithm)
        store.store(running, self.store_dir,
                    expected_updated=record.updated)

        state = sim.init(plan, self.defaults)
        trajectory = []
        while not state.complete:
            state = sim.step(state, cfg)
            frame = sim.frame_of(state)
            trajectory.append(frame)
            if on_frame is not None:
                on_frame(frame)

        with open(trajectory_path, "w") as fh:
            fh.write(sim.export_trajectory(trajectory))

        running = self.get(mission_id)
        final = store.MissionRecord(
            plan=running.plan.advance(state.outcome), brief=running.brief,
            config=running.config, trajectory_path=trajectory_path,
            created=running.created, rng_algorithm=running.rng_algorithm)
        store.store(final, self.store_dir,
                    expected_updated=running.updated)
        if on_done is not None:
            on_done(state.outcome)
        return self.get(mission_id)


def _config_dict(cfg: sim.SimConfig):
    d = {k: getattr(cfg, k) for k in (
        "goal_radius", "n_sheep", "seed", "max_steps", "r_dog", "r_agent",
        "n_neighbours", "w_repel_dog", "w_attract_lcm", "w_repel_sheep",
        "w_inertia", "w_noise", "v_sheep", "p_graze", "v_graze", "v_dog",
        "d_drive", "d_collect", "approach_gap")}
    d["paddock"] = list(cfg.paddock)
    d["goal"] = list(cfg.goal)
    d["behaviours_allowed"] = list(cfg.behaviours_allowed)
    return d
