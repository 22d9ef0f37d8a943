"""Deterministic 2D shepherding simulator.

One sheepdog pushes a flock of sheep toward a goal inside a rectangular
paddock. Sheep follow a weighted-force model (dog repulsion, local
centre-of-mass attraction while threatened, close-range separation,
inertia, seeded noise); the dog switches between driving the flock's
global centre of mass toward the goal and collecting the sheep farthest
from it, with the switch at radius r_agent * N^(2/3). The published system
this follows names collect and drive but prints no equations, so every
constant lives in the defaults file rather than the code.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from .intent import MissionPlan

RNG_ALGORITHM = "numpy-pcg64"
KNOWN_BEHAVIOURS = ("collect", "drive")


class SimError(Exception):
    pass


class PlanNotApproved(SimError):
    pass


class BehaviourUnknown(SimError):
    pass


class AlreadyComplete(SimError):
    pass


@dataclass(frozen=True)
class SimConfig:
    paddock: tuple = (50.0, 50.0)
    goal: tuple = (40.0, 40.0)
    goal_radius: float = 8.0
    n_sheep: int = 20
    seed: int = 0
    max_steps: int = 5000
    r_dog: float = 15.0
    r_agent: float = 2.0
    n_neighbours: int = 10
    w_repel_dog: float = 1.0
    w_attract_lcm: float = 1.05
    w_repel_sheep: float = 2.0
    w_inertia: float = 0.5
    w_noise: float = 0.3
    v_sheep: float = 1.0
    v_dog: float = 1.5
    p_graze: float = 0.05
    v_graze: float = 0.3
    d_drive: float = 9.0
    d_collect: float = 3.0
    approach_gap: float = 4.0
    behaviours_allowed: tuple = ("collect", "drive")

    def validate(self):
        positive = ("goal_radius", "r_dog", "r_agent", "w_repel_dog",
                    "w_attract_lcm", "w_repel_sheep", "w_inertia",
                    "v_sheep", "v_dog", "d_drive", "d_collect",
                    "approach_gap")
        for name in positive:
            if getattr(self, name) <= 0:
                raise SimError(f"{name} must be > 0")
        if self.w_noise < 0:
            raise SimError("w_noise must be >= 0")
        if not 0.0 <= self.p_graze <= 1.0:
            raise SimError("p_graze must be in [0, 1]")
        if self.v_graze < 0:
            raise SimError("v_graze must be >= 0")
        if self.v_dog <= self.v_sheep:
            raise SimError("v_dog must exceed v_sheep")
        for b in self.behaviours_allowed:
            if b not in KNOWN_BEHAVIOURS:
                raise BehaviourUnknown(b)

    def cluster_radius(self):
        return self.r_agent * self.n_sheep ** (2.0 / 3.0)


_FIELD_TYPES = {
    "paddock_width": float, "paddock_height": float, "goal_x": float,
    "goal_y": float, "goal_radius": float, "n_sheep": int, "seed": int,
    "max_steps": int, "r_dog": float, "r_agent": float,
    "n_neighbours": int, "w_repel_dog": float, "w_attract_lcm": float,
    "w_repel_sheep": float, "w_inertia": float, "w_noise": float,
    "v_sheep": float, "p_graze": float, "v_graze": float, "v_dog": float,
    "d_drive": float, "d_collect": float, "approach_gap": float,
}


def load_config(text: str) -> SimConfig:
    """Parse the plain key=value defaults file."""
    values = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise SimError(f"line {line_no}: expected key=value")
        key, _, raw = stripped.partition("=")
        key, raw = key.strip(), raw.strip()
        if key not in _FIELD_TYPES:
            raise SimError(f"line {line_no}: unknown key {key!r}")
        values[key] = _FIELD_TYPES[key](raw)
    cfg = SimConfig(
        paddock=(values.pop("paddock_width", 50.0),
                 values.pop("paddock_height", 50.0)),
        goal=(values.pop("goal_x", 40.0), values.pop("goal_y", 40.0)),
        **values)
    cfg.validate()
    return cfg


@dataclass
class SimState:
    t: int
    sheep: np.ndarray       # (N, 2)
    dog: np.ndarray         # (2,)
    headings: np.ndarray    # (N, 2), previous unit directions
    rng: np.random.Generator
    active_behaviour: str = "idle"
    complete: bool = False
    outcome: str = "pending"


@dataclass(frozen=True)
class Frame:
    t: int
    dog: tuple
    sheep: tuple          # ((x, y), ...)
    gcm: tuple
    behaviour: str
    complete: bool

    def as_dict(self):
        return {"t": self.t, "dog": list(self.dog),
                "sheep": [list(p) for p in self.sheep],
                "gcm": list(self.gcm), "behaviour": self.behaviour,
                "complete": self.complete}


def config_for_plan(plan: MissionPlan, defaults: SimConfig) -> SimConfig:
    cfg = replace(defaults,
                  paddock=plan.paddock,
                  goal=plan.goal,
                  n_sheep=len(plan.flock),
                  seed=plan.seed,
                  max_steps=plan.max_steps,
                  behaviours_allowed=tuple(plan.behaviours))
    cfg.validate()
    return cfg


def init(plan: MissionPlan, defaults: SimConfig) -> SimState:
    if plan.status != "approved":
        raise PlanNotApproved(f"plan {plan.id} is {plan.status}")
    cfg = config_for_plan(plan, defaults)

    w, h = cfg.paddock
    gx, gy = cfg.goal
    rng = np.random.default_rng(cfg.seed)

    # sheep spawn in the quadrant whose centre is farthest from the goal
    quadrants = [(0.0, 0.0), (w / 2, 0.0), (0.0, h / 2), (w / 2, h / 2)]
    qx, qy = max(quadrants,
                 key=lambda q: (q[0] + w / 4 - gx) ** 2
                 + (q[1] + h / 4 - gy) ** 2)
    sheep = np.column_stack([
        rng.uniform(qx, qx + w / 2, cfg.n_sheep),
        rng.uniform(qy, qy + h / 2, cfg.n_sheep),
    ])

    # dog starts at the corner nearest the goal's opposite point
    opposite = (w - gx, h - gy)
    corners = [(0.0, 0.0), (w, 0.0), (0.0, h), (w, h)]
    dog = np.array(min(
        corners, key=lambda c: (c[0] - opposite[0]) ** 2
        + (c[1] - opposite[1]) ** 2))

    return SimState(t=0, sheep=sheep, dog=dog,
                    headings=np.zeros((cfg.n_sheep, 2)), rng=rng)


def _unit(v):
    n = np.linalg.norm(v)
    return v / n if n > 1e-12 else np.zeros_like(v)


def step(s: SimState, cfg: SimConfig) -> SimState:
    if s.complete:
        raise AlreadyComplete(f"run finished at t={s.t} ({s.outcome})")

    n = len(s.sheep)
    w, h = cfg.paddock
    goal = np.asarray(cfg.goal)

    sheep = s.sheep.copy()
    headings = s.headings.copy()
    rng = s.rng

    noise_angles = rng.uniform(0.0, 2.0 * np.pi, n)
    graze_draws = rng.uniform(0.0, 1.0, n)
    diffs = sheep[:, None, :] - sheep[None, :, :]
    dists = np.linalg.norm(diffs, axis=2)

    new_sheep = sheep.copy()
    for i in range(n):
        noise = np.array([np.cos(noise_angles[i]),
                          np.sin(noise_angles[i])])
        to_dog = sheep[i] - s.dog
        dog_dist = np.linalg.norm(to_dog)
        if dog_dist >= cfg.r_dog:
            # grazing: an unthreatened sheep mostly stands still, with an
            # occasional short wander
            if graze_draws[i] < cfg.p_graze:
                headings[i] = noise
                new_sheep[i] = sheep[i] + cfg.v_graze * noise
            continue
        force = cfg.w_repel_dog * _unit(to_dog)
        others = np.argsort(dists[i])
        others = [j for j in others if j != i][:cfg.n_neighbours]
        if others:
            lcm = sheep[others].mean(axis=0)
            force += cfg.w_attract_lcm * _unit(lcm - sheep[i])
        close = [j for j in range(n)
                 if j != i and dists[i, j] < cfg.r_agent]
        for j in close:
            force += cfg.w_repel_sheep * _unit(sheep[i] - sheep[j])
        force += cfg.w_inertia * headings[i]
        force += cfg.w_noise * noise
        direction = _unit(force)
        if np.any(direction):
            headings[i] = direction
            new_sheep[i] = sheep[i] + cfg.v_sheep * direction
    new_sheep[:, 0] = np.clip(new_sheep[:, 0], 0.0, w)
    new_sheep[:, 1] = np.clip(new_sheep[:, 1], 0.0, h)

    # dog behaviour selection against the pre-move flock
    gcm = sheep.mean(axis=0)
    clustered = bool(np.all(np.linalg.norm(sheep - gcm, axis=1)
                            <= cfg.cluster_radius()))
    behaviour = "idle"
    target = None
    if clustered and "drive" in cfg.behaviours_allowed:
        behaviour = "drive"
        target = gcm + cfg.d_drive * _unit(gcm - goal)
    elif "collect" in cfg.behaviours_allowed:
        behaviour = "collect"
        far = int(np.argmax(np.linalg.norm(sheep - gcm, axis=1)))
        target = sheep[far] + cfg.d_collect * _unit(sheep[far] - gcm)

    dog = s.dog.copy()
    if target is not None:
        to_target = target - dog
        dist = np.linalg.norm(to_target)
        move = to_target if dist <= cfg.v_dog else \
            cfg.v_dog * to_target / dist
        candidate = dog + move
        cur_gap = float(np.min(np.linalg.norm(new_sheep - dog, axis=1)))
        new_gap = float(np.min(np.linalg.norm(new_sheep - candidate,
                                              axis=1)))
        if new_gap >= cfg.approach_gap or new_gap > cur_gap:
            dog = candidate
    dog[0] = min(max(dog[0], 0.0), w)
    dog[1] = min(max(dog[1], 0.0), h)

    t = s.t + 1
    complete, outcome = False, "pending"
    if np.all(np.linalg.norm(new_sheep - goal, axis=1) <= cfg.goal_radius):
        complete, outcome = True, "succeeded"
    elif t >= cfg.max_steps:
        complete, outcome = True, "failed"

    return SimState(t=t, sheep=new_sheep, dog=dog, headings=headings,
                    rng=rng, active_behaviour=behaviour,
                    complete=complete, outcome=outcome)


def frame_of(s: SimState) -> Frame:
    return Frame(
        t=s.t,
        dog=tuple(float(v) for v in s.dog),
        sheep=tuple(tuple(float(v) for v in p) for p in s.sheep),
        gcm=tuple(float(v) for v in s.sheep.mean(axis=0)),
        behaviour=s.active_behaviour,
        complete=s.complete,
    )


def run(plan: MissionPlan, defaults: SimConfig):
    """Iterate to completion; returns (final state, full trajectory)."""
    cfg = config_for_plan(plan, defaults)
    s = init(plan, defaults)
    trajectory = []
    while not s.complete:
        s = step(s, cfg)
        trajectory.append(frame_of(s))
    return s, trajectory


def export_trajectory(trajectory) -> str:
    return "".join(json.dumps(f.as_dict()) + "\n" for f in trajectory)


def parse_trajectory(text: str):
    frames = []
    for line in text.splitlines():
        if not line.strip():
            continue
        d = json.loads(line)
        frames.append(Frame(
            t=d["t"], dog=tuple(d["dog"]),
            sheep=tuple(tuple(p) for p in d["sheep"]),
            gcm=tuple(d["gcm"]), behaviour=d["behaviour"],
            complete=d["complete"]))
    return frames
