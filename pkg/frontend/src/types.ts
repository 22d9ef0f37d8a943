export interface Frame {
  t: number;
  dog: [number, number];
  sheep: [number, number][];
  gcm: [number, number];
  behaviour: string;
  complete: boolean;
}

export interface MissionPlan {
  id: string;
  intent: string;
  tactic: string;
  behaviours: string[];
  goal: [number, number];
  flock: string[];
  paddock: [number, number];
  max_steps: number;
  seed: number;
  status: string;
}

export interface MissionBrief {
  plan_id: string;
  narrative: string;
  inferred: Record<string, unknown>;
  warnings: string[];
}

export interface MissionRecord {
  plan: MissionPlan;
  brief: MissionBrief;
  config: Record<string, unknown>;
  trajectory_path: string | null;
  created: number;
  updated: number;
  rng_algorithm: string;
  note: string | null;
}

export interface SimDefaults {
  paddock: [number, number];
  goal: [number, number];
  goal_radius: number;
  [key: string]: unknown;
}

export interface QueryResult {
  expr: string;
  individuals: string[];
}

export interface IntentForm {
  intent: string;
  goal: [number, number];
  sheep: number;
  seed?: number;
  max_steps?: number;
}
