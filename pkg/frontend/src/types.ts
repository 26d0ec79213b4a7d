/** Wire types mirroring the gateway's JSON schemas. */

export interface Position {
  lat: number;
  lon: number;
  depth: number;
}

export interface RobotSnapshot {
  id: string;
  position: Position;
  velocity: number[];
  anchored: boolean;
  parked_at: string | null;
  fuel: number;
  failures: Record<string, boolean>;
  last_fix_time: number | null;
  guard_state: string;
  causes: string[];
  acknowledgeable: boolean;
}

export interface ExceptionEventPayload {
  robot_id: string;
  from_state: string;
  to_state: string;
  causes: string[];
  timestamp: number;
}

export interface GpsFixPayload {
  robot_id: string;
  lat: number;
  lon: number;
  depth: number;
  timestamp: number;
}

export type FrameKind = "gps_fix" | "exception_event" | "robot_snapshot";

export interface StreamFrame {
  seq: number;
  timestamp: number;
  kind: FrameKind;
  payload: Record<string, unknown>;
}

export interface InterpreterResponse {
  response: "context_menu" | "drag_started" | "dispatched" | "rejected";
  items?: string[];
  scale_denominator?: number | null;
  robot_id?: string;
  commands?: CommandJson[];
  reason?: string;
}

export interface CommandJson {
  cmd: string;
  target?: { lat: number; lon: number; depth?: number };
  speed?: number;
  terminal?: string;
}

export type UIEventBody =
  | { type: "click_on_robot" }
  | { type: "drag_robot"; target: { lat: number; lon: number; depth?: number } }
  | { type: "place_robot" }
  | { type: "menu_select"; item: string };

/** Geometry extracted from the served MDL document. */

export interface MapLandmark {
  id: string;
  kind: string;
  lat: number;
  lon: number;
  depth: number;
  label: string;
}

export interface MapFlow {
  id: string;
  from: string;
  to: string;
  waypoints: string[];
}

export interface MapScaleRegion {
  id: string;
  latMin: number;
  lonMin: number;
  latMax: number;
  lonMax: number;
  denominator: number;
}

export interface MapAnnotation {
  robot: string;
  flow: string | null;
  lookahead: string | null;
  passed: string[];
}

export interface MapGeometry {
  id: string;
  name: string;
  landmarks: MapLandmark[];
  flows: MapFlow[];
  scaleRegions: MapScaleRegion[];
  annotations: MapAnnotation[];
}
