/**
 * Console view model.
 *
 * Authoritative state only ever enters through server payloads: snapshots,
 * stream frames, and interpreter responses. The drag ghost is the single
 * piece of client-local state and it never touches a marker position.
 */

import { parseMapXml } from "./mdl";
import type {
  ExceptionEventPayload,
  GpsFixPayload,
  InterpreterResponse,
  MapGeometry,
  Position,
  RobotSnapshot,
  StreamFrame,
} from "./types";

export interface FeedEntry {
  seq: number;
  event: ExceptionEventPayload;
}

export interface MenuState {
  robotId: string;
  items: string[];
  scaleLabel: string;
  fault: string | null; // fault notice replaces actionable items
}

export interface DragGhost {
  robotId: string;
  lat: number;
  lon: number;
}

export interface RouteHighlight {
  robotId: string;
  points: Position[];
}

type Listener = () => void;

export class ConsoleViewModel {
  geometry: MapGeometry | null = null;
  robots = new Map<string, RobotSnapshot>();
  feed: FeedEntry[] = []; // ascending seq; rendering shows newest first
  lastSeq = 0;
  menu: MenuState | null = null;
  ghost: DragGhost | null = null;
  routes = new Map<string, RouteHighlight>();
  banner: string | null = null;
  connected = false;

  private listeners: Listener[] = [];

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify(): void {
    for (const l of this.listeners) l();
  }

  // ------------------------------------------------------- server payloads

  loadMap(xmlText: string): void {
    try {
      this.geometry = parseMapXml(xmlText);
      this.banner = null;
    } catch (err) {
      // keep the previous view; surface the failure
      this.banner = `map load failed: ${(err as Error).message}`;
    }
    this.notify();
  }

  loadRobots(snapshots: RobotSnapshot[]): void {
    for (const snap of snapshots) this.robots.set(snap.id, snap);
    this.notify();
  }

  applyFrame(frame: StreamFrame): void {
    if (frame.seq <= this.lastSeq && this.feed.some((e) => e.seq === frame.seq)) return;
    this.lastSeq = Math.max(this.lastSeq, frame.seq);
    if (frame.kind === "robot_snapshot") {
      const snap = frame.payload as unknown as RobotSnapshot;
      this.robots.set(snap.id, snap);
      this.maybeClearRoute(snap);
    } else if (frame.kind === "gps_fix") {
      const fix = frame.payload as unknown as GpsFixPayload;
      const robot = this.robots.get(fix.robot_id);
      if (robot) {
        robot.position = { lat: fix.lat, lon: fix.lon, depth: fix.depth };
        robot.last_fix_time = fix.timestamp;
      }
    } else if (frame.kind === "exception_event") {
      this.insertFeedEntry({ seq: frame.seq, event: frame.payload as unknown as ExceptionEventPayload });
    }
    this.notify();
  }

  /** Gap-fill after a reconnect: merge history by seq, duplicates dropped. */
  mergeFeedHistory(frames: StreamFrame[]): void {
    for (const frame of frames) {
      if (frame.kind !== "exception_event") continue;
      this.insertFeedEntry({ seq: frame.seq, event: frame.payload as unknown as ExceptionEventPayload });
      this.lastSeq = Math.max(this.lastSeq, frame.seq);
    }
    this.notify();
  }

  private insertFeedEntry(entry: FeedEntry): void {
    if (this.feed.some((e) => e.seq === entry.seq)) return;
    const at = this.feed.findIndex((e) => e.seq > entry.seq);
    if (at < 0) this.feed.push(entry);
    else this.feed.splice(at, 0, entry);
  }

  /** Feed for display: newest first, exactly the server order reversed. */
  feedNewestFirst(): FeedEntry[] {
    return [...this.feed].reverse();
  }

  // ------------------------------------------------------------ interpreter

  showMenuFromResponse(robotId: string, response: InterpreterResponse): void {
    const scale = response.scale_denominator;
    this.menu = {
      robotId,
      items: [...(response.items ?? [])], // server-defined, never hardcoded
      scaleLabel: scale === null || scale === undefined ? "no scale" : `1:${scale}`,
      fault: null,
    };
    this.notify();
  }

  showFaultNotice(robotId: string, detail: string): void {
    this.menu = { robotId, items: [], scaleLabel: "", fault: detail };
    this.notify();
  }

  closeMenu(): void {
    this.menu = null;
    this.notify();
  }

  showRouteFromDispatch(robotId: string, response: InterpreterResponse): void {
    const points: Position[] = [];
    for (const cmd of response.commands ?? []) {
      if (cmd.cmd === "move_to" && cmd.target) {
        points.push({ lat: cmd.target.lat, lon: cmd.target.lon, depth: cmd.target.depth ?? 0 });
      }
    }
    if (points.length > 0) {
      this.routes.set(robotId, { robotId, points }); // replaces any prior highlight
    } else {
      this.routes.delete(robotId);
    }
    this.notify();
  }

  private maybeClearRoute(snap: RobotSnapshot): void {
    const route = this.routes.get(snap.id);
    if (!route || route.points.length === 0) return;
    const goal = route.points[route.points.length - 1];
    const meters = approxDistanceM(snap.position, goal);
    if (meters <= 6.0 || snap.parked_at !== null) this.routes.delete(snap.id);
  }

  // ------------------------------------------------------------- drag ghost

  beginDrag(robotId: string): void {
    const robot = this.robots.get(robotId);
    if (!robot) return;
    this.ghost = { robotId, lat: robot.position.lat, lon: robot.position.lon };
    this.notify();
  }

  moveGhost(lat: number, lon: number): void {
    if (!this.ghost) return;
    this.ghost = { ...this.ghost, lat, lon };
    this.notify();
  }

  endDrag(): DragGhost | null {
    const ghost = this.ghost;
    this.ghost = null;
    this.notify();
    return ghost;
  }

  /** Pre-check for drops: inside the rendered map area? */
  insideMap(lat: number, lon: number): boolean {
    if (!this.geometry) return false;
    return this.geometry.scaleRegions.some(
      (r) => r.latMin <= lat && lat <= r.latMax && r.lonMin <= lon && lon <= r.lonMax,
    );
  }

  setConnected(connected: boolean): void {
    this.connected = connected;
    this.notify();
  }

  setBanner(message: string | null): void {
    this.banner = message;
    this.notify();
  }

  /** Marker badge; guard-owned states are prefixed so a fault badge can
   * never be confused with an operator-anchored/parked one. */
  badgeFor(robotId: string): string {
    const robot = this.robots.get(robotId);
    if (!robot) return "unknown";
    if (robot.guard_state !== "Nominal") return `fault-${robot.guard_state.toLowerCase()}`;
    if (robot.parked_at !== null) return "parked";
    if (robot.anchored) return "anchored";
    return "nominal";
  }

  isFaulted(robotId: string): boolean {
    return this.badgeFor(robotId).startsWith("fault-");
  }
}

const METERS_PER_DEG_LAT = 111_194.9;

export function approxDistanceM(a: Position, b: Position): number {
  const dy = (a.lat - b.lat) * METERS_PER_DEG_LAT;
  const dx = (a.lon - b.lon) * METERS_PER_DEG_LAT * Math.cos((a.lat * Math.PI) / 180);
  return Math.hypot(dx, dy);
}
