/**
 * Gateway transport: REST calls plus the push stream.
 *
 * The websocket reconnects with exponential backoff and resumes from the
 * last seen sequence number, so no frame is ever skipped or duplicated
 * across a drop. A WebSocket constructor can be injected for tests/node.
 */

import type { InterpreterResponse, RobotSnapshot, StreamFrame, UIEventBody } from "./types";

export interface PostResult {
  status: number;
  body: InterpreterResponse | { detail?: unknown };
}

type WsLike = {
  onopen: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
  close(): void;
};

export type WsFactory = (url: string) => WsLike;

export interface StreamHandle {
  close(): void;
}

export class GatewayClient {
  constructor(
    private readonly baseUrl: string,
    private readonly wsFactory?: WsFactory,
  ) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async fetchMapXml(): Promise<string> {
    const res = await fetch(this.url("/api/map"));
    if (!res.ok) throw new Error(`map fetch failed: ${res.status}`);
    return res.text();
  }

  async fetchRobots(): Promise<RobotSnapshot[]> {
    const res = await fetch(this.url("/api/robots"));
    if (!res.ok) throw new Error(`robots fetch failed: ${res.status}`);
    return res.json();
  }

  async fetchLog(fromSeq: number, kinds: string): Promise<StreamFrame[]> {
    const res = await fetch(this.url(`/api/log?from_seq=${fromSeq}&kinds=${kinds}`));
    if (!res.ok) throw new Error(`log fetch failed: ${res.status}`);
    return res.json();
  }

  async postEvent(robotId: string, event: UIEventBody): Promise<PostResult> {
    const res = await fetch(this.url(`/api/robots/${encodeURIComponent(robotId)}/events`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(event),
    });
    return { status: res.status, body: await res.json() };
  }

  async acknowledge(robotId: string, operatorId = "console"): Promise<PostResult> {
    const res = await fetch(this.url(`/api/robots/${encodeURIComponent(robotId)}/acknowledge`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ operator_id: operatorId }),
    });
    return { status: res.status, body: await res.json() };
  }

  /** Subscribe to the push stream; frames arrive in seq order. */
  openStream(
    fromSeq: number,
    onFrame: (frame: StreamFrame) => void,
    onStatus?: (connected: boolean) => void,
  ): StreamHandle {
    const wsBase = this.baseUrl.replace(/^http/, "ws");
    let lastSeq = fromSeq;
    let closed = false;
    let socket: WsLike | null = null;
    let retryMs = 250;
    let timer: ReturnType<typeof setTimeout> | null = null;

    const factory: WsFactory =
      this.wsFactory ?? ((url: string) => new WebSocket(url) as unknown as WsLike);

    const connect = () => {
      if (closed) return;
      socket = factory(`${wsBase}/api/stream?from_seq=${lastSeq}`);
      socket.onopen = () => {
        retryMs = 250;
        onStatus?.(true);
      };
      socket.onmessage = (ev) => {
        const frame = JSON.parse(String(ev.data)) as StreamFrame;
        if (frame.seq <= lastSeq) return; // duplicate across a reconnect
        lastSeq = frame.seq;
        onFrame(frame);
      };
      socket.onerror = () => undefined;
      socket.onclose = () => {
        onStatus?.(false);
        if (closed) return;
        timer = setTimeout(connect, retryMs);
        retryMs = Math.min(retryMs * 2, 10_000);
      };
    };
    connect();

    return {
      close() {
        closed = true;
        if (timer !== null) clearTimeout(timer);
        socket?.close();
      },
    };
  }
}
