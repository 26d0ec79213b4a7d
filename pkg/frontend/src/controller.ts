/**
 * Interaction logic between view model and gateway, DOM-free so the same
 * paths run in the browser and in headless tests against a live server.
 */

import type { GatewayClient, StreamHandle } from "./api";
import type { ConsoleViewModel } from "./state";
import type { InterpreterResponse } from "./types";

const STREAM_KINDS = "gps_fix,exception_event,robot_snapshot";

export class ConsoleController {
  private stream: StreamHandle | null = null;

  constructor(
    private readonly client: GatewayClient,
    readonly model: ConsoleViewModel,
  ) {}

  async start(): Promise<void> {
    try {
      const [xml, robots] = await Promise.all([this.client.fetchMapXml(), this.client.fetchRobots()]);
      this.model.loadMap(xml);
      this.model.loadRobots(robots);
    } catch (err) {
      this.model.setBanner(`gateway unreachable: ${(err as Error).message}`);
      return;
    }
    this.stream = this.client.openStream(
      0,
      (frame) => this.model.applyFrame(frame),
      (connected) => {
        this.model.setConnected(connected);
        if (connected && this.model.lastSeq > 0) {
          // lossless feed across reconnects: merge anything we missed
          this.client
            .fetchLog(this.model.lastSeq, STREAM_KINDS)
            .then((frames) => this.model.mergeFeedHistory(frames))
            .catch(() => undefined);
        }
      },
    );
  }

  stop(): void {
    this.stream?.close();
    this.stream = null;
  }

  async refreshMap(): Promise<void> {
    try {
      this.model.loadMap(await this.client.fetchMapXml());
    } catch (err) {
      this.model.setBanner(`map refresh failed: ${(err as Error).message}`);
    }
  }

  /** Robot clicked: ask the interpreter, render menu or fault notice. */
  async clickRobot(robotId: string): Promise<InterpreterResponse | null> {
    const result = await this.client.postEvent(robotId, { type: "click_on_robot" });
    if (result.status === 200) {
      const response = result.body as InterpreterResponse;
      this.model.showMenuFromResponse(robotId, response);
      return response;
    }
    if (result.status === 409) {
      this.model.showFaultNotice(robotId, String((result.body as { detail?: unknown }).detail ?? "robot faulted"));
      return null;
    }
    this.model.setBanner(`click failed: HTTP ${result.status}`);
    return null;
  }

  /**
   * Drop a dragged robot: exactly one DragRobot followed by exactly one
   * PlaceRobot. Drops outside the mapped area snap back without any
   * command; a server rejection also snaps back.
   */
  async dropRobot(robotId: string, lat: number, lon: number): Promise<"dispatched" | "snapback"> {
    if (!this.model.insideMap(lat, lon)) {
      this.model.endDrag();
      return "snapback";
    }
    const drag = await this.client.postEvent(robotId, {
      type: "drag_robot",
      target: { lat, lon },
    });
    if (drag.status !== 200) {
      this.model.endDrag();
      return "snapback";
    }
    const place = await this.client.postEvent(robotId, { type: "place_robot" });
    this.model.endDrag();
    if (place.status !== 200) return "snapback";
    const response = place.body as InterpreterResponse;
    if (response.response === "dispatched") {
      this.model.showRouteFromDispatch(robotId, response);
      return "dispatched";
    }
    return "snapback";
  }

  async selectMenuItem(robotId: string, item: string): Promise<InterpreterResponse | null> {
    this.model.closeMenu();
    const result = await this.client.postEvent(robotId, { type: "menu_select", item });
    if (result.status !== 200) {
      this.model.setBanner(`menu action failed: HTTP ${result.status}`);
      return null;
    }
    const response = result.body as InterpreterResponse;
    if (response.response === "dispatched") {
      this.model.showRouteFromDispatch(robotId, response);
    }
    return response;
  }

  async acknowledge(robotId: string): Promise<boolean> {
    const result = await this.client.acknowledge(robotId);
    return result.status === 200;
  }
}
