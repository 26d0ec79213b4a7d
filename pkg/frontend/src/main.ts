/** Console entry point: wires the view model to the DOM. */

import { GatewayClient } from "./api";
import { ConsoleController } from "./controller";
import { renderMapSvg } from "./map-view";
import { renderBanner, renderExceptionWindow, renderMenu } from "./panels";
import { fitProjection, type Projection } from "./projection";
import { ConsoleViewModel } from "./state";

export function mountConsole(root: HTMLElement, baseUrl: string): ConsoleController {
  root.innerHTML = `
    <div id="banner-slot"></div>
    <div class="layout">
      <svg id="map" width="840" height="620" role="application"></svg>
      <aside>
        <h2>Exceptions</h2>
        <div id="exception-window"></div>
      </aside>
    </div>
    <div id="menu-slot"></div>
  `;
  const svg = root.querySelector<SVGSVGElement>("#map")!;
  const menuSlot = root.querySelector<HTMLElement>("#menu-slot")!;
  const exceptionsSlot = root.querySelector<HTMLElement>("#exception-window")!;
  const bannerSlot = root.querySelector<HTMLElement>("#banner-slot")!;

  const model = new ConsoleViewModel();
  const client = new GatewayClient(baseUrl);
  const controller = new ConsoleController(client, model);

  let projection: Projection | null = null;
  let dragging: { robotId: string; moved: boolean } | null = null;

  const render = () => {
    if (model.geometry) {
      projection = fitProjection(model.geometry, 840, 620);
      svg.innerHTML = renderMapSvg(model, projection);
    }
    menuSlot.innerHTML = renderMenu(model);
    exceptionsSlot.innerHTML = renderExceptionWindow(model);
    bannerSlot.innerHTML = renderBanner(model);
  };
  model.subscribe(render);

  const geoAt = (ev: PointerEvent): [number, number] | null => {
    if (!projection) return null;
    const rect = svg.getBoundingClientRect();
    return projection.toGeo(ev.clientX - rect.left, ev.clientY - rect.top);
  };

  svg.addEventListener("pointerdown", (ev) => {
    const marker = (ev.target as Element).closest<SVGGElement>("[data-robot]");
    if (!marker) return;
    dragging = { robotId: marker.dataset.robot!, moved: false };
    model.beginDrag(dragging.robotId);
    svg.setPointerCapture(ev.pointerId);
  });

  svg.addEventListener("pointermove", (ev) => {
    if (!dragging) return;
    const geo = geoAt(ev);
    if (!geo) return;
    dragging.moved = true;
    model.moveGhost(geo[0], geo[1]); // ghost only; marker waits for the server
  });

  svg.addEventListener("pointerup", (ev) => {
    if (!dragging) return;
    const { robotId, moved } = dragging;
    dragging = null;
    const geo = geoAt(ev);
    if (!moved || !geo) {
      model.endDrag();
      void controller.clickRobot(robotId); // a click, not a drag
      return;
    }
    void controller.dropRobot(robotId, geo[0], geo[1]);
  });

  menuSlot.addEventListener("click", (ev) => {
    const button = (ev.target as Element).closest<HTMLButtonElement>("button");
    if (!button || !model.menu) return;
    const robotId = model.menu.robotId;
    if (button.dataset.action === "menu" && button.dataset.item) {
      if (button.dataset.item === "drag_place") {
        model.closeMenu(); // handled by pointer gestures on the marker
        return;
      }
      void controller.selectMenuItem(robotId, button.dataset.item);
    } else if (button.dataset.action === "open-exceptions") {
      model.closeMenu();
    }
  });

  exceptionsSlot.addEventListener("click", (ev) => {
    const button = (ev.target as Element).closest<HTMLButtonElement>("button");
    if (button?.dataset.action === "acknowledge" && button.dataset.robot) {
      void controller.acknowledge(button.dataset.robot);
    }
  });

  void controller.start();
  const refresh = setInterval(() => void controller.refreshMap(), 15_000);
  window.addEventListener("beforeunload", () => {
    clearInterval(refresh);
    controller.stop();
  });
  return controller;
}

declare global {
  interface Window {
    RIVERHELM_BASE_URL?: string;
  }
}

if (typeof document !== "undefined" && document.getElementById("console-root")) {
  mountConsole(
    document.getElementById("console-root") as HTMLElement,
    window.RIVERHELM_BASE_URL ?? "",
  );
}
