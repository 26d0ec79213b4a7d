/** Context menu and exception-window rendering (plain DOM strings). */

import type { ConsoleViewModel, FeedEntry } from "./state";

const ITEM_LABELS: Record<string, string> = {
  drag_place: "Drag / place",
  park: "Park",
  compute_optimal_flow: "Compute optimal flow",
  anchor: "Anchor",
  release: "Release",
};

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

export function renderMenu(model: ConsoleViewModel): string {
  const menu = model.menu;
  if (!menu) return "";
  if (menu.fault !== null) {
    return (
      `<div class="menu fault" data-menu-robot="${esc(menu.robotId)}">` +
      `<div class="menu-header">${esc(menu.robotId)}</div>` +
      `<div class="fault-notice">${esc(menu.fault)}</div>` +
      `<button data-action="open-exceptions">Open exception window</button>` +
      `</div>`
    );
  }
  const items = menu.items
    .map(
      (item) =>
        `<button class="menu-item" data-action="menu" data-item="${esc(item)}">` +
        `${esc(ITEM_LABELS[item] ?? item)}</button>`,
    )
    .join("");
  return (
    `<div class="menu" data-menu-robot="${esc(menu.robotId)}">` +
    `<div class="menu-header">${esc(menu.robotId)} <span class="scale-readout">${esc(menu.scaleLabel)}</span></div>` +
    items +
    `</div>`
  );
}

export function renderFeedEntry(entry: FeedEntry, acknowledgeable: boolean): string {
  const e = entry.event;
  const causes = e.causes.length ? ` [${e.causes.map(esc).join(", ")}]` : "";
  const ack = acknowledgeable
    ? `<button data-action="acknowledge" data-robot="${esc(e.robot_id)}">Acknowledge</button>`
    : "";
  return (
    `<li class="feed-entry" data-seq="${entry.seq}">` +
    `<span class="badge badge-${esc(e.to_state.toLowerCase())}">${esc(e.to_state)}</span> ` +
    `<strong>${esc(e.robot_id)}</strong> ${esc(e.from_state)} &rarr; ${esc(e.to_state)}${causes}` +
    ` <span class="ts">t=${e.timestamp}</span>${ack}</li>`
  );
}

export function renderExceptionWindow(model: ConsoleViewModel): string {
  const entries = model
    .feedNewestFirst()
    .map((entry) => {
      const robot = model.robots.get(entry.event.robot_id);
      return renderFeedEntry(entry, Boolean(robot?.acknowledgeable));
    })
    .join("");
  const status = model.connected ? "" : `<div class="stream-status">stream reconnecting&hellip;</div>`;
  return `${status}<ul class="feed">${entries}</ul>`;
}

export function renderBanner(model: ConsoleViewModel): string {
  return model.banner ? `<div class="banner">${esc(model.banner)}</div>` : "";
}
