/**
 * SVG map rendering: landmark glyphs by kind, directed flow polylines,
 * robot markers with state badges, drag ghost, and route highlights.
 */

import type { Projection } from "./projection";
import type { ConsoleViewModel } from "./state";
import type { MapLandmark } from "./types";

const BADGE_COLORS: Record<string, string> = {
  nominal: "#2e7d32",
  anchored: "#1565c0",
  parked: "#6a1b9a",
  "fault-anchoring": "#ef6c00",
  "fault-anchored": "#e65100",
  "fault-autoparking": "#ef6c00",
  "fault-parked": "#8d6e63",
  "fault-distress": "#c62828",
  unknown: "#616161",
};

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

function landmarkGlyph(l: MapLandmark, x: number, y: number): string {
  const label = `<text x="${x + 8}" y="${y - 6}" class="lm-label">${esc(l.id)}</text>`;
  switch (l.kind) {
    case "fuel_rendezvous_terminal":
      return `<rect x="${x - 6}" y="${y - 6}" width="12" height="12" class="lm lm-fuel"/>` + label;
    case "parking_area":
      return `<rect x="${x - 6}" y="${y - 6}" width="12" height="12" rx="3" class="lm lm-parking"/>` + label;
    case "flow_obstacle":
      return `<path d="M ${x} ${y - 7} L ${x + 7} ${y + 5} L ${x - 7} ${y + 5} Z" class="lm lm-obstacle"/>` + label;
    case "static_obstacle":
      return `<path d="M ${x - 6} ${y - 6} L ${x + 6} ${y + 6} M ${x - 6} ${y + 6} L ${x + 6} ${y - 6}" class="lm lm-static"/>` + label;
    default:
      return `<circle cx="${x}" cy="${y}" r="5" class="lm lm-marker"/>` + label;
  }
}

export function renderMapSvg(model: ConsoleViewModel, projection: Projection): string {
  const geometry = model.geometry;
  if (!geometry) return "";
  const parts: string[] = [];
  const point = new Map(geometry.landmarks.map((l) => [l.id, projection.toScreen(l.lat, l.lon)]));

  for (const flow of geometry.flows) {
    const coords = flow.waypoints
      .map((w) => point.get(w))
      .filter((p): p is [number, number] => p !== undefined);
    if (coords.length < 2) continue;
    const path = coords.map(([x, y], i) => `${i === 0 ? "M" : "L"} ${x} ${y}`).join(" ");
    parts.push(`<path d="${path}" class="flow" data-flow="${esc(flow.id)}" marker-end="url(#arrow)"/>`);
  }

  for (const route of model.routes.values()) {
    const robot = model.robots.get(route.robotId);
    if (!robot) continue;
    const coords = [projection.toScreen(robot.position.lat, robot.position.lon)].concat(
      route.points.map((p) => projection.toScreen(p.lat, p.lon)),
    );
    const path = coords.map(([x, y], i) => `${i === 0 ? "M" : "L"} ${x} ${y}`).join(" ");
    parts.push(`<path d="${path}" class="route-highlight" data-route-for="${esc(route.robotId)}"/>`);
  }

  for (const l of geometry.landmarks) {
    const [x, y] = point.get(l.id)!;
    parts.push(landmarkGlyph(l, x, y));
  }

  for (const robot of model.robots.values()) {
    const [x, y] = projection.toScreen(robot.position.lat, robot.position.lon);
    const badge = model.badgeFor(robot.id);
    const color = BADGE_COLORS[badge] ?? BADGE_COLORS.unknown;
    parts.push(
      `<g class="robot" data-robot="${esc(robot.id)}" transform="translate(${x} ${y})">` +
        `<ellipse rx="10" ry="6" fill="${color}" class="robot-hull"/>` +
        `<rect x="-2" y="-10" width="4" height="5" fill="${color}"/>` +
        `<text x="12" y="4" class="robot-label">${esc(robot.id)}</text>` +
        `</g>`,
    );
  }

  if (model.ghost) {
    const [x, y] = projection.toScreen(model.ghost.lat, model.ghost.lon);
    parts.push(
      `<g class="robot-ghost" data-ghost="${esc(model.ghost.robotId)}" transform="translate(${x} ${y})">` +
        `<ellipse rx="10" ry="6"/>` +
        `</g>`,
    );
  }

  return (
    `<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7" markerHeight="7" orient="auto-start-reverse">` +
    `<path d="M 0 0 L 10 5 L 0 10 z" class="flow-arrow"/></marker></defs>` +
    parts.join("\n")
  );
}
