/**
 * Minimal reader for the gateway's MDL XML. The grammar is closed and the
 * server emits a canonical form, so a small tokenizer is enough; no DOM
 * dependency means the same code runs in the browser and under node tests.
 */

import type { MapAnnotation, MapFlow, MapGeometry, MapLandmark, MapScaleRegion } from "./types";

interface Tag {
  name: string;
  attrs: Record<string, string>;
  closing: boolean;
  selfClosed: boolean;
}

const ENTITIES: Record<string, string> = {
  amp: "&",
  lt: "<",
  gt: ">",
  quot: '"',
  apos: "'",
};

function decodeEntities(raw: string): string {
  return raw.replace(/&(#x?[0-9a-fA-F]+|[a-z]+);/g, (whole, body: string) => {
    if (body.startsWith("#x") || body.startsWith("#X")) {
      return String.fromCodePoint(parseInt(body.slice(2), 16));
    }
    if (body.startsWith("#")) {
      return String.fromCodePoint(parseInt(body.slice(1), 10));
    }
    return ENTITIES[body] ?? whole;
  });
}

function* tags(text: string): Generator<Tag> {
  let i = 0;
  while (i < text.length) {
    const open = text.indexOf("<", i);
    if (open < 0) return;
    const close = text.indexOf(">", open);
    if (close < 0) throw new Error("unterminated tag");
    const body = text.slice(open + 1, close);
    i = close + 1;
    if (body.startsWith("?") || body.startsWith("!")) continue;
    if (body.startsWith("/")) {
      yield { name: body.slice(1).trim(), attrs: {}, closing: true, selfClosed: false };
      continue;
    }
    const selfClosed = body.endsWith("/");
    const inner = selfClosed ? body.slice(0, -1) : body;
    const nameMatch = inner.match(/^\s*([A-Za-z_][\w.-]*)/);
    if (!nameMatch) throw new Error(`bad tag: <${body}>`);
    const attrs: Record<string, string> = {};
    const attrRe = /([A-Za-z_][\w.-]*)\s*=\s*"([^"]*)"|([A-Za-z_][\w.-]*)\s*=\s*'([^']*)'/g;
    attrRe.lastIndex = nameMatch[0].length;
    let m: RegExpExecArray | null;
    while ((m = attrRe.exec(inner)) !== null) {
      if (m[1] !== undefined) attrs[m[1]] = decodeEntities(m[2]);
      else attrs[m[3]] = decodeEntities(m[4]);
    }
    yield { name: nameMatch[1], attrs, closing: false, selfClosed };
  }
}

const need = (attrs: Record<string, string>, key: string): string => {
  const v = attrs[key];
  if (v === undefined) throw new Error(`missing attribute ${key}`);
  return v;
};

export function parseMapXml(text: string): MapGeometry {
  const landmarks: MapLandmark[] = [];
  const flows: MapFlow[] = [];
  const scaleRegions: MapScaleRegion[] = [];
  const annotations: MapAnnotation[] = [];
  let mapId = "";
  let mapName = "";
  let currentFlow: MapFlow | null = null;
  let currentAnnotation: MapAnnotation | null = null;
  let sawMap = false;

  for (const tag of tags(text)) {
    if (tag.closing) {
      if (tag.name === "Flow") currentFlow = null;
      if (tag.name === "Annotation") currentAnnotation = null;
      continue;
    }
    switch (tag.name) {
      case "Map":
        sawMap = true;
        mapId = need(tag.attrs, "id");
        mapName = tag.attrs["name"] ?? "";
        break;
      case "Landmark":
        landmarks.push({
          id: need(tag.attrs, "id"),
          kind: need(tag.attrs, "kind"),
          lat: parseFloat(need(tag.attrs, "lat")),
          lon: parseFloat(need(tag.attrs, "lon")),
          depth: parseFloat(tag.attrs["depth"] ?? "0"),
          label: tag.attrs["label"] ?? "",
        });
        break;
      case "ScaleRegion":
        scaleRegions.push({
          id: need(tag.attrs, "id"),
          latMin: parseFloat(need(tag.attrs, "lat_min")),
          lonMin: parseFloat(need(tag.attrs, "lon_min")),
          latMax: parseFloat(need(tag.attrs, "lat_max")),
          lonMax: parseFloat(need(tag.attrs, "lon_max")),
          denominator: parseInt(need(tag.attrs, "denominator"), 10),
        });
        break;
      case "Flow": {
        const flow: MapFlow = {
          id: need(tag.attrs, "id"),
          from: need(tag.attrs, "from"),
          to: need(tag.attrs, "to"),
          waypoints: [],
        };
        flows.push(flow);
        if (!tag.selfClosed) currentFlow = flow;
        break;
      }
      case "Waypoint":
        if (!currentFlow) throw new Error("Waypoint outside Flow");
        currentFlow.waypoints.push(need(tag.attrs, "ref"));
        break;
      case "Annotation": {
        const annotation: MapAnnotation = {
          robot: need(tag.attrs, "robot"),
          flow: tag.attrs["flow"] ?? null,
          lookahead: tag.attrs["lookahead"] ?? null,
          passed: [],
        };
        annotations.push(annotation);
        if (!tag.selfClosed) currentAnnotation = annotation;
        break;
      }
      case "Passed":
        if (!currentAnnotation) throw new Error("Passed outside Annotation");
        currentAnnotation.passed.push(need(tag.attrs, "ref"));
        break;
      default:
        throw new Error(`unknown element <${tag.name}>`);
    }
  }
  if (!sawMap || landmarks.length === 0) {
    throw new Error("not an MDL map document");
  }
  return { id: mapId, name: mapName, landmarks, flows, scaleRegions, annotations };
}
