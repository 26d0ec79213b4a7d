/** Equirectangular geo -> screen projection fitted to the map bounds. */

import type { MapGeometry } from "./types";

export interface Projection {
  toScreen(lat: number, lon: number): [number, number];
  toGeo(x: number, y: number): [number, number];
  width: number;
  height: number;
}

export function fitProjection(geometry: MapGeometry, width: number, height: number, margin = 24): Projection {
  let latMin = Infinity;
  let latMax = -Infinity;
  let lonMin = Infinity;
  let lonMax = -Infinity;
  for (const l of geometry.landmarks) {
    latMin = Math.min(latMin, l.lat);
    latMax = Math.max(latMax, l.lat);
    lonMin = Math.min(lonMin, l.lon);
    lonMax = Math.max(lonMax, l.lon);
  }
  for (const r of geometry.scaleRegions) {
    latMin = Math.min(latMin, r.latMin);
    latMax = Math.max(latMax, r.latMax);
    lonMin = Math.min(lonMin, r.lonMin);
    lonMax = Math.max(lonMax, r.lonMax);
  }
  const latSpan = Math.max(latMax - latMin, 1e-6);
  const lonSpan = Math.max(lonMax - lonMin, 1e-6);
  const midLat = (latMin + latMax) / 2;
  const stretch = Math.cos((midLat * Math.PI) / 180); // meters per degree ratio
  const scale = Math.min(
    (width - 2 * margin) / (lonSpan * stretch),
    (height - 2 * margin) / latSpan,
  );

  const toScreen = (lat: number, lon: number): [number, number] => [
    margin + (lon - lonMin) * stretch * scale,
    height - margin - (lat - latMin) * scale, // north is up
  ];
  const toGeo = (x: number, y: number): [number, number] => [
    latMin + (height - margin - y) / scale,
    lonMin + (x - margin) / (stretch * scale),
  ];
  return { toScreen, toGeo, width, height };
}
