/** Shared fixtures: a canonical MDL document as served by the gateway. */

import type { RobotSnapshot, StreamFrame } from "../src/types";

export const MAP_XML = `<?xml version="1.0" encoding="UTF-8"?>
<Map id="river" name="test river">
  <ScaleRegion id="inner" lat_min="44.9998000" lon_min="11.9998000" lat_max="45.0002000" lon_max="12.0002000" denominator="5000"/>
  <ScaleRegion id="outer" lat_min="44.9900000" lon_min="11.9900000" lat_max="45.0100000" lon_max="12.0100000" denominator="25000"/>
  <Landmark id="A" kind="marker" lat="45.0000000" lon="12.0000000" depth="0.00" label="head"/>
  <Landmark id="B" kind="marker" lat="45.0009000" lon="12.0000000" depth="0.00" label="bend"/>
  <Landmark id="C" kind="marker" lat="45.0018000" lon="12.0000000" depth="0.00" label="tail"/>
  <Landmark id="F" kind="fuel_rendezvous_terminal" lat="45.0000000" lon="12.0013000" depth="0.00" label="fuel dock"/>
  <Landmark id="P" kind="parking_area" lat="45.0009000" lon="12.0013000" depth="0.00" label="bay"/>
  <Flow id="fab" from="A" to="B" v_from_e="0.000" v_from_n="0.000" v_to_e="0.000" v_to_n="0.000">
    <Waypoint ref="A"/>
    <Waypoint ref="B"/>
  </Flow>
  <Flow id="faf" from="A" to="F" v_from_e="0.000" v_from_n="0.000" v_to_e="0.000" v_to_n="0.000">
    <Waypoint ref="A"/>
    <Waypoint ref="F"/>
  </Flow>
  <Annotation robot="sub1" flow="fab" lookahead="B">
    <Passed ref="A"/>
  </Annotation>
</Map>
`;

export function snapshot(id: string, overrides: Partial<RobotSnapshot> = {}): RobotSnapshot {
  return {
    id,
    position: { lat: 45.0, lon: 12.0, depth: 0 },
    velocity: [0, 0],
    anchored: false,
    parked_at: null,
    fuel: 1,
    failures: { communication: false, gps: false, sensor_power: false, propulsion: false },
    last_fix_time: null,
    guard_state: "Nominal",
    causes: [],
    acknowledgeable: false,
    ...overrides,
  };
}

export function frame(seq: number, kind: StreamFrame["kind"], payload: Record<string, unknown>): StreamFrame {
  return { seq, timestamp: seq, kind, payload };
}
