"""Shortest-path routing over the directed flow graph.

Nodes are landmarks, edges are flow segments weighted by polyline arc length
in meters. Tie-breaking is deterministic: among equal-cost paths the
reconstruction prefers the smallest predecessor id at every node.
"""

from __future__ import annotations

import heapq

from .errors import NoRoute
from .geometry import polyline_length_m
from .model import FlowSegment, MapDocument


def build_graph(doc: MapDocument) -> dict[str, list[tuple[str, float, str]]]:
    """Adjacency: node -> [(neighbor, weight_m, flow_id)], best flow per pair."""
    best: dict[tuple[str, str], tuple[float, str]] = {}
    for f in doc.flows:
        w = polyline_length_m(doc, f.id)
        key = (f.from_id, f.to_id)
        if key not in best or (w, f.id) < best[key]:
            best[key] = (w, f.id)
    adj: dict[str, list[tuple[str, float, str]]] = {l.id: [] for l in doc.landmarks}
    for (u, v), (w, fid) in sorted(best.items()):
        adj[u].append((v, w, fid))
    return adj


def best_flow_for_leg(doc: MapDocument, from_id: str, to_id: str) -> FlowSegment:
    """The minimum-length flow connecting two adjacent nodes (tie: smaller id)."""
    candidates = [f for f in doc.flows if f.from_id == from_id and f.to_id == to_id]
    if not candidates:
        raise NoRoute(from_id, to_id)
    return min(candidates, key=lambda f: (polyline_length_m(doc, f.id), f.id))


def route_to(doc: MapDocument, from_landmark: str, to_landmark: str) -> list[str]:
    """Ordered landmark ids of the cheapest path, endpoints included."""
    if not doc.has_landmark(from_landmark):
        raise KeyError(from_landmark)
    if not doc.has_landmark(to_landmark):
        raise KeyError(to_landmark)
    if from_landmark == to_landmark:
        return [from_landmark]

    adj = build_graph(doc)
    dist: dict[str, float] = {from_landmark: 0.0}
    parent: dict[str, str] = {}
    heap: list[tuple[float, str]] = [(0.0, from_landmark)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist.get(u, float("inf")):
            continue
        for v, w, _fid in adj[u]:
            nd = d + w
            if nd < dist.get(v, float("inf")):
                dist[v] = nd
                parent[v] = u
                heapq.heappush(heap, (nd, v))
            elif nd == dist.get(v) and u < parent.get(v, u):
                parent[v] = u
    if to_landmark not in dist:
        raise NoRoute(from_landmark, to_landmark)

    path = [to_landmark]
    while path[-1] != from_landmark:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def route_cost_m(doc: MapDocument, path: list[str]) -> float:
    """Total arc length of a node path, summed in path order."""
    return sum(
        polyline_length_m(doc, best_flow_for_leg(doc, u, v).id)
        for u, v in zip(path, path[1:])
    )
