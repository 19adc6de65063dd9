"""Maximum-weight b-matching solvers and supporting constructions.

The exact solver is the yardstick the rest of the package is measured
against.  Non-bipartite instances go through a budgeted branch-and-bound;
bipartite instances (detected by 2-coloring) go through an integer
min-cost-flow formulation that stays exact at sizes branch-and-bound
cannot reach.  Both are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import networkx as nx

from .graph import Capacities, MultiGraph, Subgraph

__all__ = [
    "BMatching",
    "WVertexCover",
    "OracleBudgetExceeded",
    "DEFAULT_ORACLE_BUDGET",
    "bipartition_sides",
    "max_weight_b_matching_exact",
    "branch_and_bound_b_matching",
    "bipartite_b_matching",
    "max_weight_b_matching_greedy",
    "min_w_vertex_cover_bipartite",
    "distribute_edges",
    "split_vertices",
    "SplitResult",
]

DEFAULT_ORACLE_BUDGET = 2_000_000


class OracleBudgetExceeded(RuntimeError):
    """Raised when a search-based solver hits its node budget."""


@dataclass
class BMatching:
    """An edge multiset respecting the capacities, with its total weight."""

    edge_ids: list[int]
    weight: int

    def verify(self, G: MultiGraph, b: Capacities) -> bool:
        load = [0] * G.n
        total = 0
        seen = set()
        for eid in self.edge_ids:
            if eid in seen:
                return False
            seen.add(eid)
            e = G.edges[eid]
            load[e.u] += 1
            load[e.v] += 1
            total += e.w
        return total == self.weight and all(load[v] <= b[v] for v in range(G.n))

    def to_json_dict(self, G: MultiGraph) -> dict:
        return {
            "edges": [
                {"u": G.edges[i].u, "v": G.edges[i].v, "w": G.edges[i].w, "id": i}
                for i in self.edge_ids
            ],
            "weight": self.weight,
        }


@dataclass
class WVertexCover:
    """Non-negative integer vertex labels with w(u,v) <= alpha_u + alpha_v
    on every edge."""

    alpha: list[int]

    @property
    def weight(self) -> int:
        return sum(self.alpha)

    def covers(self, G: MultiGraph) -> bool:
        return all(e.w <= self.alpha[e.u] + self.alpha[e.v] for e in G.edges)


def bipartition_sides(G: MultiGraph) -> list[int] | None:
    """2-coloring of the vertices, or None if some component is odd."""
    color = [-1] * G.n
    for start in range(G.n):
        if color[start] != -1:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            x = stack.pop()
            for eid in G.adjacency[x]:
                y = G.edges[eid].other(x)
                if color[y] == -1:
                    color[y] = 1 - color[x]
                    stack.append(y)
                elif color[y] == color[x]:
                    return None
    return color


def max_weight_b_matching_exact(G: MultiGraph, b: Capacities,
                                budget: int = DEFAULT_ORACLE_BUDGET) -> BMatching:
    """Exact maximum-weight b-matching.

    Bipartite inputs are solved by integer min-cost flow regardless of
    size; everything else by branch-and-bound within ``budget`` search
    nodes (raising :class:`OracleBudgetExceeded` beyond it).
    """
    sides = bipartition_sides(G)
    if sides is not None:
        return bipartite_b_matching(G, b, sides)
    return branch_and_bound_b_matching(G, b, budget)


def max_weight_b_matching_greedy(G: MultiGraph, b: Capacities) -> BMatching:
    """Scan edges by descending weight (ties by id), keep those with
    residual capacity at both endpoints.  At least half the optimum."""
    residual = list(b.b)
    chosen: list[int] = []
    weight = 0
    for eid in sorted(range(G.m), key=lambda i: (-G.edges[i].w, i)):
        e = G.edges[eid]
        if residual[e.u] > 0 and residual[e.v] > 0:
            residual[e.u] -= 1
            residual[e.v] -= 1
            chosen.append(eid)
            weight += e.w
    return BMatching(sorted(chosen), weight)


def branch_and_bound_b_matching(G: MultiGraph, b: Capacities, budget: int) -> BMatching:
    """Include/exclude search over edges in id order.

    Prunes with two admissible bounds: the plain suffix weight, and half
    the capacity-truncated incident weight sum (each vertex can absorb at
    most its residual capacity of heaviest remaining edges, each edge is
    counted at both endpoints).  The greedy solution seeds the incumbent.
    """
    m = G.m
    if m == 0:
        return BMatching([], 0)
    incumbent = max_weight_b_matching_greedy(G, b)
    best_weight = incumbent.weight
    best_set = list(incumbent.edge_ids)

    suffix = [0] * (m + 1)
    for i in range(m - 1, -1, -1):
        suffix[i] = suffix[i + 1] + G.edges[i].w

    residual = list(b.b)
    chosen: list[int] = []
    nodes = 0

    def truncated_bound(k: int) -> int:
        per_vertex: dict[int, list[int]] = {}
        for i in range(k, m):
            e = G.edges[i]
            if residual[e.u] > 0 and residual[e.v] > 0:
                per_vertex.setdefault(e.u, []).append(e.w)
                per_vertex.setdefault(e.v, []).append(e.w)
        total = 0
        for v, ws in per_vertex.items():
            r = residual[v]
            if len(ws) > r:
                ws.sort(reverse=True)
                total += sum(ws[:r])
            else:
                total += sum(ws)
        return total // 2

    def dfs(k: int, cur: int) -> None:
        nonlocal nodes, best_weight, best_set
        nodes += 1
        if nodes > budget:
            raise OracleBudgetExceeded(
                f"instance too large for exact oracle (budget {budget} nodes)")
        if k == m:
            if cur > best_weight:
                best_weight = cur
                best_set = sorted(chosen)
            return
        if cur + suffix[k] <= best_weight:
            return
        if cur + truncated_bound(k) <= best_weight:
            return
        e = G.edges[k]
        if residual[e.u] > 0 and residual[e.v] > 0:
            residual[e.u] -= 1
            residual[e.v] -= 1
            chosen.append(k)
            dfs(k + 1, cur + e.w)
            chosen.pop()
            residual[e.u] += 1
            residual[e.v] += 1
        dfs(k + 1, cur)

    dfs(0, 0)
    return BMatching(best_set, best_weight)


def bipartite_b_matching(G: MultiGraph, b: Capacities,
                         sides: Sequence[int] | None = None) -> BMatching:
    """Exact solver for bipartite multigraphs via integer min-cost flow.

    Every (u, v, w) class becomes one arc of capacity equal to its
    multiplicity and cost -w; a zero-cost bypass arc lets the flow pick
    any matching size, so the min-cost circulation is exactly the
    maximum-weight b-matching.  Integer data keeps network simplex exact.
    """
    if sides is None:
        sides = bipartition_sides(G)
        if sides is None:
            raise ValueError("graph is not bipartite")
    for e in G.edges:
        if sides[e.u] == sides[e.v]:
            raise ValueError(f"edge {e.id} does not cross the given bipartition")
    if G.m == 0:
        return BMatching([], 0)

    classes: dict[tuple[int, int, int], list[int]] = {}
    for e in G.edges:
        u, v = (e.u, e.v) if sides[e.u] == 0 else (e.v, e.u)
        classes.setdefault((u, v, e.w), []).append(e.id)

    lefts = sorted({u for (u, _, _) in classes})
    rights = sorted({v for (_, v, _) in classes})
    supply = sum(b[u] for u in lefts)

    net = nx.MultiDiGraph()
    net.add_node("s", demand=-supply)
    net.add_node("t", demand=supply)
    net.add_edge("s", "t", capacity=supply, weight=0)
    for u in lefts:
        net.add_edge("s", ("L", u), capacity=b[u], weight=0)
    for v in rights:
        net.add_edge(("R", v), "t", capacity=b[v], weight=0)
    arc_key: dict[tuple[int, int, int], int] = {}
    for (u, v, w), ids in sorted(classes.items()):
        arc_key[(u, v, w)] = net.add_edge(("L", u), ("R", v),
                                          capacity=len(ids), weight=-w)

    cost, flow = nx.network_simplex(net)
    chosen: list[int] = []
    for (u, v, w), ids in sorted(classes.items()):
        f = flow.get(("L", u), {}).get(("R", v), {}).get(arc_key[(u, v, w)], 0)
        chosen.extend(sorted(ids)[:f])
    result = BMatching(sorted(chosen), -cost)
    if not result.verify(G, b):
        raise RuntimeError("flow solution failed verification")  # pragma: no cover
    return result


def min_w_vertex_cover_bipartite(G: MultiGraph, sides: Sequence[int],
                                 budget: int = DEFAULT_ORACLE_BUDGET) -> WVertexCover:
    """Minimum-weight cover labels for a bipartite graph by pruned search.

    Enumerates labels on one side only: once the left labels are fixed,
    the cheapest right label of v is forced to max(0, w - alpha_u) over
    its edges.  The partial forced sum is an admissible lower bound, so
    the search prunes hard at desk scale.  Independent of any matching
    computation, which is what makes it usable as the duality check's
    second route.
    """
    for e in G.edges:
        if sides[e.u] == sides[e.v]:
            raise ValueError(f"edge {e.id} does not cross the given bipartition: non-bipartite input")

    max_w = [0] * G.n
    for e in G.edges:
        max_w[e.u] = max(max_w[e.u], e.w)
        max_w[e.v] = max(max_w[e.v], e.w)
    left = [v for v in range(G.n) if sides[v] == 0 and G.adjacency[v]]

    # Two trivial covers seed the incumbent: all weight on one side.
    best_alpha = [max_w[v] if sides[v] == 0 else 0 for v in range(G.n)]
    other = [max_w[v] if sides[v] == 1 else 0 for v in range(G.n)]
    if sum(other) < sum(best_alpha):
        best_alpha = other
    best_total = sum(best_alpha)

    alpha = [0] * G.n
    forced = [0] * G.n
    sum_alpha = 0
    sum_forced = 0
    nodes = 0

    def dfs(k: int) -> None:
        nonlocal nodes, best_total, best_alpha, sum_alpha, sum_forced
        nodes += 1
        if nodes > budget:
            raise OracleBudgetExceeded(
                f"cover search budget exceeded ({budget} nodes)")
        if sum_alpha + sum_forced >= best_total:
            return
        if k == len(left):
            best_total = sum_alpha + sum_forced
            best_alpha = [alpha[v] if sides[v] == 0 else forced[v] for v in range(G.n)]
            return
        u = left[k]
        for value in range(0, max_w[u] + 1):
            alpha[u] = value
            sum_alpha += value
            undo: list[tuple[int, int]] = []
            for eid in G.adjacency[u]:
                e = G.edges[eid]
                v = e.other(u)
                need = e.w - value
                if need > forced[v]:
                    undo.append((v, forced[v]))
                    sum_forced += need - forced[v]
                    forced[v] = need
            dfs(k + 1)
            for v, old in reversed(undo):
                sum_forced -= forced[v] - old
                forced[v] = old
            sum_alpha -= value
            alpha[u] = 0

    dfs(0)
    return WVertexCover(best_alpha)


def distribute_edges(groups: Sequence[Sequence[tuple[int, int, bool]]],
                     bucket_count: int) -> list[list[tuple[int, int, bool]]]:
    """Distribute grouped incident edges into ``bucket_count`` buckets.

    ``groups`` holds one list per neighboring vertex; each item is
    ``(edge_id, weight, is_matched)`` with the matched edges first and
    weights non-increasing.  Two greedy passes per group: matched edges go
    to the lightest buckets that never received a matched edge, remaining
    edges to the lightest other buckets.  The result satisfies

      * at most one matched edge per bucket,
      * at most one edge per (bucket, group) pair,
      * bucket weights spread over at most twice the maximum edge weight.
    """
    if bucket_count < 1:
        raise ValueError("bucket_count must be >= 1")
    total_matched = 0
    for g in groups:
        if len(g) > bucket_count:
            raise ValueError(f"group of size {len(g)} exceeds bucket count {bucket_count}")
        past_matched = False
        for j, (eid, w, matched) in enumerate(g):
            if j > 0 and g[j - 1][1] < w:
                raise ValueError("group weights must be non-increasing")
            if matched and past_matched:
                raise ValueError("matched edges must form a prefix of their group")
            if not matched:
                past_matched = True
        total_matched += sum(1 for item in g if item[2])
    if total_matched > bucket_count:
        raise ValueError("more matched edges than buckets")

    buckets: list[list[tuple[int, int, bool]]] = [[] for _ in range(bucket_count)]
    load = [0] * bucket_count
    used_for_matching = [False] * bucket_count
    for g in groups:
        m_u = sum(1 for item in g if item[2])
        fresh = sorted((i for i in range(bucket_count) if not used_for_matching[i]),
                       key=lambda i: (load[i], i))[:m_u]
        for j in range(m_u):
            i = fresh[j]
            buckets[i].append(g[j])
            load[i] += g[j][1]
            used_for_matching[i] = True
        taken = set(fresh)
        rest = sorted((i for i in range(bucket_count) if i not in taken),
                      key=lambda i: (load[i], i))[:len(g) - m_u]
        for j in range(m_u, len(g)):
            i = rest[j - m_u]
            buckets[i].append(g[j])
            load[i] += g[j][1]
    return buckets


@dataclass
class SplitResult:
    """Outcome of :func:`split_vertices`.

    ``vertex_map[x]`` gives ``(original vertex, copy index)`` for split
    vertex ``x``; ``edge_origin[j]`` the original edge id behind split
    edge ``j``; ``matched_split_ids`` the split edges carrying the
    (normalized) input matching, which form a simple matching.
    """

    graph: MultiGraph
    subgraph: Subgraph
    vertex_map: list[tuple[int, int]]
    edge_origin: list[int]
    matched_split_ids: list[int] = field(default_factory=list)


def split_vertices(G: MultiGraph, b: Capacities, H: Subgraph, M: BMatching, *,
                   check: bool = True) -> SplitResult:
    """Expand each vertex v into b_v copies and spread H and M's edges
    over the copies so that the result is a simple graph.

    Any matching of the split subgraph folds back to a b-matching of H of
    equal weight, and the input matching survives as a simple matching.
    Within each parallel class the matched labels are first normalized
    onto the heaviest edges (a swap between same-endpoint edges, so for a
    maximum-weight M this keeps the weight unchanged).
    """
    if H.parent is not G:
        raise ValueError("H must be a subgraph of G")
    if not M.verify(G, b):
        raise ValueError("M is not a b-matching of G")
    for (u, v), ids in G.pair_groups().items():
        if len(ids) > min(b[u], b[v]):
            raise ValueError(f"pair ({u}, {v}) exceeds min(b_u, b_v) parallel edges")

    union_ids = sorted(H.members | set(M.edge_ids))
    in_matching = set(M.edge_ids)
    by_pair: dict[tuple[int, int], list[int]] = {}
    for eid in union_ids:
        by_pair.setdefault(G.edges[eid].pair(), []).append(eid)
    matched_norm: set[int] = set()
    for ids in by_pair.values():
        k = sum(1 for i in ids if i in in_matching)
        ranked = sorted(ids, key=lambda i: (-G.edges[i].w, i))
        matched_norm.update(ranked[:k])

    union_at: list[list[int]] = [[] for _ in range(G.n)]
    for eid in union_ids:
        e = G.edges[eid]
        union_at[e.u].append(eid)
        union_at[e.v].append(eid)

    copy_of: dict[tuple[int, int], int] = {}
    for v in range(G.n):
        by_neighbor: dict[int, list[int]] = {}
        for eid in union_at[v]:
            by_neighbor.setdefault(G.edges[eid].other(v), []).append(eid)
        groups = []
        for u in sorted(by_neighbor):
            ids = sorted(by_neighbor[u],
                         key=lambda i: (i not in matched_norm, -G.edges[i].w, i))
            groups.append([(i, G.edges[i].w, i in matched_norm) for i in ids])
        buckets = distribute_edges(groups, b[v])
        for i, bucket in enumerate(buckets):
            for eid, _, _ in bucket:
                copy_of[(eid, v)] = i

    offsets = [0] * (G.n + 1)
    for v in range(G.n):
        offsets[v + 1] = offsets[v] + b[v]
    vertex_map = [(v, i) for v in range(G.n) for i in range(b[v])]
    triples = []
    edge_origin = []
    for eid in union_ids:
        e = G.edges[eid]
        triples.append((offsets[e.u] + copy_of[(eid, e.u)],
                        offsets[e.v] + copy_of[(eid, e.v)], e.w))
        edge_origin.append(eid)
    split_graph = MultiGraph(offsets[-1], triples, W=G.W)
    split_sub = Subgraph(split_graph,
                         [j for j, eid in enumerate(edge_origin) if eid in H.members])
    matched_split = [j for j, eid in enumerate(edge_origin) if eid in matched_norm]

    if check:
        for ids in split_graph.pair_groups().values():
            if len(ids) > 1:
                raise RuntimeError("split graph is not simple")
        load = [0] * split_graph.n
        for j in matched_split:
            e = split_graph.edges[j]
            load[e.u] += 1
            load[e.v] += 1
        if any(x > 1 for x in load):
            raise RuntimeError("matching did not map to a simple matching")
        W = G.W
        for x in range(split_graph.n):
            v, _ = vertex_map[x]
            # full distributed weight: wdeg_H(v)/b_v - 2W <= . <= wdeg_H(v)/b_v + 3W
            total = sum(split_graph.edges[j].w for j in split_graph.adjacency[x])
            if not (H.wdeg[v] - 2 * W * b[v] <= total * b[v] <= H.wdeg[v] + 3 * W * b[v]):
                raise RuntimeError(f"split copy {x} outside its weighted-degree window")

    return SplitResult(split_graph, split_sub, vertex_map, edge_origin, matched_split)
