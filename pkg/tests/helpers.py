"""Shared test utilities: brute-force oracles and instance shorthands.

The brute-force solvers here are deliberately independent of the package's
solvers (plain subset enumeration) so they can act as ground truth.
"""

from __future__ import annotations

from itertools import combinations

from wedcs import Capacities, GenSpec, MultiGraph, random_instance


def brute_force_b_matching_weight(G: MultiGraph, b: Capacities) -> int:
    """Maximum b-matching weight by enumerating all edge subsets."""
    best = 0
    m = G.m
    assert m <= 20, "enumeration oracle is for tiny instances"
    for mask in range(1 << m):
        load = [0] * G.n
        weight = 0
        ok = True
        for i in range(m):
            if mask >> i & 1:
                e = G.edges[i]
                load[e.u] += 1
                load[e.v] += 1
                if load[e.u] > b[e.u] or load[e.v] > b[e.v]:
                    ok = False
                    break
                weight += e.w
        if ok and weight > best:
            best = weight
    return best


def brute_force_min_cover_weight(G: MultiGraph) -> int:
    """Minimum w-vertex-cover weight by enumerating all label vectors.

    Exponential in n; keep n tiny.  Labels range over 0..(heaviest
    incident weight), which is enough for an optimal cover.
    """
    assert G.n <= 8, "cover enumeration is for tiny instances"
    max_w = [0] * G.n
    for e in G.edges:
        max_w[e.u] = max(max_w[e.u], e.w)
        max_w[e.v] = max(max_w[e.v], e.w)

    best = sum(max_w)  # certainly a cover

    def rec(v: int, total: int, alpha: list[int]) -> None:
        nonlocal best
        if total >= best:
            return
        if v == G.n:
            if all(e.w <= alpha[e.u] + alpha[e.v] for e in G.edges):
                best = total
            return
        for value in range(max_w[v] + 1):
            alpha[v] = value
            rec(v + 1, total + value, alpha)
        alpha[v] = 0

    rec(0, 0, [0] * G.n)
    return best


def make_random(seed: int, n: int, m: int, W: int, b_max: int = 1, *,
                b_min: int = 1, bipartite: bool = False,
                allow_parallel: bool = False) -> tuple[MultiGraph, Capacities]:
    spec = GenSpec(kind="random", seed=seed, n=n, m=m, W=W,
                   b_min=b_min, b_max=b_max, bipartite=bipartite,
                   allow_parallel=allow_parallel)
    return random_instance(spec)


def random_distribution_input(rng, bucket_count: int, W: int):
    """Random grouped-edge input for the bucket distribution procedure,
    with per-edge in-H flags (unmatched edges are always in H)."""
    groups = []
    in_h = {}
    matched_left = bucket_count
    eid = 0
    for _ in range(int(rng.integers(0, 7))):
        size = int(rng.integers(1, bucket_count + 1))
        m_u = int(rng.integers(0, min(size, matched_left) + 1))
        matched_left -= m_u
        weights = sorted((int(rng.integers(1, W + 1)) for _ in range(size)), reverse=True)
        group = []
        for j, w in enumerate(weights):
            matched = j < m_u
            group.append((eid, w, matched))
            in_h[eid] = (not matched) or bool(rng.integers(0, 2))
            eid += 1
        groups.append(group)
    return groups, in_h


def check_distribution_properties(groups, in_h, buckets, bucket_count: int, W: int):
    """Assert the three bucket-distribution guarantees."""
    group_of = {item[0]: gi for gi, group in enumerate(groups) for item in group}
    all_items = [item for group in groups for item in group]
    assert sorted(i for bucket in buckets for i, _, _ in bucket) == \
        sorted(i for i, _, _ in all_items)
    for bucket in buckets:
        assert sum(1 for _, _, matched in bucket if matched) <= 1
        gids = [group_of[i] for i, _, _ in bucket]
        assert len(gids) == len(set(gids))
    loads = [sum(w for _, w, _ in bucket) for bucket in buckets]
    if loads:
        assert max(loads) - min(loads) <= 2 * W
    wdeg_h = sum(w for i, w, _ in all_items if in_h[i])
    for load in loads:
        assert wdeg_h - 2 * W * bucket_count <= load * bucket_count \
            <= wdeg_h + 3 * W * bucket_count


def pair_count(n: int, bipartite: bool) -> int:
    if bipartite:
        half = n // 2
        return half * (n - half)
    return n * (n - 1) // 2
