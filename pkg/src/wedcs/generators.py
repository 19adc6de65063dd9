"""Instance generators: seeded random multigraphs and the two hand-built
families used to probe the approximation ratio.

The tight family realizes the worst case the sparsifier allows: its best
matching is a factor 1 + (beta-1)/beta_minus - 1/(2W) below the graph's
optimum.  The multicopy family shows why stacking one unweighted
sparsifier per weight class fails: the union traps the matching at weight
2kW while the graph holds 2kW + kW(W+1)/2.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict
from fractions import Fraction

import numpy as np

from .edcs import EdcsParams
from .graph import Capacities, MultiGraph, Subgraph

__all__ = [
    "GenSpec",
    "TightInstance",
    "MulticopyInstance",
    "random_instance",
    "tight_instance",
    "multicopy_instance",
]


@dataclass
class GenSpec:
    """Declarative description of a generated instance (JSON-friendly)."""

    kind: str = "random"            # random | tight | multicopy
    seed: int = 0
    n: int = 0
    m: int = 0
    W: int = 1
    b_min: int = 1
    b_max: int = 1
    bipartite: bool = False
    allow_parallel: bool = False    # raw multiplicities (no per-pair cap)
    k: int | None = None            # tight / multicopy block size
    beta_minus: int | None = None   # tight family; must equal 2kW

    def __post_init__(self):
        if self.kind not in ("random", "tight", "multicopy"):
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.kind == "random":
            if self.n < 0 or self.m < 0 or self.W < 1:
                raise ValueError("random spec needs n >= 0, m >= 0, W >= 1")
            if not (1 <= self.b_min <= self.b_max):
                raise ValueError("need 1 <= b_min <= b_max")

    def to_json_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json_dict(cls, data: dict) -> "GenSpec":
        return cls(**data)


def random_instance(spec: GenSpec) -> tuple[MultiGraph, Capacities]:
    """Seeded random multigraph with capacities.

    Weights are uniform in [1, W] and capacities uniform in
    [b_min, b_max].  Unless ``allow_parallel`` is set, each pair carries at
    most min(b_u, b_v) parallel edges (the edges are drawn uniformly
    without replacement from the multiset of capacity slots); raw
    multiplicities are for exercising the replacement-rule stream variant.
    """
    if spec.kind != "random":
        raise ValueError("random_instance needs a spec with kind='random'")
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    n, m = spec.n, spec.m
    b = Capacities([int(x) for x in rng.integers(spec.b_min, spec.b_max + 1, size=n)]) \
        if n else Capacities([])

    if spec.bipartite:
        half = n // 2
        pairs = [(u, v) for u in range(half) for v in range(half, n)]
    else:
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]

    triples: list[tuple[int, int, int]] = []
    if spec.allow_parallel:
        if m > 0 and not pairs:
            raise ValueError("no vertex pairs available for the requested edges")
        for _ in range(m):
            u, v = pairs[int(rng.integers(0, len(pairs)))]
            triples.append((u, v, int(rng.integers(1, spec.W + 1))))
    else:
        slots = [p for p in pairs for _ in range(min(b[p[0]], b[p[1]]))]
        if m > len(slots):
            raise ValueError(
                f"infeasible spec: {m} edges requested but only {len(slots)} "
                "capacity-respecting slots exist")
        for idx in rng.permutation(len(slots))[:m]:
            u, v = slots[int(idx)]
            triples.append((u, v, int(rng.integers(1, spec.W + 1))))
    return MultiGraph(n, triples, W=spec.W), b


@dataclass
class TightInstance:
    """Worst-case family instance: ``edcs`` is a valid sparsifier of
    ``graph`` whose best matching is exactly ``ratio`` below the optimum."""

    graph: MultiGraph
    capacities: Capacities
    edcs: Subgraph
    params: EdcsParams
    k: int
    l: int
    W: int
    sparsifier_matching_weight: int  # best matching within the sparsifier
    optimal_matching_weight: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.optimal_matching_weight, self.sparsifier_matching_weight)


def tight_instance(k: int | None = None, W: int = 1,
                   beta_minus: int | None = None) -> TightInstance:
    """Six-block construction reaching the sparsifier's approximation limit.

    Blocks A, B, E, F of size k and C, D of size l = beta - k - 1 with
    beta = beta_minus + 2 and beta_minus = 2kW.  Heavy (weight-W) edges:
    the A-B and E-F perfect matchings plus complete bipartite B-C and D-E;
    all are kept in the sparsifier.  The weight-1 C-D perfect matching is
    excluded, legitimately so: each endpoint already carries weighted
    degree kW, so excluded edges meet the lower bound with equality.  The
    sparsifier's best matching saturates B and E for weight 2kW while the
    graph achieves 2kW + l.

    ``beta_minus``, when given, must be divisible by 2W (it determines
    k = beta_minus / 2W); remainders are rejected rather than approximated.
    """
    if k is None and beta_minus is None:
        raise ValueError("give k or beta_minus")
    if W < 1:
        raise ValueError("W must be >= 1")
    if beta_minus is not None:
        if beta_minus % (2 * W) != 0:
            raise ValueError("beta_minus must be divisible by 2W")
        derived = beta_minus // (2 * W)
        if k is not None and k != derived:
            raise ValueError(f"inconsistent k={k} and beta_minus={beta_minus}")
        k = derived
    if k < 1:
        raise ValueError("k must be >= 1")
    beta_minus = 2 * k * W
    beta = beta_minus + 2
    l = beta - k - 1

    a0, b0 = 0, k
    c0, d0 = 2 * k, 2 * k + l
    e0, f0 = 2 * k + 2 * l, 3 * k + 2 * l
    n = 4 * k + 2 * l

    triples: list[tuple[int, int, int]] = []
    solid: list[int] = []

    def emit(u: int, v: int, w: int, in_sparsifier: bool) -> None:
        if in_sparsifier:
            solid.append(len(triples))
        triples.append((u, v, w))

    for i in range(k):
        emit(a0 + i, b0 + i, W, True)
    for i in range(k):
        for j in range(l):
            emit(b0 + i, c0 + j, W, True)
    for j in range(l):
        emit(c0 + j, d0 + j, 1, False)
    for j in range(l):
        for i in range(k):
            emit(d0 + j, e0 + i, W, True)
    for i in range(k):
        emit(e0 + i, f0 + i, W, True)

    graph = MultiGraph(n, triples, W=W)
    params = EdcsParams(W=W, beta=beta, beta_minus=beta_minus)
    return TightInstance(
        graph=graph,
        capacities=Capacities.uniform(n),
        edcs=Subgraph(graph, solid),
        params=params,
        k=k, l=l, W=W,
        sparsifier_matching_weight=2 * k * W,
        optimal_matching_weight=2 * k * W + l,
    )


@dataclass
class MulticopyInstance:
    """Union of per-weight-class sparsifiers that caps the matching at
    ``trapped_matching_weight`` although the graph achieves
    ``optimal_matching_weight``."""

    graph: MultiGraph
    capacities: Capacities
    union_edcs: Subgraph
    k: int
    W: int
    trapped_matching_weight: int
    optimal_matching_weight: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.optimal_matching_weight, self.trapped_matching_weight)


def multicopy_instance(k: int = 1, W: int = 2) -> MulticopyInstance:
    """One worst-case gadget per weight class, all sharing hubs B and E.

    Per class i (edges of weight i): perfect matchings A_i-B and E-F_i
    plus complete bipartite B-C_i and D_i-E are kept; the C_i-D_i perfect
    matching is left out.  Every kept edge touches B or E (k vertices
    each), so the union's best matching is 2kW, while the graph picks the
    heaviest B and E classes plus every excluded C_i-D_i matching for
    2kW + k * W(W+1)/2.  Already worse than a factor 2 for W >= 3.
    """
    if k < 1 or W < 2:
        raise ValueError("need k >= 1 and W >= 2")
    blk = k
    a0 = 0
    b0 = W * blk
    c0 = (W + 1) * blk
    d0 = (2 * W + 1) * blk
    e0 = (3 * W + 1) * blk
    f0 = (3 * W + 2) * blk
    n = (4 * W + 2) * blk

    triples: list[tuple[int, int, int]] = []
    solid: list[int] = []

    def emit(u: int, v: int, w: int, in_union: bool) -> None:
        if in_union:
            solid.append(len(triples))
        triples.append((u, v, w))

    for i in range(1, W + 1):
        ai = a0 + (i - 1) * blk
        ci = c0 + (i - 1) * blk
        di = d0 + (i - 1) * blk
        fi = f0 + (i - 1) * blk
        for j in range(blk):
            emit(ai + j, b0 + j, i, True)
        for j1 in range(blk):
            for j2 in range(blk):
                emit(b0 + j1, ci + j2, i, True)
        for j in range(blk):
            emit(ci + j, di + j, i, False)
        for j1 in range(blk):
            for j2 in range(blk):
                emit(di + j1, e0 + j2, i, True)
        for j in range(blk):
            emit(e0 + j, fi + j, i, True)

    graph = MultiGraph(n, triples, W=W)
    return MulticopyInstance(
        graph=graph,
        capacities=Capacities.uniform(n),
        union_edcs=Subgraph(graph, solid),
        k=k, W=W,
        trapped_matching_weight=2 * k * W,
        optimal_matching_weight=2 * k * W + k * W * (W + 1) // 2,
    )
