import math
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wedcs import (
    Capacities,
    EdcsParams,
    MultiGraph,
    Subgraph,
    build_w_edcs,
    build_wb_edcs,
    max_weight_b_matching_exact,
    parameters_for,
    potential,
    tight_instance,
    validate,
)

from helpers import make_random


# ---------------------------------------------------------------- params

def test_params_invariants():
    with pytest.raises(ValueError):
        EdcsParams(W=1, beta=4, beta_minus=3)  # gap below 2
    with pytest.raises(ValueError):
        EdcsParams(W=1, beta=2, beta_minus=0)
    EdcsParams(W=1, beta=3, beta_minus=1)


def test_parameters_for_practical_passthrough():
    p = parameters_for("0.4", 1, mode="practical", practical_beta=10)
    assert (p.beta, p.beta_minus) == (10, 8)
    assert p.lam == Fraction(1, 250)


def test_parameters_for_rejects_bad_epsilon():
    with pytest.raises(ValueError):
        parameters_for("0.5", 1)
    with pytest.raises(ValueError):
        parameters_for("0", 2)
    with pytest.raises(ValueError):
        parameters_for("-0.1", 1)


def _theorem_conditions(beta: int, beta_minus: int, W: int, lam: Fraction):
    x = beta + 8 * W
    c1 = x / math.log(x) >= float(Fraction(2 * W * W) / (lam * lam))
    c2 = Fraction(beta_minus - 6 * W) >= (1 - lam) * x
    return c1, c2


@pytest.mark.slow
def test_parameters_for_theorem_small_epsilon_magnitude():
    # lambda = 0.4/100 = 1/250, so 2 W^2 / lambda^2 = 125000; the smallest
    # beta with (beta+8)/ln(beta+8) >= 125000 sits in the 1e5..1e7 decade
    p = parameters_for("0.4", 1, mode="theorem")
    assert p.lam == Fraction(1, 250)
    assert Fraction(2, 1) / (p.lam * p.lam) == 125000
    assert 10**5 <= p.beta <= 4 * 10**6

    c1, c2 = _theorem_conditions(p.beta, p.beta_minus, 1, p.lam)
    assert c1 and c2 and p.beta_minus <= p.beta - 2

    # minimality: beta - 1 admits no valid pair
    prev = p.beta - 1
    c1_prev, _ = _theorem_conditions(prev, prev - 2, 1, p.lam)
    best_bm = math.ceil((1 - p.lam) * (prev + 8) + 6)
    assert not (c1_prev and best_bm <= prev - 2)


# ---------------------------------------------------------------- validate

def test_validate_empty():
    G = MultiGraph(0, [])
    report = validate(G, Capacities([]), Subgraph(G), EdcsParams(W=1, beta=4, beta_minus=2))
    assert report.is_clean


def test_validate_lower_violation_on_empty_H():
    G = MultiGraph(2, [(0, 1, 1)])
    report = validate(G, Capacities.uniform(2), Subgraph(G),
                      EdcsParams(W=1, beta=4, beta_minus=2))
    assert report.upper_violations == []
    assert report.lower_violations == [0]


def test_validate_upper_violation():
    # star with every edge kept: center degree 4 breaks the bound for beta=3
    G = MultiGraph(5, [(0, i, 1) for i in range(1, 5)])
    H = Subgraph(G, range(4))
    report = validate(G, Capacities.uniform(5), H, EdcsParams(W=1, beta=3, beta_minus=1))
    assert report.lower_violations == []
    assert report.upper_violations == [0, 1, 2, 3]


def test_validate_tight_family_reference():
    inst = tight_instance(k=1, W=1)
    report = validate(inst.graph, inst.capacities, inst.edcs, inst.params)
    assert report.is_clean


@pytest.mark.parametrize("seed", range(10))
def test_validate_matches_fraction_arithmetic(seed):
    # differential check of the cross-multiplied integer comparisons
    # against a direct rational evaluation, on arbitrary member sets
    G, b = make_random(seed, n=9, m=25, W=4, b_max=3)
    H = Subgraph(G, [eid for eid in range(G.m) if (eid * 7 + seed) % 3 == 0])
    params = EdcsParams(W=4, beta=5, beta_minus=3)
    report = validate(G, b, H, params)
    upper, lower = [], []
    for e in G.edges:
        total = Fraction(H.wdeg[e.u], b[e.u]) + Fraction(H.wdeg[e.v], b[e.v])
        if e.id in H.members:
            if total > params.beta * e.w:
                upper.append(e.id)
        elif total < params.beta_minus * e.w:
            lower.append(e.id)
    assert report.upper_violations == upper
    assert report.lower_violations == lower


def test_validate_requires_same_parent():
    G = MultiGraph(2, [(0, 1, 1)])
    G2 = MultiGraph(2, [(0, 1, 1)])
    with pytest.raises(ValueError):
        validate(G, Capacities.uniform(2), Subgraph(G2), EdcsParams(W=1, beta=4, beta_minus=2))


# ---------------------------------------------------------------- potential

def test_potential_empty():
    G = MultiGraph(2, [(0, 1, 1)])
    assert potential(Subgraph(G), Capacities.uniform(2),
                     EdcsParams(W=1, beta=4, beta_minus=2)) == 0


def test_potential_single_weight2_edge():
    # (2*4-2)*4 - (2^2 + 2^2) = 24 - 8
    G = MultiGraph(2, [(0, 1, 2)])
    val = potential(Subgraph(G, [0]), Capacities.uniform(2),
                    EdcsParams(W=2, beta=4, beta_minus=2))
    assert val == 16


def test_potential_capacity_normalization():
    G = MultiGraph(2, [(0, 1, 2)])
    val = potential(Subgraph(G, [0]), Capacities([2, 1]),
                    EdcsParams(W=2, beta=4, beta_minus=2))
    assert val == Fraction(24) - Fraction(4, 2) - Fraction(4, 1)


# ---------------------------------------------------------------- builders

def test_build_empty_graph():
    G = MultiGraph(0, [])
    H, trace = build_w_edcs(G, EdcsParams(W=1, beta=4, beta_minus=2))
    assert len(H) == 0 and trace.steps == 0


def test_build_single_edge_one_step():
    G = MultiGraph(2, [(0, 1, 1)])
    H, trace = build_w_edcs(G, EdcsParams(W=1, beta=4, beta_minus=2))
    assert sorted(H.members) == [0]
    assert trace.steps == 1


def test_build_star_degree_bounded():
    G = MultiGraph(7, [(0, i, 1) for i in range(1, 7)])
    params = EdcsParams(W=1, beta=4, beta_minus=2)
    H, _ = build_w_edcs(G, params)
    assert H.degree(0) <= 4
    assert validate(G, Capacities.uniform(7), H, params).is_clean


def test_build_w_and_wb_agree_when_unit():
    G, _ = make_random(11, n=10, m=20, W=1)
    params = EdcsParams(W=1, beta=4, beta_minus=2)
    H1, t1 = build_w_edcs(G, params)
    H2, t2 = build_wb_edcs(G, Capacities.uniform(G.n), params)
    assert H1.members == H2.members
    assert t1.steps == t2.steps


def test_build_triangle_all_capacity_two():
    G = MultiGraph(3, [(0, 1, 1), (0, 2, 1), (1, 2, 1)])
    params = EdcsParams(W=1, beta=4, beta_minus=2)
    H, _ = build_wb_edcs(G, Capacities.uniform(3, 2), params)
    # every endpoint pair sums to 2/2 + 2/2 = 2 <= 4, so nothing is evicted
    assert sorted(H.members) == [0, 1, 2]


def test_build_on_tight_graph_is_clean():
    inst = tight_instance(k=1, W=1)
    H, _ = build_wb_edcs(inst.graph, inst.capacities, inst.params)
    assert validate(inst.graph, inst.capacities, H, inst.params).is_clean


def test_build_rejects_multiplicity_violation():
    G = MultiGraph(2, [(0, 1, 1), (0, 1, 2)])
    with pytest.raises(ValueError):
        build_wb_edcs(G, Capacities.uniform(2), EdcsParams(W=2, beta=4, beta_minus=2))
    with pytest.raises(ValueError):
        build_w_edcs(G, EdcsParams(W=2, beta=4, beta_minus=2))


def test_theorem_scale_params_keep_everything():
    G, b = make_random(3, n=10, m=20, W=1, b_max=2)
    params = EdcsParams(W=1, beta=10**6, beta_minus=10**6 - 2)
    H, _ = build_wb_edcs(G, b, params)
    assert H.members == set(range(G.m))


@pytest.mark.parametrize("seed,beta", [(s, b) for s in range(8) for b in (6, 10)])
def test_build_corpus_properties(seed, beta):
    G, b = make_random(seed, n=14, m=40, W=3, b_max=3)
    params = EdcsParams(W=3, beta=beta, beta_minus=beta - 2)
    H, trace = build_wb_edcs(G, b, params)  # internal checks already assert gains
    assert validate(G, b, H, params).is_clean
    # degree bound: deg_H(v) <= beta * b_v
    assert all(H.degree(v) <= beta * b[v] for v in range(G.n))
    # potential-derived step bound: per-step gain is at least 1 + 1/(b_u b_v),
    # hence at least 1 + 1/b_max^2 uniformly
    floor_gain = 1 + Fraction(1, 9)
    assert trace.steps <= trace.phi_final / floor_gain
    assert trace.min_gain is None or trace.min_gain >= floor_gain
    assert potential(H, b, params) == trace.phi_final


def test_boundary_step_gain_four_thirds():
    # minimal-slack insertion at capacities (1, 3) gains exactly 4/3, the
    # tight case of the 1 + 1/(b_u b_v) per-step bound: start from wdeg(u)=1,
    # wdeg(v)=2 so that 1/1 + 2/3 = 5/3 < beta_minus = 2 with slack 1/3
    G = MultiGraph(5, [(0, 2, 1), (1, 3, 1), (1, 4, 1), (0, 1, 1)])
    b = Capacities([1, 3, 1, 1, 1])
    params = EdcsParams(W=1, beta=4, beta_minus=2)
    H, trace = build_wb_edcs(G, b, params)
    assert validate(G, b, H, params).is_clean
    assert trace.min_gain == Fraction(4, 3)


@pytest.mark.parametrize("seed", range(6))
def test_size_bound_vs_oracle(seed):
    G, b = make_random(seed, n=8, m=18, W=3, b_max=2)
    params = EdcsParams(W=3, beta=6, beta_minus=4)
    H, trace = build_wb_edcs(G, b, params)
    best = max_weight_b_matching_exact(G, b)
    cardinality = len(best.edge_ids)
    assert len(H) <= 2 * params.beta * max(cardinality, 1)
    # construction-time bound from the potential proof: flag, don't fail
    limit = Fraction(8, 3) * params.beta**2 * params.W**2 * max(cardinality, 1)
    if trace.steps > limit:
        warnings.warn(f"steps {trace.steps} exceeded the matching-size bound {limit}")


@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_builder_fuzz_always_clean(data):
    seed = data.draw(st.integers(0, 10**6))
    n = data.draw(st.integers(2, 9))
    W = data.draw(st.integers(1, 4))
    b_max = data.draw(st.integers(1, 4))
    m = data.draw(st.integers(0, min(18, n * (n - 1) // 2)))
    beta = data.draw(st.integers(3, 12))
    beta_minus = data.draw(st.integers(0, beta - 2))
    G, b = make_random(seed, n=n, m=m, W=W, b_max=b_max)
    params = EdcsParams(W=W, beta=beta, beta_minus=beta_minus)
    H, trace = build_wb_edcs(G, b, params, check_invariants=True)
    assert validate(G, b, H, params).is_clean
    assert all(H.degree(v) <= beta * b[v] for v in range(G.n))
    if beta_minus == 0:
        assert len(H) == 0  # nothing is ever underfull


def test_simple_build_min_gain_two():
    G, _ = make_random(21, n=12, m=30, W=4)
    params = EdcsParams(W=4, beta=8, beta_minus=6)
    H, trace = build_w_edcs(G, params)
    assert trace.min_gain is None or trace.min_gain >= 2
    assert trace.steps <= trace.phi_final / 2
    # plain degree bound for the unit-capacity case
    assert all(H.degree(v) <= params.beta for v in range(G.n))
