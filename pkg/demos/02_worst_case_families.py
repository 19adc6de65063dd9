#!/usr/bin/env python3
"""The two hand-built instance families that bracket the approximation.

The tight family shows the sparsifier's guarantee cannot be improved: a
valid sparsifier whose best matching is a full factor
1 + (beta-1)/beta_minus - 1/(2W) below the optimum.  The multicopy family
shows why the naive alternative (one unweighted sparsifier per weight
class, union the results) is strictly worse: its ratio grows past 2 once
W >= 3.

Run: python3 demos/02_worst_case_families.py
"""

from fractions import Fraction

from wedcs import (
    max_weight_b_matching_exact,
    multicopy_instance,
    tight_instance,
    validate,
)


def best_within(graph, members, capacities) -> int:
    sub, _ = graph.restrict(members)
    return max_weight_b_matching_exact(sub, capacities).weight


print("tight family: ratio = 1 + (beta-1)/beta_minus - 1/(2W)")
for k, W in [(1, 1), (2, 1), (1, 2), (2, 2)]:
    inst = tight_instance(k=k, W=W)
    report = validate(inst.graph, inst.capacities, inst.edcs, inst.params)
    assert report.is_clean
    trapped = best_within(inst.graph, inst.edcs.members, inst.capacities)
    optimum = max_weight_b_matching_exact(inst.graph, inst.capacities).weight
    assert (trapped, optimum) == (inst.sparsifier_matching_weight,
                                  inst.optimal_matching_weight)
    p = inst.params
    closed = 1 + Fraction(p.beta - 1, p.beta_minus) - Fraction(1, 2 * W)
    print(f"  k={k} W={W}: beta={p.beta}, beta_minus={p.beta_minus}, "
          f"matching {trapped} vs optimum {optimum}, ratio {Fraction(optimum, trapped)}"
          f" (closed form {closed})")

print("\nmulticopy family: per-weight-class sparsifiers, unioned")
for W in (2, 3, 4):
    inst = multicopy_instance(k=1, W=W)
    trapped = best_within(inst.graph, inst.union_edcs.members, inst.capacities)
    optimum = max_weight_b_matching_exact(inst.graph, inst.capacities).weight
    ratio = Fraction(optimum, trapped)
    note = "worse than a factor 2!" if ratio > 2 else ""
    print(f"  W={W}: union traps the matching at {trapped} vs optimum {optimum}, "
          f"ratio {ratio} {note}")
