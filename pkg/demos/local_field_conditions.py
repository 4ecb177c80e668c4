"""Subfield conditions for degree-n extensions of Q_p, with their evidence.

Run:  python3 demos/local_field_conditions.py
"""
from commgraph.localfields import (
    WREATH_C2_C7,
    condition_a,
    count_quadratic,
    count_ramified_quadratic,
    explain_lines,
    galois_subgroup_hypotheses,
)

for line in explain_lines(2, 12):
    print(line)

# condition (a) fails at f = 4 because 3 divides 2^4 - 1
print("\n", condition_a(2, 12, 3).to_json())
print("", condition_a(5, 15, 3).to_json())

# quadratic extensions of the unramified degree-d extension of Q_2
for d in (1, 2, 7):
    print(f"d={d}: {count_ramified_quadratic(d)} ramified, {count_quadratic(d)} in total")

print("\nC2 wr C7 meets the subgroup hypotheses:", galois_subgroup_hypotheses(**WREATH_C2_C7))
