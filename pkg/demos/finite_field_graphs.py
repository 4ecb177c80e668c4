"""Exhaustive commuting graphs over small finite fields.

Γ(F_p, n) has p^(n^2) - p vertices, but matrices with the same commutant are
interchangeable, so the search runs on commutant classes instead.

Run:  python3 demos/finite_field_graphs.py
"""
import time

from commgraph import Budget, BudgetExceeded, SquareMatrix, GF, ff_distance, ff_graph_summary

for p, n in [(2, 2), (3, 2), (2, 3), (3, 3), (2, 4)]:
    t0 = time.perf_counter()
    s = ff_graph_summary(p, n, Budget(threads=2))
    diam = int(s.diameter) if s.connected else "inf"
    print(f"F_{p}, n={n}: {s.vertex_count:6d} vertices -> {s.class_count:5d} classes, "
          f"{s.component_count:3d} components, diameter {diam}, "
          f"cliques only: {s.all_components_cliques}  ({time.perf_counter() - t0:.1f}s)")

# 2x2 over F_2: seven cliques of two matrices each.  A Jordan block and a projection never meet.
J = SquareMatrix(((1, 1), (0, 1)), GF(2))
E = SquareMatrix(((1, 0), (0, 0)), GF(2))
print("\nd(J, E) over F_2:", ff_distance(J, E))

# Larger cases are refused outright rather than sampled.
try:
    ff_graph_summary(2, 15)
except BudgetExceeded as exc:
    print("\n", exc)
