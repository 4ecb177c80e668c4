"""Which commuting graphs Γ(Q_p, n) are connected, and how far apart can two matrices be?

Run:  python3 demos/table_of_diameters.py
"""
from commgraph.classifier import classify, render_table

print(render_table())

# Every cell is an intersection of rule intervals.  A few cells, with the rules behind them:
for p, n in [(2, 14), (2, 15), (3, 4), (2, 6), (11, 9), (3, 9)]:
    v = classify(p, n)
    print(f"\nQ_{p}, n={n}: glyph {v.glyph}")
    for t in v.trace:
        span = "" if t.lo is None else f"[{t.lo},{t.hi}]"
        print(f"   {t.rule:3s} {span:6s} {t.detail}")

# R7 is not just n = 14: every n = 2q with q >= 7 prime over Q_2 is pinned to 6
print("\nn = 2q over Q_2:", {2 * q: classify(2, 2 * q).glyph for q in (5, 7, 11, 13)})
