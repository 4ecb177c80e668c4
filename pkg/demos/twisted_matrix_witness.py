"""The matrix machinery behind diameter 6, run over F_3 with q = 7.

K = F_3[C] is the field with 3^7 elements.  U twists K by Frobenius, and
S = [[I, U], [U, -U^3]] moves M_2(K) so that nothing in M_2(K) commutes with
anything in S^-1 M_2(K) S.

Run:  python3 demos/twisted_matrix_witness.py
"""
import time

from commgraph.graph import verify_chain
from commgraph.witness import (
    build_bundle,
    check_U,
    distance_lower_probe,
    noncommutation_probe,
    random_frame_nonderogatory,
    witness_chain,
)

t0 = time.perf_counter()
b = build_bundle(3, 7, seed=0)
print("m =", b.data.m)
print("U =")
for row in b.U.rows:
    print("   ", " ".join(str(x) for x in row))
print("checks:", check_U(b.C, b.U))
print("U^7 =", (b.U ** 7).rows[0][0], "* I")

report = noncommutation_probe(b, trials=200, seed=1)
print("\nprobe:", report.to_json())

A = random_frame_nonderogatory(b, seed=0)
print("joint commutant:", distance_lower_probe(b, A).to_json())

chain = witness_chain(b, A)
print(f"explicit chain of length {len(chain) - 1}: valid = {bool(verify_chain(chain))}")
print(f"({time.perf_counter() - t0:.1f}s)")
