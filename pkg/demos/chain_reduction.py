"""Reducing a commuting chain over Q modulo p without losing any link.

Entries like 2I + 4N reduce to a scalar mod 2, which would break the chain.
Shifting by the scalar and dividing out the p-power fixes that and keeps
every commutation relation.

Run:  python3 demos/chain_reduction.py
"""
import random

from commgraph import QQ, SquareMatrix, verify_chain
from commgraph.witness import normalize_matrix, random_commuting_chain, reduce_chain, reduce_matrix

N = SquareMatrix(((0, 1), (0, 0)), QQ)
X = SquareMatrix.scalar(2, 2, QQ) + N.scale(4)
print("X =", X.rows, " naive reduction mod 2:", reduce_matrix(X.scale(QQ("1/2")), 2).rows)
print("normalized:", normalize_matrix(X, 2).rows)

rng = random.Random(0)
chain = random_commuting_chain(rng, 3)
print("\nrandom chain over Q, entries:")
for M in chain:
    print("   ", [[str(x) for x in r] for r in M.rows])
red = reduce_chain(chain, 3)
print("reduced mod 3:")
for M in red:
    print("   ", M.rows)
print("still a commuting chain:", bool(verify_chain(red)))
