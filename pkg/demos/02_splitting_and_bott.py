"""Splitting numbers two ways, and the Bott-type iteration sums.

The table route adds known per-block values; the numeric route reads the
jumps of the omega-index off the assembled generator.  They must agree.
"""

from symindex import Angle, PathSpec, Q0Block, QSignBlock, RotationBlock, ZERO, iterate
from symindex.splitting import bott_splitting, splitting_numbers, splitting_profile

spec = PathSpec((RotationBlock(Angle.exact(1, 2)), RotationBlock(Angle.exact(2, 3)), Q0Block(3), QSignBlock(1, -1)))

table = splitting_profile(spec, "table")
numeric = splitting_profile(spec, "numeric")
print("angle        table (S+, S-)   numeric (S+, S-)")
for a in table.angles():
    print(f"{a.label():<12} {str(table.get(a)):<16} {numeric.get(a)}")

# Sum of S^- over the m-th roots of unity equals S^- at 1 of the m-th iterate.
print("\n m   sum over roots   S^-(1) of iterate")
for m in range(1, 13):
    print(f"{m:2d}   {bott_splitting(table, m):14d}   {splitting_numbers(iterate(spec, m), ZERO, 'numeric')[1]:17d}")
