"""Common index jumps for a pair of paths, verified at the found tuples.

The search looks for N with N / (M_bar * mean_k) simultaneously close to an
integer for every path.  At such tuples the indices of the iterates 2 m_k +- m
are pinned down by the low iterates; the verifier checks each identity with
independently computed sides.
"""

from symindex import Angle, HyperbolicBlock, PathSpec, Q0Block, QSignBlock, RotationBlock
from symindex.verify import run_trial

specs = [
    PathSpec((RotationBlock(Angle.exact(2, 3)), Q0Block(3))),
    PathSpec((RotationBlock(Angle.from_radians(1.3)), QSignBlock(1, -1), HyperbolicBlock(0.5))),
]

trial = run_trial(specs, epsilon=1e-3, n_max=10**7, want=3, seed=0)
for cert, ecijt, ir in zip(trial.certificates, trial.ecijt, trial.ir):
    print(f"N = {cert.N}, m = {cert.m}, chi = {cert.chi}")
    print(f"    jump identities: {ecijt.counts()}")
    print(f"    index recurrence: {ir.counts()}")

# One report in full, as the CLI prints it with --format table.
print()
print(trial.ecijt[0].table())
