"""Indices of paths built from normal-form blocks.

Each block generates a path exp(t J Q) on its own symplectic plane pair.  We
build a few, look at the end matrices, and tabulate index, nullity and the
mean index over the first iterates.
"""

from symindex import (
    Angle,
    HyperbolicBlock,
    PathSpec,
    Q0Block,
    QSignBlock,
    RotationBlock,
    ZeroForm,
    evaluate,
    index_at_iterate,
    mean_index,
    phi0,
    unit_spectrum,
)

specs = {
    "identity path on R^2": PathSpec((ZeroForm(1),)),
    "unipotent Q0, d=3": PathSpec((Q0Block(3),)),
    "shear, sign +1": PathSpec((QSignBlock(1, 1),)),
    "shear, sign -1": PathSpec((QSignBlock(1, -1),)),
    "rotation by 2pi/3": PathSpec((RotationBlock(Angle.exact(2, 3)),)),
    "rotation by 1 rad": PathSpec((RotationBlock(Angle.from_radians(1.0)),)),
    "hyperbolic a=0.5": PathSpec((HyperbolicBlock(0.5),)),
    "full turn (normalization)": phi0(1),
}

for name, spec in specs.items():
    M = evaluate(spec, 1.0)
    spectrum = ", ".join(f"{u.angle.label()} x{u.alg_mult}" for u in unit_spectrum(M)) or "none"
    print(f"{name}: unit spectrum [{spectrum}], mean index {mean_index(spec):.6f}")
    for m in (1, 2, 3, 6):
        r = index_at_iterate(spec, m)
        print(f"    m={m}: i={r.i:3d}  nu={r.nu}  mu-={r.mu_minus:3d}  mu+={r.mu_plus:3d}")

# The index grows like m times the mean index; the gap mu+ - mu- is the nullity.
big = PathSpec((RotationBlock(Angle.from_radians(1.0)), Q0Block(3), HyperbolicBlock(0.3)))
r = index_at_iterate(big, 1_000_003, check=False)
print(f"\nm = 1000003: i = {r.i}, m * mean = {1_000_003 * mean_index(big):.3f}")
