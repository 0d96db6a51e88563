"""Seeded random specs for property tests and verification trials."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import scipy.linalg

from .angles import Angle
from .core import J
from .generators import (
    Block,
    GenericQ,
    HyperbolicBlock,
    PathSpec,
    Q0Block,
    QSignBlock,
    RotationBlock,
    ZeroForm,
)

# exact rotation angles theta / pi in (0, 2) with small denominators
EXACT_FRACTIONS = sorted({Fraction(p, q) for q in range(1, 5) for p in range(1, 2 * q)})


def _far_from_resonance(a: float, m_max: int, margin: float) -> bool:
    """True iff m a / 2 stays ``margin`` away from the integers for m <= m_max."""
    for m in range(1, m_max + 1):
        x = m * a / 2
        if abs(x - round(x)) < margin:
            return False
    return True


def irrational_over_pi(rng: np.random.Generator, lo: float = 0.2, hi: float = 1.8,
                       m_max: int = 24, margin: float = 0.02) -> float:
    """A value ``a = theta / pi`` kept away from low-order resonances."""
    while True:
        a = float(rng.uniform(lo, hi))
        if _far_from_resonance(a, m_max, margin) and abs(a - Fraction(a).limit_denominator(64)) > 1e-4:
            return a


def rotation(rng: np.random.Generator, exact: bool | None = None) -> RotationBlock:
    if exact is None:
        exact = bool(rng.random() < 0.5)
    if exact:
        f = EXACT_FRACTIONS[int(rng.integers(len(EXACT_FRACTIONS)))]
        return RotationBlock(Angle.exact(f))
    return RotationBlock(Angle(None, irrational_over_pi(rng) * math.pi))


def hyperbolic(rng: np.random.Generator, a_max: float = 1.0) -> HyperbolicBlock:
    return HyperbolicBlock(float(rng.choice([-1, 1]) * rng.uniform(0.3, a_max)))


def _conjugator(rng: np.random.Generator, k: int, size: float = 0.3) -> np.ndarray:
    R = rng.normal(size=(2 * k, 2 * k)) * size
    return scipy.linalg.expm(J(k) @ (R + R.T) / 2)


def conjugated_elliptic(rng: np.random.Generator, k: int = 2) -> GenericQ:
    """``S^T D S`` with D a sum of rotation forms at irrational frequencies."""
    freqs = [irrational_over_pi(rng) * math.pi for _ in range(k)]
    D = np.diag(freqs + freqs)
    S = _conjugator(rng, k)
    return GenericQ.from_array(S.T @ D @ S)


def conjugated_hyperbolic(rng: np.random.Generator, k: int = 1, a_max: float = 1.0) -> GenericQ:
    blocks = [hyperbolic(rng, a_max).quadratic_form() for _ in range(k)]
    from .core import darboux_sum

    D = darboux_sum(*blocks)
    S = _conjugator(rng, k)
    return GenericQ.from_array(S.T @ D @ S)


def random_symmetric(rng: np.random.Generator, k: int = 1, scale: float = 1.0, m_max: int = 24) -> GenericQ:
    """A random symmetric form whose end-matrix spectrum is away from trouble.

    Rejects forms with eigenvalues of ``J Q`` near the imaginary axis unless
    they are on it, and imaginary frequencies near low-order resonances.
    """
    while True:
        A = rng.normal(size=(2 * k, 2 * k)) * scale
        Q = (A + A.T) / 2
        lam = np.linalg.eigvals(J(k) @ Q)
        ok = True
        for z in lam:
            if abs(z.real) < 1e-8:
                a = abs(z.imag) / math.pi
                if a < 0.05 or not _far_from_resonance(a, m_max, 0.01) or abs(a - Fraction(a).limit_denominator(64)) < 1e-4:
                    ok = False
            elif abs(z.real) < 0.1:
                ok = False
        if ok:
            return GenericQ.from_array(Q)


def degenerate_block(rng: np.random.Generator) -> Block:
    kind = int(rng.integers(3))
    if kind == 0:
        return ZeroForm(int(rng.integers(1, 3)))
    if kind == 1:
        return Q0Block(int(rng.choice([1, 3])))
    return QSignBlock(int(rng.integers(1, 4)), int(rng.choice([-1, 1])))


def random_spec(rng: np.random.Generator, max_blocks: int = 3, generic: bool = True,
                max_half_dim: int = 6) -> PathSpec:
    """A spec of 1..max_blocks blocks drawn from every supported kind."""
    makers = [
        lambda: degenerate_block(rng),
        lambda: rotation(rng),
        lambda: hyperbolic(rng),
    ]
    if generic:
        makers += [
            lambda: conjugated_elliptic(rng, 1),
            lambda: conjugated_hyperbolic(rng, 1),
            lambda: random_symmetric(rng, 1),
        ]
    while True:
        count = int(rng.integers(1, max_blocks + 1))
        blocks = tuple(makers[int(rng.integers(len(makers)))]() for _ in range(count))
        spec = PathSpec(blocks)
        if spec.n <= max_half_dim:
            return spec


def trial_spec(rng: np.random.Generator, allow_irrational: bool = True) -> PathSpec:
    """A spec with positive mean index for common-index-jump trials.

    At least one rotation; at most one irrational rotation angle, since two
    independent irrational frequencies in one path break the identities the
    trials check (their resonances are not controlled by a single tuple).
    """
    blocks: list[Block] = [rotation(rng, exact=not allow_irrational or bool(rng.random() < 0.5))]
    has_irrational = not blocks[0].theta.is_exact
    for _ in range(int(rng.integers(0, 3))):
        kind = int(rng.integers(5))
        if kind == 0:
            blocks.append(degenerate_block(rng))
        elif kind == 1:
            exact = has_irrational or not allow_irrational or bool(rng.random() < 0.5)
            blocks.append(rotation(rng, exact=exact))
            has_irrational |= not exact
        elif kind == 2:
            blocks.append(hyperbolic(rng, 1.5))
        elif kind == 3:
            blocks.append(conjugated_hyperbolic(rng, 1, 1.5))
        else:
            blocks.append(degenerate_block(rng))
    order = rng.permutation(len(blocks))
    return PathSpec(tuple(blocks[i] for i in order))


def _collection_m_bar(specs: list[PathSpec]) -> int:
    out = 1
    for spec in specs:
        for b in spec.blocks:
            if isinstance(b, RotationBlock) and b.theta.is_exact:
                out = math.lcm(out, b.theta.pi_frac.denominator)
    return out


def collection_is_safe(specs: list[PathSpec], epsilon: float, m_range: int = 12) -> bool:
    """True iff every irrational rotation stays clear of the jump tolerance.

    A certificate only pins ``m_k a`` to within ``M_bar i_k epsilon`` of an
    integer, so ``m a / 2`` must stay at least twice that far from the
    integers for the iterates ``m <= m_range`` that the checks touch.
    """
    from .spectral import profile_mean

    mb = _collection_m_bar(specs)
    for spec in specs:
        slack = 2 * mb * float(profile_mean(spec)) * epsilon
        for b in spec.blocks:
            if isinstance(b, RotationBlock) and not b.theta.is_exact:
                if not _far_from_resonance(b.theta.value / math.pi, m_range, slack):
                    return False
    return True


def trial_collection(rng: np.random.Generator, q_max: int = 3, epsilon: float = 1e-3,
                     m_range: int = 12) -> list[PathSpec]:
    """1..q_max trial specs, at most two of them with an irrational frequency.

    Each irrational mean index adds a dimension to the simultaneous
    approximation problem; capping at two keeps the expected number of hits
    below ``N = 10^7`` in the dozens for ``epsilon = 1e-3``.
    """
    while True:
        q = int(rng.integers(1, q_max + 1))
        specs = []
        irrational = 0
        for _ in range(q):
            spec = trial_spec(rng, allow_irrational=irrational < 2)
            if any(isinstance(b, RotationBlock) and not b.theta.is_exact for b in spec.blocks):
                irrational += 1
            specs.append(spec)
        if collection_is_safe(specs, epsilon, m_range):
            return specs
