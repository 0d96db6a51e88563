"""Splitting numbers ``S^+/-_M(omega)`` from block tables and from index jumps.

The numeric route reads the splitting numbers off one-sided limits of the
omega-index,

    S^+(omega) = i_{omega e^{+i eps}} - i_omega,    S^-(omega) = i_{omega e^{-i eps}} - i_omega,

with ``eps`` below the distance to every other unit eigenvalue of ``M``, where
the index is locally constant.  The table route sums known values block by
block and never touches an index engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .angles import ZERO, Angle
from .core import DEFAULT_TOL, Tolerances, unit_spectrum
from .errors import NumericalFailure
from .generators import (
    Block,
    GenericQ,
    HyperbolicBlock,
    PathSpec,
    Q0Block,
    QSignBlock,
    RotationBlock,
    ZeroForm,
    invariants_of,
    rotation_closes,
)
from .paths import evaluate, evaluate_block
from .spectral import direct_index

ANGLE_MATCH = 1e-9
Pair = tuple[int, int]


def _find(entries: dict, angle: Angle) -> Angle | None:
    if angle in entries:
        return angle
    if not angle.is_exact:
        for key in entries:
            if not key.is_exact and key.distance(angle) <= ANGLE_MATCH:
                return key
    return None


def _add(entries: dict, angle: Angle, pair: Pair) -> None:
    key = _find(entries, angle)
    if key is None:
        entries[angle] = pair
    else:
        a, b = entries[key]
        entries[key] = (a + pair[0], b + pair[1])


@dataclass(frozen=True)
class SplittingProfile:
    entries: dict = field(default_factory=dict)
    source: str = "table"

    def get(self, angle: Angle) -> Pair:
        key = _find(self.entries, angle)
        return self.entries[key] if key is not None else (0, 0)

    def s_minus(self, angle: Angle) -> int:
        return self.get(angle)[1]

    def s_plus(self, angle: Angle) -> int:
        return self.get(angle)[0]

    def angles(self) -> list[Angle]:
        return sorted(self.entries)

    def merged(self, other: "SplittingProfile") -> "SplittingProfile":
        entries = dict(self.entries)
        for a, pair in other.entries.items():
            _add(entries, a, pair)
        source = self.source if self.source == other.source else "mixed"
        return SplittingProfile(entries, source)

    def to_json(self) -> list:
        return [
            {"angle": a.to_json(), "label": a.label(), "S_plus": p[0], "S_minus": p[1]}
            for a, p in sorted(self.entries.items())
        ]


# ------------------------------------------------------------ numeric route
def _eigen_angles(M: np.ndarray, tol: Tolerances) -> list[Angle]:
    return [u.angle for u in unit_spectrum(M, tol)]


def _gap(theta: float, others: list[Angle]) -> float:
    gap = math.pi / 2
    probe = Angle(None, theta)
    for a in others:
        d = probe.distance(a)
        if d > ANGLE_MATCH:
            gap = min(gap, d)
    return gap


def numeric_splitting(Q: np.ndarray, omega: Angle, eigen_angles: list[Angle],
                      tol: Tolerances = DEFAULT_TOL) -> Pair:
    """Jump of the omega-index across ``omega`` for the path generated by ``Q``."""
    theta = omega.value
    base, _ = direct_index(Q, theta, tol)
    gap = _gap(theta, eigen_angles)
    # off the spectrum the kernel is empty: count signs with no zero band, since
    # iterated Jordan blocks have genuine mode eigenvalues of order eps^(2d)
    ladder = []
    for frac in (0.5, 0.25, 0.125):
        eps = gap * frac
        up, _ = direct_index(Q, theta + eps, tol, zero_band=False)
        down, _ = direct_index(Q, theta - eps, tol, zero_band=False)
        ladder.append((up - base, down - base))
    if ladder[-1] != ladder[-2]:
        raise NumericalFailure(f"splitting jump at {omega!r} did not stabilize", condition=ladder)
    s_plus, s_minus = ladder[-1]
    if s_plus < 0 or s_minus < 0:
        raise NumericalFailure(f"negative splitting number at {omega!r}", condition=ladder)
    return s_plus, s_minus


def _numeric_profile_of(Q: np.ndarray, M: np.ndarray, tol: Tolerances) -> SplittingProfile:
    angles = _eigen_angles(M, tol)
    return SplittingProfile({a: numeric_splitting(Q, a, angles, tol) for a in angles}, "numeric")


# -------------------------------------------------------------- table route
def block_table(b: Block, tol: Tolerances = DEFAULT_TOL) -> SplittingProfile:
    """Splitting numbers of one block's end matrix from the normal-form tables."""
    if isinstance(b, ZeroForm):
        return SplittingProfile({ZERO: (b.nu0, b.nu0)})
    if isinstance(b, Q0Block):
        # I_2 plus a hyperbolic remainder
        return SplittingProfile({ZERO: (1, 1)})
    if isinstance(b, QSignBlock):
        # N_1(1, -sign) plus a hyperbolic remainder
        value = 1 if b.sign < 0 else 0
        return SplittingProfile({ZERO: (value, value)})
    if isinstance(b, RotationBlock):
        if rotation_closes(b):
            return SplittingProfile({ZERO: (1, 1)})
        end = b.theta.times(b.mult)
        if end.is_exact and end.pi_frac == 1:
            return SplittingProfile({end: (1, 1)})
        return SplittingProfile({end: (0, 1), end.conj(): (1, 0)})
    if isinstance(b, HyperbolicBlock):
        return SplittingProfile({})
    if isinstance(b, GenericQ):
        M = evaluate_block(b, 1.0)
        prof = _numeric_profile_of(b.quadratic_form(), M, tol)
        return SplittingProfile(prof.entries, "numeric")
    raise TypeError(f"unsupported block {b!r}")


def splitting_profile(spec: PathSpec, route: str = "table", tol: Tolerances = DEFAULT_TOL) -> SplittingProfile:
    """One entry per unit eigenvalue of the end matrix."""
    if route == "numeric":
        return _numeric_profile_of(spec.quadratic_form(), evaluate(spec, 1.0, tol), tol)
    if route != "table":
        raise ValueError(f"route must be 'table' or 'numeric', got {route!r}")
    out = SplittingProfile({}, "table")
    for b in spec.blocks:
        out = out.merged(block_table(b, tol))
    return out


def splitting_numbers(spec: PathSpec, omega: Angle, route: str = "table",
                      tol: Tolerances = DEFAULT_TOL) -> Pair:
    """``(S^+, S^-)`` of the end matrix at ``omega``."""
    if route == "numeric":
        M = evaluate(spec, 1.0, tol)
        angles = _eigen_angles(M, tol)
        if not any(a == omega or (not a.is_exact and a.distance(omega) <= ANGLE_MATCH) for a in angles):
            return (0, 0)
        return numeric_splitting(spec.quadratic_form(), omega, angles, tol)
    return splitting_profile(spec, route, tol).get(omega)


def bott_splitting(profile: SplittingProfile, m: int) -> int:
    """``sum over omega^m = 1 of S^-(omega)``; numeric angles never resonate."""
    if m < 1:
        raise ValueError("m must be positive")
    return sum(p[1] for a, p in profile.entries.items() if a.resonates(m))


@dataclass(frozen=True)
class BetaCheck:
    beta_minus: int
    beta_plus: int
    s_minus_table: int
    s_minus_numeric: int
    nullity: int
    passed: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def beta_minus_check(spec: PathSpec, tol: Tolerances = DEFAULT_TOL) -> BetaCheck:
    """Compare the combinatorial beta_- with S^-(1) from both splitting routes.

    Also checks ``beta_+ + beta_- = nu`` against the kernel dimension at 1.
    """
    from .core import nullity

    inv = invariants_of(spec, tol)
    table = splitting_numbers(spec, ZERO, "table", tol)[1]
    numeric = splitting_numbers(spec, ZERO, "numeric", tol)[1]
    nu = nullity(evaluate(spec, 1.0, tol), ZERO, tol)
    ok = inv.beta_minus == table == numeric and inv.beta_plus + inv.beta_minus == nu
    return BetaCheck(inv.beta_minus, inv.beta_plus, table, numeric, nu, ok)
