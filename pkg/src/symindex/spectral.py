"""Index engines for paths ``t -> exp(t J Q)``.

Two engines live here.

*Fourier modes.*  For ``omega = e^{i theta}`` the omega-index of the path
generated by ``Q`` is

    i_omega = sum_k [ m^-(H(2 pi k + theta)) - n ],   H(x) = x K - Q,  K = -i J,

where ``m^-`` counts negative eigenvalues of the Hermitian matrix ``H(x)``, and
the omega-nullity is ``sum_k dim ker H(2 pi k + theta)``.  ``H(x)`` is
invertible with exactly ``n`` negative eigenvalues once ``|x| > ||Q||``, so the
sums are finite.  Normalization: the identity path on R^{2n} has index ``-n``
at ``omega = 1`` and a rotation by a small positive angle has index 1.

*Step profiles.*  Scaling ``Q`` by ``m`` rescales ``x``, so every iterate is
read off one step function ``f(u) = m^-(H(pi u)) - n``:

    i_omega(gamma^m) = sum_k f((2k + theta/pi) / m).

``f`` jumps only where ``i pi u`` is an eigenvalue of ``J Q``; counting lattice
points per constant piece makes huge iterates cheap and, for exact data, exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .angles import Angle, Real, snap_rational
from .core import DEFAULT_TOL, Tolerances, J
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
)

HIT_TOL = 1e-9
MAX_MODES = 200_000


# ------------------------------------------------------------ Fourier modes
def _K(n: int) -> np.ndarray:
    return -1j * J(n)


def _mode_range(radius: float, theta: float) -> range:
    k_lo = math.floor((-radius - theta) / (2 * math.pi)) - 1
    k_hi = math.ceil((radius - theta) / (2 * math.pi)) + 1
    if k_hi - k_lo > MAX_MODES:
        raise NumericalFailure(
            f"direct mode sum would need {k_hi - k_lo} modes; use the step-profile engine",
            condition=radius,
        )
    return range(k_lo, k_hi + 1)


def mode_eigenvalues(Q: np.ndarray, theta: float, extra: float = 0.0):
    """Yield ``(x, eigvalsh(H(x)))`` for every mode that can differ from the far field."""
    Q = np.asarray(Q, dtype=float)
    n = Q.shape[0] // 2
    K = _K(n)
    radius = np.linalg.norm(Q, 2) + extra + 1e-9
    for k in _mode_range(radius, theta):
        x = 2 * math.pi * k + theta
        if abs(x) > radius:
            continue
        yield x, np.linalg.eigvalsh(x * K - Q)


def _zero_tol(Q: np.ndarray, x: float, tol: Tolerances) -> float:
    return tol.tol_herm * max(1.0, np.linalg.norm(Q, 2), abs(x))


def direct_index(Q: np.ndarray, theta: float, tol: Tolerances = DEFAULT_TOL,
                 zero_band: bool = True) -> tuple[int, int]:
    """``(i_omega, nu_omega)`` of ``exp(t J Q)`` by summing Fourier modes.

    With ``zero_band=False`` eigenvalues are classified by sign alone; use it
    only where the kernel is known to be empty.
    """
    Q = np.asarray(Q, dtype=float)
    n = Q.shape[0] // 2
    index = 0
    kernel = 0
    for x, ev in mode_eigenvalues(Q, theta):
        z = _zero_tol(Q, x, tol) if zero_band else 0.0
        index += int(np.sum(ev < -z)) - n
        kernel += int(np.sum(np.abs(ev) <= z))
    return index, kernel


def direct_shifted_index(Q: np.ndarray, theta: float, s: float) -> int:
    """Index of the non-degenerate path generated by ``Q - s I`` (``s`` may be negative)."""
    Q = np.asarray(Q, dtype=float)
    n = Q.shape[0] // 2
    total = 0
    for _, ev in mode_eigenvalues(Q, theta, extra=abs(s)):
        total += int(np.sum(ev < s)) - n
    return total


def perturbed_indices(Q: np.ndarray, theta: float = 0.0, scales=(1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8)):
    """``(mu_-, mu_+, ladder)`` from the perturbations ``Q -/+ s I`` with a shrinking ``s``.

    Moving ``Q`` to ``Q + s I`` shifts every eigenvalue of ``H(x)`` down by
    ``s``; the index of that non-degenerate path is ``sum #{eig < s} - n``.
    The ladder stops as soon as two consecutive sizes agree on both values.
    """
    Q = np.asarray(Q, dtype=float)
    size = max(1.0, float(np.linalg.norm(Q, 2)))
    ladder = []
    for j, c in enumerate(scales):
        s = c * size
        pair = (direct_shifted_index(Q, theta, -s), direct_shifted_index(Q, theta, s))
        ladder.append((s, pair))
        if j >= 2 and ladder[-1][1] == ladder[-2][1]:
            return pair[0], pair[1], ladder
    raise NumericalFailure("perturbation ladder did not stabilize", condition=ladder)


# --------------------------------------------------------------- profiles
@dataclass(frozen=True)
class StepProfile:
    """Step function ``f`` with its kernel dimensions at the jump points.

    ``between[j]`` is the value on ``(breaks[j], breaks[j+1])``; ``f`` vanishes
    outside ``[breaks[0], breaks[-1]]``.  Breakpoints are Fractions when known
    exactly and floats otherwise.
    """

    breaks: tuple
    at: tuple
    kernel: tuple
    between: tuple
    exact: bool = True

    def mean(self) -> Real:
        """Half the integral of ``f``: the mean index per unit iterate."""
        total: Real = Fraction(0) if self.exact else 0.0
        for j, c in enumerate(self.between):
            total += c * (self.breaks[j + 1] - self.breaks[j])
        return total / 2

    def value(self, u: float) -> int:
        for j, b in enumerate(self.breaks):
            if u == b:
                return self.at[j]
        for j, c in enumerate(self.between):
            if self.breaks[j] < u < self.breaks[j + 1]:
                return c
        return 0


EMPTY = StepProfile((), (), (), ())


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


def _lattice_coord(m: int, b: Real, phi: Real) -> tuple[Real, bool]:
    """``(m b - phi) / 2`` and whether it is an integer."""
    if _is_exact(b) and _is_exact(phi):
        x = (m * Fraction(b) - Fraction(phi)) / 2
        return x, x.denominator == 1
    x = (m * float(b) - float(phi)) / 2
    if _is_exact(b) or _is_exact(phi):
        return x, False
    return x, abs(x - round(x)) <= HIT_TOL * max(1.0, abs(m * float(b)))


def evaluate_profile(p: StepProfile, m: int, phi: Real) -> tuple[int, int]:
    """``(i, nu)`` of the m-th iterate at ``omega = e^{i pi phi}``."""
    coords = [_lattice_coord(m, b, phi) for b in p.breaks]
    index = 0
    kernel = 0
    for j, (x, hit) in enumerate(coords):
        if hit:
            index += p.at[j]
            kernel += p.kernel[j]
    for j, c in enumerate(p.between):
        if c == 0:
            continue
        (lo, lo_hit), (hi, hi_hit) = coords[j], coords[j + 1]
        floor_lo = round(lo) if lo_hit else math.floor(lo)
        ceil_hi = round(hi) if hi_hit else math.ceil(hi)
        index += c * (ceil_hi - floor_lo - 1)
    return index, kernel


def _rotation_profile(b: RotationBlock) -> StepProfile:
    a = b.total_over_pi
    return StepProfile((-a, a), (0, 0), (1, 1), (1,), exact=_is_exact(a))


def _generic_profile(Q: np.ndarray, tol: Tolerances) -> StepProfile:
    Q = np.asarray(Q, dtype=float)
    n = Q.shape[0] // 2
    L = J(n) @ Q
    lam = np.linalg.eigvals(L)
    scale = max(1.0, float(np.linalg.norm(L, 2)))
    ims = sorted(float(z.imag) / math.pi for z in lam if abs(z.real) <= 1e-6 * scale)
    groups: list[list[float]] = []
    for u in ims:
        if groups and u - groups[-1][-1] <= 1e-6 * scale:
            groups[-1].append(u)
        else:
            groups.append([u])
    breaks = [snap_rational(float(np.mean(g)), tol.q_max, tol.tol_rat) for g in groups]
    if not breaks:
        return EMPTY

    K = _K(n)

    def count(u: float) -> tuple[int, int]:
        x = math.pi * u
        ev = np.linalg.eigvalsh(x * K - Q)
        z = _zero_tol(Q, x, tol)
        return int(np.sum(ev < -z)) - n, int(np.sum(np.abs(ev) <= z))

    fl = [float(b) for b in breaks]
    at, kernel = zip(*(count(u) for u in fl))
    between = tuple(count(0.5 * (fl[j] + fl[j + 1]))[0] for j in range(len(fl) - 1))
    gap = 1.0 + (fl[-1] - fl[0])
    if count(fl[0] - gap)[0] != 0 or count(fl[-1] + gap)[0] != 0:
        raise NumericalFailure("step profile does not vanish outside its jump points")
    if any(k == 0 for k in kernel):
        raise NumericalFailure("an imaginary eigenvalue of J Q produced no kernel in H")
    return StepProfile(tuple(breaks), tuple(at), tuple(kernel), between,
                       exact=all(_is_exact(b) for b in breaks))


@lru_cache(maxsize=4096)
def _block_profile_cached(b: Block, tol: Tolerances) -> StepProfile:
    if isinstance(b, ZeroForm):
        return StepProfile((Fraction(0),), (-b.nu0,), (2 * b.nu0,), ())
    if isinstance(b, Q0Block):
        return StepProfile((Fraction(0),), (-1,), (2,), ())
    if isinstance(b, QSignBlock):
        return StepProfile((Fraction(0),), ((b.sign - 1) // 2,), (1,), ())
    if isinstance(b, RotationBlock):
        return _rotation_profile(b)
    if isinstance(b, HyperbolicBlock):
        return EMPTY
    if isinstance(b, GenericQ):
        return _generic_profile(b.quadratic_form(), tol)
    raise TypeError(f"unsupported block {b!r}")


def block_profile(b: Block, tol: Tolerances = DEFAULT_TOL) -> StepProfile:
    """Step profile of the block's path, iteration multiplier included."""
    return _block_profile_cached(b, tol)


def _phi(omega: Angle) -> Real:
    return omega.pi_frac if omega.is_exact else omega.value / math.pi


def profile_index(spec: PathSpec, omega: Angle, m: int = 1, tol: Tolerances = DEFAULT_TOL) -> tuple[int, int]:
    """``(i_omega, nu_omega)`` of the m-th iterate of ``spec``, summed over blocks."""
    phi = _phi(omega)
    index = 0
    kernel = 0
    for b in spec.blocks:
        i, nu = evaluate_profile(block_profile(b, tol), m, phi)
        index += i
        kernel += nu
    return index, kernel


def profile_mean(spec: PathSpec, tol: Tolerances = DEFAULT_TOL) -> Real:
    total: Real = Fraction(0)
    for b in spec.blocks:
        total = total + block_profile(b, tol).mean()
    return total
