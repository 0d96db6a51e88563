"""Common index jump machinery: resonance bounds, the tuple search and resonance sums."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .angles import Angle, Real
from .core import DEFAULT_TOL, Tolerances, unit_spectrum
from .errors import PreconditionError
from .generators import PathSpec
from .paths import evaluate
from .splitting import SplittingProfile, splitting_profile

log = logging.getLogger(__name__)

INF = math.inf
GUARD_BAND = 1e-9
CHUNK = 1 << 20


def _exact_unit_angles(spec: PathSpec, tol: Tolerances) -> list[Angle]:
    return [u.angle for u in unit_spectrum(evaluate(spec, 1.0, tol), tol) if u.angle.is_exact]


def m_check_one(spec: PathSpec, tol: Tolerances = DEFAULT_TOL) -> int | float:
    """Least k with k theta in 2 pi Z over rational eigen-angles in (0, 2 pi); inf if none."""
    periods = [a.period() for a in _exact_unit_angles(spec, tol) if not a.is_zero]
    return min(periods) if periods else INF


def m_check(specs: Sequence[PathSpec], tol: Tolerances = DEFAULT_TOL) -> int | float:
    return min((m_check_one(s, tol) for s in specs), default=INF)


def m_bar(specs: Sequence[PathSpec], tol: Tolerances = DEFAULT_TOL) -> int:
    """Least M >= 1 with M theta / pi in Z for every rational eigen-angle of every end matrix."""
    out = 1
    for s in specs:
        for a in _exact_unit_angles(s, tol):
            out = math.lcm(out, a.pi_frac.denominator)
    return out


@dataclass(frozen=True)
class JumpCertificate:
    N: int
    m: tuple
    chi: tuple
    epsilon: float
    m_bar: int
    residuals: tuple
    mean_indices: tuple

    def residual_bound(self, k: int) -> float:
        """``2 M_bar i_k |{N / (M_bar i_k)} - chi_k|``, the bound on ``|2 m_k i_k - 2N|``."""
        return 2 * self.m_bar * float(self.mean_indices[k]) * self.residuals[k]

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "m": list(self.m),
            "chi": list(self.chi),
            "epsilon": self.epsilon,
            "m_bar": self.m_bar,
            "residuals": [float(r) for r in self.residuals],
            "mean_indices": [_real_json(x) for x in self.mean_indices],
        }


def _real_json(x: Real):
    if isinstance(x, Fraction):
        return {"num": x.numerator, "den": x.denominator, "value": float(x)}
    return float(x)


def _exact_parts(N: int, mean: Real, mb: int) -> tuple[int, Fraction]:
    """Floor and fractional part of ``N / (M_bar i)``, computed in rationals."""
    x = Fraction(N) / (mb * Fraction(mean))
    fl = math.floor(x)
    return fl, x - fl


def _frac_chunk(Ns: np.ndarray, mean: Real, mb: int) -> np.ndarray:
    if isinstance(mean, Fraction):
        # N q / (M p): exact remainder in int64
        num, den = mean.denominator, mb * mean.numerator
        return ((Ns * num) % den) / den
    x = Ns / (mb * float(mean))
    return x - np.floor(x)


def find_jump_tuples(
    mean_indices: Sequence[Real],
    m_bar_value: int,
    epsilon: float,
    want: int,
    n_max: int,
    min_m: int = 1,
) -> tuple[list[JumpCertificate], str | None]:
    """Scan N = 1..n_max for simultaneous near-integers of ``N / (M_bar i_k)``.

    Returns the certificates in increasing N and a warning string when fewer
    than ``want`` were found.  ``min_m`` drops tuples with some ``m_k`` below
    it (iterates ``2 m_k - m`` must stay positive).
    """
    means = list(mean_indices)
    if not means:
        raise PreconditionError("need at least one mean index")
    if any(float(x) <= 0 for x in means):
        raise PreconditionError("every mean index must be positive")
    if not 0 < epsilon < 0.5:
        raise PreconditionError(f"epsilon must lie in (0, 1/2), got {epsilon}")
    if m_bar_value < 1 or want < 1 or n_max < 1:
        raise PreconditionError("m_bar, want and n_max must be positive")

    certs: list[JumpCertificate] = []
    start = 1
    while start <= n_max and len(certs) < want:
        stop = min(n_max, start + CHUNK - 1)
        Ns = np.arange(start, stop + 1, dtype=np.int64)
        ok = np.ones(len(Ns), dtype=bool)
        for mean in means:
            f = _frac_chunk(Ns, mean, m_bar_value)
            ok &= (f < epsilon) | (f > 1 - epsilon)
        for N in Ns[ok]:
            cert = _certify(int(N), means, m_bar_value, epsilon)
            if cert is not None and min(cert.m) >= min_m:
                certs.append(cert)
                if len(certs) == want:
                    break
        start = stop + 1
    warning = None
    if len(certs) < want:
        warning = f"found {len(certs)} of {want} requested tuples with N <= {n_max}"
        log.warning(warning)
    return certs, warning


def _certify(N: int, means: list[Real], mb: int, eps: float) -> JumpCertificate | None:
    ms, chis, res = [], [], []
    for mean in means:
        fl, fr = _exact_parts(N, mean, mb)
        if fr < eps:
            chi = 0
        elif fr > 1 - eps:
            chi = 1
        else:
            return None
        ms.append((fl + chi) * mb)
        chis.append(chi)
        res.append(float(abs(fr - chi)))
    return JumpCertificate(N, tuple(ms), tuple(chis), eps, mb, tuple(res), tuple(means))


def recheck_certificate(cert: JumpCertificate) -> bool:
    """Independent re-evaluation of both defining invariants of a certificate."""
    for k, mean in enumerate(cert.mean_indices):
        fl, fr = _exact_parts(cert.N, mean, cert.m_bar)
        if cert.m[k] != (fl + cert.chi[k]) * cert.m_bar:
            return False
        if not abs(fr - cert.chi[k]) < cert.epsilon:
            return False
    return True


# ---------------------------------------------------------- resonance sums
def _profile(spec: PathSpec, profile: SplittingProfile | None, tol: Tolerances) -> SplittingProfile:
    return profile if profile is not None else splitting_profile(spec, "table", tol)


def q_k(spec: PathSpec, m_k: int, m: int, profile: SplittingProfile | None = None,
        tol: Tolerances = DEFAULT_TOL) -> int:
    """Sum of ``S^-`` over rational eigen-angles in (0, 2 pi) with
    ``m_k theta / pi`` and ``m theta / (2 pi)`` both integers."""
    prof = _profile(spec, profile, tol)
    total = 0
    for a, (_, s_minus) in prof.entries.items():
        if a.is_exact and not a.is_zero and a.frac_over_pi(m_k) == 0 and a.frac_over_2pi(m) == 0:
            total += s_minus
    return total


@dataclass(frozen=True)
class DeltaResult:
    value: int
    fractional_parts: tuple
    warnings: tuple


def delta_k(spec: PathSpec, m_k: int, delta: float = 0.1, profile: SplittingProfile | None = None,
            tol: Tolerances = DEFAULT_TOL) -> DeltaResult:
    """Sum of ``S^-`` over eigen-angles with ``0 < {m_k theta / pi} < delta``."""
    if not 0 < delta < 1:
        raise PreconditionError(f"delta must lie in (0, 1), got {delta}")
    prof = _profile(spec, profile, tol)
    total = 0
    parts = []
    warnings = []
    for a, (_, s_minus) in sorted(prof.entries.items()):
        fr = a.frac_over_pi(m_k)
        parts.append((a.label(), float(fr)))
        if not a.is_exact:
            near = min(abs(fr), abs(fr - delta), abs(1 - fr))
            if near < GUARD_BAND:
                warnings.append(f"fractional part {float(fr):.3e} of angle {a.label()} is within {GUARD_BAND} of a boundary")
        if 0 < fr < delta:
            total += s_minus
    return DeltaResult(total, tuple(parts), tuple(warnings))


def c_total(spec: PathSpec, profile: SplittingProfile | None = None, tol: Tolerances = DEFAULT_TOL) -> int:
    """Sum of ``S^-`` over all eigen-angles in (0, 2 pi)."""
    prof = _profile(spec, profile, tol)
    return sum(s for a, (_, s) in prof.entries.items() if not a.is_zero)
