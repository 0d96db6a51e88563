"""Points on the unit circle, exact when the angle is a rational multiple of pi.

An exact angle stores ``theta / pi`` as a reduced :class:`fractions.Fraction` in
``[0, 2)``; every fractional-part question about it (``{m theta / pi}``,
``m theta in 2 pi Z``) is answered in integer arithmetic.  A numeric angle stores
radians plus the record of the continued-fraction search that failed to find a
small-denominator fraction for it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Real = Union[Fraction, float]

Q_MAX = 64
TOL_RAT = 1e-8
TOL_UNDECIDED = 1e-5
_TWO = Fraction(2)


@dataclass(frozen=True)
class RationalityRecord:
    """Outcome of the rationality search for a numeric angle."""

    best: Fraction
    q_max: int
    residual: float


def best_fraction(x: float, q_max: int = Q_MAX) -> Fraction:
    # limit_denominator walks the continued-fraction convergents and
    # semiconvergents of x, which is exactly the best-approximation search.
    return Fraction(x).limit_denominator(q_max)


def snap_rational(x: float, q_max: int = Q_MAX, tol: float = TOL_RAT) -> Real:
    """Return ``x`` as a Fraction when it sits within ``tol`` of p/q, q <= q_max."""
    f = best_fraction(x, q_max)
    if abs(float(f) - x) <= tol:
        return f
    return float(x)


@dataclass(frozen=True, eq=False)
class Angle:
    """Angle theta in [0, 2 pi), exact (theta / pi rational) or numeric."""

    pi_frac: Fraction | None
    value: float
    record: RationalityRecord | None = None
    undecided: bool = False

    # ------------------------------------------------------------------ build
    @classmethod
    def exact(cls, p: int | Fraction, q: int = 1) -> "Angle":
        """The angle ``(p/q) * pi`` reduced into ``[0, 2)``."""
        f = Fraction(p) / q
        f = f - 2 * math.floor(f / 2)
        return cls(f, float(f) * math.pi)

    @classmethod
    def from_radians(
        cls,
        theta: float,
        q_max: int = Q_MAX,
        tol_rat: float = TOL_RAT,
        tol_undecided: float = TOL_UNDECIDED,
    ) -> "Angle":
        """Detect whether ``theta`` is a small-denominator multiple of pi.

        A residual below ``tol_rat`` snaps the angle to exact kind.  A residual
        between ``tol_rat`` and ``tol_undecided`` keeps it numeric but marks it
        undecided, so callers can warn instead of silently calling it
        irrational.
        """
        theta = float(theta)
        if not math.isfinite(theta):
            raise ValueError(f"angle must be finite, got {theta!r}")
        r = math.fmod(theta / math.pi, 2.0)
        if r < 0:
            r += 2.0
        f = best_fraction(r, q_max)
        residual = abs(r - float(f)) * math.pi
        if residual <= tol_rat:
            return cls.exact(f)
        value = r * math.pi
        if value >= 2 * math.pi:
            value = 0.0
        record = RationalityRecord(f, q_max, residual)
        return cls(None, value, record, residual <= tol_undecided)

    @classmethod
    def from_json(cls, obj: dict, q_max: int = Q_MAX, tol_rat: float = TOL_RAT) -> "Angle":
        if "pi_num" in obj:
            return cls.exact(int(obj["pi_num"]), int(obj.get("pi_den", 1)))
        if "radians" in obj:
            return cls.from_radians(float(obj["radians"]), q_max, tol_rat)
        raise ValueError("angle object needs either pi_num/pi_den or radians")

    def to_json(self) -> dict:
        if self.pi_frac is not None:
            return {"pi_num": self.pi_frac.numerator, "pi_den": self.pi_frac.denominator}
        return {"radians": self.value}

    # -------------------------------------------------------------- queries
    @property
    def is_exact(self) -> bool:
        return self.pi_frac is not None

    @property
    def radians(self) -> float:
        return self.value

    @property
    def over_pi(self) -> Real:
        """theta / pi, as a Fraction when exact."""
        return self.pi_frac if self.pi_frac is not None else self.value / math.pi

    @property
    def is_zero(self) -> bool:
        return self.pi_frac == 0

    def point(self) -> complex:
        if self.pi_frac is not None:
            # exact quarter turns avoid cos(pi/2) = 6e-17 style noise
            quarter = self.pi_frac * 2
            if quarter.denominator == 1:
                return (1, 1j, -1, -1j)[int(quarter) % 4]
        return complex(math.cos(self.value), math.sin(self.value))

    def conj(self) -> "Angle":
        if self.pi_frac is not None:
            return Angle.exact(-self.pi_frac)
        value = 2 * math.pi - self.value if self.value > 0 else 0.0
        return Angle(None, value, self.record, self.undecided)

    def times(self, m: int) -> "Angle":
        """The angle m * theta reduced mod 2 pi."""
        if self.pi_frac is not None:
            return Angle.exact(self.pi_frac * m)
        return Angle(None, math.fmod(self.value * m, 2 * math.pi), self.record, self.undecided)

    def resonates(self, m: int) -> bool:
        """True iff m * theta lies in 2 pi Z; numeric angles never do."""
        if self.pi_frac is None:
            return False
        return (self.pi_frac * m) % 2 == 0

    def frac_over_pi(self, m: int) -> Real:
        """The fractional part {m theta / pi}."""
        if self.pi_frac is not None:
            x = self.pi_frac * m
            return x - math.floor(x)
        x = m * self.value / math.pi
        return x - math.floor(x)

    def frac_over_2pi(self, m: int) -> Real:
        """The fractional part {m theta / (2 pi)}."""
        if self.pi_frac is not None:
            x = self.pi_frac * m / 2
            return x - math.floor(x)
        x = m * self.value / (2 * math.pi)
        return x - math.floor(x)

    def period(self) -> int | None:
        """Least k >= 1 with k theta in 2 pi Z, or None for numeric angles."""
        if self.pi_frac is None:
            return None
        f = self.pi_frac / 2
        return f.denominator

    def distance(self, other: "Angle") -> float:
        """Arc distance on the circle."""
        d = abs(self.value - other.value) % (2 * math.pi)
        return min(d, 2 * math.pi - d)

    # --------------------------------------------------------- comparisons
    def _key(self):
        if self.pi_frac is not None:
            return ("exact", self.pi_frac)
        return ("numeric", self.value)

    def __eq__(self, other):
        if not isinstance(other, Angle):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __lt__(self, other: "Angle") -> bool:
        return (self.value, self._key()[0]) < (other.value, other._key()[0])

    def __repr__(self) -> str:
        if self.pi_frac is not None:
            return f"Angle({self.pi_frac}*pi)"
        flag = ", undecided" if self.undecided else ""
        return f"Angle({self.value!r} rad{flag})"

    def label(self) -> str:
        if self.pi_frac is not None:
            f = self.pi_frac
            if f == 0:
                return "0"
            num = "" if f.numerator == 1 else str(f.numerator)
            return f"{num}pi" if f.denominator == 1 else f"{num}pi/{f.denominator}"
        return f"{self.value:.12g}"


ZERO = Angle.exact(0)
PI = Angle.exact(1)
