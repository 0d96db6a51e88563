"""Generator blocks, path specs and the combinatorial invariants of a spec.

A block describes a constant quadratic form ``Q`` and hence the path
``t -> exp(t J Q)``.  Every block carries an iteration multiplier ``mult``: the
block with multiplier ``m`` is the ``m``-th iterate of the base block, whose
generator is ``m Q``.  The quadratic-form matrices use the convention
``H(x) = x^T Q x / 2``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from typing import Iterable, Union

import numpy as np

from .angles import PI, Angle
from .core import DEFAULT_TOL, Tolerances, darboux_sum, nullity
from .errors import UnclassifiableBlockError, ValidationError


def _check_mult(mult: int) -> None:
    if not isinstance(mult, (int, np.integer)) or isinstance(mult, bool) or mult < 1:
        raise ValidationError(f"iteration multiplier must be a positive integer, got {mult!r}")


def _shift_matrix(d: int) -> np.ndarray:
    return np.eye(d, k=1)


def q0_form(d: int) -> np.ndarray:
    """``p_1 q_2 + ... + p_{d-1} q_d`` as a 2d x 2d symmetric matrix."""
    A = _shift_matrix(d)
    Z = np.zeros((d, d))
    return np.block([[Z, A], [A.T, Z]])


@dataclass(frozen=True)
class ZeroForm:
    nu0: int
    mult: int = field(default=1, kw_only=True)
    kind = "zero"

    def __post_init__(self):
        if not isinstance(self.nu0, (int, np.integer)) or self.nu0 < 1:
            raise ValidationError(f"ZeroForm needs a positive nu0, got {self.nu0!r}")
        _check_mult(self.mult)

    @property
    def half_dim(self) -> int:
        return int(self.nu0)

    def quadratic_form(self) -> np.ndarray:
        return np.zeros((2 * self.nu0, 2 * self.nu0))

    def to_json(self) -> dict:
        return {"kind": "zero", "nu0": int(self.nu0)}


@dataclass(frozen=True)
class Q0Block:
    d: int
    mult: int = field(default=1, kw_only=True)
    kind = "q0"

    def __post_init__(self):
        if not isinstance(self.d, (int, np.integer)) or self.d < 1 or self.d % 2 == 0:
            raise ValidationError(f"Q0Block needs an odd positive d, got {self.d!r}")
        _check_mult(self.mult)

    @property
    def half_dim(self) -> int:
        return int(self.d)

    def quadratic_form(self) -> np.ndarray:
        return self.mult * q0_form(self.d)

    def to_json(self) -> dict:
        return {"kind": "q0", "d": int(self.d)}


@dataclass(frozen=True)
class QSignBlock:
    d: int
    sign: int
    mult: int = field(default=1, kw_only=True)
    kind = "qsign"

    def __post_init__(self):
        if not isinstance(self.d, (int, np.integer)) or self.d < 1:
            raise ValidationError(f"QSignBlock needs a positive d, got {self.d!r}")
        if self.sign not in (1, -1):
            raise ValidationError(f"QSignBlock sign must be +1 or -1, got {self.sign!r}")
        _check_mult(self.mult)

    @property
    def half_dim(self) -> int:
        return int(self.d)

    def quadratic_form(self) -> np.ndarray:
        Q = q0_form(self.d)
        Q[self.d - 1, self.d - 1] = 1.0
        return self.mult * self.sign * Q

    def to_json(self) -> dict:
        return {"kind": "qsign", "d": int(self.d), "sign": int(self.sign)}


@dataclass(frozen=True)
class RotationBlock:
    """Planar rotation ``t -> R(theta t)``; ``Q = theta I_2``."""

    theta: Angle
    mult: int = field(default=1, kw_only=True)
    kind = "rotation"

    def __post_init__(self):
        if not isinstance(self.theta, Angle):
            raise ValidationError("RotationBlock.theta must be an Angle")
        if self.theta.is_zero or self.theta.value == 0.0:
            raise ValidationError("RotationBlock angle must lie in (0, 2 pi)")
        _check_mult(self.mult)

    @property
    def half_dim(self) -> int:
        return 1

    @property
    def total_radians(self) -> float:
        """``mult * theta`` without reduction mod 2 pi."""
        return self.mult * self.theta.value

    @property
    def total_over_pi(self):
        return self.mult * self.theta.over_pi

    def quadratic_form(self) -> np.ndarray:
        return self.total_radians * np.eye(2)

    def to_json(self) -> dict:
        return {"kind": "rotation", "theta": self.theta.to_json()}


@dataclass(frozen=True)
class HyperbolicBlock:
    """``t -> diag(e^{a t}, e^{-a t})``; ``Q = [[0, -a], [-a, 0]]``."""

    a: float
    mult: int = field(default=1, kw_only=True)
    kind = "hyperbolic"

    def __post_init__(self):
        if not np.isfinite(self.a) or self.a == 0:
            raise ValidationError(f"HyperbolicBlock needs a nonzero finite a, got {self.a!r}")
        _check_mult(self.mult)

    @property
    def half_dim(self) -> int:
        return 1

    def quadratic_form(self) -> np.ndarray:
        a = self.mult * float(self.a)
        return np.array([[0.0, -a], [-a, 0.0]])

    def to_json(self) -> dict:
        return {"kind": "hyperbolic", "a": float(self.a)}


@dataclass(frozen=True)
class GenericQ:
    """Arbitrary symmetric 2k x 2k form; stored as nested tuples so it hashes."""

    Q: tuple
    mult: int = field(default=1, kw_only=True)
    kind = "generic"

    def __post_init__(self):
        arr = np.asarray(self.Q, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] % 2 or arr.shape[0] == 0:
            raise ValidationError(f"GenericQ needs a square matrix of even size, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("GenericQ entries must be finite")
        if not np.allclose(arr, arr.T, rtol=0, atol=1e-12 * max(1.0, np.abs(arr).max())):
            raise ValidationError("GenericQ matrix must be symmetric")
        object.__setattr__(self, "Q", tuple(tuple(float(x) for x in row) for row in 0.5 * (arr + arr.T)))
        _check_mult(self.mult)

    @classmethod
    def from_array(cls, Q, mult: int = 1) -> "GenericQ":
        return cls(tuple(map(tuple, np.asarray(Q, dtype=float))), mult=mult)

    @property
    def half_dim(self) -> int:
        return len(self.Q) // 2

    @property
    def base_form(self) -> np.ndarray:
        return np.array(self.Q, dtype=float)

    def quadratic_form(self) -> np.ndarray:
        return self.mult * self.base_form

    def to_json(self) -> dict:
        return {"kind": "generic", "Q": [list(row) for row in self.Q]}


Block = Union[ZeroForm, Q0Block, QSignBlock, RotationBlock, HyperbolicBlock, GenericQ]
DEGENERATE_KINDS = (ZeroForm, Q0Block, QSignBlock)


def assemble_quadratic_form(b: Block) -> np.ndarray:
    """Symmetric matrix of the block's quadratic form (multiplier included)."""
    return b.quadratic_form()


@dataclass(frozen=True)
class PathSpec:
    """Direct sum of blocks; the path ``t -> exp(t J Q_1) <> ... <> exp(t J Q_r)``."""

    blocks: tuple = ()

    def __post_init__(self):
        blocks = tuple(self.blocks)
        for b in blocks:
            if not isinstance(b, Block.__args__):
                raise ValidationError(f"not a block: {b!r}")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self) -> int:
        return sum(b.half_dim for b in self.blocks)

    def __add__(self, other: "PathSpec") -> "PathSpec":
        return PathSpec(self.blocks + other.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def quadratic_form(self) -> np.ndarray:
        if not self.blocks:
            return np.zeros((0, 0))
        return darboux_sum(*(b.quadratic_form() for b in self.blocks))

    # ---------------------------------------------------------------- JSON
    def to_json(self) -> dict:
        out = []
        for b in self.blocks:
            obj = b.to_json()
            if b.mult != 1:
                obj["mult"] = int(b.mult)
            out.append(obj)
        return {"blocks": out}

    @classmethod
    def from_json(cls, obj, tol: Tolerances = DEFAULT_TOL) -> "PathSpec":
        if not isinstance(obj, dict) or not isinstance(obj.get("blocks"), list):
            raise ValidationError('a path spec is an object with a "blocks" list')
        return cls(tuple(block_from_json(b, tol) for b in obj["blocks"]))

    def canonical_json(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    def sha256(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()


def block_from_json(obj: dict, tol: Tolerances = DEFAULT_TOL) -> Block:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValidationError(f"block must be an object with a kind field: {obj!r}")
    kind = obj["kind"]
    mult = obj.get("mult", 1)
    try:
        if kind == "zero":
            return ZeroForm(int(obj["nu0"]), mult=mult)
        if kind == "q0":
            return Q0Block(int(obj["d"]), mult=mult)
        if kind == "qsign":
            return QSignBlock(int(obj["d"]), int(obj["sign"]), mult=mult)
        if kind == "rotation":
            theta = obj["theta"]
            if not isinstance(theta, dict):
                raise ValidationError("rotation theta must be {pi_num, pi_den} or {radians}")
            return RotationBlock(Angle.from_json(theta, tol.q_max, tol.tol_rat), mult=mult)
        if kind == "hyperbolic":
            return HyperbolicBlock(float(obj["a"]), mult=mult)
        if kind == "generic":
            return GenericQ.from_array(obj["Q"], mult=mult)
    except KeyError as exc:
        raise ValidationError(f"block of kind {kind!r} is missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"bad {kind!r} block: {exc}") from None
    raise ValidationError(f"unknown block kind {kind!r}")


def phi0(n: int = 1) -> PathSpec:
    """One full turn ``exp(2 pi i t)`` padded with the identity path to half-dimension n."""
    blocks: list[Block] = [RotationBlock(PI, mult=2)]
    if n > 1:
        blocks.append(ZeroForm(n - 1))
    return PathSpec(tuple(blocks))


def iterate(spec: PathSpec, m: int) -> PathSpec:
    """The m-th iterate: every generator scaled by m."""
    _check_mult(m)
    if m == 1:
        return spec
    return PathSpec(tuple(replace(b, mult=b.mult * m) for b in spec.blocks))


# ------------------------------------------------------------ invariants
@dataclass(frozen=True)
class AGInvariants:
    nu0: int = 0
    b0: int = 0
    b_plus: int = 0
    b_minus: int = 0

    @property
    def beta_plus(self) -> int:
        return self.nu0 + self.b0 + self.b_plus

    @property
    def beta_minus(self) -> int:
        return self.nu0 + self.b0 + self.b_minus

    @property
    def nullity(self) -> int:
        """``2 (b0 + nu0) + b+ + b-``, the kernel dimension at 1 of the degenerate part."""
        return 2 * (self.b0 + self.nu0) + self.b_plus + self.b_minus

    def __add__(self, other: "AGInvariants") -> "AGInvariants":
        return AGInvariants(
            self.nu0 + other.nu0, self.b0 + other.b0,
            self.b_plus + other.b_plus, self.b_minus + other.b_minus,
        )

    def to_json(self) -> dict:
        return {
            "nu0": self.nu0, "b0": self.b0, "b_plus": self.b_plus, "b_minus": self.b_minus,
            "beta_plus": self.beta_plus, "beta_minus": self.beta_minus,
        }


def rotation_closes(b: RotationBlock) -> bool:
    """True iff the rotation block ends at the identity (mult * theta in 2 pi Z)."""
    return b.theta.resonates(b.mult)


def _generic_end(b: GenericQ):
    from .paths import evaluate_block  # local import: paths depends on this module

    return evaluate_block(b, 1.0)


def invariants_of(spec: PathSpec, tol: Tolerances = DEFAULT_TOL) -> AGInvariants:
    """Read ``nu0, b0, b+, b-`` off the blocks.

    Rotation blocks that close up (end matrix ``I_2``) count as a zero form on
    R^2.  Generic blocks are accepted only when their end matrix has no
    eigenvalue 1, since no decomposition is computed for them.
    """
    inv = AGInvariants()
    for b in spec.blocks:
        if isinstance(b, ZeroForm):
            inv += AGInvariants(nu0=b.nu0)
        elif isinstance(b, Q0Block):
            inv += AGInvariants(b0=1)
        elif isinstance(b, QSignBlock):
            inv += AGInvariants(b_plus=1) if b.sign > 0 else AGInvariants(b_minus=1)
        elif isinstance(b, RotationBlock):
            if rotation_closes(b):
                inv += AGInvariants(nu0=1)
        elif isinstance(b, GenericQ):
            if nullity(_generic_end(b), Angle.exact(0), tol) > 0:
                raise UnclassifiableBlockError(
                    "generic block has eigenvalue 1 at its end; its normal-form invariants are not computed"
                )
    return inv


def degenerate_split(spec: PathSpec, tol: Tolerances = DEFAULT_TOL) -> tuple[PathSpec, PathSpec]:
    """Split into the totally degenerate part and the part without eigenvalue 1."""
    from .core import unit_spectrum

    deg: list[Block] = []
    rest: list[Block] = []
    for b in spec.blocks:
        if isinstance(b, DEGENERATE_KINDS):
            deg.append(b)
        elif isinstance(b, RotationBlock):
            (deg if rotation_closes(b) else rest).append(b)
        elif isinstance(b, HyperbolicBlock):
            rest.append(b)
        else:
            M = _generic_end(b)
            ones = sum(u.alg_mult for u in unit_spectrum(M, tol) if u.angle.is_zero)
            if ones == 0:
                rest.append(b)
            elif ones == 2 * b.half_dim:
                deg.append(b)
            else:
                raise UnclassifiableBlockError(
                    "generic block mixes eigenvalue 1 with other eigenvalues and cannot be split"
                )
    return PathSpec(tuple(deg)), PathSpec(tuple(rest))


def concat(specs: Iterable[PathSpec]) -> PathSpec:
    out = PathSpec()
    for s in specs:
        out = out + s
    return out
