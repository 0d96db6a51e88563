"""Symplectic linear algebra on dense matrices.

Coordinates are Darboux ``(p_1..p_n, q_1..q_n)`` and the standard form is
``J = [[0, -I], [I, 0]]``.  Matrices are plain ``numpy`` arrays; every function
here is pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .angles import Angle
from .errors import DimensionError, NumericalFailure, ValidationError


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by the engines.

    ``tol_sym``, ``tol_rank`` and ``tol_herm`` are relative to the size of the
    matrix they are applied to; the rest are absolute.
    """

    tol_sym: float = 1e-10
    tol_unit: float = 1e-7
    tol_cluster: float = 1e-2
    tol_rat: float = 1e-8
    tol_undecided: float = 1e-5
    q_max: int = 64
    tol_rank: float = 1e-9
    tol_herm: float = 1e-12
    tol_eig_residual: float = 1e-8

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if value <= 0:
                raise ValidationError(f"tolerance {name} must be positive, got {value}")

    def angle(self, theta: float) -> Angle:
        return Angle.from_radians(theta, self.q_max, self.tol_rat, self.tol_undecided)


DEFAULT_TOL = Tolerances()


def J(n: int) -> np.ndarray:
    """Standard symplectic matrix on R^{2n}."""
    I = np.eye(n)
    Z = np.zeros((n, n))
    return np.block([[Z, -I], [I, Z]])


def half_dim(M: np.ndarray) -> int:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    if M.shape[0] % 2:
        raise DimensionError(f"expected even dimension, got {M.shape[0]}")
    return M.shape[0] // 2


def symplectic_defect(M: np.ndarray) -> float:
    """``||M^T J M - J||_inf`` scaled by ``max(1, ||M||_inf^2)``."""
    n = half_dim(M)
    Jn = J(n)
    M = np.asarray(M, dtype=float)
    scale = max(1.0, np.linalg.norm(M, np.inf) ** 2)
    return float(np.linalg.norm(M.T @ Jn @ M - Jn, np.inf) / scale)


def check_symplectic(M: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff ``M^T J M = J`` within ``tol.tol_sym`` (relative)."""
    return symplectic_defect(M) <= tol.tol_sym


def require_symplectic(M: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    defect = symplectic_defect(M)
    if defect > tol.tol_sym:
        raise ValidationError(f"matrix is not symplectic (relative defect {defect:.3g})")
    return M


def darboux_sum(*mats: np.ndarray) -> np.ndarray:
    """Block sum of 2k x 2k matrices placed on their own Darboux subspaces.

    No validation: this is used for quadratic forms as well as for symplectic
    matrices.
    """
    dims = [half_dim(A) for A in mats]
    n = sum(dims)
    out = np.zeros((2 * n, 2 * n), dtype=np.result_type(*mats, float))
    offset = 0
    for A, k in zip(mats, dims):
        idx = np.r_[offset:offset + k, n + offset:n + offset + k]
        out[np.ix_(idx, idx)] = A
        offset += k
    return out


def direct_sum(A: np.ndarray, B: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """The symplectic sum ``A <> B`` on ``R^{2(n_A + n_B)}``."""
    return darboux_sum(require_symplectic(A, tol), require_symplectic(B, tol))


@dataclass(frozen=True)
class UnitEigenvalue:
    angle: Angle
    alg_mult: int
    geo_mult: int

    @property
    def point(self) -> complex:
        return self.angle.point()


def _clusters(values: np.ndarray, radius: float) -> list[list[int]]:
    # single linkage; spectra here are at most a few dozen values
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) < radius:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _eigvals_checked(M: np.ndarray, tol: Tolerances) -> np.ndarray:
    w, V = scipy.linalg.eig(M)
    norm_m = max(np.linalg.norm(M, 2), 1.0)
    residual = np.linalg.norm(M @ V - V * w, 2) / (norm_m * max(np.linalg.norm(V, 2), 1.0))
    if not np.isfinite(residual) or residual > tol.tol_eig_residual:
        raise NumericalFailure(
            f"eigen-decomposition residual {residual:.3g} above threshold",
            condition=float(np.linalg.cond(V)),
        )
    return w


def unit_spectrum(M: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> list[UnitEigenvalue]:
    """Eigenvalues of ``M`` on the unit circle, with multiplicities.

    Eigenvalues are clustered first (a perturbed Jordan block of size d spreads
    its eigenvalue over a radius ~ eps^(1/d), while the cluster mean stays
    accurate), then tested for modulus one, then the angles are snapped to
    exact kind where possible and symmetrized over conjugate pairs.
    """
    M = require_symplectic(M, tol)
    w = _eigvals_checked(M, tol)
    found: list[tuple[float, int]] = []
    for group in _clusters(w, tol.tol_cluster):
        mean = complex(np.mean(w[group]))
        if abs(abs(mean) - 1.0) <= tol.tol_unit:
            theta = float(np.angle(mean)) % (2 * np.pi)
            found.append((theta, len(group)))

    angles = [(tol.angle(theta), mult) for theta, mult in found]
    out: dict[Angle, int] = {}
    used = [False] * len(angles)
    for i, (a, mult) in enumerate(angles):
        if used[i]:
            continue
        used[i] = True
        if a.is_exact:
            partner = a.conj()
            if partner != a:
                j = next((j for j, (b, _) in enumerate(angles) if not used[j] and b == partner), None)
                if j is None or angles[j][1] != mult:
                    raise NumericalFailure(f"conjugate partner of {a!r} missing or with different multiplicity")
                used[j] = True
                out[partner] = mult
            out[a] = mult
            continue
        # numeric: pair with the closest unused cluster near 2 pi - theta
        target = (2 * np.pi - a.value) % (2 * np.pi)
        cands = [j for j, (b, _) in enumerate(angles) if not used[j] and not b.is_exact]
        if cands:
            j = min(cands, key=lambda j: Angle(None, target).distance(angles[j][0]))
            b, mult_b = angles[j]
            if Angle(None, target).distance(b) < tol.tol_cluster and mult_b == mult:
                used[j] = True
                theta = 0.5 * (a.value + (2 * np.pi - b.value))
                sym = Angle(None, theta, a.record, a.undecided)
                out[sym] = mult
                out[sym.conj()] = mult
                continue
        if a.distance(Angle(None, target)) < tol.tol_cluster:
            # self-conjugate numerically but not snapped; keep as is
            out[a] = mult
            continue
        raise NumericalFailure(f"unit eigenvalue {a!r} has no conjugate partner")

    result = [UnitEigenvalue(a, mult, nullity(M, a, tol)) for a, mult in out.items()]
    return sorted(result, key=lambda u: u.angle)


def has_hyperbolic_part(M: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff some eigenvalue of ``M`` lies off the unit circle."""
    w = _eigvals_checked(np.asarray(M, dtype=float), tol)
    return bool(sum(u.alg_mult for u in unit_spectrum(M, tol)) < len(w))


def nullity(M: np.ndarray, omega: Angle, tol: Tolerances = DEFAULT_TOL) -> int:
    """``dim_C ker(M - e^{i theta} I)``.

    The rank is measured on the Schur block of eigenvalues near ``omega`` only,
    so that large hyperbolic eigenvalues elsewhere in the spectrum do not
    swamp the relative rank threshold.
    """
    M = np.asarray(M, dtype=complex)
    half_dim(M)
    z = omega.point()
    radius = tol.tol_cluster
    T, _, sdim = scipy.linalg.schur(M, output="complex", sort=lambda x: abs(x - z) < radius)
    if sdim == 0:
        return 0
    T11 = T[:sdim, :sdim]
    s = np.linalg.svd(T11 - z * np.eye(sdim), compute_uv=False)
    threshold = tol.tol_rank * max(1.0, np.linalg.norm(T11, 2))
    return int(np.sum(s <= threshold))


@dataclass(frozen=True)
class CnuClassification:
    kind: str
    witness: UnitEigenvalue | None = None
    undecided: tuple[Angle, ...] = field(default_factory=tuple)

    @property
    def is_cnu(self) -> bool:
        return self.kind == "cnu"


def classify_cnu(M: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> CnuClassification:
    """``vnu`` iff some unit eigenvalue has an exact rational angle in (0, 2 pi)."""
    spectrum = unit_spectrum(M, tol)
    undecided = tuple(u.angle for u in spectrum if not u.angle.is_exact and u.angle.undecided)
    for u in spectrum:
        if u.angle.is_exact and not u.angle.is_zero:
            return CnuClassification("vnu", u, undecided)
    return CnuClassification("cnu", None, undecided)


def bott_nullity_sum(M: np.ndarray, m: int, tol: Tolerances = DEFAULT_TOL) -> int:
    """``sum over omega^m = 1 of nu_omega(M)``."""
    return sum(nullity(M, Angle.exact(2 * j, m), tol) for j in range(m))
