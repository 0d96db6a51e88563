"""Evaluating spec paths and computing their indices."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
import scipy.linalg
from scipy.special import comb

from .angles import ZERO, Real
from .core import DEFAULT_TOL, Tolerances, J, darboux_sum, nullity, require_symplectic
from .errors import ConsistencyError, NumericalFailure
from .generators import (
    Block,
    GenericQ,
    HyperbolicBlock,
    PathSpec,
    Q0Block,
    QSignBlock,
    RotationBlock,
    ZeroForm,
    iterate,
)
from .spectral import perturbed_indices, profile_index, profile_mean

__all__ = [
    "IndexRecord", "MuPair", "evaluate", "evaluate_block", "char_poly_check", "iterate",
    "mean_index", "mean_index_exact", "mu_pm", "index_at_iterate", "winding_mean_index",
]

# direct (Fourier-mode and kernel) routes are used below these sizes
DIRECT_NORM_LIMIT = 400.0
KERNEL_NORM_LIMIT = 1e6


def _toeplitz_exp(d: int, tau: float) -> np.ndarray:
    """Upper-triangular ``B(tau)`` with entries ``tau^k / k!`` on the k-th superdiagonal."""
    B = np.zeros((d, d))
    for k in range(d):
        B += np.eye(d, k=k) * tau**k / math.factorial(k)
    return B


def evaluate_block(b: Block, t: float) -> np.ndarray:
    """Closed-form ``exp(t J Q_b)`` for one block."""
    tau = b.mult * float(t)
    if isinstance(b, ZeroForm):
        return np.eye(2 * b.nu0)
    if isinstance(b, Q0Block):
        B = _toeplitz_exp(b.d, tau)
        Bstar = _toeplitz_exp(b.d, -tau).T
        return scipy.linalg.block_diag(Bstar, B)
    if isinstance(b, QSignBlock) and b.d == 1:
        return np.array([[1.0, 0.0], [b.sign * tau, 1.0]])
    if isinstance(b, RotationBlock):
        if t == 1 and b.theta.is_exact:
            z = b.theta.times(b.mult).point()
            c, s = z.real, z.imag
        else:
            c, s = math.cos(b.theta.value * tau), math.sin(b.theta.value * tau)
        return np.array([[c, -s], [s, c]])
    if isinstance(b, HyperbolicBlock):
        return np.diag([math.exp(b.a * tau), math.exp(-b.a * tau)])
    Q = b.base_form if isinstance(b, GenericQ) else b.quadratic_form() / b.mult
    M = scipy.linalg.expm(tau * (J(b.half_dim) @ Q))
    if not np.all(np.isfinite(M)):
        raise NumericalFailure("matrix exponential overflowed", condition=tau * np.linalg.norm(Q, 2))
    return M


def evaluate(spec: PathSpec, t: float, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``gamma(t)`` as a validated symplectic matrix."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    if not spec.blocks:
        return np.zeros((0, 0))
    return require_symplectic(darboux_sum(*(evaluate_block(b, t) for b in spec.blocks)), tol)


def char_poly_check(spec: PathSpec, t: float, atol: float = 1e-8) -> bool:
    """True iff ``det(lambda I - gamma(t)) = (lambda - 1)^{2n}`` coefficientwise."""
    M = evaluate(spec, t)
    dim = M.shape[0]
    coeffs = np.real_if_close(np.poly(M))
    target = np.array([comb(dim, k, exact=True) * (-1) ** k for k in range(dim + 1)], dtype=float)
    return bool(np.allclose(coeffs, target, rtol=0, atol=atol))


def mean_index_exact(spec: PathSpec, tol: Tolerances = DEFAULT_TOL) -> Real:
    """Mean index, as a Fraction when every block has exact data."""
    return profile_mean(spec, tol)


def mean_index(spec: PathSpec, tol: Tolerances = DEFAULT_TOL) -> float:
    return float(profile_mean(spec, tol))


def winding_mean_index(spec: PathSpec, T: int = 64, max_steps: int = 1 << 20) -> float:
    """Independent estimate of the mean index from the rotation of the path.

    Tracks ``arg det(X + iY)`` of the orthogonal polar factor ``[[X, -Y], [Y, X]]``
    along ``exp(t J Q)``, ``t in [0, T]``, refining the grid until every step
    moves the argument by less than pi/4, and returns ``W(T) / (pi T)``.  The
    error is ``O(n / T)``.
    """
    n = spec.n
    Q = spec.quadratic_form()
    L = J(n) @ Q

    def phase(t: float) -> complex:
        U, _ = scipy.linalg.polar(scipy.linalg.expm(t * L))
        d = np.linalg.det(U[:n, :n] + 1j * U[n:, :n])
        return d / abs(d)

    steps = max(16, 8 * T)
    while steps <= max_steps:
        ts = np.linspace(0.0, T, steps + 1)
        z = np.array([phase(t) for t in ts])
        inc = np.angle(z[1:] / z[:-1])
        if np.all(np.abs(inc) < math.pi / 4):
            return float(np.sum(inc) / (math.pi * T))
        steps *= 2
    raise NumericalFailure("winding grid refinement exceeded its limit", condition=steps)


@dataclass(frozen=True)
class MuPair:
    mu_minus: int
    mu_plus: int
    route: str


def _block_norm(b: Block) -> float:
    if isinstance(b, ZeroForm):
        return 0.0
    return float(np.linalg.norm(b.quadratic_form(), 2))


def _small(spec: PathSpec, limit: float) -> bool:
    return all(_block_norm(b) <= limit for b in spec.blocks)


def nullity_at_one(spec: PathSpec, tol: Tolerances = DEFAULT_TOL) -> tuple[int, str]:
    """``nu_1`` of the end matrix: kernel route when the matrix is tame, profile otherwise."""
    if _small(spec, min(KERNEL_NORM_LIMIT, 30.0)):
        try:
            return nullity(evaluate(spec, 1.0, tol), ZERO, tol), "kernel"
        except NumericalFailure:
            pass
    return profile_index(spec, ZERO, 1, tol)[1], "profile"


def mu_pm(spec: PathSpec, tol: Tolerances = DEFAULT_TOL) -> MuPair:
    """``(mu_-, mu_+)`` as the limits of indices of non-degenerate perturbations.

    Each block is perturbed to ``Q -/+ s I`` along a shrinking ladder of ``s``
    and the Fourier-mode index of the perturbed path is taken; results add
    over blocks.  Blocks whose generator is too large for a mode sum (high
    iterates) fall back to the step profile, where ``mu_- = i`` and
    ``mu_+ = i + nu`` by construction.
    """
    lo = hi = 0
    route = "perturbation"
    for b in spec.blocks:
        if _block_norm(b) <= DIRECT_NORM_LIMIT:
            m_lo, m_hi, _ = perturbed_indices(b.quadratic_form())
        else:
            i, nu = profile_index(PathSpec((b,)), ZERO, 1, tol)
            m_lo, m_hi = i, i + nu
            route = "mixed"
        lo += m_lo
        hi += m_hi
    nu, _ = nullity_at_one(spec, tol)
    if hi - lo != nu:
        raise ConsistencyError(f"mu_+ - mu_- = {hi - lo} but nullity is {nu}")
    return MuPair(lo, hi, route)


@dataclass(frozen=True)
class IndexRecord:
    m: int
    i: int
    nu: int
    mu_minus: int
    mu_plus: int
    mean: float

    def to_json(self) -> dict:
        return asdict(self)


def index_at_iterate(spec: PathSpec, m: int, tol: Tolerances = DEFAULT_TOL, check: bool = True) -> IndexRecord:
    """Index data of the m-th iterate.

    ``i`` and ``nu`` come from the step profile; with ``check`` the
    perturbation route (``mu_pm``) and the kernel route are run too and must
    agree with it.
    """
    it = iterate(spec, m)
    i, nu = profile_index(spec, ZERO, m, tol)
    mean = m * mean_index(spec, tol)
    if check:
        pair = mu_pm(it, tol)
        if pair.mu_minus != i or pair.mu_plus != i + nu:
            raise ConsistencyError(
                f"iterate {m}: profile gives (i, nu) = ({i}, {nu}) but perturbation gives "
                f"(mu_-, mu_+) = ({pair.mu_minus}, {pair.mu_plus})"
            )
    return IndexRecord(m, i, nu, i, i + nu, mean)


def index_table(spec: PathSpec, m_max: int, tol: Tolerances = DEFAULT_TOL, check: bool = True) -> list[IndexRecord]:
    return [index_at_iterate(spec, m, tol, check) for m in range(1, m_max + 1)]
