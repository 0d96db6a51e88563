"""Machine checks of the jump identities at certified tuples.

Every check compares two sides computed by different routes:

* large iterates ``2 m_k +/- m`` through the step-profile lattice count,
* small iterates through the Fourier-mode sum, the perturbation ladder and
  the kernel of the end matrix,
* splitting numbers through block tables or through index jumps,
* ``beta_+/-`` from the block invariants.

A check whose engine raises is recorded as ``engine-error`` and never passes.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import __version__
from .angles import ZERO
from .cijt import (
    JumpCertificate,
    c_total,
    delta_k,
    find_jump_tuples,
    m_bar,
    m_check,
    q_k,
    recheck_certificate,
)
from .core import DEFAULT_TOL, Tolerances, nullity
from .errors import PreconditionError, SymIndexError, UnclassifiableBlockError
from .generators import PathSpec, Q0Block, QSignBlock, ZeroForm, invariants_of, iterate
from .paths import evaluate, mean_index, mean_index_exact, mu_pm
from .spectral import direct_index, profile_index
from .splitting import beta_minus_check, bott_splitting, splitting_numbers, splitting_profile

PASS, FAIL, ENGINE_ERROR, SKIPPED = "pass", "fail", "engine-error", "skipped"
CORE, EXTERNAL = "core", "external-definition"
SMALL_ITERATE = 24

C_FLAG = "C(M) is taken as the sum of S^- over eigen-angles in (0, 2 pi)"
DELTA_FLAG = "Delta_k sums S^- over eigen-angles with 0 < {m_k theta / pi} < delta"


@dataclass
class Check:
    name: str
    lhs: object
    rhs: object
    relation: str = "=="
    tolerance: float = 0.0
    status: str = PASS
    spec: int | None = None
    m: int | None = None
    section: str = CORE
    note: str | None = None

    def to_json(self) -> dict:
        out = {
            "name": self.name, "lhs": _jsonable(self.lhs), "rhs": _jsonable(self.rhs),
            "relation": self.relation, "tolerance": self.tolerance, "status": self.status,
            "section": self.section,
        }
        for key in ("spec", "m", "note"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        return out


def _jsonable(x):
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return float(x)


def _compare(lhs, rhs, relation: str, tolerance: float) -> bool:
    if relation == "==":
        return abs(lhs - rhs) <= tolerance
    if relation == "<":
        return lhs < rhs
    if relation == "<=":
        return lhs <= rhs + tolerance
    if relation == "chain==":
        return all(a == b for a, b in zip(lhs, lhs[1:]))
    if relation == "chain<=":
        return all(a <= b + tolerance for a, b in zip(lhs, lhs[1:]))
    raise ValueError(relation)


@dataclass
class VerificationReport:
    kind: str
    checks: list = field(default_factory=list)
    certificate: JumpCertificate | None = None
    provenance: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def add(self, name: str, compute: Callable[[], tuple], relation: str = "==", tolerance: float = 0.0,
            **meta) -> Check:
        """Evaluate ``compute() -> (lhs, rhs)`` and record the outcome."""
        try:
            lhs, rhs = compute()
        except SymIndexError as exc:
            check = Check(name, None, None, relation, tolerance, ENGINE_ERROR, note=str(exc), **meta)
        else:
            ok = _compare(lhs, rhs, relation, tolerance)
            check = Check(name, lhs, rhs, relation, tolerance, PASS if ok else FAIL, **meta)
        self.checks.append(check)
        return check

    def skip(self, name: str, reason: str, **meta) -> None:
        self.checks.append(Check(name, None, None, status=SKIPPED, note=reason, **meta))

    def merge(self, other: "VerificationReport") -> None:
        self.checks.extend(other.checks)
        for f in other.flags:
            if f not in self.flags:
                self.flags.append(f)

    def section(self, name: str) -> list[Check]:
        return [c for c in self.checks if c.section == name]

    def counts(self, section: str | None = None) -> dict:
        checks = self.checks if section is None else self.section(section)
        out = {PASS: 0, FAIL: 0, ENGINE_ERROR: 0, SKIPPED: 0}
        for c in checks:
            out[c.status] += 1
        return out

    def passed(self, section: str | None = None) -> bool:
        c = self.counts(section)
        return c[FAIL] == 0 and c[ENGINE_ERROR] == 0

    @property
    def exit_code(self) -> int:
        c = self.counts()
        if c[ENGINE_ERROR]:
            return 2
        return 0 if c[FAIL] == 0 else 1

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status in (FAIL, ENGINE_ERROR)]

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "summary": {"all": self.counts(), CORE: self.counts(CORE), EXTERNAL: self.counts(EXTERNAL),
                        "passed": self.passed()},
            "checks": [c.to_json() for c in self.section(CORE)],
            EXTERNAL: [c.to_json() for c in self.section(EXTERNAL)],
            "flags": list(self.flags),
            "provenance": self.provenance,
        }
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.extra:
            out["extra"] = self.extra
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)

    def table(self) -> str:
        rows = [f"{'status':<13} {'section':<20} {'spec':>4} {'m':>4}  {'check':<34} lhs  {'rel':<3} rhs"]
        for c in self.checks:
            rows.append(
                f"{c.status:<13} {c.section:<20} {'' if c.spec is None else c.spec:>4} "
                f"{'' if c.m is None else c.m:>4}  {c.name:<34} {_short(c.lhs)} {c.relation:<3} {_short(c.rhs)}"
            )
        s = self.counts()
        rows.append(f"pass={s[PASS]} fail={s[FAIL]} engine-error={s[ENGINE_ERROR]} skipped={s[SKIPPED]}")
        return "\n".join(rows)


def _short(x) -> str:
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def provenance(specs: Sequence[PathSpec], seed=None, config: dict | None = None) -> dict:
    return {
        "spec_sha256": [s.sha256() for s in specs],
        "seed": seed,
        "version": __version__,
        "config": config or {},
    }


# --------------------------------------------------------- index helpers
class _Indexer:
    """Index data of one spec's iterates, memoized per iterate."""

    def __init__(self, spec: PathSpec, tol: Tolerances):
        self.spec = spec
        self.tol = tol
        self._profile: dict[int, tuple[int, int]] = {}
        self._direct: dict[int, tuple[int, int]] = {}
        self._mu: dict[int, tuple[int, int]] = {}

    def profile(self, m: int) -> tuple[int, int]:
        if m not in self._profile:
            self._profile[m] = profile_index(self.spec, ZERO, m, self.tol)
        return self._profile[m]

    def direct(self, m: int) -> tuple[int, int]:
        """``(i, nu)`` by Fourier modes on the iterate's generator; nu from the kernel."""
        if m not in self._direct:
            it = iterate(self.spec, m)
            i, _ = direct_index(it.quadratic_form(), 0.0, self.tol)
            nu = nullity(evaluate(it, 1.0, self.tol), ZERO, self.tol)
            self._direct[m] = (i, nu)
        return self._direct[m]

    def small(self, m: int) -> tuple[int, int]:
        return self.direct(m) if m <= SMALL_ITERATE else self.profile(m)

    def i(self, m: int) -> int:
        return self.small(m)[0] if m <= SMALL_ITERATE else self.profile(m)[0]

    def nu(self, m: int) -> int:
        return self.small(m)[1] if m <= SMALL_ITERATE else self.profile(m)[1]

    def mu(self, m: int) -> tuple[int, int]:
        if m not in self._mu:
            if m <= SMALL_ITERATE:
                p = mu_pm(iterate(self.spec, m), self.tol)
                self._mu[m] = (p.mu_minus, p.mu_plus)
            else:
                i, nu = self.profile(m)
                self._mu[m] = (i, i + nu)
        return self._mu[m]


# --------------------------------------------------------- jump identities
def verify_ecijt(specs: Sequence[PathSpec], cert: JumpCertificate, m_bar_range: int = 5,
                 delta: float = 0.1, tol: Tolerances = DEFAULT_TOL,
                 prov: dict | None = None) -> VerificationReport:
    """Nullity and index identities at ``2 m_k +/- m`` for one certificate."""
    report = VerificationReport("ecijt", certificate=cert, provenance=prov or provenance(specs))
    report.add("certificate invariants", lambda: (recheck_certificate(cert), True))
    mc = m_check(specs, tol)
    upper = mc if mc != math.inf else m_bar_range + 1
    if mc == math.inf:
        report.flags.append(f"m_check is infinite; nullity constancy checked for m <= {m_bar_range}")
    report.flags += [C_FLAG, DELTA_FLAG]
    N = cert.N

    for k, spec in enumerate(specs):
        ix = _Indexer(spec, tol)
        mk = cert.m[k]
        prof = splitting_profile(spec, "table", tol)
        s_plus = prof.s_plus(ZERO)
        meta = {"spec": k}

        for m in range(1, int(upper)):
            if 2 * mk - m < 1:
                report.skip("nullity constant below m_check", "2 m_k - m < 1", m=m, **meta)
                continue
            report.add("nu(2mk-m) = nu(1)", lambda m=m: (ix.profile(2 * mk - m)[1], ix.nu(1)), m=m, **meta)
            report.add("nu(2mk+m) = nu(1)", lambda m=m: (ix.profile(2 * mk + m)[1], ix.nu(1)), m=m, **meta)

        for m in range(1, m_bar_range + 1):
            if 2 * mk - m < 1:
                report.skip("jump identities", "2 m_k - m < 1", m=m, **meta)
                continue
            report.add("nu(2mk-m) = nu(m)", lambda m=m: (ix.profile(2 * mk - m)[1], ix.nu(m)), m=m, **meta)
            report.add("nu(2mk+m) = nu(m)", lambda m=m: (ix.profile(2 * mk + m)[1], ix.nu(m)), m=m, **meta)
            report.add("i(2mk+m) = 2N + i(m)", lambda m=m: (ix.profile(2 * mk + m)[0], 2 * N + ix.i(m)),
                       m=m, **meta)
            report.add(
                "i(2mk-m) = 2N - i(m) - 2(S+(1)+Q(m))",
                lambda m=m: (ix.profile(2 * mk - m)[0],
                             2 * N - ix.i(m) - 2 * (s_plus + q_k(spec, mk, m, prof, tol))),
                m=m, **meta,
            )

        def at_2mk():
            d = delta_k(spec, mk, delta, prof, tol)
            for w in d.warnings:
                if w not in report.flags:
                    report.flags.append(w)
            return ix.profile(2 * mk)[0], 2 * N - (s_plus + c_total(spec, prof, tol) - 2 * d.value)

        report.add("i(2mk) = 2N - (S+(1)+C-2Delta)", at_2mk, section=EXTERNAL, **meta)
    return report


def _beta_pair(spec: PathSpec, m: int, ix: _Indexer, tol: Tolerances) -> tuple[int, int, str]:
    """``(beta_+, beta_-)`` of the m-th iterate: block invariants when available."""
    try:
        inv = invariants_of(iterate(spec, m), tol)
        return inv.beta_plus, inv.beta_minus, "invariants"
    except UnclassifiableBlockError:
        bm = splitting_numbers(iterate(spec, m), ZERO, "numeric", tol)[1]
        return ix.nu(m) - bm, bm, "splitting"


def verify_ir(specs: Sequence[PathSpec], cert: JumpCertificate, ell0: int = 5, eta: float = 0.5,
              tol: Tolerances = DEFAULT_TOL, prov: dict | None = None) -> VerificationReport:
    """Index-recurrence properties with ``d = 2N`` and ``k = 2 m_k``, plus the
    translation identities linking them to the jump identities."""
    for k in range(len(specs)):
        limit = 2 * cert.m_bar * float(cert.mean_indices[k]) * cert.epsilon
        if not limit < eta:
            raise PreconditionError(
                f"2 M_bar i_k epsilon = {limit:.3g} is not below eta = {eta}; rerun the tuple search "
                "with a smaller epsilon"
            )
        if not ell0 < 2 * cert.m[k]:
            raise PreconditionError(f"ell0 = {ell0} must be below 2 m_k = {2 * cert.m[k]}")
    report = VerificationReport("index-recurrence", certificate=cert, provenance=prov or provenance(specs))
    d = 2 * cert.N

    for k, spec in enumerate(specs):
        ix = _Indexer(spec, tol)
        mk = cert.m[k]
        kk = 2 * mk
        n = spec.n
        meta = {"spec": k}
        prof = splitting_profile(spec, "table", tol)
        s_plus, s_minus = prof.get(ZERO)

        report.add(
            "|mean(k) - d| < eta",
            lambda: (abs(mean_index(iterate(spec, kk), tol) - d), eta), relation="<", **meta,
        )
        report.add(
            "|2mk i - 2N| < 2 Mbar i eps",
            lambda: (abs(kk * float(mean_index_exact(spec, tol)) - d),
                     2 * cert.m_bar * float(cert.mean_indices[k]) * cert.epsilon + 1e-12),
            relation="<", **meta,
        )
        report.add(
            "2 Mbar i eps < eta",
            lambda: (2 * cert.m_bar * float(cert.mean_indices[k]) * cert.epsilon, eta), relation="<", **meta,
        )
        report.add(
            "d-n <= mu-(k) <= mu+(k) <= d+n",
            lambda: ([d - n, *ix.mu(kk), d + n], True), relation="chain<=", **meta,
        )

        for ell in range(1, ell0 + 1):
            lm = {"m": ell, **meta}
            report.add("mu-(k+l) = d + mu-(l)", lambda ell=ell: (ix.mu(kk + ell)[0], d + ix.mu(ell)[0]), **lm)
            report.add("mu+(k+l) = d + mu+(l)", lambda ell=ell: (ix.mu(kk + ell)[1], d + ix.mu(ell)[1]), **lm)

            def ir3(ell=ell):
                bm = splitting_numbers(iterate(spec, ell), ZERO, "numeric", tol)[1]
                bp = ix.nu(ell) - bm
                return ix.mu(kk - ell)[1], d - ix.mu(ell)[0] + (bp - bm)

            report.add("mu+(k-l) = d - mu-(l) + (b+ - b-)", ir3, **lm)

            def trans1(m=ell):
                bp, bm, _ = _beta_pair(spec, m, ix, tol)
                return bp - bm, ix.profile(kk - m)[1] - 2 * (s_plus + q_k(spec, mk, m, prof, tol))

            def trans2(m=ell):
                bp, bm, _ = _beta_pair(spec, m, ix, tol)
                return [bp + bm, ix.nu(m), ix.profile(kk - m)[1]], True

            def trans3(m=ell):
                _, bm, _ = _beta_pair(spec, m, ix, tol)
                q = q_k(spec, mk, m, prof, tol)
                return [bm, s_plus + q, s_minus + q], True

            def trans4(m=ell):
                q = q_k(spec, mk, m, prof, tol)
                direct = splitting_numbers(iterate(spec, m), ZERO, "numeric", tol)[1]
                return [s_minus + q, bott_splitting(prof, m), direct], True

            report.add("b+ - b- = nu(2mk-m) - 2(S+(1)+Q(m))", trans1, **lm)
            report.add("b+ + b- = nu(m) = nu(2mk-m)", trans2, relation="chain==", **lm)
            report.add("b- = S+(1)+Q(m) = S-(1)+Q(m)", trans3, relation="chain==", **lm)
            report.add("S-(1)+Q(m) = sum S-(w) = S-_{M^m}(1)", trans4, relation="chain==", **lm)
    return report


# ------------------------------------------------------------ beta_- = S^-(1)
PROP1_ATOMS = (
    ZeroForm(1), ZeroForm(2),
    Q0Block(1), Q0Block(3), Q0Block(5),
    *(QSignBlock(d, s) for d in (1, 2, 3) for s in (1, -1)),
)


def prop1_cases(dim_bound: int) -> list[PathSpec]:
    """Every multiset of atoms with total dimension ``2n <= dim_bound``, smallest first."""
    if dim_bound < 2:
        raise PreconditionError("dim_bound must be at least 2")
    half = dim_bound // 2
    atoms = list(PROP1_ATOMS)
    out: list[PathSpec] = []
    for size in range(1, half + 1):
        for combo in itertools.combinations_with_replacement(range(len(atoms)), size):
            blocks = tuple(atoms[i] for i in combo)
            if sum(b.half_dim for b in blocks) <= half:
                out.append(PathSpec(blocks))
    return out


def verify_prop1_suite(dim_bound: int, tol: Tolerances = DEFAULT_TOL) -> VerificationReport:
    """``beta_- = S^-(1)`` and ``beta_+ + beta_- = nu`` on every enumerated degenerate spec."""
    cases = prop1_cases(dim_bound)
    report = VerificationReport("prop1-suite", provenance=provenance([], config={"dim_bound": dim_bound}))
    for idx, spec in enumerate(cases):
        label = spec.canonical_json()

        def checks(spec=spec):
            return beta_minus_check(spec, tol)

        try:
            res = checks()
        except SymIndexError as exc:
            report.checks.append(Check("beta- = S-(1)", None, None, status=ENGINE_ERROR, spec=idx, note=str(exc)))
            continue
        report.add("beta- = S-(1) [table, numeric]",
                   lambda r=res: ([r.beta_minus, r.s_minus_table, r.s_minus_numeric], True),
                   relation="chain==", spec=idx, note=label)
        report.add("beta+ + beta- = nu", lambda r=res: (r.beta_plus + r.beta_minus, r.nullity),
                   spec=idx, note=label)
    report.extra["cases"] = len(cases)
    return report


# ------------------------------------------------------------------- trials
@dataclass
class TrialResult:
    index: int
    specs: list
    certificates: list
    ecijt: list
    ir: list
    warning: str | None = None

    def to_json(self) -> dict:
        return {
            "trial": self.index,
            "specs": [s.to_json() for s in self.specs],
            "certificates": [c.to_json() for c in self.certificates],
            "ecijt": [r.to_json() for r in self.ecijt],
            "index_recurrence": [r.to_json() for r in self.ir],
            "warning": self.warning,
        }


def min_iterate(m_bar_range: int, ell0: int, m_check_value) -> int:
    """Smallest m_k keeping every iterate ``2 m_k - m`` touched by the checks positive."""
    reach = max(m_bar_range, ell0, m_check_value - 1 if m_check_value != math.inf else m_bar_range)
    return reach // 2 + 1


def run_trial(specs: Sequence[PathSpec], *, epsilon: float = 1e-3, n_max: int = 10**7, want: int = 3,
              m_bar_range: int = 5, ell0: int = 5, eta: float = 0.5, delta: float = 0.1,
              m_bar_override: int | None = None, index: int = 0, seed=None,
              tol: Tolerances = DEFAULT_TOL, config: dict | None = None) -> TrialResult:
    mb = m_bar_override or m_bar(specs, tol)
    means = [mean_index_exact(s, tol) for s in specs]
    mc = m_check(specs, tol)
    certs, warning = find_jump_tuples(means, mb, epsilon, want, n_max, min_m=min_iterate(m_bar_range, ell0, mc))
    prov = provenance(specs, seed, config)
    ec = [verify_ecijt(specs, c, m_bar_range, delta, tol, prov) for c in certs]
    ir = [verify_ir(specs, c, ell0, eta, tol, prov) for c in certs]
    return TrialResult(index, list(specs), certs, ec, ir, warning)


def digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()
