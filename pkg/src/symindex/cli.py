"""Command-line front end.

Exit codes: 0 when every check passes, 1 when some identity check fails,
2 for malformed input, violated preconditions and engine errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .cijt import find_jump_tuples, m_bar, m_check
from .config import RunConfig, config_from_env, tolerances_from_env
from .core import symplectic_defect, unit_spectrum
from .errors import PreconditionError, SymIndexError
from .generators import PathSpec, iterate
from .paths import evaluate, index_at_iterate, mean_index_exact
from .sampling import random_spec, trial_collection
from .splitting import splitting_profile
from .verify import min_iterate, provenance, verify_ecijt, verify_ir, verify_prop1_suite

COMMANDS = ("eval", "index", "iterate", "split", "cijt-search", "verify-ecijt", "verify-ir",
            "verify-prop1", "gen-random")


class InputError(Exception):
    """Unreadable or malformed input; reported with exit code 2."""


def load_spec(arg: str, tol) -> PathSpec:
    """A spec from a JSON file path or an inline JSON object."""
    if arg.lstrip().startswith("{"):
        text, where = arg, "<inline>"
    else:
        path = Path(arg)
        try:
            text = path.read_text()
        except OSError as exc:
            raise InputError(f"{arg}: {exc.strerror}") from None
        where = arg
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{where}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        return PathSpec.from_json(obj, tol)
    except SymIndexError as exc:
        raise InputError(f"{where}: {exc}") from None


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "table"))
    common.add_argument("--output", "-o")
    common.add_argument("--seed", type=int)

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--epsilon", type=float)
    search.add_argument("--n-max", type=int)
    search.add_argument("--want", type=int)
    search.add_argument("--delta", type=float)
    search.add_argument("--m-bar-override", type=int)
    search.add_argument("--m", dest="m_bar_range", type=int, help="largest m in the jump identities")
    search.add_argument("--ell0", type=int)
    search.add_argument("--eta", type=float)

    p = argparse.ArgumentParser(prog="symindex", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="evaluate gamma(t)")
    e.add_argument("spec")
    e.add_argument("--t", type=float, default=1.0)

    i = sub.add_parser("index", parents=[common], help="index records of gamma^1..gamma^m")
    i.add_argument("specs", nargs="+")
    i.add_argument("--m", type=int, default=1)

    it = sub.add_parser("iterate", parents=[common], help="spec of the m-th iterate")
    it.add_argument("spec")
    it.add_argument("--m", type=int, required=True)

    s = sub.add_parser("split", parents=[common], help="splitting profile of the end matrix")
    s.add_argument("spec")
    s.add_argument("--route", choices=("table", "numeric"), default="table")

    for name, help_ in (("cijt-search", "search common index jump tuples"),
                        ("verify-ecijt", "verify the jump identities at found tuples"),
                        ("verify-ir", "verify the index-recurrence properties at found tuples")):
        c = sub.add_parser(name, parents=[common, search], help=help_)
        c.add_argument("specs", nargs="+")

    v = sub.add_parser("verify-prop1", parents=[common], help="beta_- = S^-(1) on all small degenerate specs")
    v.add_argument("--dim-bound", type=int, default=12)

    g = sub.add_parser("gen-random", parents=[common], help="seeded random specs")
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--kind", choices=("spec", "collection"), default="spec")
    return p


def _config(args) -> RunConfig:
    kwargs = config_from_env()
    for name in ("epsilon", "n_max", "want", "delta", "m_bar_override", "m_bar_range", "ell0", "eta",
                 "seed", "format", "output"):
        value = getattr(args, name, None)
        if value is not None:
            kwargs[name] = value
    return RunConfig(tolerances=tolerances_from_env(), **kwargs)


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.output:
        Path(cfg.output).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _index_rows(specs, m_max, tol):
    rows = []
    for k, spec in enumerate(specs):
        for m in range(1, m_max + 1):
            rec = index_at_iterate(spec, m, tol, check=m <= 24)
            rows.append({"k": k, **rec.to_json()})
    return rows


CSV_COLUMNS = ("k", "m", "i", "nu", "mu_minus", "mu_plus", "mean")


def _render_rows(rows, cfg, header: dict) -> str:
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({c: r[c] for c in CSV_COLUMNS})
        return buf.getvalue()
    if cfg.format == "table":
        lines = ["  ".join(f"{c:>9}" for c in CSV_COLUMNS)]
        for r in rows:
            lines.append("  ".join(f"{r[c]:>9.6g}" if c == "mean" else f"{r[c]:>9}" for c in CSV_COLUMNS))
        return "\n".join(lines)
    return _dumps({**header, "records": rows})


def _search(specs, cfg):
    tol = cfg.tolerances
    mb = cfg.m_bar_override or m_bar(specs, tol)
    means = [mean_index_exact(s, tol) for s in specs]
    mc = m_check(specs, tol)
    certs, warning = find_jump_tuples(means, mb, cfg.epsilon, cfg.want, cfg.n_max,
                                      min_m=min_iterate(cfg.m_bar_range, cfg.ell0, mc))
    return certs, warning, mb, mc


def _verify(specs, cfg, which: str):
    certs, warning, mb, mc = _search(specs, cfg)
    prov = provenance(specs, cfg.seed, cfg.to_json())
    tol = cfg.tolerances
    if which == "ecijt":
        reports = [verify_ecijt(specs, c, cfg.m_bar_range, cfg.delta, tol, prov) for c in certs]
    else:
        reports = [verify_ir(specs, c, cfg.ell0, cfg.eta, tol, prov) for c in certs]
    code = max((r.exit_code for r in reports), default=0)
    if not certs:
        code = 2
    if cfg.format == "table":
        text = "\n\n".join(f"certificate N={r.certificate.N} m={list(r.certificate.m)}\n{r.table()}" for r in reports)
        if warning:
            text += f"\nwarning: {warning}"
    else:
        text = _dumps({"kind": f"verify-{which}", "provenance": prov, "warning": warning,
                       "reports": [r.to_json() for r in reports], "exit_code": code})
    return text, code


def run(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
        tol = cfg.tolerances
        cmd = args.command
        if cmd == "eval":
            spec = load_spec(args.spec, tol)
            M = evaluate(spec, args.t, tol)
            spectrum = [{"angle": u.angle.to_json(), "label": u.angle.label(), "alg_mult": u.alg_mult,
                         "geo_mult": u.geo_mult} for u in unit_spectrum(M, tol)]
            out = {"n": spec.n, "t": args.t, "matrix": np.asarray(M).tolist(),
                   "symplectic_defect": symplectic_defect(M), "unit_spectrum": spectrum,
                   "provenance": provenance([spec], cfg.seed, cfg.to_json())}
            _emit(_dumps(out), cfg)
            return 0
        if cmd == "index":
            specs = [load_spec(s, tol) for s in args.specs]
            rows = _index_rows(specs, args.m, tol)
            _emit(_render_rows(rows, cfg, {"provenance": provenance(specs, cfg.seed, cfg.to_json())}), cfg)
            return 0
        if cmd == "iterate":
            spec = load_spec(args.spec, tol)
            _emit(_dumps(iterate(spec, args.m).to_json()), cfg)
            return 0
        if cmd == "split":
            spec = load_spec(args.spec, tol)
            prof = splitting_profile(spec, args.route, tol)
            out = {"source": prof.source, "entries": prof.to_json(),
                   "provenance": provenance([spec], cfg.seed, cfg.to_json())}
            _emit(_dumps(out), cfg)
            return 0
        if cmd == "cijt-search":
            specs = [load_spec(s, tol) for s in args.specs]
            certs, warning, mb, mc = _search(specs, cfg)
            out = {"m_bar": mb, "m_check": None if mc == float("inf") else mc, "warning": warning,
                   "certificates": [c.to_json() for c in certs],
                   "provenance": provenance(specs, cfg.seed, cfg.to_json())}
            _emit(_dumps(out), cfg)
            return 0
        if cmd in ("verify-ecijt", "verify-ir"):
            specs = [load_spec(s, tol) for s in args.specs]
            text, code = _verify(specs, cfg, "ecijt" if cmd == "verify-ecijt" else "ir")
            _emit(text, cfg)
            return code
        if cmd == "verify-prop1":
            report = verify_prop1_suite(args.dim_bound, tol)
            report.provenance["config"] = cfg.to_json()
            _emit(report.table() if cfg.format == "table" else report.dumps(), cfg)
            return report.exit_code
        if cmd == "gen-random":
            rng = np.random.default_rng(cfg.seed)
            if args.kind == "spec":
                items = [random_spec(rng).to_json() for _ in range(args.count)]
            else:
                items = [[s.to_json() for s in trial_collection(rng, epsilon=cfg.epsilon)]
                         for _ in range(args.count)]
            _emit(_dumps({"seed": cfg.seed, "kind": args.kind, "items": items}), cfg)
            return 0
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return 2
    except SymIndexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError("unreachable")


def main() -> None:
    sys.exit(run())
