"""Command-line front end: ``hardy-lab <subcommand> [options]``.

Every run writes one report (JSON object or CSV table) that embeds the full
effective configuration. Exit status is 0 when every check passes, 1 when
any check fails and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import platform
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__
from ._parallel import map_ordered
from .core_fn import AnalyticPoly, BoundaryGrid, disk_points, parse_complex_list, random_poly, smirnov_check
from .errors import CertificateViolation, HardyLabError
from .multipliers import (
    Family,
    abel_decompose,
    alpha_norm,
    build_family,
    is_concave_paper,
    is_decreasing,
    lemma1_check,
    sum_log_check,
    theorem2_check,
    theorem4_propagate,
)
from .norms import NormParams, default_grid_size, frakn_norm, hinf_norm, hp_norm, lambda_functional
from .toeplitz import Space, certify, default_dim

CSV_COLUMNS = ["trial", "seed", "degree", "lhs", "rhs", "margin", "pass"]
ABEL_TOL = 1e-12


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    coeffs: str | None = None
    degree: int | None = None
    max_degree: int | None = None
    grid_size: int | None = None
    eta_grid_size: int | None = None
    oversample: int = 16
    epsilon: str = "1"
    family: str = "Power"
    alpha_length: int = 10001
    trials: int = 200
    seed: int | None = None
    tol: float | None = None
    output_format: str = "json"
    output_path: str = "-"
    extra: dict = field(default_factory=dict)


@dataclass
class Report:
    config: dict
    records: list
    summary: dict
    versions: dict
    timestamp: str

    @property
    def ok(self) -> bool:
        return self.summary["failed"] == 0

    def body(self) -> dict:
        return {"config": self.config, "records": self.records, "summary": self.summary, "versions": self.versions}

    def to_json(self) -> str:
        d = self.body()
        d["timestamp"] = self.timestamp
        return json.dumps(_jsonable(d), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("# config: " + json.dumps(_jsonable(self.config)) + "\n")
        buf.write("# summary: " + json.dumps(_jsonable(self.summary)) + "\n")
        buf.write("# versions: " + json.dumps(self.versions) + " timestamp: " + self.timestamp + "\n")
        extras = []
        for r in self.records:
            extras += [k for k in r if k not in CSV_COLUMNS and k not in extras]
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS + extras, lineterminator="\n")
        w.writeheader()
        for r in self.records:
            w.writerow({k: _csv_cell(v) for k, v in _jsonable(r).items()})
        return buf.getvalue()


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if hasattr(x, "value") and isinstance(getattr(x, "value"), str):
        return x.value
    return x


def _csv_cell(v):
    return json.dumps(v) if isinstance(v, (list, dict)) else v


def _record(trial, seed, degree, lhs, rhs, passed, **extra) -> dict:
    margin = None if lhs is None or rhs is None else rhs - lhs
    rec = {"trial": trial, "seed": seed, "degree": degree, "lhs": lhs, "rhs": rhs, "margin": margin, "pass": bool(passed)}
    rec.update(extra)
    return rec


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in str(text).split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}") from exc


def _need_seed(cfg: RunConfig):
    if cfg.seed is None:
        raise UsageError(f"{cfg.subcommand}: --seed is required for randomized runs")


def _params(cfg: RunConfig) -> NormParams:
    return NormParams(grid_size=cfg.grid_size, eta_grid_size=cfg.eta_grid_size, oversample=cfg.oversample)


def _poly(cfg: RunConfig) -> AnalyticPoly:
    return parse_complex_list(cfg.coeffs)


def _run_trials(cfg: RunConfig, fn) -> list:
    _need_seed(cfg)
    return map_ordered(lambda t: fn(t, _trial_rng(cfg.seed, t)), range(cfg.trials))


def _random_degree(rng, lo: int, hi: int) -> int:
    return int(rng.integers(lo, hi + 1))


# --- subcommands -----------------------------------------------------------


def cmd_lambda(cfg):
    f = _poly(cfg)
    gz, ge = _params(cfg).grids(f.degree)
    lam = lambda_functional(f, gz, ge).value
    sup = hinf_norm(f, cfg.oversample).value
    return [_record(0, None, f.degree, lam, None, True, **{"lambda": lam, "hinf": sup, "frakn": sup + lam, "grid_size": gz.size})]


def cmd_norms(cfg):
    f = _poly(cfg)
    params = _params(cfg)
    gz, _ = params.grids(f.degree)
    est = frakn_norm(f, params)
    rec = {"hinf": est.parts["hinf"], "lambda": est.parts["lambda"], "frakn": est.value, "grid_size": gz.size}
    for p in _floats(cfg.extra.get("p", "1,2")):
        rec[f"h{p:g}"] = hp_norm(f, p, gz).value
    return [_record(0, None, f.degree, None, None, True, **rec)]


def cmd_lemma1(cfg):
    tol = cfg.tol or 0.0
    params = _params(cfg)
    if cfg.coeffs:
        r = lemma1_check(_poly(cfg), params, tol)
        return [_record(0, None, r.degree, r.lhs, r.rhs, r.passed, ratio=r.ratio)]
    hi = cfg.max_degree or 64

    def one(t, rng):
        p = random_poly(rng, _random_degree(rng, 1, hi))
        r = lemma1_check(p, params, tol)
        return _record(t, cfg.seed, r.degree, r.lhs, r.rhs, r.passed, ratio=r.ratio)

    return _run_trials(cfg, one)


def _alpha(cfg, family=None, eps=None):
    fam = Family.parse(family or cfg.family)
    eps = _floats(cfg.epsilon)[0] if eps is None else eps
    return build_family(fam, eps, cfg.alpha_length)


def cmd_theorem2(cfg):
    tol = cfg.tol or 0.0
    params = _params(cfg)
    alpha = _alpha(cfg)
    sigma_terms = int(cfg.extra.get("sigma_terms", 0))
    if cfg.coeffs:
        r = theorem2_check(_poly(cfg), alpha, params, tol, sigma_terms=sigma_terms)
        return [_record(0, None, len(_poly(cfg)) - 1, r.lhs, r.rhs, r.passed, chain=r.chain)]
    hi = cfg.max_degree or 128

    def one(t, rng):
        f = random_poly(rng, _random_degree(rng, 0, hi))
        r = theorem2_check(f, alpha, params, tol, sigma_terms=sigma_terms)
        return _record(t, cfg.seed, f.degree, r.lhs, r.rhs, r.passed, family=alpha.family.value, epsilon=alpha.epsilon)

    return _run_trials(cfg, one)


def cmd_theorem3(cfg):
    tol = cfg.tol or 0.0
    params = _params(cfg)
    families = [Family.POWER, Family.LOG, Family.LOGLOG]
    records = []
    for fam in families:
        for eps in _floats(cfg.epsilon):
            alpha = build_family(fam, eps, cfg.alpha_length)
            ok = is_decreasing(alpha) and is_concave_paper(alpha)
            records.append(
                _record(len(records), None, None, None, None, ok, check="family_sanity", family=fam.value,
                        epsilon=eps, alpha_norm=alpha_norm(alpha), tail_bound=alpha.tail_bound)
            )
    if cfg.trials > 0:
        _need_seed(cfg)
        hi = cfg.max_degree or 128
        combos = [(fam, eps) for fam in families for eps in _floats(cfg.epsilon)]
        alphas = {c: build_family(c[0], c[1], cfg.alpha_length) for c in combos}
        jobs = [(c, t) for c in combos for t in range(cfg.trials)]

        def one(job):
            (fam, eps), t = job
            rng = _trial_rng(cfg.seed, t)
            f = random_poly(rng, _random_degree(rng, 0, hi))
            r = theorem2_check(f, alphas[(fam, eps)], params, tol)
            return _record(t, cfg.seed, f.degree, r.lhs, r.rhs, r.passed, check="theorem2_bound",
                           family=fam.value, epsilon=eps)

        base = len(records)
        for i, rec in enumerate(map_ordered(one, jobs)):
            rec["trial"] = base + i
            records.append(rec)
    return records


def cmd_theorem4(cfg):
    if not cfg.coeffs or "a" not in cfg.extra:
        raise UsageError("theorem4 needs --coeffs (the function g) and --a")
    g = _poly(cfg)
    a = parse_complex_list(cfg.extra["a"]).coeffs
    r = theorem4_propagate(g, a, _alpha(cfg), _params(cfg), cfg.tol or 0.0)
    return [_record(0, None, g.degree, r.lhs, r.rhs, r.passed, coefficient_ok=r.coefficient_ok,
                    alpha_norm=r.alpha_norm, hinf_g=r.hinf_g, a_l2=r.a_l2, f=list(r.f.coeffs))]


def cmd_abel(cfg):
    tol = cfg.tol or ABEL_TOL
    hi = cfg.max_degree or 256
    fams = [Family.POWER, Family.LOG, Family.LOGLOG]

    def one(t, rng):
        f = random_poly(rng, _random_degree(rng, 0, hi), normalize=False)
        fam = fams[int(rng.integers(len(fams)))]
        eps = float(rng.uniform(0.1, 3.0))
        terms = f.degree + int(rng.integers(0, 64))
        alpha = build_family(fam, eps, terms + 3)
        d = abel_decompose(f, alpha, terms)
        return _record(t, cfg.seed, f.degree, d.reconstruction_residual, tol, d.reconstruction_residual <= tol,
                       family=fam.value, epsilon=eps, terms=terms)

    return _run_trials(cfg, one)


def cmd_sum_log(cfg):
    n_max = int(cfg.extra.get("n_max", 1_000_000))
    r = sum_log_check(n_max)
    return [_record(0, None, None, 0.0, r.min_slack, r.passed, n_max=n_max, argmin=r.argmin,
                    min_half_slack=r.min_half_slack, argmin_half=r.argmin_half,
                    min_final_slack=r.min_final_slack, argmin_final=r.argmin_final)]


def cmd_certify(cfg):
    params = _params(cfg)
    spaces = [Space.H1, Space.HINF] if cfg.extra.get("space", "both") == "both" else [Space.parse(cfg.extra["space"])]
    dim = cfg.extra.get("dim")
    lower_trials = int(cfg.extra.get("lower_trials", 16))

    def check(t, f, seed):
        out = []
        for sp in spaces:
            try:
                c = certify(f, sp, params, dim=dim, trials=lower_trials, seed=seed)
                out.append(_record(t, seed, f.degree, c.lower, c.upper, True, space=sp.value,
                                   witness=c.lower_witness.describe(), method=c.upper_method.value))
            except CertificateViolation as exc:
                out.append(_record(t, seed, f.degree, None, None, False, space=sp.value, error=str(exc)))
        return out

    if cfg.coeffs:
        return check(0, _poly(cfg), cfg.seed or 0)
    hi = cfg.max_degree or 64
    rows = _run_trials(cfg, lambda t, rng: check(t, random_poly(rng, _random_degree(rng, 0, hi)), cfg.seed))
    return [r for batch in rows for r in batch]


def cmd_smirnov(cfg):
    tol = cfg.tol if cfg.tol is not None else 1e-8
    qs = _floats(cfg.extra.get("q", "1,2,4"))
    npts = int(cfg.extra.get("points", 48))
    rmax = float(cfg.extra.get("rmax", 0.9))

    def check(t, f, rng):
        pts = disk_points(npts, rmax, rng)
        out = []
        for q in qs:
            M = cfg.grid_size or max(8192, 2 * (math.ceil(q * f.degree) + 1))
            r = smirnov_check(f, q, BoundaryGrid(M), pts, tol)
            out.append(_record(t, cfg.seed, f.degree, r.max_violation, tol, r.passed, q=q, worst_point=r.worst_point))
        return out

    if cfg.coeffs:
        return check(0, _poly(cfg), np.random.default_rng(cfg.seed or 0))
    hi = cfg.max_degree or 32
    rows = _run_trials(cfg, lambda t, rng: check(t, random_poly(rng, _random_degree(rng, 0, hi)), rng))
    return [r for batch in rows for r in batch]


COMMANDS = {
    "lambda": cmd_lambda,
    "norms": cmd_norms,
    "lemma1": cmd_lemma1,
    "theorem2": cmd_theorem2,
    "theorem3": cmd_theorem3,
    "theorem4": cmd_theorem4,
    "abel-check": cmd_abel,
    "sum-log": cmd_sum_log,
    "toeplitz-certify": cmd_certify,
    "smirnov-check": cmd_smirnov,
}


# --- driver ----------------------------------------------------------------


def _versions() -> dict:
    import numba

    return {"hardy_lab": __version__, "numpy": np.__version__, "numba": numba.__version__, "python": platform.python_version()}


def _summary(records: list) -> dict:
    margins = [r["margin"] for r in records if r.get("margin") is not None]
    failed = sum(1 for r in records if not r["pass"])
    return {
        "count": len(records),
        "passed": len(records) - failed,
        "failed": failed,
        "min_margin": min(margins) if margins else None,
    }


def run(cfg: RunConfig) -> tuple[int, Report]:
    """Dispatch ``cfg.subcommand``, write the report and return (exit status, report)."""
    try:
        records = COMMANDS[cfg.subcommand](cfg)
    except (UsageError, HardyLabError) as exc:
        print(f"hardy-lab {cfg.subcommand}: {exc}", file=sys.stderr)
        return 2, None
    report = Report(
        config=asdict(cfg),
        records=records,
        summary=_summary(records),
        versions=_versions(),
        timestamp=datetime.now(timezone.utc).isoformat(),
    )
    text = report.to_csv() if cfg.output_format == "csv" else report.to_json()
    if cfg.output_path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return (0 if report.ok else 1), report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hardy-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--coeffs", help="comma-separated complex coefficients, e.g. 1,2-0.5i,3i")
    common.add_argument("--grid", dest="grid_size", type=int, help="zeta grid size (default max(4096, 32(N+1)))")
    common.add_argument("--eta-grid", dest="eta_grid_size", type=int, help="eta grid size (default: same as --grid)")
    common.add_argument("--oversample", type=int, default=16)
    common.add_argument("--max-degree", type=int)
    common.add_argument("--trials", type=int, default=200)
    common.add_argument("--seed", type=int)
    common.add_argument("--tol", type=float)
    common.add_argument("--epsilon", default="1", help="epsilon, or a comma list for theorem3")
    common.add_argument("--family", default="Power", choices=["Power", "Log", "LogLog"])
    common.add_argument("--alpha-length", type=int, default=10001, help="stored terms of alpha")
    common.add_argument("--format", dest="output_format", choices=["json", "csv"], default="json")
    common.add_argument("--output", dest="output_path", default="-")

    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "norms":
            p.add_argument("--p", default="1,2", help="comma list of finite p >= 1")
        elif name == "theorem2":
            p.add_argument("--sigma-terms", type=int, default=0)
        elif name == "theorem4":
            p.add_argument("--a", required=True, help="target coefficient moduli, comma list")
        elif name == "sum-log":
            p.add_argument("--n-max", type=int, default=1_000_000)
        elif name == "toeplitz-certify":
            p.add_argument("--space", default="both", choices=["H1", "Hinf", "both"])
            p.add_argument("--dim", type=int)
            p.add_argument("--lower-trials", type=int, default=16)
        elif name == "smirnov-check":
            p.add_argument("--q", default="1,2,4")
            p.add_argument("--points", type=int, default=48)
            p.add_argument("--rmax", type=float, default=0.9)
    return parser


_EXTRA_KEYS = ("p", "sigma_terms", "a", "n_max", "space", "dim", "lower_trials", "q", "points", "rmax")


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    d = vars(ns).copy()
    extra = {k: d.pop(k) for k in _EXTRA_KEYS if k in d}
    fields = {k: v for k, v in d.items() if k in RunConfig.__dataclass_fields__}
    cfg = RunConfig(extra=extra, **fields)
    for name in ("grid_size", "eta_grid_size", "oversample", "trials", "alpha_length", "max_degree"):
        v = getattr(cfg, name)
        if v is not None and v < (0 if name == "trials" else 1):
            raise UsageError(f"--{name.replace('_', '-')} must be positive")
    if cfg.coeffs and cfg.grid_size is None and cfg.subcommand in ("lambda", "norms"):
        cfg.grid_size = default_grid_size(len(parse_complex_list(cfg.coeffs)) - 1)
    if cfg.subcommand == "toeplitz-certify" and cfg.coeffs and extra.get("dim") is None:
        extra["dim"] = default_dim(parse_complex_list(cfg.coeffs))
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except (UsageError, HardyLabError) as exc:
        parser.print_usage(sys.stderr)
        print(f"hardy-lab: error: {exc}", file=sys.stderr)
        return 2
    status, _ = run(cfg)
    return status


if __name__ == "__main__":
    sys.exit(main())
