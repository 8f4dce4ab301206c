"""Command-line driver: suites of checks, parameter sweeps, report files.

Configuration lives in a flat key=value text file; every key has a matching
command-line flag that overrides it.  Reports are emitted as CSV (fixed
column set, golden-file stable) and JSON (superset).  Exit codes: 0 all
asserted checks pass, 1 at least one failed, 2 usage or configuration
error, 3 internal cross-path inconsistency.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .rootsys import CapabilityError, RootSystem, parse_group
from .polyalg import CrossPathError, Polynomial, parse_poly, poly_str
from .quadrature import DEFAULT_ORDER, QuadratureError, QuadratureRule, gauss_rule
from .spectral import EigenGateError, build_basis
from . import inequalities as iq
from .inequalities import CheckReport, reports_to_csv, reports_to_json, sort_reports


class ConfigError(ValueError):
    """Raised for unknown keys, malformed values, or bad flag combinations."""


# every config key, its parser, and its canonical default (as text)
_CONFIG_DEFAULTS: Dict[str, str] = {
    "group": "rank1:k=1",
    "k": "",
    "suite": "all",
    "quad_order": str(DEFAULT_ORDER),
    "precision_digits": "0",
    "t": "0.1,0.5,2",
    "seed": "1234",
    "battery_size": "5",
    "tol": "",
    "jobs": "1",
    "out_json": "",
    "out_csv": "",
    "f": "x1",
    "n_max": "30",
}

_SUITES = ("identity", "semigroup", "poincare", "gradient", "entropy", "all")


@dataclass(frozen=True)
class RunConfig:
    group: str = "rank1:k=1"
    k: str = ""
    suite: str = "all"
    quad_order: int = DEFAULT_ORDER
    precision_digits: int = 0
    t: Tuple[str, ...] = ("0.1", "0.5", "2")
    seed: int = 1234
    battery_size: int = 5
    tol: Tuple[Tuple[str, float], ...] = ()
    jobs: int = 1
    out_json: str = ""
    out_csv: str = ""
    f: str = "x1"
    n_max: int = 30

    @property
    def t_floats(self) -> Tuple[float, ...]:
        return tuple(float(Fraction(s)) for s in self.t)

    @property
    def t_exact(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(s) for s in self.t)

    def tols(self) -> Dict[str, float]:
        out = dict(iq.TOL)
        out.update(dict(self.tol))
        return out

    def canonical_text(self) -> str:
        values = {
            "group": self.group,
            "k": self.k,
            "suite": self.suite,
            "quad_order": str(self.quad_order),
            "precision_digits": str(self.precision_digits),
            "t": ",".join(self.t),
            "seed": str(self.seed),
            "battery_size": str(self.battery_size),
            "tol": ",".join(f"{tier}={val!r}" for tier, val in sorted(self.tol)),
            "jobs": str(self.jobs),
            "out_json": self.out_json,
            "out_csv": self.out_csv,
            "f": self.f,
            "n_max": str(self.n_max),
        }
        return "".join(f"{key}={values[key]}\n" for key in sorted(values))


def _parse_int(key: str, text: str, minimum: int = 0) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ConfigError(f"{key} expects an integer, got {text!r}")
    if value < minimum:
        raise ConfigError(f"{key} must be >= {minimum}, got {value}")
    return value


def _parse_t(text: str) -> Tuple[str, ...]:
    items = [s.strip() for s in text.split(",") if s.strip()]
    if not items:
        raise ConfigError("t expects a comma-separated list of positive times")
    for s in items:
        try:
            val = Fraction(s)
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"bad time value {s!r}")
        if val <= 0:
            raise ConfigError(f"times must be positive, got {s!r}")
    return tuple(items)


def _parse_tol(text: str) -> Tuple[Tuple[str, float], ...]:
    if not text.strip():
        return ()
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise ConfigError(f"tol entries look like tier=value, got {item!r}")
        tier, _, raw = item.partition("=")
        tier = tier.strip()
        if tier not in iq.TOL:
            raise ConfigError(
                f"unknown tolerance tier {tier!r}; known: {', '.join(sorted(iq.TOL))}")
        try:
            val = float(raw)
        except ValueError:
            raise ConfigError(f"bad tolerance value {raw!r}")
        if val <= 0:
            raise ConfigError(f"tolerances must be positive, got {raw!r}")
        out.append((tier, val))
    return tuple(sorted(out))


def config_from_raw(raw: Dict[str, str]) -> RunConfig:
    """Build a validated RunConfig from raw key=value strings."""
    unknown = sorted(set(raw) - set(_CONFIG_DEFAULTS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    merged = dict(_CONFIG_DEFAULTS)
    merged.update({k: v for k, v in raw.items() if v is not None})
    if merged["suite"] not in _SUITES:
        raise ConfigError(
            f"unknown suite {merged['suite']!r}; choose from {', '.join(_SUITES)}")
    return RunConfig(
        group=merged["group"],
        k=merged["k"],
        suite=merged["suite"],
        quad_order=_parse_int("quad_order", merged["quad_order"], 4),
        precision_digits=_parse_int("precision_digits", merged["precision_digits"], 0),
        t=_parse_t(merged["t"]),
        seed=_parse_int("seed", merged["seed"], 0),
        battery_size=_parse_int("battery_size", merged["battery_size"], 1),
        tol=_parse_tol(merged["tol"]),
        jobs=_parse_int("jobs", merged["jobs"], 1),
        out_json=merged["out_json"],
        out_csv=merged["out_csv"],
        f=merged["f"],
        n_max=_parse_int("n_max", merged["n_max"], 0),
    )


def parse_config_text(text: str) -> Dict[str, str]:
    raw: Dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected key=value, got {stripped!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value.strip()
    return raw


def load_config_file(path: str) -> Dict[str, str]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_config_text(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}")


# ---------------------------------------------------------------------------
# group handling


def _group_prefix(group: str) -> str:
    idx = group.find(":k=")
    return group if idx < 0 else group[:idx]


def _axis_count(prefix: str) -> int:
    parts = prefix.split(":")
    if parts[0] == "rank1":
        return 1
    if len(parts) >= 2:
        try:
            d = int(parts[1])
        except ValueError:
            raise ConfigError(f"bad group prefix {prefix!r}")
        return d if parts[0] == "z2" else 1  # sym has one orbit parameter
    raise ConfigError(f"bad group prefix {prefix!r}")


def group_with_k(group: str, k_entry: str) -> str:
    """Substitute a multiplicity entry into a group string.

    A bare value for a multi-axis group is replicated across axes.
    """
    prefix = _group_prefix(group)
    entry = k_entry.strip()
    if "," not in entry:
        entry = ",".join([entry] * _axis_count(prefix))
    return f"{prefix}:k={entry}"


def _parse_group(group: str) -> RootSystem:
    try:
        return parse_group(group)
    except ValueError as exc:
        raise ConfigError(f"bad group {group!r}: {exc}")


def _resolve_group(cfg: RunConfig) -> RootSystem:
    group = cfg.group
    if cfg.k:
        entries = [e for e in cfg.k.split(";") if e.strip()]
        group = group_with_k(group, entries[0])
    return _parse_group(group)


# ---------------------------------------------------------------------------
# suite drivers.  Each task is (key, thunk); the thunk returns reports.
# Assembly is by task order and then report sort order, so the output is
# deterministic no matter how the pool schedules the work.

Task = Tuple[str, Callable[[], List[CheckReport]]]


def _dim_params(rs: RootSystem) -> Dict[str, object]:
    if rs.dim <= 2:
        return {"grid_pts": 9, "conv_degree": None, "reverse_degree": 6, "basis_degree": 12}
    return {"grid_pts": 5, "conv_degree": 3, "reverse_degree": 3, "basis_degree": 8}


def _rule_for(rs: RootSystem, cfg: RunConfig, refined: bool) -> Optional[QuadratureRule]:
    if not iq._has_numeric_measure(rs):
        return None
    order = max(cfg.quad_order, iq.refined_order(rs)) if refined else cfg.quad_order
    dps = cfg.precision_digits or None
    return gauss_rule(rs, order=order, dps=dps)


def _tasks_identity(cfg: RunConfig, rs: RootSystem) -> List[Task]:
    tols = cfg.tols()
    dims = _dim_params(rs)
    grid = iq.default_grid(rs, dims["grid_pts"])
    battery = iq.polynomial_battery(rs, cfg.battery_size, cfg.seed)
    if dims["conv_degree"] is None:
        conv = battery[: min(2, len(battery))]
    else:
        conv = iq.polynomial_battery(rs, 2, cfg.seed, max_degree=dims["conv_degree"])
    pos = iq.positive_battery(rs, 2, cfg.seed)
    tasks: List[Task] = [
        ("identity.generator", lambda: iq.check_generator_identities(
            rs, battery, _rule_for(rs, cfg, refined=False), tol=tols["quadrature"])),
        ("identity.gamma", lambda: iq.check_gamma_identity(
            rs, battery, _rule_for(rs, cfg, refined=False), tol=tols["quadrature"])),
    ]
    for phi in ("square", "fourth", "exp_truncated"):
        for i, f in enumerate(conv):
            tasks.append((f"identity.convexity.{phi}.{i}",
                          lambda phi=phi, f=f: iq.check_convexity_theorem(
                              rs, phi, f, grid, tol=tols["symbolic"])))
    for i, fs in enumerate(pos):
        if iq._has_numeric_measure(rs):
            tasks.append((f"identity.convexity.corollary.{i}",
                          lambda fs=fs: iq.check_convexity_corollary(
                              rs, fs, tol=tols["symbolic"])))
        else:
            tasks.append((f"identity.convexity.corollary.{i}",
                          lambda fs=fs: [iq.skipped_report(
                              "inequality.convexity.integral_power", rs, fs.describe(),
                              {}, "no numeric measure on this group")]))
    return tasks


def _tasks_semigroup(cfg: RunConfig, rs: RootSystem) -> List[Task]:
    tols = cfg.tols()
    if not iq._has_numeric_measure(rs):
        def skipped() -> List[CheckReport]:
            return [iq.skipped_report(
                f"semigroup.{name}", rs, "battery", {}, "no numeric kernel on this group")
                for name in ("normalization", "symmetry", "kernel_bound", "jensen",
                             "invariance", "selfadjoint", "commutation")]
        return [("semigroup.skipped", skipped)]
    battery = iq.polynomial_battery(rs, cfg.battery_size, cfg.seed)
    basis = build_basis(rs, _dim_params(rs)["basis_degree"])
    pts = iq.sample_points(rs, 5, cfg.seed)
    pts_origin = [tuple(p) for p in pts] + [tuple(0.0 for _ in range(rs.dim))]
    taus = (0.1, 0.3, 0.5, 0.7, 0.9, 0.95)
    ts = cfg.t_floats
    tasks: List[Task] = [
        ("semigroup.normalization", lambda: iq.check_q_normalization(
            rs, taus, pts_origin, order=max(192, cfg.quad_order))),
        ("semigroup.symmetry", lambda: iq.check_q_symmetry(rs, cfg.seed)),
        ("semigroup.kernel_bound", lambda: iq.check_kernel_bound(
            rs, cfg.seed, tol=tols["symbolic"])),
        ("semigroup.jensen", lambda: iq.check_jensen(
            rs, battery[0], ts, pts, _rule_for(rs, cfg, refined=True),
            tol=tols["symbolic"])),
        ("semigroup.invariance", lambda: iq.check_invariance(
            rs, battery, ts, _rule_for(rs, cfg, refined=True), tol=tols["quadrature"])),
        ("semigroup.selfadjoint", lambda: iq.check_self_adjoint(
            rs, battery[: min(4, len(battery))], ts,
            _rule_for(rs, cfg, refined=True), tol=tols["quadrature"])),
        ("semigroup.commutation", lambda: iq.check_commutation(
            rs, battery[0], (min(ts), max(ts)), pts, basis,
            _rule_for(rs, cfg, refined=True), quad_tol=tols["compound"])),
    ]
    return tasks


def _tasks_poincare(cfg: RunConfig, rs: RootSystem) -> List[Task]:
    tols = cfg.tols()
    if not iq._has_numeric_measure(rs):
        return [("poincare.skipped", lambda: [iq.skipped_report(
            "poincare.sandwich", rs, "battery", {},
            "eigen decomposition needs exact moments; not available here")])]
    battery = iq.polynomial_battery(rs, cfg.battery_size, cfg.seed)
    basis = build_basis(rs, _dim_params(rs)["basis_degree"])
    ts = cfg.t_floats
    tasks: List[Task] = []
    for i, f in enumerate(battery):
        for j, t in enumerate(ts):
            cross = i == 0 and (rs.dim <= 2 or j == 0)
            tasks.append((f"poincare.sandwich.{i}.{j}",
                          lambda f=f, t=t, cross=cross: iq.check_poincare_sandwich(
                              rs, f, t, basis,
                              rule=_rule_for(rs, cfg, refined=True) if cross else None,
                              tol=tols["quadrature"], cross_tol=tols["compound"])))
    taylor_ts = [te for te in cfg.t_exact if te <= Fraction(1, 2)] or [min(cfg.t_exact)]
    taylor_f = [f for f in battery if f.degree() <= 6][:2] or [Polynomial.variable(rs.dim, 0)]
    for i, f in enumerate(taylor_f):
        for j, te in enumerate(taylor_ts):
            tasks.append((f"poincare.taylor.{i}.{j}",
                          lambda f=f, te=te: iq.taylor_expansion(
                              rs, f, te, cfg.n_max, basis)))
    for i, f in enumerate(battery[:2]):
        tasks.append((f"poincare.psi_convexity.{i}",
                      lambda f=f: iq.check_psi_convexity(rs, f, basis, ts)))
    return tasks


def _tasks_gradient(cfg: RunConfig, rs: RootSystem) -> List[Task]:
    tols = cfg.tols()
    dims = _dim_params(rs)
    grid = iq.default_grid(rs, dims["grid_pts"])
    battery = iq.polynomial_battery(rs, cfg.battery_size, cfg.seed)
    numeric = iq._has_numeric_measure(rs)
    basis = build_basis(rs, dims["basis_degree"]) if numeric else None
    ts = cfg.t_floats
    tasks: List[Task] = []
    for i, f in enumerate(battery):
        with_decay = numeric and i == 0
        tasks.append((f"gradient.bound.{i}",
                      lambda f=f, with_decay=with_decay: iq.check_gradient_bound(
                          rs, f, grid,
                          basis=basis if with_decay else None,
                          ts=(min(ts), max(ts)) if with_decay else (),
                          tol=tols["symbolic"])))
    tasks.append(("gradient.witness", lambda: iq.gradient_witness(rs)))
    if rs.dim == 1 and rs.gamma > 0:
        tasks.append(("gradient.failure", lambda: iq.lower_bound_failure(rs, grid)))
    tasks.append(("gradient.sweep", lambda: iq.sharpness_ratio(rs, battery, grid)[2]))
    if numeric:
        rb = iq.polynomial_battery(rs, 2, cfg.seed, max_degree=dims["reverse_degree"])
        for i, f in enumerate(rb):
            for j, t in enumerate(ts):
                cross = i == 0 and j == 0
                tasks.append((f"gradient.reverse.{i}.{j}",
                              lambda f=f, t=t, cross=cross: iq.check_reverse_poincare(
                                  rs, f, t, grid,
                                  rule=_rule_for(rs, cfg, refined=True) if cross else None,
                                  basis=basis, tol=tols["compound"])))
    else:
        tasks.append(("gradient.reverse.skipped", lambda: [iq.skipped_report(
            "reverse.pointwise", rs, "battery", {},
            "eigen decomposition needs exact moments; not available here")]))
    return tasks


def _tasks_entropy(cfg: RunConfig, rs: RootSystem) -> List[Task]:
    tols = cfg.tols()
    if not iq._has_numeric_measure(rs):
        return [("entropy.skipped", lambda: [iq.skipped_report(
            "entropy.bound", rs, "battery", {}, "no numeric measure on this group")])]
    size = min(cfg.battery_size, 3 if rs.dim <= 2 else 2)
    pos = iq.positive_battery(rs, size, cfg.seed)
    return [("entropy.bounds", lambda: iq.check_entropy_bounds(
        rs, pos, tol=tols["compound"]))]


def _tasks_twin(cfg: RunConfig, rs: RootSystem, suites: Sequence[str]) -> List[Task]:
    """Reduced rerun with doubled multiplicities.

    The point is scaling sanity: every identity holds verbatim, and the
    gradient constant moves to the doubled 1 + 2*gamma*|roots| with the
    one-dimensional equality case tracking it exactly.
    """
    twin = iq.doubled_multiplicities(rs)
    tols = cfg.tols()
    dims = _dim_params(twin)
    grid = iq.default_grid(twin, dims["grid_pts"])
    battery = iq.polynomial_battery(twin, 2, cfg.seed)
    numeric = iq._has_numeric_measure(twin)
    tmin = min(cfg.t_floats)
    tasks: List[Task] = []
    if "identity" in suites:
        tasks.append(("twin.identity.generator", lambda: iq.check_generator_identities(
            twin, battery, _rule_for(twin, cfg, refined=False), tol=tols["quadrature"])))
        tasks.append(("twin.identity.gamma", lambda: iq.check_gamma_identity(
            twin, battery, _rule_for(twin, cfg, refined=False), tol=tols["quadrature"])))
    if "poincare" in suites and numeric:
        basis = build_basis(twin, max(6, battery[0].degree()))
        tasks.append(("twin.poincare.sandwich", lambda: iq.check_poincare_sandwich(
            twin, battery[0], tmin, basis, tol=tols["quadrature"])))
        tasks.append(("twin.poincare.psi_convexity", lambda: iq.check_psi_convexity(
            twin, battery[0], basis, (tmin,))))
    if "gradient" in suites:
        for i, f in enumerate(battery):
            tasks.append((f"twin.gradient.bound.{i}",
                          lambda f=f: iq.check_gradient_bound(
                              twin, f, grid, tol=tols["symbolic"])))
        tasks.append(("twin.gradient.witness", lambda: iq.gradient_witness(twin)))
        tasks.append(("twin.gradient.sweep",
                      lambda: iq.sharpness_ratio(twin, battery, grid)[2]))
    if "semigroup" in suites and numeric:
        tasks.append(("twin.semigroup.invariance", lambda: iq.check_invariance(
            twin, battery, (tmin,), _rule_for(twin, cfg, refined=True),
            tol=tols["quadrature"])))
    return tasks


_SUITE_BUILDERS = {
    "identity": _tasks_identity,
    "semigroup": _tasks_semigroup,
    "poincare": _tasks_poincare,
    "gradient": _tasks_gradient,
    "entropy": _tasks_entropy,
}


def run_tasks(tasks: Sequence[Task], jobs: int) -> List[CheckReport]:
    if jobs <= 1 or len(tasks) <= 1:
        results = [thunk() for _, thunk in tasks]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(thunk) for _, thunk in tasks]
            results = [fut.result() for fut in futures]
    reports: List[CheckReport] = []
    for chunk in results:
        reports.extend(chunk)
    return sort_reports(reports)


def _write_outputs(reports: List[CheckReport], cfg: RunConfig) -> None:
    if cfg.out_csv:
        with open(cfg.out_csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(reports_to_csv(reports))
    if cfg.out_json:
        with open(cfg.out_json, "w", encoding="utf-8") as fh:
            fh.write(reports_to_json(reports))


def _exit_code(reports: Sequence[CheckReport]) -> int:
    return 0 if all(r.passed for r in reports) else 1


def _print_summary(reports: Sequence[CheckReport], out=None) -> None:
    # resolve the stream at call time so redirected stdout is honored
    out = out if out is not None else sys.stdout
    failed = [r for r in reports if not r.passed]
    skipped = sum(1 for r in reports if r.status == "skipped")
    informational = sum(1 for r in reports if r.kind == "report")
    for r in failed:
        print(f"FAIL {r.check_id} [{r.group}] {r.function} "
              f"margin={r.margin!r} tol={r.tolerance!r}", file=out)
    print(f"checks: {len(reports)} total, {len(reports) - len(failed)} ok, "
          f"{skipped} skipped, {informational} informational, {len(failed)} failed",
          file=out)


def cmd_verify(cfg: RunConfig) -> int:
    rs = _resolve_group(cfg)
    suites = list(_SUITE_BUILDERS) if cfg.suite == "all" else [cfg.suite]
    tasks: List[Task] = []
    for name in suites:
        tasks.extend(_SUITE_BUILDERS[name](cfg, rs))
    tasks.extend(_tasks_twin(cfg, rs, suites))
    if cfg.jobs > 1:
        # warm the rule caches serially so the pool does not build the same
        # expensive axis several times on a cache-miss race
        for group in (rs, iq.doubled_multiplicities(rs)):
            _rule_for(group, cfg, refined=False)
            _rule_for(group, cfg, refined=True)
    reports = run_tasks(tasks, cfg.jobs)
    _write_outputs(reports, cfg)
    _print_summary(reports)
    return _exit_code(reports)


def cmd_sweep(cfg: RunConfig) -> int:
    entries = [e.strip() for e in cfg.k.split(";") if e.strip()] if cfg.k else \
        ["0", "1/2", "1", "2"]
    reports: List[CheckReport] = []
    rows = []
    for entry in entries:
        rs = _parse_group(group_with_k(cfg.group, entry))
        dims = _dim_params(rs)
        battery = iq.polynomial_battery(rs, cfg.battery_size, cfg.seed)
        grid = iq.default_grid(rs, dims["grid_pts"])
        sup, witness, reps = iq.sharpness_ratio(rs, battery, grid)
        reps = reps + iq.gradient_witness(rs)
        reports.extend(reps)
        rows.append((entry, float(rs.gamma), float(iq.gradient_constant(rs)),
                     sup, witness))
    reports = sort_reports(reports)
    _write_outputs(reports, cfg)
    print(f"{'k':>8} {'gamma':>10} {'constant':>12} {'battery_sup':>14} {'witness':>12}")
    for entry, gamma, const, sup, witness in rows:
        print(f"{entry:>8} {gamma:>10.4f} {const:>12.6f} {sup:>14.8f} {witness:>12.6f}")
    _print_summary(reports)
    return _exit_code(reports)


def cmd_taylor(cfg: RunConfig) -> int:
    rs = _resolve_group(cfg)
    rs.require_numeric_measure("taylor command")
    try:
        f = parse_poly(cfg.f, rs.dim)
    except ValueError as exc:
        raise ConfigError(f"bad polynomial {cfg.f!r}: {exc}")
    if f.degree() < 1:
        raise ConfigError("taylor needs a nonconstant polynomial")
    basis = build_basis(rs, f.degree())
    te = cfg.t_exact[0]
    rows = iq.taylor_table(basis, f, te, cfg.n_max)
    print(f"# f = {poly_str(f)}, t = {te}, group = {rs.label()}")
    print(f"{'N':>4} {'|S_N - psi|':>16}")
    for n, err in rows:
        print(f"{n:>4} {err:>16.8e}")
    reports = sort_reports(iq.taylor_expansion(rs, f, te, cfg.n_max, basis))
    _write_outputs(reports, cfg)
    _print_summary(reports)
    return _exit_code(reports)


def cmd_entropy(cfg: RunConfig) -> int:
    rs = _resolve_group(cfg)
    tasks = _tasks_entropy(cfg, rs)
    reports = run_tasks(tasks, cfg.jobs)
    _write_outputs(reports, cfg)
    bound_rows = [r for r in reports if r.check_id.startswith("entropy.bound")]
    if bound_rows:
        print(f"{'check':>22} {'delta':>8} {'entropy':>14} {'bound':>14} {'margin':>12}")
        for r in bound_rows:
            delta = dict(p.split("=", 1) for p in r.params_text().split(";") if "=" in p).get("delta", "")
            print(f"{r.check_id:>22} {delta:>8} {r.lhs:>14.6e} {r.rhs:>14.6e} {r.margin:>12.4e}")
    ratio_rows = [r for r in reports if r.check_id.startswith("entropy.logsobolev")]
    if ratio_rows:
        print(f"{'ratio':>30} {'value':>14}  note")
        for r in ratio_rows:
            print(f"{r.check_id:>30} {r.lhs:>14.6e}  {r.note}")
    _print_summary(reports)
    return _exit_code(reports)


_COMMANDS = {
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "taylor": cmd_taylor,
    "entropy": cmd_entropy,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dunklou",
        description="verification suites for the reflection-symmetric "
                    "Ornstein-Uhlenbeck calculus",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("verify", "run check suites and write reports"),
        ("sweep", "sharpness ratio sweep over a multiplicity grid"),
        ("taylor", "partial-sum table for the evolved second moment"),
        ("entropy", "entropy bounds and empirical log-Sobolev table"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", default=None, help="flat key=value config file")
        p.add_argument("--group", default=None, help="group spec, e.g. z2:2:k=1,0.5")
        p.add_argument("--k", default=None,
                       help="multiplicity override; for sweep a ;-separated grid")
        p.add_argument("--suite", default=None, choices=_SUITES)
        p.add_argument("--quad-order", default=None, dest="quad_order")
        p.add_argument("--precision-digits", default=None, dest="precision_digits")
        p.add_argument("--t", default=None, help="comma-separated times")
        p.add_argument("--seed", default=None)
        p.add_argument("--battery-size", default=None, dest="battery_size")
        p.add_argument("--tol", default=None, help="tier=value[,tier=value...]")
        p.add_argument("--jobs", default=None)
        p.add_argument("--out-json", default=None, dest="out_json")
        p.add_argument("--out-csv", default=None, dest="out_csv")
        p.add_argument("--f", default=None, help="polynomial, e.g. 3/2*x1^2-x2")
        p.add_argument("--n-max", default=None, dest="n_max")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        raw = load_config_file(args.config) if args.config else {}
        for key in _CONFIG_DEFAULTS:
            value = getattr(args, key, None)
            if value is not None:
                raw[key] = value
        cfg = config_from_raw(raw)
        return _COMMANDS[args.command](cfg)
    except (ConfigError, CapabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CrossPathError, EigenGateError, QuadratureError) as exc:
        print(f"internal consistency failure: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
