"""Margin-report checks for the identities and inequalities of the model.

Every check computes a left-hand side and a right-hand side by routes that
do not share code (exact rational moments, eigen expansion, Gauss rules) and
emits CheckReport records.  Nothing in this module raises on a failed
inequality; failures surface as reports with passed == False so a driver can
aggregate them.
"""

from __future__ import annotations

import csv
import io
import json
import math
import random
import zlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from mpmath import mp

from .mputil import locked_workdps

from .polyalg import (
    Polynomial,
    carre_du_champ,
    carre_du_champ_pair_gradient_form,
    divided_difference,
    dunkl_gradient,
    ou_generator,
    poly_str,
    reflect_poly,
)
from .quadrature import (
    QuadratureRule,
    _exact_axis_multiplicities,
    _float_axis_ks,
    gauss_rule,
    integrate_mk_exact,
    rule_1d,
)
from .rootsys import GroupKind, RootSystem
from .semigroup import OuEvaluator, _axis_log_q, kernel_K, kernel_Q, kernel_upper_estimate
from .spectral import (
    EigenBasis,
    build_basis,
    gamma_integral_spectral,
    graded_parts,
    graded_weights,
    ou_spectral,
    psi_moments,
)

# Tolerance tiers: exact-arithmetic-adjacent, one Gauss rule, stacked rules.
TOL = {"symbolic": 1e-10, "quadrature": 1e-9, "compound": 1e-8}

# Rule order for checks that stack two quadrature passes (evolve then
# integrate).  The default order keeps single integrals at rounding level but
# leaves ~4e-8 of Gauss truncation in nested ones; these orders push the
# nested error below the compound tolerance with a decade to spare.
REFINED_ORDER = {1: 192, 2: 192, 3: 96}

BATTERY_EPS = Fraction(1, 10)


def refined_order(rs: RootSystem) -> int:
    return REFINED_ORDER[rs.dim]


# ---------------------------------------------------------------------------
# reports


@dataclass
class CheckReport:
    """One margin measurement.

    margin is rhs - lhs.  An identity passes when |margin| <= tolerance, an
    inequality when margin >= -tolerance; report rows and skipped rows never
    fail.
    """

    check_id: str
    group: str
    function: str
    params: Dict[str, str]
    kind: str          # identity | inequality | report
    path: str          # symbolic | quadrature | both
    lhs: float
    rhs: float
    margin: float
    tolerance: float
    status: str = "ok"  # ok | skipped
    note: str = ""

    @property
    def passed(self) -> bool:
        if self.status == "skipped" or self.kind == "report":
            return True
        if self.kind == "identity":
            return abs(self.margin) <= self.tolerance
        return self.margin >= -self.tolerance

    def params_text(self) -> str:
        return ";".join(f"{k}={self.params[k]}" for k in sorted(self.params))

    def sort_key(self):
        return (self.check_id, self.group, self.function, self.params_text(), self.path)

    def to_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "group": self.group,
            "function": self.function,
            "params": dict(sorted(self.params.items())),
            "kind": self.kind,
            "path": self.path,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "tolerance": self.tolerance,
            "status": self.status,
            "passed": self.passed,
            "note": self.note,
        }


def make_report(
    check_id: str,
    rs: RootSystem,
    function: str,
    params: Dict[str, str],
    kind: str,
    path: str,
    lhs: float,
    rhs: float,
    tolerance: float,
    status: str = "ok",
    note: str = "",
) -> CheckReport:
    if kind not in ("identity", "inequality", "report"):
        raise ValueError(f"unknown report kind {kind!r}")
    if path not in ("symbolic", "quadrature", "both"):
        raise ValueError(f"unknown path {path!r}")
    lhs = float(lhs)
    rhs = float(rhs)
    return CheckReport(
        check_id=check_id,
        group=rs.label(),
        function=function,
        params={k: str(v) for k, v in params.items()},
        kind=kind,
        path=path,
        lhs=lhs,
        rhs=rhs,
        margin=rhs - lhs,
        tolerance=float(tolerance),
        status=status,
        note=note,
    )


def skipped_report(
    check_id: str, rs: RootSystem, function: str, params: Dict[str, str], reason: str
) -> CheckReport:
    return make_report(
        check_id, rs, function, params, "report", "symbolic",
        0.0, 0.0, 0.0, status="skipped", note=reason,
    )


def sort_reports(reports: List[CheckReport]) -> List[CheckReport]:
    return sorted(reports, key=CheckReport.sort_key)


CSV_COLUMNS = [
    "check_id", "group", "function", "params", "kind", "path",
    "lhs", "rhs", "margin", "tolerance", "status", "passed", "note",
]


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def reports_to_csv(reports: List[CheckReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in sort_reports(reports):
        writer.writerow([
            r.check_id, r.group, r.function, r.params_text(), r.kind, r.path,
            _fmt(r.lhs), _fmt(r.rhs), _fmt(r.margin), _fmt(r.tolerance),
            r.status, _fmt(r.passed), r.note,
        ])
    return buf.getvalue()


def reports_to_json(reports: List[CheckReport]) -> str:
    return json.dumps([r.to_dict() for r in sort_reports(reports)], indent=2)


# ---------------------------------------------------------------------------
# test functions


@dataclass(frozen=True)
class FunctionSpec:
    """A test function: a bare polynomial or one under a Gaussian envelope.

    kind "polynomial": p(x).
    kind "gaussian_poly": p(x) exp(-beta|x|^2/2).
    kind "positive_gaussian_poly": (eps + p(x)^2) exp(-beta|x|^2/2), which is
    strictly positive since eps > 0.
    """

    kind: str
    poly: Polynomial
    beta: int = 1
    eps: Fraction = BATTERY_EPS

    def __post_init__(self):
        if self.kind not in ("polynomial", "gaussian_poly", "positive_gaussian_poly"):
            raise ValueError(f"unknown function kind {self.kind!r}")
        if self.kind == "positive_gaussian_poly" and self.eps <= 0:
            raise ValueError("positivity needs eps > 0")
        if self.kind != "polynomial" and self.beta <= 0:
            raise ValueError("the envelope needs beta > 0")

    @property
    def dim(self) -> int:
        return self.poly.dim

    def smooth_part(self) -> Polynomial:
        """Polynomial factor in front of the envelope."""
        if self.kind == "positive_gaussian_poly":
            return self.poly * self.poly + Polynomial.const(self.dim, self.eps)
        return self.poly

    def values(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, self.dim)
        vals = self.smooth_part().eval_grid(pts)
        if self.kind == "polynomial":
            return vals
        return vals * np.exp(-0.5 * self.beta * np.sum(pts * pts, axis=1))

    def describe(self) -> str:
        body = poly_str(self.poly)
        if len(body) > 44:
            body = body[:41] + "..."
        if self.kind == "polynomial":
            return body
        if self.kind == "gaussian_poly":
            return f"({body})*gauss({self.beta})"
        return f"({self.eps}+({body})^2)*gauss({self.beta})"


def describe_poly(p: Polynomial) -> str:
    s = poly_str(p)
    return s if len(s) <= 44 else s[:41] + "..."


def _group_seed(rs: RootSystem, seed: int) -> int:
    return seed * 1000003 + zlib.crc32(rs.label().encode("utf-8"))


def _random_poly(rng: random.Random, dim: int, max_degree: int, scaled: bool = True) -> Polynomial:
    """Random sparse polynomial with rational coefficients in [-3, 3].

    With scaled=True the coefficient of a degree-m term is divided by 4^m,
    keeping values O(1) on [-3,3]^d and check magnitudes O(1); absolute
    tolerances then sit far above double rounding even for degree-16
    products.  Unscaled draws exercise the raw coefficient range.
    """
    terms = {}
    for _ in range(rng.randint(4, 7)):
        while True:
            exp = tuple(rng.randint(0, max_degree) for _ in range(dim))
            if sum(exp) <= max_degree:
                break
        num = rng.randint(-12, 12)
        if num == 0:
            num = 1
        c = Fraction(num, rng.randint(1, 4))
        c /= 4 ** max(1, sum(exp)) if scaled else 4
        terms[exp] = terms.get(exp, Fraction(0)) + c
    p = Polynomial(dim, terms)
    if p.degree() < 1:
        p = p + Polynomial.variable(dim, 0)
    return p


def polynomial_battery(
    rs: RootSystem, size: int, seed: int, max_degree: int = 8, scaled: bool = True
) -> List[Polynomial]:
    """Seeded random polynomials; identical (group, seed, size) reproduce."""
    rng = random.Random(_group_seed(rs, seed))
    return [_random_poly(rng, rs.dim, max_degree, scaled) for _ in range(size)]


def positive_battery(
    rs: RootSystem, size: int, seed: int, max_q_degree: int = 4
) -> List[FunctionSpec]:
    rng = random.Random(_group_seed(rs, seed) ^ 0x5F5E1)
    out = []
    for i in range(size):
        q = _random_poly(rng, rs.dim, max_q_degree)
        out.append(FunctionSpec("positive_gaussian_poly", q, beta=1 + i % 2))
    return out


def battery_pairs(battery: Sequence[Polynomial]) -> List[Tuple[Polynomial, Polynomial]]:
    # each member paired with its cyclic successor; fixed and seed-stable
    n = len(battery)
    return [(battery[i], battery[(i + 1) % n]) for i in range(n)]


def default_grid(rs: RootSystem, points_per_axis: int = 9) -> List[tuple]:
    """Rational lattice on [-3,3]^d; exact points so margins can be exact."""
    if points_per_axis < 2 or (points_per_axis - 1) % 2:
        raise ValueError("need an odd-step symmetric lattice")
    half = (points_per_axis - 1) // 2
    axis = [Fraction(3 * i, half) for i in range(-half, half + 1)]
    pts = [()]
    for _ in range(rs.dim):
        pts = [p + (a,) for p in pts for a in axis]
    return pts


def float_grid(points: Sequence[tuple]) -> np.ndarray:
    return np.array([[float(c) for c in p] for p in points], dtype=float)


def sample_points(rs: RootSystem, count: int, seed: int, radius: float = 3.0) -> np.ndarray:
    rng = random.Random(_group_seed(rs, seed) ^ 0xA11CE)
    return np.array(
        [[rng.uniform(-radius, radius) for _ in range(rs.dim)] for _ in range(count)]
    )


def doubled_multiplicities(rs: RootSystem) -> RootSystem:
    return RootSystem(
        kind=rs.kind,
        dim=rs.dim,
        positive_roots=rs.positive_roots,
        multiplicities=tuple(2 * k for k in rs.multiplicities),
    )


def gradient_constant(rs: RootSystem) -> Fraction:
    """The pointwise bound constant 1 + 2*gamma*(number of positive roots)."""
    rs.require_exact("gradient bound constant")
    return Fraction(1) + 2 * rs.gamma * rs.num_positive_roots


def _dunkl_norm_sq(rs: RootSystem, p: Polynomial) -> Polynomial:
    return dunkl_gradient(rs, p).norm_sq_poly()


def _reflection_energy(rs: RootSystem, f: Polynomial, g: Polynomial) -> Fraction:
    """(1/2) sum over roots of k(a) <f - f o s_a, g - g o s_a> in L2(m_k)."""
    total = Fraction(0)
    for i in range(rs.num_positive_roots):
        k = rs.multiplicities[i]
        if k == 0:
            continue
        df = f - reflect_poly(rs, i, f)
        dg = g - reflect_poly(rs, i, g)
        total += Fraction(k, 2) * integrate_mk_exact(rs, df * dg)
    return total


def _has_numeric_measure(rs: RootSystem) -> bool:
    return rs.kind is not GroupKind.SYMMETRIC


# ---------------------------------------------------------------------------
# generator and carre du champ identities


def check_generator_identities(
    rs: RootSystem,
    battery: Sequence[Polynomial],
    rule: Optional[QuadratureRule],
    tol: float = TOL["quadrature"],
) -> List[CheckReport]:
    """Integral identities of the drifted generator against its measure.

    The left sides come from the Gauss rule, the right sides from exact
    rational moments, so each report simultaneously certifies the identity
    and the rule's polynomial exactness.
    """
    out: List[CheckReport] = []
    if not _has_numeric_measure(rs):
        out.append(skipped_report(
            "identity.generator", rs, "battery", {},
            "no numeric measure on this group; algebra-level identities "
            "are exercised by the operator tests instead",
        ))
        return out
    assert rule is not None
    W, nodes = rule.weights, rule.nodes

    def quad(p: Polynomial) -> float:
        return float(np.dot(W, p.eval_grid(nodes)))

    for idx, (f, g) in enumerate(battery_pairs(battery)):
        fname = describe_poly(f)
        params = {"pair": str(idx)}
        lf, lg = ou_generator(rs, f), ou_generator(rs, g)

        out.append(make_report(
            "identity.generator.mean_zero", rs, fname, params, "identity", "both",
            quad(lf), float(integrate_mk_exact(rs, lf)), tol,
            note="rule integral of the generator image vs exact moments (both are 0)",
        ))

        grad_pair = Polynomial.zero(rs.dim)
        tf, tg = dunkl_gradient(rs, f), dunkl_gradient(rs, g)
        for a, b in zip(tf.components, tg.components):
            grad_pair = grad_pair + a * b
        rhs = -integrate_mk_exact(rs, grad_pair) + _reflection_energy(rs, f, g)
        out.append(make_report(
            "identity.generator.three_term", rs, fname, params, "identity", "both",
            quad(lf * g), float(rhs), tol,
            note="integration by parts with the reflection energy term",
        ))

        out.append(make_report(
            "identity.generator.symmetry", rs, fname, params, "identity", "both",
            quad(lf * g), float(integrate_mk_exact(rs, f * lg)), tol,
        ))

        for i in range(rs.num_positive_roots):
            if rs.multiplicities[i] == 0:
                continue
            rparams = dict(params, root=str(i))
            df = f - reflect_poly(rs, i, f)
            dg = g - reflect_poly(rs, i, g)
            out.append(make_report(
                "identity.reflection.pairing", rs, fname, rparams, "identity", "both",
                quad(df * g), float(Fraction(1, 2) * integrate_mk_exact(rs, df * dg)),
                tol,
            ))
            sf = reflect_poly(rs, i, f)
            out.append(make_report(
                "identity.reflection.half_norm", rs, fname, rparams, "identity", "both",
                quad((sf - f) * sf), float(Fraction(1, 2) * integrate_mk_exact(rs, df * df)),
                tol,
            ))
    return out


def check_gamma_identity(
    rs: RootSystem,
    battery: Sequence[Polynomial],
    rule: Optional[QuadratureRule],
    tol: float = TOL["quadrature"],
) -> List[CheckReport]:
    """Energy decomposition of the carre du champ and its positivity slack."""
    out: List[CheckReport] = []
    if not _has_numeric_measure(rs):
        out.append(skipped_report(
            "identity.gamma", rs, "battery", {}, "no numeric measure on this group"))
        return out
    assert rule is not None
    for idx, f in enumerate(battery):
        fname = describe_poly(f)
        params = {"member": str(idx)}
        gam = carre_du_champ(rs, f)
        lhs = float(np.dot(rule.weights, gam.eval_grid(rule.nodes)))
        tsq = integrate_mk_exact(rs, _dunkl_norm_sq(rs, f))
        refl = _reflection_energy(rs, f, f)
        out.append(make_report(
            "identity.gamma.integral", rs, fname, params, "identity", "both",
            lhs, float(tsq - refl), tol,
            note="rule integral of Gamma vs exact derivative-energy minus reflection energy",
        ))
        out.append(make_report(
            "inequality.gamma.reflection_lower", rs, fname, params,
            "inequality", "symbolic", float(refl), float(tsq), TOL["symbolic"],
            note="derivative energy dominates the reflection energy",
        ))
    return out


# ---------------------------------------------------------------------------
# convexity of the generator


_PHI_SPECS: Dict[str, Tuple[List[Fraction], List[Fraction]]] = {
    # coefficient lists of Phi and Phi' in ascending powers
    "square": ([Fraction(0), Fraction(0), Fraction(1)], [Fraction(0), Fraction(2)]),
    "fourth": (
        [Fraction(0)] * 4 + [Fraction(1)],
        [Fraction(0)] * 3 + [Fraction(4)],
    ),
    "exp_truncated": (
        [Fraction(1, math.factorial(j)) for j in range(7)],
        [Fraction(1, math.factorial(j)) for j in range(6)],
    ),
}


def _compose_scalar(coeffs: Sequence[Fraction], f: Polynomial) -> Polynomial:
    # Horner in f keeps the term count down
    out = Polynomial.const(f.dim, coeffs[-1])
    for c in reversed(coeffs[:-1]):
        out = out * f + Polynomial.const(f.dim, c)
    return out


def check_convexity_theorem(
    rs: RootSystem,
    phi: str,
    f: Polynomial,
    grid: Sequence[tuple],
    tol: float = TOL["symbolic"],
) -> List[CheckReport]:
    """Pointwise convexity of the generator through smooth convex maps.

    The composite and both generator images are exact polynomials, and the
    grid is rational, so the margin at each point is an exact rational
    evaluated before conversion to float.
    """
    if phi not in _PHI_SPECS:
        raise ValueError(f"unsupported convex map {phi!r}; use one of {sorted(_PHI_SPECS)}")
    coeffs, dcoeffs = _PHI_SPECS[phi]
    composite = _compose_scalar(coeffs, f)
    slope = _compose_scalar(dcoeffs, f)
    lhs_poly = slope * ou_generator(rs, f)
    rhs_poly = ou_generator(rs, composite)
    worst = None
    for x in grid:
        m = rhs_poly.eval(x) - lhs_poly.eval(x)
        if worst is None or m < worst[0]:
            worst = (m, x)
    assert worst is not None
    margin, x = worst
    return [make_report(
        "inequality.convexity.pointwise", rs, describe_poly(f),
        {"phi": phi, "point": "(" + ",".join(str(c) for c in x) + ")"},
        "inequality", "symbolic",
        float(lhs_poly.eval(x)), float(rhs_poly.eval(x)), tol,
        note=f"exact minimum margin {float(margin)!r} over {len(grid)} rational points",
    )]


def check_convexity_corollary(
    rs: RootSystem,
    fs: FunctionSpec,
    powers: Sequence[int] = (2, 3),
    tol: float = TOL["symbolic"],
) -> List[CheckReport]:
    """Nonpositivity of the power-weighted generator integral.

    Needs a pointwise nonnegative polynomial; FunctionSpec's positive kind
    provides eps + q^2 and the envelope is ignored (the measure here is the
    Gaussian-type probability measure).
    """
    if fs.kind != "positive_gaussian_poly":
        raise ValueError("the corollary needs a pointwise positive polynomial")
    out = []
    if not _has_numeric_measure(rs):
        return [skipped_report(
            "inequality.convexity.integral_power", rs, fs.describe(), {},
            "no numeric measure on this group")]
    p = fs.smooth_part()
    lp = ou_generator(rs, p)
    for power in sorted(powers):
        intg = p ** (power - 1) * lp
        val = integrate_mk_exact(rs, intg)
        out.append(make_report(
            "inequality.convexity.integral_power", rs, fs.describe(),
            {"p": str(power)}, "inequality", "symbolic",
            float(val), 0.0, tol,
            note="exact rational integral; nonpositive by convexity",
        ))
    return out


# ---------------------------------------------------------------------------
# Poincare sandwich, Taylor series, psi convexity


def check_poincare_sandwich(
    rs: RootSystem,
    f: Polynomial,
    t: float,
    basis: EigenBasis,
    rule: Optional[QuadratureRule] = None,
    tol: float = TOL["quadrature"],
    cross_tol: float = TOL["compound"],
) -> List[CheckReport]:
    """Two-sided variance-decay bounds at one time.

    The spectral gap, the upper bound (energy at time zero) and the lower
    bound (energy at time t, the form the proof actually controls) are all
    exact eigen sums.  The printed vector form of the lower bound is
    reported without assertion; see the ledger for why.
    """
    weights = graded_weights(basis, f)
    fname = describe_poly(f)
    params = {"t": repr(float(t))}
    gap = sum(float(w) * (1.0 - math.exp(-2 * n * t)) for n, w in weights.items() if n)
    upper = 2.0 * t * sum(n * float(w) for n, w in weights.items())
    lower = 2.0 * t * sum(n * float(w) * math.exp(-2 * n * t) for n, w in weights.items())
    out = [
        make_report(
            "poincare.sandwich.lower", rs, fname, params, "inequality", "symbolic",
            lower, gap, tol,
            note="decayed energy bound below the variance gap",
        ),
        make_report(
            "poincare.sandwich.upper", rs, fname, params, "inequality", "symbolic",
            gap, upper, tol,
            note="variance gap below the time-zero energy bound",
        ),
    ]
    if rule is not None and _has_numeric_measure(rs):
        ev = OuEvaluator(rs, rule, f)
        vals = ev.on_product_grid(t, [ax.nodes for ax in rule.axes]).reshape(-1)
        second = float(np.dot(rule.weights, vals * vals))
        gap_quad = float(integrate_mk_exact(rs, f * f)) - second
        out.append(make_report(
            "poincare.gap.cross", rs, fname, dict(params, order=str(rule.axes[0].order)),
            "identity", "both", gap_quad, gap, cross_tol,
            note="variance gap via kernel quadrature vs eigen sum",
        ))
    printed = 0.0
    for j in range(rs.dim):
        tjf = dunkl_gradient(rs, f).components[j]
        if not tjf.is_zero():
            printed += gamma_integral_spectral(basis, tjf, t)
    printed *= 2.0 * t
    out.append(make_report(
        "poincare.printed_lower.report", rs, fname, params, "report", "symbolic",
        printed, gap, 0.0,
        note="componentwise-sum reading of the vector lower bound; recorded, not asserted",
    ))
    return out


def taylor_table(
    basis: EigenBasis, f: Polynomial, t, n_max: int = 30, dps: int = 60
) -> List[Tuple[int, float]]:
    """|S_N - psi(t)| for N = 0..n_max, at high working precision.

    S_N are exact rationals (t is converted to an exact fraction first);
    psi(t) is summed in mpmath so sub-1e-16 remainders remain visible.
    """
    tq = t if isinstance(t, Fraction) else Fraction(str(t))
    moments = psi_moments(basis, f, n_max)
    weights = graded_weights(basis, f)
    rows = []
    with locked_workdps(dps):
        psi = mp.fsum(
            mp.e ** (-2 * n * mp.mpf(tq.numerator) / tq.denominator) * mp.mpf(w.numerator) / w.denominator
            for n, w in sorted(weights.items())
        )
        partial = Fraction(0)
        fact = Fraction(1)
        for n in range(n_max + 1):
            if n:
                fact *= n
            partial += (2 * tq) ** n / fact * moments[n]
            err = abs(mp.mpf(partial.numerator) / partial.denominator - psi)
            rows.append((n, float(err)))
    return rows


def taylor_expansion(
    rs: RootSystem,
    f: Polynomial,
    t,
    n_max: int,
    basis: EigenBasis,
    bound: float = 1e-8,
    monotone_from: int = 12,
) -> List[CheckReport]:
    """Partial-sum error of the second-moment series plus tail monotonicity.

    Errors below 1e-30 count as converged; beyond that point the sequence
    sits at the working-precision floor and ordering is meaningless.
    """
    rows = taylor_table(basis, f, t, n_max)
    fname = describe_poly(f)
    params = {"t": str(t), "N": str(n_max)}
    final_err = rows[-1][1]
    out = [make_report(
        "taylor.partial_sum", rs, fname, params, "inequality", "symbolic",
        final_err, bound, 0.0,
        note="exact rational partial sums against the eigen closed form",
    )]
    worst_rise = 0.0
    for (n0, e0), (_, e1) in zip(rows[monotone_from:-1], rows[monotone_from + 1:]):
        if e0 > 1e-30 and e1 - e0 > worst_rise:
            worst_rise = e1 - e0
    out.append(make_report(
        "taylor.monotone", rs, fname, params, "inequality", "symbolic",
        worst_rise, 0.0, 1e-20,
        note=f"largest error increase past N={monotone_from}, above the precision floor",
    ))
    return out


def check_psi_convexity(
    rs: RootSystem,
    f: Polynomial,
    basis: EigenBasis,
    ts: Sequence[float],
    tol: float = 1e-12,
) -> List[CheckReport]:
    """Convexity of the evolved second moment in t.

    The closed form is a positive combination of decaying exponentials, so
    its exact second derivative is positive; the report carries a centered
    second difference computed in high precision to keep the h^-2
    amplification away from double rounding.
    """
    weights = sorted(graded_weights(basis, f).items())

    def psi(tv) -> mp.mpf:
        return mp.fsum(
            mp.e ** (-2 * n * tv) * mp.mpf(w.numerator) / w.denominator
            for n, w in weights
        )

    worst = None
    with locked_workdps(40):
        h = mp.mpf("1e-3")
        for t in ts:
            tv = mp.mpf(repr(float(t)))
            fd2 = (psi(tv - h) - 2 * psi(tv) + psi(tv + h)) / h**2
            if worst is None or fd2 < worst[0]:
                worst = (fd2, t)
    assert worst is not None
    fd2, t_at = worst
    exact_dd = min(
        sum(4 * n * n * float(w) * math.exp(-2 * n * float(t)) for n, w in weights)
        for t in ts
    )
    return [make_report(
        "poincare.psi_convexity", rs, describe_poly(f),
        {"t": repr(float(t_at))}, "inequality", "symbolic",
        0.0, float(fd2), tol,
        note=f"exact second derivative min {exact_dd!r} over the t grid",
    )]


# ---------------------------------------------------------------------------
# gradient bounds


def check_gradient_bound(
    rs: RootSystem,
    f: Polynomial,
    grid: Sequence[tuple],
    basis: Optional[EigenBasis] = None,
    ts: Sequence[float] = (),
    tol: float = TOL["symbolic"],
) -> List[CheckReport]:
    """Pointwise derivative-vector bound, integrated sharpening, decay form.

    Three reports: the pointwise bound with constant 1 + 2*gamma*|roots|
    (exact at rational grid points), the integrated lower bound with the
    improved constant (needs gamma > 0), and the evolved pointwise bound at
    sampled times through the eigen path.
    """
    rs.require_exact("gradient bound checks")
    out: List[CheckReport] = []
    fname = describe_poly(f)
    C = gradient_constant(rs)
    gam_poly = carre_du_champ(rs, f)
    tsq_poly = _dunkl_norm_sq(rs, f)
    margin_poly = Fraction(C) * gam_poly - tsq_poly
    worst = None
    for x in grid:
        m = margin_poly.eval(x)
        if worst is None or m < worst[0]:
            worst = (m, x)
    assert worst is not None
    _, x = worst
    out.append(make_report(
        "gradient.pointwise", rs, fname,
        {"point": "(" + ",".join(str(c) for c in x) + ")", "constant": str(C)},
        "inequality", "symbolic",
        float(tsq_poly.eval(x)), float(Fraction(C) * gam_poly.eval(x)), tol,
        note=f"exact minimum margin over {len(grid)} rational points",
    ))

    if _has_numeric_measure(rs):
        if rs.gamma > 0:
            improved = max(Fraction(1, 2),
                           C / (4 * rs.gamma * rs.num_positive_roots))
            refl = 2 * _reflection_energy(rs, f, f)  # sum k(a) ||f - f o s_a||^2
            energy = integrate_mk_exact(rs, tsq_poly)
            out.append(make_report(
                "gradient.integrated", rs, fname, {"constant": str(improved)},
                "inequality", "symbolic",
                float(improved * refl), float(energy), tol,
                note="improved reflection-energy lower bound on the derivative energy",
            ))
        else:
            out.append(skipped_report(
                "gradient.integrated", rs, fname, {},
                "skipped: hypothesis gamma > 0 not met"))
    else:
        out.append(skipped_report(
            "gradient.integrated", rs, fname, {}, "no numeric measure on this group"))

    if ts and basis is not None:
        pts = float_grid(grid)
        parts = sorted(graded_parts(basis, f).items())
        tjf = [dunkl_gradient(rs, f).components[j] for j in range(rs.dim)]
        for t in ts:
            tf = float(t)
            evolved_sq = np.zeros(pts.shape[0])
            for j in range(rs.dim):
                if tjf[j].is_zero():
                    continue
                evolved_sq += ou_spectral(basis, tjf[j], tf).eval_grid(pts) ** 2
            gam_evolved = np.zeros(pts.shape[0])
            for a, (n, pn) in enumerate(parts):
                for m, pm in parts[a:]:
                    pair = carre_du_champ_pair_gradient_form(rs, pn, pm)
                    scale = math.exp(-(n + m) * tf) * (1.0 if m == n else 2.0)
                    gam_evolved += scale * pair.eval_grid(pts)
            margins = float(C) * gam_evolved - math.exp(-2 * tf) * evolved_sq
            i = int(np.argmin(margins))
            out.append(make_report(
                "gradient.corollary", rs, fname,
                {"t": repr(tf), "point": str(i)},
                "inequality", "symbolic",
                float(math.exp(-2 * tf) * evolved_sq[i]),
                float(float(C) * gam_evolved[i]), tol,
                note="evolved pointwise bound along the eigen path",
            ))
    return out


def gradient_witness(rs: RootSystem) -> List[CheckReport]:
    """First coordinate as the extremal function of the pointwise bound.

    In one dimension the bound is attained: both sides are the same constant
    polynomial, checked exactly.  In higher dimension the ratio is reported.
    """
    rs.require_exact("gradient witness")
    f = Polynomial.variable(rs.dim, 0)
    C = gradient_constant(rs)
    tsq = _dunkl_norm_sq(rs, f)
    gam = carre_du_champ(rs, f)
    scaled = Fraction(C) * gam
    if rs.dim == 1:
        equal = scaled == tsq
        return [make_report(
            "gradient.witness", rs, "x0", {"constant": str(C)},
            "identity", "symbolic",
            float(tsq.constant_term()), float(scaled.constant_term()),
            0.0,
            note="polynomial identity holds" if equal else "polynomial identity FAILS",
        )]
    # away from mirrors both sides are constants; report their ratio
    lhs = tsq.constant_term()
    rhs = scaled.constant_term()
    return [make_report(
        "gradient.witness", rs, "x0", {"constant": str(C)}, "report", "symbolic",
        float(lhs), float(rhs), 0.0,
        note="first-coordinate ratio below the constant in dimension > 1",
    )]


def sharpness_ratio(
    rs: RootSystem, battery: Sequence[Polynomial], grid: Sequence[tuple]
) -> Tuple[float, float, List[CheckReport]]:
    """Supremum of derivative-to-Gamma ratio over the battery and the grid.

    Returns (battery supremum, witness ratio, reports).  The witness is the
    first coordinate; in one dimension its ratio equals the constant exactly.
    """
    rs.require_exact("sharpness sweep")
    C = gradient_constant(rs)
    pts = float_grid(grid)
    sup = 0.0
    for f in battery:
        tsq = _dunkl_norm_sq(rs, f).eval_grid(pts)
        gam = carre_du_champ(rs, f).eval_grid(pts)
        mask = gam > 1e-12
        if mask.any():
            sup = max(sup, float(np.max(tsq[mask] / gam[mask])))
    fw = Polynomial.variable(rs.dim, 0)
    wt = _dunkl_norm_sq(rs, fw).constant_term()
    wg = carre_du_champ(rs, fw).constant_term()
    witness = float(wt / wg)
    reports = [make_report(
        "gradient.sweep.ratio", rs, "battery+x0",
        {"witness": repr(witness), "battery_sup": repr(sup)},
        "inequality", "symbolic", max(sup, witness), float(C), TOL["symbolic"],
        note="empirical sharpness sweep against the bound constant",
    )]
    return sup, witness, reports


def lower_bound_failure(
    rs: RootSystem, grid: Sequence[tuple]
) -> List[CheckReport]:
    """No uniform reverse bound in one dimension with a genuine reflection.

    The quadratic-plus-linear witness has a derivative zero where Gamma
    stays positive, so the ratio's infimum collapses.  Rejects k = 0, where
    the ratio is identically one and no failure exists.
    """
    if rs.dim != 1:
        raise ValueError("the failure witness lives in dimension 1")
    rs.require_exact("lower bound failure")
    k = rs.multiplicities[0]
    if k == 0:
        raise ValueError("k = 0 behaves classically; no lower-bound failure")
    x = Polynomial.variable(1, 0)
    f = x * x + x
    tf = dunkl_gradient(rs, f).components[0]
    gam = carre_du_champ(rs, f)
    x_star = -(1 + 2 * k) / Fraction(2)
    t_at = tf.eval((x_star,))
    g_at = gam.eval((x_star,))
    expected = 4 * k * k + 2 * k
    out = [
        make_report(
            "gradient.failure.site_zero", rs, "x0^2+x0",
            {"x_star": str(x_star)}, "identity", "symbolic",
            float(t_at), 0.0, 0.0,
            note="derivative vanishes exactly at the interior site",
        ),
        make_report(
            "gradient.failure.site_gamma", rs, "x0^2+x0",
            {"x_star": str(x_star)}, "identity", "symbolic",
            float(g_at), float(expected), 0.0,
            note="Gamma at the site equals 4k^2+2k exactly",
        ),
    ]
    points = list(grid) + [(x_star,)]
    inf_ratio = None
    for p in points:
        g = gam.eval(p)
        if g == 0:
            continue
        r = float(tf.eval(p)) ** 2 / float(g)
        if inf_ratio is None or r < inf_ratio:
            inf_ratio = r
    assert inf_ratio is not None
    out.append(make_report(
        "gradient.failure.infimum", rs, "x0^2+x0",
        {"points": str(len(points))}, "inequality", "symbolic",
        inf_ratio, 1e-6, 0.0,
        note="ratio infimum over the grid plus the exact site",
    ))
    return out


# ---------------------------------------------------------------------------
# reverse Poincare


def check_reverse_poincare(
    rs: RootSystem,
    f: Polynomial,
    t: float,
    grid: Sequence[tuple],
    rule: Optional[QuadratureRule] = None,
    basis: Optional[EigenBasis] = None,
    tol: float = TOL["compound"],
) -> List[CheckReport]:
    """Pointwise variance of the evolved function against the decayed energy.

    All three ingredients (the evolved square, the squared evolution, the
    evolved derivative components) are eigen-path evaluations; the variance
    side is cross-checked by kernel quadrature at a few points when a rule
    is supplied.
    """
    if basis is None:
        basis = build_basis(rs, 2 * f.degree())
    tf_ = float(t)
    pts = float_grid(grid)
    fname = describe_poly(f)
    f2 = f * f
    var = ou_spectral(basis, f2, tf_).eval_grid(pts) - ou_spectral(basis, f, tf_).eval_grid(pts) ** 2
    C = float(gradient_constant(rs))
    energy = np.zeros(pts.shape[0])
    for j in range(rs.dim):
        tj = dunkl_gradient(rs, f).components[j]
        if not tj.is_zero():
            energy += ou_spectral(basis, tj, tf_).eval_grid(pts) ** 2
    rhs_vals = (1.0 - math.exp(-2 * tf_)) / C * energy
    margins = var - rhs_vals
    i = int(np.argmin(margins))
    out = [make_report(
        "reverse.pointwise", rs, fname,
        {"t": repr(tf_), "point": str(i)}, "inequality", "symbolic",
        float(rhs_vals[i]), float(var[i]), tol,
        note=f"worst of {pts.shape[0]} grid points",
    )]
    if rule is not None and _has_numeric_measure(rs):
        ev_f = OuEvaluator(rs, rule, f)
        ev_f2 = OuEvaluator(rs, rule, f2)
        worst = 0.0
        for p in pts[:: max(1, pts.shape[0] // 5)]:
            vq = ev_f2.at(tf_, p) - ev_f.at(tf_, p) ** 2
            vs = float(ou_spectral(basis, f2, tf_).eval(p) - ou_spectral(basis, f, tf_).eval(p) ** 2)
            worst = max(worst, abs(vq - vs))
        out.append(make_report(
            "reverse.cross", rs, fname,
            {"t": repr(tf_), "order": str(rule.axes[0].order)}, "identity", "both",
            worst, 0.0, tol,
            note="variance side: kernel quadrature vs eigen path at sampled points",
        ))
    return out


# ---------------------------------------------------------------------------
# semigroup-side checks (kernel quadrature)


def check_q_normalization(
    rs: RootSystem,
    taus: Sequence[float],
    points: Sequence[Sequence[float]],
    order: Optional[int] = None,
    tol: float = 1e-10,
) -> List[CheckReport]:
    """Unit mass of the transition density under the invariant measure.

    The kernel factorizes over axes for product groups, so the integral is a
    product of one-dimensional node sums.  No tensor grid is ever formed,
    which is what lets every dimension afford the same high axis order; the
    near-delta small-time kernels need it.
    """
    rs.require_numeric_measure("transition density normalization")
    order = order or max(192, refined_order(rs))
    ks = _exact_axis_multiplicities(rs) if rs.exact else _float_axis_ks(rs)
    axes = [rule_1d(k, 1, order) for k in ks]
    worst = None
    for tau in taus:
        tau = float(tau)
        for x in points:
            total = 1.0
            for a, ax in enumerate(axes):
                lq = _axis_log_q(ks[a], tau, float(x[a]), ax.nodes)
                total *= float(np.dot(ax.prob_weights, np.exp(lq)))
            dev = abs(total - 1.0)
            if worst is None or dev > worst[0]:
                worst = (dev, tau, x, total)
    assert worst is not None
    _, tau, x, total = worst
    return [make_report(
        "semigroup.normalization", rs, "density",
        {
            "tau": repr(float(tau)),
            "point": "(" + ",".join(repr(float(c)) for c in x) + ")",
            "order": str(order),
        },
        "identity", "quadrature", total, 1.0, tol,
        note=f"worst over {len(taus)} times x {len(points)} points",
    )]


def check_q_symmetry(
    rs: RootSystem, seed: int, count: int = 24, tol: float = 1e-12
) -> List[CheckReport]:
    """Symmetry of the transition density in its two space arguments."""
    rng = random.Random(_group_seed(rs, seed) ^ 0x51)
    worst = 0.0
    for _ in range(count):
        t = rng.uniform(0.05, 0.95)
        x = [rng.uniform(-3, 3) for _ in range(rs.dim)]
        y = [rng.uniform(-3, 3) for _ in range(rs.dim)]
        a = kernel_Q(rs, t, x, y)
        b = kernel_Q(rs, t, y, x)
        worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    return [make_report(
        "semigroup.q_symmetry", rs, "density", {"triples": str(count)},
        "identity", "symbolic", worst, 0.0, tol,
        note="relative asymmetry over random argument swaps",
    )]


def check_kernel_bound(
    rs: RootSystem,
    seed: int,
    ts: Sequence[float] = (0.1, 0.3, 0.5, 0.7, 0.9),
    n_points: int = 20,
    tol: float = TOL["symbolic"],
) -> List[CheckReport]:
    """Gaussian envelope above the positive kernel, compared in log scale."""
    rng = random.Random(_group_seed(rs, seed) ^ 0xB0)
    xs = [[rng.uniform(-3, 3) for _ in range(rs.dim)] for _ in range(n_points)]
    ys = [[rng.uniform(-3, 3) for _ in range(rs.dim)] for _ in range(n_points)]
    worst = None
    for t in ts:
        for x in xs:
            for y in ys:
                kv = kernel_K(rs, t, x, y)
                bv = kernel_upper_estimate(rs, t, x, y)
                m = math.log(bv) - math.log(kv)
                if worst is None or m < worst[0]:
                    worst = (m, t, kv, bv)
    assert worst is not None
    m, t, kv, bv = worst
    return [make_report(
        "semigroup.kernel_bound", rs, "kernel",
        {"t": repr(float(t)), "grid": f"{n_points}x{n_points}x{len(ts)}"},
        "inequality", "symbolic", math.log(kv), math.log(bv), tol,
        note="log-scale margin of the Gaussian envelope at the tightest grid point",
    )]


def check_jensen(
    rs: RootSystem,
    f: Polynomial,
    ts: Sequence[float],
    points: np.ndarray,
    rule: QuadratureRule,
    powers: Sequence[int] = (1, 2, 4),
    tol: float = TOL["symbolic"],
) -> List[CheckReport]:
    """Power-mean inequality for the kernel average, same rule both sides.

    Both sides discretize with identical rows, so the only way the margin
    can dip below zero is a genuine convexity violation, not quadrature
    mismatch.
    """
    cache: dict = {}
    ev_f = OuEvaluator(rs, rule, f, row_cache=cache)
    out = []
    for p in powers:
        ev_p = OuEvaluator(
            rs, rule, lambda nodes, p=p: np.abs(f.eval_grid(nodes)) ** p,
            row_cache=cache,
        )
        worst = None
        for t in ts:
            for x in points:
                lhs = abs(ev_f.at(t, x)) ** p
                rhs = ev_p.at(t, x)
                m = rhs - lhs
                if worst is None or m < worst[0]:
                    worst = (m, t, lhs, rhs)
        assert worst is not None
        _, t, lhs, rhs = worst
        out.append(make_report(
            "semigroup.jensen", rs, describe_poly(f),
            {"p": str(p), "t": repr(float(t))},
            "inequality", "quadrature", lhs, rhs, tol,
            note="kernel average of the power vs power of the average",
        ))
    return out


def check_invariance(
    rs: RootSystem,
    battery: Sequence[Polynomial],
    ts: Sequence[float],
    rule: QuadratureRule,
    tol: float = TOL["quadrature"],
) -> List[CheckReport]:
    """Stationarity of the measure: evolving then integrating changes nothing."""
    out = []
    cache: dict = {}
    for idx, f in enumerate(battery):
        ev = OuEvaluator(rs, rule, f, row_cache=cache)
        exact = float(integrate_mk_exact(rs, f))
        for t in ts:
            out.append(make_report(
                "semigroup.invariance", rs, describe_poly(f),
                {"member": str(idx), "t": repr(float(t)), "order": str(rule.axes[0].order)},
                "identity", "both", ev.integral(float(t)), exact, tol,
                note="nested kernel integral vs exact moments",
            ))
    return out


def check_self_adjoint(
    rs: RootSystem,
    battery: Sequence[Polynomial],
    ts: Sequence[float],
    rule: QuadratureRule,
    tol: float = TOL["quadrature"],
) -> List[CheckReport]:
    out = []
    cache: dict = {}
    for idx, (f, g) in enumerate(battery_pairs(battery)):
        ev_f = OuEvaluator(rs, rule, f, row_cache=cache)
        ev_g = OuEvaluator(rs, rule, g, row_cache=cache)
        for t in ts:
            out.append(make_report(
                "semigroup.selfadjoint", rs, describe_poly(f),
                {"pair": str(idx), "t": repr(float(t))},
                "identity", "quadrature",
                ev_f.pair(g, float(t)), ev_g.pair(f, float(t)), tol,
                note="pairing the evolved function against the other member, both orders",
            ))
    return out


def check_commutation(
    rs: RootSystem,
    f: Polynomial,
    ts: Sequence[float],
    points: np.ndarray,
    basis: EigenBasis,
    rule: Optional[QuadratureRule] = None,
    quad_tol: float = TOL["compound"],
) -> List[CheckReport]:
    """Derivative-semigroup intertwining, exact in the algebra and on the rule.

    Eigen side: differentiating each graded part drops it one level, so the
    parts must match coefficientwise; no floats involved.  Quadrature side:
    the analytic derivative of the node sum against the decayed evolution of
    the derivative.
    """
    fname = describe_poly(f)
    out = []
    worst_coeff = Fraction(0)
    for j in range(rs.dim):
        tjf = dunkl_gradient(rs, f).components[j]
        shifted = graded_parts(basis, tjf) if not tjf.is_zero() else {}
        for n, pn in graded_parts(basis, f).items():
            dpn = dunkl_gradient(rs, pn).components[j]
            want = shifted.get(n - 1, Polynomial.zero(rs.dim))
            diff = dpn - want
            for c in diff.terms.values():
                worst_coeff = max(worst_coeff, abs(c))
    out.append(make_report(
        "semigroup.commutation.spectral", rs, fname, {}, "identity", "symbolic",
        float(worst_coeff), 0.0, 0.0,
        note="graded parts of the derivative match the shifted expansion exactly",
    ))
    if rule is not None and _has_numeric_measure(rs):
        cache: dict = {}
        ev = OuEvaluator(rs, rule, f, row_cache=cache)
        worst = 0.0
        for j in range(rs.dim):
            tjf = dunkl_gradient(rs, f).components[j]
            if tjf.is_zero():
                continue
            ev_j = OuEvaluator(rs, rule, tjf, row_cache=cache)
            for t in ts:
                decay = math.exp(-float(t))
                for x in points:
                    a = ev.dunkl_at(float(t), x, j)
                    b = decay * ev_j.at(float(t), x)
                    worst = max(worst, abs(a - b))
        out.append(make_report(
            "semigroup.commutation.quadrature", rs, fname,
            {"order": str(rule.axes[0].order)}, "identity", "quadrature",
            worst, 0.0, quad_tol,
            note="analytic node-sum derivative vs decayed evolution of the derivative",
        ))
    return out


# ---------------------------------------------------------------------------
# entropy


def _entropy_core(
    rs: RootSystem, smooth: Polynomial, beta_env: int, order: int
) -> Tuple[float, float, float]:
    """(entropy, mass, drift) for smooth * exp(-beta|x|^2/2), positive smooth.

    The logarithm is not polynomial, so the value is recomputed at twice the
    order; drift is the difference and the doubled-order value is returned.
    The log factor has branch points off the real axis wherever the smooth
    part dips toward zero, so the drift decays only algebraically; it is
    surfaced in a report rather than asserted.
    """

    def value(n: int) -> Tuple[float, float]:
        rule = gauss_rule(rs, order=n, beta=beta_env, normalized=False)
        vals = smooth.eval_grid(rule.nodes)
        if np.any(vals <= 0):
            raise ValueError("entropy needs a strictly positive integrand")
        mass = float(np.dot(rule.weights, vals))
        r2 = np.sum(rule.nodes * rule.nodes, axis=1)
        flogf = vals * (np.log(vals) - 0.5 * beta_env * r2)
        return float(np.dot(rule.weights, flogf)), mass

    i1, m1 = value(order)
    i2, m2 = value(2 * order)
    ent1 = i1 - m1 * math.log(m1)
    ent2 = i2 - m2 * math.log(m2)
    return ent2, m2, abs(ent2 - ent1)


def _entropy_orders(rs: RootSystem) -> int:
    # base order; the doubled partner is the refined order already cached
    return refined_order(rs) // 2


def entropy(
    rs: RootSystem, fs: FunctionSpec, order: Optional[int] = None
) -> Tuple[float, List[CheckReport]]:
    """Entropy of a positive enveloped function against the weight measure."""
    if fs.kind != "positive_gaussian_poly":
        raise ValueError("entropy needs the strictly positive function kind")
    rs.require_numeric_measure("entropy")
    order = order or _entropy_orders(rs)
    val, _, drift = _entropy_core(rs, fs.smooth_part(), fs.beta, order)
    report = make_report(
        "entropy.value.convergence", rs, fs.describe(),
        {"order": str(order), "beta": str(fs.beta)},
        "report", "quadrature", drift, 0.0, TOL["compound"],
        note="order-doubling drift of the entropy value; reference level 1e-08",
    )
    return val, [report]


def _envelope_gradient_parts(rs: RootSystem, p: Polynomial, beta: int) -> List[Polynomial]:
    # smooth factor of d_j applied to p * exp(-beta|x|^2/2)
    return [
        p.partial(j) - beta * Polynomial.variable(rs.dim, j) * p
        for j in range(rs.dim)
    ]


def gamma_envelope_poly(rs: RootSystem, p: Polynomial, beta: int) -> Polynomial:
    """Gamma of p*exp(-beta|x|^2/2) divided by exp(-beta|x|^2).

    The envelope is reflection invariant, so the difference quotients keep
    the same envelope and the whole expression is (polynomial) times the
    squared envelope.
    """
    out = Polynomial.zero(rs.dim)
    for g in _envelope_gradient_parts(rs, p, beta):
        out = out + g * g
    for i in range(rs.num_positive_roots):
        k = rs.multiplicities[i]
        if k == 0:
            continue
        h = divided_difference(rs, i, p)
        out = out + Fraction(k * rs.root_norm_sq(i), 2) * (h * h)
    return out


def dunkl_energy_envelope_poly(rs: RootSystem, p: Polynomial, beta: int) -> Polynomial:
    """Squared derivative vector of the enveloped function, envelope removed."""
    grad = dunkl_gradient(rs, p)
    out = Polynomial.zero(rs.dim)
    for j in range(rs.dim):
        g = grad.components[j] - beta * Polynomial.variable(rs.dim, j) * p
        out = out + g * g
    return out


def check_entropy_bounds(
    rs: RootSystem,
    battery: Sequence[FunctionSpec],
    deltas: Sequence[Fraction] = (Fraction(1, 2), Fraction(1), Fraction(2)),
    order: Optional[int] = None,
    tol: float = TOL["compound"],
) -> List[CheckReport]:
    """Norm bounds on the entropy and the empirical log-Sobolev table.

    For each battery member and each delta: entropy below the delta-scaled
    (delta+1)-norm, and the squared variant below the scaled squared
    (2*delta+2)-norm.  The log-Sobolev rows report the entropy-to-energy
    ratios without asserting any constant; the delta that matches the
    Sobolev exponent is recorded when the dimension condition allows it.
    """
    out: List[CheckReport] = []
    if not _has_numeric_measure(rs):
        return [skipped_report(
            "entropy.bounds", rs, "battery", {}, "no numeric measure on this group")]
    order = order or _entropy_orders(rs)
    for idx, fs in enumerate(battery):
        if fs.kind != "positive_gaussian_poly":
            raise ValueError("entropy bounds need strictly positive members")
        p = fs.smooth_part()
        beta = fs.beta
        fname = fs.describe()
        ent_f, _, drift_f = _entropy_core(rs, p, beta, order)
        ent_f2, _, drift_f2 = _entropy_core(rs, p * p, 2 * beta, order)
        out.append(make_report(
            "entropy.value.convergence", rs, fname,
            {"member": str(idx), "beta": str(beta)},
            "report", "quadrature", max(drift_f, drift_f2), 0.0, tol,
            note="order-doubling drift, base and squared variants; reference level 1e-08",
        ))
        for delta in deltas:
            delta = Fraction(delta)
            scale = float((1 + delta) / delta)
            dp1 = delta + 1

            def norm_integral(power_num: int, power_den: int, env_mult: Fraction) -> Tuple[float, float]:
                # integral of p^(num/den) exp(-env_mult*beta|x|^2/2) dw at two orders
                rule1 = gauss_rule(rs, order=order, beta=env_mult * beta, normalized=False)
                rule2 = gauss_rule(rs, order=2 * order, beta=env_mult * beta, normalized=False)

                def ival(rule):
                    vals = p.eval_grid(rule.nodes)
                    return float(np.dot(rule.weights, vals ** (power_num / power_den)))

                return ival(rule2), abs(ival(rule2) - ival(rule1))

            i1, d1 = norm_integral(dp1.numerator, dp1.denominator, dp1)
            rhs1 = scale * i1 ** (1.0 / float(dp1))
            out.append(make_report(
                "entropy.bound.delta", rs, fname,
                {"member": str(idx), "delta": str(delta)},
                "inequality", "quadrature", ent_f, rhs1, tol,
                note=f"norm integral drift {d1!r} under order doubling",
            ))

            two_dp2 = 2 * delta + 2  # integer for the deltas in use
            i2, d2 = norm_integral(two_dp2.numerator, two_dp2.denominator, two_dp2)
            rhs2 = scale * i2 ** (2.0 / float(two_dp2))
            out.append(make_report(
                "entropy.bound.square", rs, fname,
                {"member": str(idx), "delta": str(delta)},
                "inequality", "quadrature", ent_f2, rhs2, tol,
                note=f"squared variant; norm integral drift {d2!r}",
            ))

        # energy ratios for the log-Sobolev table; rule at doubled envelope
        # integrates the polynomial brackets exactly
        rule2b = gauss_rule(rs, order=order, beta=2 * beta, normalized=False)
        gam_int = float(np.dot(
            rule2b.weights, gamma_envelope_poly(rs, p, beta).eval_grid(rule2b.nodes)))
        dun_int = float(np.dot(
            rule2b.weights, dunkl_energy_envelope_poly(rs, p, beta).eval_grid(rule2b.nodes)))
        dimq = rs.dim + 2 * rs.gamma
        if dimq > 2:
            delta_ls = Fraction(2, 1) / (Fraction(dimq) - 2)
            note = f"sobolev-matched delta {delta_ls}"
        else:
            delta_ls = None
            note = "skipped: hypothesis d + 2*gamma > 2 not met; ratios still reported"
        common = {"member": str(idx), "delta_ls": str(delta_ls)}
        out.append(make_report(
            "entropy.logsobolev.gamma_ratio", rs, fname, common, "report", "both",
            ent_f2, gam_int, 0.0,
            note=note + f"; ratio {ent_f2 / gam_int!r}",
        ))
        out.append(make_report(
            "entropy.logsobolev.dunkl_ratio", rs, fname, common, "report", "both",
            ent_f2, dun_int, 0.0,
            note=note + f"; ratio {ent_f2 / dun_int!r}",
        ))
    return out
