"""Margin-report checks: report mechanics, each check family, exact examples.

Closed-form values used below (all for the half-line weight |x|^(2k) times
the Gaussian, normalized):
  int x^2 = 1 + 2k          int x^4 = (2k+1)(2k+3)     int x^6 = (2k+1)(2k+3)(2k+5)
  Gamma(x0, x0) = 1 + 2k    T x0 = 1 + 2k              L x0^2 = 2 + 4k - 2 x0^2
"""

import csv
import io
import json
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from dunklou import (
    CapabilityError,
    FunctionSpec,
    Polynomial,
    build_basis,
    gauss_rule,
    integrate_mk_exact,
    rank1,
    symmetric_group,
    z2power,
)
from dunklou import inequalities as iq
from dunklou.polyalg import carre_du_champ, dunkl_gradient, ou_generator

RS1 = rank1(1)
RS1_HALF = rank1(Fraction(1, 2))
RS2 = z2power(2, [1, Fraction(1, 2)])
SYM3 = symmetric_group(3, 1)

X = Polynomial.variable(1, 0)

# shared rules and bases; module scope so each is built once
R1_64 = gauss_rule(RS1, 64)
R1_192 = gauss_rule(RS1, 192)
R2_32 = gauss_rule(RS2, 32)
B1 = build_basis(RS1, 8)
B2 = build_basis(RS2, 6)

GRID1 = iq.default_grid(RS1)
GRID2 = iq.default_grid(RS2, points_per_axis=5)


def assert_all_pass(reports):
    bad = [r for r in reports if not r.passed]
    assert not bad, "\n".join(
        f"{r.check_id} params={r.params} lhs={r.lhs!r} rhs={r.rhs!r} "
        f"margin={r.margin!r} tol={r.tolerance!r}" for r in bad
    )


def ids(reports):
    return {r.check_id for r in reports}


# ---------------------------------------------------------------------------
# report records


def test_identity_report_pass_logic():
    ok = iq.make_report("a.b", RS1, "f", {}, "identity", "both", 1.0, 1.0 + 5e-10, 1e-9)
    assert ok.passed
    off = iq.make_report("a.b", RS1, "f", {}, "identity", "both", 1.0, 1.0 + 5e-9, 1e-9)
    assert not off.passed
    # sign of the deviation is irrelevant for an identity
    neg = iq.make_report("a.b", RS1, "f", {}, "identity", "both", 1.0 + 5e-9, 1.0, 1e-9)
    assert not neg.passed


def test_inequality_report_pass_logic():
    assert iq.make_report("a", RS1, "f", {}, "inequality", "symbolic", 1.0, 5.0, 1e-10).passed
    assert iq.make_report("a", RS1, "f", {}, "inequality", "symbolic", 1.0, 1.0 - 5e-11, 1e-10).passed
    assert not iq.make_report("a", RS1, "f", {}, "inequality", "symbolic", 1.0, 0.5, 1e-10).passed


def test_report_kind_and_skip_never_fail():
    rep = iq.make_report("a", RS1, "f", {}, "report", "both", 100.0, -100.0, 0.0)
    assert rep.passed
    sk = iq.skipped_report("a", RS1, "f", {}, "why not")
    assert sk.passed and sk.status == "skipped" and sk.note == "why not"


def test_make_report_rejects_unknown_kind_and_path():
    with pytest.raises(ValueError):
        iq.make_report("a", RS1, "f", {}, "estimate", "both", 0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        iq.make_report("a", RS1, "f", {}, "identity", "exact", 0.0, 0.0, 0.0)


def test_margin_is_rhs_minus_lhs_and_params_are_strings():
    r = iq.make_report("a", RS1, "f", {"t": 0.5, "n": 3}, "identity", "both", 1.25, 2.0, 1.0)
    assert r.margin == 0.75
    assert r.params == {"t": "0.5", "n": "3"}
    assert r.params_text() == "n=3;t=0.5"
    assert r.group == RS1.label()


def _sample_reports():
    return [
        iq.make_report("z.last", RS1, "g", {"b": "2"}, "identity", "both", 1.0, 1.0, 1e-9),
        iq.make_report("a.first", RS2, "f", {}, "inequality", "symbolic", 0.0, 1.0, 1e-9),
        iq.make_report("a.first", RS1, "f", {"a": "1"}, "report", "quadrature", 2.0, 3.0, 0.0),
        iq.skipped_report("m.mid", SYM3, "battery", {}, "no measure"),
    ]


def test_sort_reports_is_deterministic():
    reps = _sample_reports()
    shuffled = reps[:]
    random.Random(5).shuffle(shuffled)
    assert iq.sort_reports(shuffled) == iq.sort_reports(reps)
    keys = [r.sort_key() for r in iq.sort_reports(reps)]
    assert keys == sorted(keys)


def test_csv_round_trip():
    text = iq.reports_to_csv(_sample_reports())
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == iq.CSV_COLUMNS
    assert len(rows[0]) == 13
    assert len(rows) == 5
    # floats are repr'd so they parse back bit-exactly
    by_id = {(r[0], r[1]): r for r in rows[1:]}
    rep = by_id[("a.first", RS1.label())]
    assert float(rep[6]) == 2.0 and float(rep[8]) == 1.0
    assert rep[11] == "true"
    sk = by_id[("m.mid", SYM3.label())]
    assert sk[10] == "skipped"


def test_json_round_trip():
    data = json.loads(iq.reports_to_json(_sample_reports()))
    assert len(data) == 4
    assert [d["check_id"] for d in data] == sorted(d["check_id"] for d in data)
    first = data[0]
    assert set(first) == set(iq.CSV_COLUMNS)
    assert isinstance(first["passed"], bool)
    assert isinstance(first["params"], dict)


# ---------------------------------------------------------------------------
# batteries, grids, constants


def test_polynomial_battery_reproducible():
    a = iq.polynomial_battery(RS2, 5, seed=9)
    b = iq.polynomial_battery(RS2, 5, seed=9)
    assert a == b
    c = iq.polynomial_battery(RS2, 5, seed=10)
    assert a != c
    for p in a:
        assert p.dim == 2 and 1 <= p.degree() <= 8


def test_positive_battery_members():
    fs = iq.positive_battery(RS1, 4, seed=2)
    assert [m.beta for m in fs] == [1, 2, 1, 2]
    pts = iq.sample_points(RS1, 30, seed=6)
    for m in fs:
        assert m.kind == "positive_gaussian_poly"
        assert np.all(m.values(pts) > 0)


def test_function_spec_validation():
    with pytest.raises(ValueError):
        FunctionSpec("rational", X)
    with pytest.raises(ValueError):
        FunctionSpec("positive_gaussian_poly", X, eps=Fraction(0))
    with pytest.raises(ValueError):
        FunctionSpec("gaussian_poly", X, beta=0)


def test_function_spec_values_match_formula():
    fs = FunctionSpec("positive_gaussian_poly", X, beta=2, eps=Fraction(1, 4))
    x = 0.75
    want = (0.25 + x * x) * math.exp(-x * x)
    assert fs.values([(x,)])[0] == pytest.approx(want, rel=1e-15)


def test_battery_pairs_are_cyclic():
    batt = iq.polynomial_battery(RS1, 3, seed=1)
    pairs = iq.battery_pairs(batt)
    assert pairs == [(batt[0], batt[1]), (batt[1], batt[2]), (batt[2], batt[0])]


def test_default_grid_is_rational_and_symmetric():
    pts = iq.default_grid(RS1)
    assert len(pts) == 9
    assert all(isinstance(c, Fraction) for (c,) in pts)
    assert {p[0] for p in pts} == {-p[0] for p in pts}
    assert (Fraction(0),) in pts and (Fraction(3),) in pts
    assert len(iq.default_grid(RS2, points_per_axis=5)) == 25
    with pytest.raises(ValueError):
        iq.default_grid(RS1, points_per_axis=4)
    with pytest.raises(ValueError):
        iq.default_grid(RS1, points_per_axis=1)


def test_float_grid_and_sample_points():
    arr = iq.float_grid(GRID2)
    assert arr.shape == (25, 2) and arr.dtype == float
    pts = iq.sample_points(RS2, 7, seed=3)
    assert pts.shape == (7, 2)
    assert np.all(np.abs(pts) <= 3.0)
    assert np.array_equal(pts, iq.sample_points(RS2, 7, seed=3))


def test_gradient_constant_values():
    assert iq.gradient_constant(RS1) == 3
    assert iq.gradient_constant(RS2) == 7
    assert iq.gradient_constant(rank1(0)) == 1


def test_doubled_multiplicities():
    d1 = iq.doubled_multiplicities(RS1)
    assert d1.multiplicities == (Fraction(2),)
    assert iq.gradient_constant(d1) == 5
    assert iq.gradient_constant(iq.doubled_multiplicities(RS2)) == 13


def test_gradient_constant_needs_rational_multiplicities():
    with pytest.raises(CapabilityError):
        iq.gradient_constant(rank1(0.3))


# ---------------------------------------------------------------------------
# generator and carre du champ identities


def test_generator_identities_pass_rank1_and_z2():
    for rs, rule in ((RS1, R1_64), (RS2, R2_32)):
        batt = iq.polynomial_battery(rs, 4, seed=7)
        reps = iq.check_generator_identities(rs, batt, rule)
        assert_all_pass(reps)
        assert {
            "identity.generator.mean_zero",
            "identity.generator.three_term",
            "identity.generator.symmetry",
            "identity.reflection.pairing",
            "identity.reflection.half_norm",
        } <= ids(reps)


def test_generator_identities_exact_values_for_coordinate():
    # f = g = x: int (Lx) x = -(1+2k) = -3, and the reflection pairing
    # (1/2) int (2x)^2 = 2(1+2k) = 6 at k = 1.
    reps = iq.check_generator_identities(RS1, [X], R1_64)
    by_id = {r.check_id: r for r in reps}
    assert by_id["identity.generator.mean_zero"].rhs == 0.0
    assert by_id["identity.generator.three_term"].rhs == -3.0
    assert abs(by_id["identity.generator.three_term"].margin) < 1e-12
    assert by_id["identity.reflection.pairing"].rhs == 6.0
    assert by_id["identity.reflection.half_norm"].rhs == 6.0
    assert_all_pass(reps)


def test_generator_identities_skipped_for_symmetric():
    reps = iq.check_generator_identities(SYM3, [], None)
    assert len(reps) == 1
    assert reps[0].check_id == "identity.generator"
    assert reps[0].status == "skipped" and reps[0].passed


def test_gamma_identity_exact_values_for_coordinate():
    # int Gamma(x) = 3 splits as derivative energy 9 minus reflection energy 6
    reps = iq.check_gamma_identity(RS1, [X], R1_64)
    by_id = {r.check_id: r for r in reps}
    integral = by_id["identity.gamma.integral"]
    assert integral.rhs == 3.0 and abs(integral.margin) < 1e-12
    lower = by_id["inequality.gamma.reflection_lower"]
    assert (lower.lhs, lower.rhs) == (6.0, 9.0)
    assert_all_pass(reps)


def test_gamma_identity_battery_and_symmetric_skip():
    reps = iq.check_gamma_identity(RS2, iq.polynomial_battery(RS2, 3, seed=4), R2_32)
    assert_all_pass(reps)
    sk = iq.check_gamma_identity(SYM3, [], None)
    assert sk[0].check_id == "identity.gamma" and sk[0].status == "skipped"


# ---------------------------------------------------------------------------
# convexity of the generator


def test_convexity_theorem_square_margin_is_twice_gamma():
    # L(x^2) - 2x Lx = 2 Gamma(x) = 2 + 4k, constant over the grid
    reps = iq.check_convexity_theorem(RS1, "square", X, GRID1)
    assert len(reps) == 1
    assert reps[0].margin == 6.0
    assert reps[0].passed
    assert "exact minimum margin" in reps[0].note


def test_convexity_theorem_all_maps_pass():
    for rs, grid in ((RS1, GRID1), (RS2, GRID2)):
        for f in iq.polynomial_battery(rs, 3, seed=5, max_degree=4):
            for phi in sorted(iq._PHI_SPECS):
                assert_all_pass(iq.check_convexity_theorem(rs, phi, f, grid))


def test_convexity_theorem_rejects_unknown_map():
    with pytest.raises(ValueError):
        iq.check_convexity_theorem(RS1, "cubic", X, GRID1)


def test_convexity_corollary_exact_value():
    # p = x^2 + 1/10, Lp = 6 - 2x^2 at k=1: int p Lp = -12 exactly
    fs = FunctionSpec("positive_gaussian_poly", X)
    reps = iq.check_convexity_corollary(RS1, fs)
    assert_all_pass(reps)
    by_p = {r.params["p"]: r for r in reps}
    assert by_p["2"].lhs == -12.0
    assert by_p["3"].lhs == pytest.approx(-122.4, rel=1e-15)
    assert all(r.rhs == 0.0 for r in reps)


def test_convexity_corollary_kind_and_symmetric():
    with pytest.raises(ValueError):
        iq.check_convexity_corollary(RS1, FunctionSpec("polynomial", X))
    sk = iq.check_convexity_corollary(SYM3, iq.positive_battery(RS1, 1, seed=1)[0])
    assert sk[0].status == "skipped"


# ---------------------------------------------------------------------------
# variance sandwich, series expansion, second-moment convexity


def test_sandwich_closed_forms_for_coordinate():
    t = 0.7
    reps = iq.check_poincare_sandwich(RS1, X, t, B1, rule=R1_192)
    by_id = {r.check_id: r for r in reps}
    gap = 3.0 * (1.0 - math.exp(-2 * t))
    lower = by_id["poincare.sandwich.lower"]
    assert lower.lhs == pytest.approx(2 * t * 3.0 * math.exp(-2 * t), rel=1e-13)
    assert lower.rhs == pytest.approx(gap, rel=1e-13)
    upper = by_id["poincare.sandwich.upper"]
    assert upper.rhs == pytest.approx(2 * t * 3.0, rel=1e-13)
    cross = by_id["poincare.gap.cross"]
    assert cross.kind == "identity" and abs(cross.margin) < 1e-8
    printed = by_id["poincare.printed_lower.report"]
    # Tx is constant, so the componentwise reading of the lower bound is 0
    assert printed.kind == "report" and printed.lhs == 0.0
    assert_all_pass(reps)


def test_sandwich_quadratic_weights():
    # x^2 has one graded level above the mean: weight int (x^2-3)^2 = 6 at k=1
    t = 0.4
    reps = iq.check_poincare_sandwich(RS1, X * X, t, B1)
    by_id = {r.check_id: r for r in reps}
    gap = 6.0 * (1.0 - math.exp(-4 * t))
    assert by_id["poincare.sandwich.lower"].rhs == pytest.approx(gap, rel=1e-12)
    assert by_id["poincare.sandwich.upper"].rhs == pytest.approx(8 * t * 6.0 / 2, rel=1e-12)
    assert_all_pass(reps)


def test_sandwich_degenerate_cases():
    const = Polynomial.const(1, Fraction(5))
    for f, t in ((const, 0.8), (X, 0.0)):
        reps = iq.check_poincare_sandwich(RS1, f, t, B1)
        assert_all_pass(reps)
        for r in reps:
            assert r.lhs == 0.0 and r.rhs == 0.0


def test_sandwich_battery():
    for f in iq.polynomial_battery(RS1, 3, seed=13, max_degree=4):
        assert_all_pass(iq.check_poincare_sandwich(RS1, f, 0.4, B1, rule=R1_192))


def test_taylor_table_alternating_decay():
    # psi(t) = 3 e^{-2t} for f = x; partial sums alternate around the limit
    rows = iq.taylor_table(B1, X, Fraction(1, 2), n_max=20)
    errs = [e for _, e in rows]
    assert errs[0] == pytest.approx(3.0 - 3.0 * math.exp(-1.0), rel=1e-12)
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 3 / math.factorial(21)


def test_taylor_table_float_time_matches_fraction():
    a = iq.taylor_table(B1, X, 0.5, n_max=8)
    b = iq.taylor_table(B1, X, Fraction(1, 2), n_max=8)
    assert a == b


def test_taylor_expansion_reports():
    reps = iq.taylor_expansion(RS1, X, Fraction(1, 2), 24, B1)
    by_id = {r.check_id: r for r in reps}
    assert by_id["taylor.partial_sum"].lhs < 1e-20
    assert by_id["taylor.monotone"].lhs == 0.0
    assert_all_pass(reps)


def test_psi_convexity():
    f = X * X + X
    reps = iq.check_psi_convexity(RS1, f, B1, ts=(0.1, 0.5, 1.0, 2.0))
    assert len(reps) == 1
    assert reps[0].rhs > 0
    assert_all_pass(reps)


# ---------------------------------------------------------------------------
# gradient bounds and their sharpness


def test_gradient_bound_coordinate_is_extremal():
    # |T x|^2 = 9 = C * Gamma(x) with C = 3: zero margin everywhere
    reps = iq.check_gradient_bound(RS1, X, GRID1, basis=B1, ts=(0.4, 1.2))
    assert_all_pass(reps)
    by_id = {r.check_id: r for r in reps}
    pw = by_id["gradient.pointwise"]
    assert (pw.lhs, pw.rhs) == (9.0, 9.0)
    assert pw.params["constant"] == "3"
    integ = by_id["gradient.integrated"]
    assert integ.params["constant"] == "3/4"
    assert abs(integ.margin) < 1e-12
    corollary = [r for r in reps if r.check_id == "gradient.corollary"]
    assert len(corollary) == 2
    assert all(abs(r.margin) < 1e-10 for r in corollary)


def test_gradient_bound_battery():
    for rs, grid, basis in ((RS1, GRID1, B1), (RS2, GRID2, B2)):
        for f in iq.polynomial_battery(rs, 3, seed=19, max_degree=4):
            assert_all_pass(iq.check_gradient_bound(rs, f, grid, basis=basis, ts=(0.5,)))


def test_gradient_bound_skip_reasons():
    reps = iq.check_gradient_bound(SYM3, Polynomial.variable(3, 0), [(1, 2, 3)])
    integ = [r for r in reps if r.check_id == "gradient.integrated"][0]
    assert integ.status == "skipped" and "no numeric measure" in integ.note
    reps0 = iq.check_gradient_bound(rank1(0), X, GRID1)
    integ0 = [r for r in reps0 if r.check_id == "gradient.integrated"][0]
    assert integ0.status == "skipped" and "gamma > 0" in integ0.note


def test_gradient_witness_dimension_one_exact():
    for rs, both in ((RS1, 9.0), (rank1(0), 1.0), (iq.doubled_multiplicities(RS1), 25.0)):
        (rep,) = iq.gradient_witness(rs)
        assert rep.kind == "identity" and rep.tolerance == 0.0
        assert rep.lhs == both and rep.rhs == both
        assert "holds" in rep.note
        assert rep.passed


def test_gradient_witness_higher_dimension_reports_ratio():
    (rep,) = iq.gradient_witness(RS2)
    assert rep.kind == "report"
    assert (rep.lhs, rep.rhs) == (9.0, 21.0)


def test_sharpness_ratio_witness_attains_constant_in_dim_one():
    grid = GRID1
    for k in (0, Fraction(1, 2), 1, 2):
        rs = rank1(k)
        batt = iq.polynomial_battery(rs, 6, seed=23, max_degree=5)
        sup, witness, reps = iq.sharpness_ratio(rs, batt, grid)
        assert witness == float(iq.gradient_constant(rs))
        assert sup <= witness + 1e-9
        assert_all_pass(reps)


def test_sharpness_ratio_higher_dimension():
    batt = iq.polynomial_battery(RS2, 5, seed=29, max_degree=4)
    sup, witness, reps = iq.sharpness_ratio(RS2, batt, GRID2)
    assert witness == 3.0
    assert max(sup, witness) <= 7.0 + 1e-9
    assert_all_pass(reps)


def test_lower_bound_failure_site_values():
    reps = iq.lower_bound_failure(RS1, GRID1)
    by_id = {r.check_id: r for r in reps}
    assert by_id["gradient.failure.site_zero"].lhs == 0.0
    assert by_id["gradient.failure.site_gamma"].lhs == 6.0
    assert by_id["gradient.failure.site_gamma"].rhs == 6.0
    assert by_id["gradient.failure.infimum"].lhs == 0.0
    assert by_id["gradient.failure.site_zero"].params["x_star"] == "-3/2"
    assert_all_pass(reps)
    half = {r.check_id: r for r in iq.lower_bound_failure(RS1_HALF, GRID1)}
    assert half["gradient.failure.site_gamma"].lhs == 2.0


def test_lower_bound_failure_rejects_classical_and_high_dim():
    with pytest.raises(ValueError):
        iq.lower_bound_failure(rank1(0), GRID1)
    with pytest.raises(ValueError):
        iq.lower_bound_failure(RS2, GRID2)


# ---------------------------------------------------------------------------
# reverse bound


def test_reverse_poincare_coordinate_margin_zero():
    # variance 3(1-e^{-2t}) equals (1-e^{-2t})/C * 9 exactly for f = x
    reps = iq.check_reverse_poincare(RS1, X, 0.5, GRID1, rule=R1_192, basis=B1)
    by_id = {r.check_id: r for r in reps}
    assert abs(by_id["reverse.pointwise"].margin) < 1e-12
    assert abs(by_id["reverse.cross"].margin) < 1e-8
    assert_all_pass(reps)


def test_reverse_poincare_battery():
    for f in iq.polynomial_battery(RS1, 3, seed=17, max_degree=4):
        for t in (0.1, 1.0):
            assert_all_pass(iq.check_reverse_poincare(RS1, f, t, GRID1))
    f2 = iq.polynomial_battery(RS2, 1, seed=17, max_degree=3)[0]
    assert_all_pass(iq.check_reverse_poincare(RS2, f2, 0.5, GRID2, basis=B2))


def test_reverse_poincare_time_zero():
    reps = iq.check_reverse_poincare(RS1, X, 0.0, GRID1, basis=B1)
    (pw,) = [r for r in reps if r.check_id == "reverse.pointwise"]
    assert pw.lhs == 0.0 and pw.rhs == 0.0


# ---------------------------------------------------------------------------
# kernel-side checks


def test_q_normalization_unit_mass():
    reps = iq.check_q_normalization(RS1, (0.1, 0.5, 0.9), [(0.0,), (1.5,), (-3.0,)])
    assert reps[0].params["order"] == "192"
    assert_all_pass(reps)
    assert_all_pass(iq.check_q_normalization(RS2, (0.5,), [(0.5, -1.0)]))


def test_q_normalization_needs_numeric_measure():
    with pytest.raises(CapabilityError):
        iq.check_q_normalization(SYM3, (0.5,), [(0.0, 0.0, 0.0)])


def test_q_symmetry():
    assert_all_pass(iq.check_q_symmetry(RS1, seed=3))
    assert_all_pass(iq.check_q_symmetry(RS2, seed=3, count=8))


def test_kernel_bound_envelope():
    reps = iq.check_kernel_bound(RS1, seed=4, ts=(0.3, 0.7), n_points=8)
    assert reps[0].kind == "inequality"
    assert_all_pass(reps)


def test_jensen_power_means():
    f = iq.polynomial_battery(RS1, 1, seed=21, max_degree=4)[0]
    pts = iq.sample_points(RS1, 4, seed=5)
    reps = iq.check_jensen(RS1, f, (0.3, 1.0), pts, R1_192)
    assert {r.params["p"] for r in reps} == {"1", "2", "4"}
    assert_all_pass(reps)


def test_invariance_of_the_measure():
    batt = iq.polynomial_battery(RS1, 2, seed=25, max_degree=4)
    reps = iq.check_invariance(RS1, batt, (0.3, 1.0), R1_192)
    assert len(reps) == 4
    assert_all_pass(reps)


def test_self_adjointness():
    batt = iq.polynomial_battery(RS1, 2, seed=27, max_degree=4)
    reps = iq.check_self_adjoint(RS1, batt, (0.5,), R1_192)
    assert len(reps) == 2
    assert_all_pass(reps)


def test_commutation_spectral_and_quadrature():
    f = iq.polynomial_battery(RS1, 1, seed=31, max_degree=4)[0]
    pts = iq.sample_points(RS1, 4, seed=8)
    reps = iq.check_commutation(RS1, f, (0.3, 1.0), pts, B1, rule=R1_192)
    by_id = {r.check_id: r for r in reps}
    assert by_id["semigroup.commutation.spectral"].lhs == 0.0
    assert by_id["semigroup.commutation.spectral"].tolerance == 0.0
    assert_all_pass(reps)


# ---------------------------------------------------------------------------
# entropy


def test_entropy_gaussian_closed_form():
    # smooth part 1: the function is exp(-x^2/2) against the flat weight,
    # entropy -sqrt(2*pi) (1/2 + log sqrt(2*pi))
    fs = FunctionSpec("positive_gaussian_poly", Polynomial.zero(1), beta=1, eps=Fraction(1))
    val, reps = iq.entropy(rank1(0), fs, order=32)
    m = math.sqrt(2 * math.pi)
    assert val == pytest.approx(-m * (0.5 + math.log(m)), rel=1e-12)
    assert reps[0].check_id == "entropy.value.convergence"
    assert reps[0].kind == "report" and abs(reps[0].lhs) < 1e-14


def test_entropy_scales_linearly():
    base = FunctionSpec("positive_gaussian_poly", X, beta=1, eps=Fraction(1, 10))
    quad = FunctionSpec("positive_gaussian_poly", 2 * X, beta=1, eps=Fraction(4, 10))
    v1, _ = iq.entropy(RS1, base, order=64)
    v4, _ = iq.entropy(RS1, quad, order=64)
    assert v4 == pytest.approx(4 * v1, rel=1e-12)


def test_entropy_argument_validation():
    with pytest.raises(ValueError):
        iq.entropy(RS1, FunctionSpec("gaussian_poly", X))
    with pytest.raises(CapabilityError):
        iq.entropy(SYM3, FunctionSpec("positive_gaussian_poly", Polynomial.zero(3)))


def test_entropy_bounds_rows_and_sobolev_delta():
    batt = iq.positive_battery(RS1, 1, seed=11)
    reps = iq.check_entropy_bounds(RS1, batt)
    assert_all_pass(reps)
    assert len(reps) == 9
    assert {
        "entropy.value.convergence",
        "entropy.bound.delta",
        "entropy.bound.square",
        "entropy.logsobolev.gamma_ratio",
        "entropy.logsobolev.dunkl_ratio",
    } == ids(reps)
    # d + 2 gamma = 3 here, so the matched delta is 2/(3-2) = 2
    ls = [r for r in reps if r.check_id.startswith("entropy.logsobolev")]
    assert all(r.params["delta_ls"] == "2" for r in ls)
    assert all("sobolev-matched" in r.note for r in ls)


def test_entropy_bounds_below_dimension_threshold():
    rs = rank1(Fraction(1, 4))
    reps = iq.check_entropy_bounds(rs, iq.positive_battery(rs, 1, seed=3), order=64)
    assert_all_pass(reps)
    ls = [r for r in reps if r.check_id.startswith("entropy.logsobolev")]
    assert all(r.params["delta_ls"] == "None" for r in ls)
    assert all(r.note.startswith("skipped: hypothesis") for r in ls)


def test_entropy_bounds_symmetric_and_bad_kind():
    sk = iq.check_entropy_bounds(SYM3, [])
    assert sk[0].check_id == "entropy.bounds" and sk[0].status == "skipped"
    with pytest.raises(ValueError):
        iq.check_entropy_bounds(RS1, [FunctionSpec("gaussian_poly", X)])


# ---------------------------------------------------------------------------
# multiplicity scaling coherence


def test_doubled_multiplicity_scaling():
    rs = iq.doubled_multiplicities(RS1)
    assert carre_du_champ(rs, X).constant_term() == 5
    assert dunkl_gradient(rs, X).components[0].constant_term() == 5
    assert integrate_mk_exact(rs, X * X) == 5
    batt = iq.polynomial_battery(rs, 4, seed=33, max_degree=4)
    sup, witness, reps = iq.sharpness_ratio(rs, batt, GRID1)
    assert witness == 5.0 and sup <= 5.0 + 1e-9
    assert_all_pass(reps)


def test_generator_consistency_after_doubling():
    rs = iq.doubled_multiplicities(RS1)
    # L x^2 = 2 + 4k - 2x^2 with k = 2
    lx2 = ou_generator(rs, X * X)
    assert lx2.eval((Fraction(0),)) == 10
    assert lx2.eval((Fraction(1),)) == 8
