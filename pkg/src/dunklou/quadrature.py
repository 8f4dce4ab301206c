"""Moments and Gauss rules for reflection-invariant Gaussian measures.

The one-dimensional building block is the weight |x|^(2k) exp(-beta x^2 / 2)
on the line.  Its even moments are

    int x^(2m) |x|^(2k) e^(-beta x^2/2) dx
        = beta^-(m+k+1/2) * 2^(m+k+1/2) * Gamma(m+k+1/2),

odd moments vanish.  Gauss rules are built from the moment Hankel matrix:
Cholesky factorization in extended precision yields the three-term
recurrence, tridiagonal eigenvalues give starting nodes which are polished
by Newton iteration on the monic recurrence, and weights come from the
reciprocal Christoffel sums.  Only the final nodes and weights are rounded
to double.

Product groups (rank1, z2:d) get tensor rules; the permutation-group weight
has no product structure and is rejected here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

import mpmath as mp

from .mputil import locked_workdps
import numpy as np
from scipy.linalg import eigh_tridiagonal

from .polyalg import Polynomial
from .rootsys import CapabilityError, GroupKind, RootSystem

DEFAULT_ORDER = 64
DEFAULT_DIGITS = 50


class QuadratureError(RuntimeError):
    """Moment-based construction broke down at the working precision."""


def _to_mpf(v) -> mp.mpf:
    if isinstance(v, Fraction):
        return mp.mpf(v.numerator) / v.denominator
    return mp.mpf(v)


def moments_1d(k, beta, m: int, dps: int = DEFAULT_DIGITS) -> mp.mpf:
    """m-th absolute-weight moment (m even; odd moments are zero)."""
    if m % 2 == 1:
        return mp.mpf(0)
    with locked_workdps(dps):
        km = _to_mpf(k)
        bm = _to_mpf(beta)
        s = m // 2 + km + mp.mpf(1) / 2
        return mp.mpf(2) ** s * bm ** (-s) * mp.gamma(s)


# -- exact rational moments of the normalized measure -------------------------


def axis_moment_exact(k: Fraction, m: int) -> Fraction:
    """E[x^m] for the normalized 1-d measure; (2k+1)(2k+3)...(2k+2j-1) terms."""
    if m % 2 == 1:
        return Fraction(0)
    out = Fraction(1)
    for j in range(1, m // 2 + 1):
        out *= 2 * k + 2 * j - 1
    return out


def _exact_axis_multiplicities(rs: RootSystem) -> list:
    rs.require_numeric_measure("exact moments")
    rs.require_exact("exact moments")
    # rank1 and z2:d both have one axis root per coordinate
    ks = [Fraction(0)] * rs.dim
    for alpha, k in zip(rs.positive_roots, rs.multiplicities):
        i = max(range(rs.dim), key=lambda j: abs(alpha[j]))
        ks[i] = k
    return ks


def monomial_moment_mk(rs: RootSystem, exp: Sequence[int]) -> Fraction:
    """Exact moment of x^exp under the normalized Gaussian-type measure."""
    ks = _exact_axis_multiplicities(rs)
    out = Fraction(1)
    for e, k in zip(exp, ks):
        if e % 2 == 1:
            return Fraction(0)
        out *= axis_moment_exact(k, e)
    return out


def integrate_mk_exact(rs: RootSystem, p: Polynomial) -> Fraction:
    """Exact integral of a polynomial against the normalized measure."""
    if p.dim != rs.dim:
        raise ValueError("polynomial dimension mismatch")
    total = Fraction(0)
    for exp, c in p.terms.items():
        total += c * monomial_moment_mk(rs, exp)
    return total


# -- recurrence coefficients from moments -------------------------------------


def recurrence_from_moments(k, n: int, dps: Optional[int] = None) -> list:
    """Monic three-term recurrence b_1..b_{n-1} plus b_0 = total mass.

    Computed for the canonical scale beta = 1 via Cholesky of the Hankel
    moment matrix.  The weight is even so the diagonal coefficients vanish;
    only the b sequence is returned (as mpf at the working precision).
    """
    dps = max(dps or DEFAULT_DIGITS, 30 + 4 * n)
    with locked_workdps(dps):
        ms = [moments_1d(k, 1, j, dps) for j in range(2 * n + 1)]
        try:
            M = mp.matrix(n + 1, n + 1)
            for i in range(n + 1):
                for j in range(n + 1):
                    M[i, j] = ms[i + j]
            L = mp.cholesky(M)
        except Exception as exc:  # noqa: BLE001 - mpmath raises bare ValueError
            raise QuadratureError(
                f"moment Cholesky failed for k={k}, n={n} at {dps} digits: {exc}"
            ) from exc
        b = [ms[0]]
        for j in range(1, n):
            r = (L[j, j] / L[j - 1, j - 1]) ** 2
            if not r > 0:
                raise QuadratureError(
                    f"nonpositive recurrence coefficient b_{j} for k={k}, "
                    f"n={n} at {dps} digits"
                )
            b.append(r)
        return b


@dataclass(eq=False)
class Axis1D:
    """Gauss rule for one axis weight |x|^(2k) exp(-beta x^2/2)."""

    k: Union[Fraction, float]
    beta: Union[Fraction, float]
    order: int
    nodes: np.ndarray
    weights: np.ndarray       # carry the full weight mass: sum = m0
    prob_weights: np.ndarray  # weights / m0, sum = 1
    m0: float


def _build_canonical_axis(k, n: int, dps: Optional[int]) -> Axis1D:
    """Axis rule at beta = 1; other scales are exact rescalings of this."""
    if n < 1:
        raise ValueError("rule order must be >= 1")
    b = recurrence_from_moments(k, n, dps)
    dps_eff = max(dps or DEFAULT_DIGITS, 30 + 4 * n)
    with locked_workdps(dps_eff):
        if n == 1:
            roots = [mp.mpf(0)]
        else:
            off = np.sqrt(np.array([float(x) for x in b[1:]], dtype=float))
            start = eigh_tridiagonal(
                np.zeros(n), off, eigvals_only=True, lapack_driver="stebz"
            )

            def monic_and_deriv(x):
                pm1, p = mp.mpf(1), x
                dpm1, dp = mp.mpf(0), mp.mpf(1)
                for j in range(1, n):
                    pnext = x * p - b[j] * pm1
                    dpnext = p + x * dp - b[j] * dpm1
                    pm1, p = p, pnext
                    dpm1, dp = dp, dpnext
                return p, dp

            roots = []
            for x0 in start:
                x = mp.mpf(float(x0))
                for _ in range(4):
                    v, dv = monic_and_deriv(x)
                    if dv == 0:
                        raise QuadratureError(
                            f"Newton breakdown at node {float(x)} (k={k}, n={n})"
                        )
                    x = x - v / dv
                roots.append(x)
            roots.sort()

        # reciprocal Christoffel sums give the weights
        weights = []
        for x in roots:
            pm1, p = mp.mpf(1), x
            total = 1 / b[0] + (p * p) / (b[0] * b[1]) if n > 1 else 1 / b[0]
            norm = b[0] * (b[1] if n > 1 else 1)
            for j in range(2, n):
                pnext = x * p - b[j - 1] * pm1
                pm1, p = p, pnext
                norm = norm * b[j]
                total += (p * p) / norm
            weights.append(1 / total)

        # enforce the exact symmetry of the even weight
        sym_nodes = [
            (roots[i] - roots[n - 1 - i]) / 2 for i in range(n)
        ]
        if n % 2 == 1:
            sym_nodes[n // 2] = mp.mpf(0)
        sym_weights = [
            (weights[i] + weights[n - 1 - i]) / 2 for i in range(n)
        ]
        m0 = b[0]
        nodes_f = np.array([float(x) for x in sym_nodes])
        w_f = np.array([float(w) for w in sym_weights])
        pw_f = np.array([float(w / m0) for w in sym_weights])
    axis = Axis1D(
        k=k,
        beta=Fraction(1),
        order=n,
        nodes=nodes_f,
        weights=w_f,
        prob_weights=pw_f,
        m0=float(m0),
    )
    return axis


_axis_cache: dict = {}


def rule_1d(k, beta=1, order: int = DEFAULT_ORDER, dps: Optional[int] = None) -> Axis1D:
    """Gauss rule for |x|^(2k) exp(-beta x^2/2); nodes/weights in double.

    Scale covariance is built in: nodes scale as beta^(-1/2) and weights as
    beta^(-(k+1/2)) relative to the canonical beta = 1 rule.
    """
    if isinstance(k, (int, str)):
        k = Fraction(k)
    if float(k) < 0:
        raise ValueError("multiplicity must be nonnegative")
    key = (k, order, dps)
    base = _axis_cache.get(key)
    if base is None:
        base = _build_canonical_axis(k, order, dps)
        _axis_cache[key] = base
    if beta == 1:
        return base
    bf = float(beta)
    if bf <= 0:
        raise ValueError("beta must be positive")
    scale_w = bf ** -(float(k) + 0.5)
    return Axis1D(
        k=k,
        beta=beta,
        order=order,
        nodes=base.nodes / np.sqrt(bf),
        weights=base.weights * scale_w,
        prob_weights=base.prob_weights.copy(),
        m0=base.m0 * scale_w,
    )


@dataclass(eq=False)
class QuadratureRule:
    """Tensor-product rule over the axes of a product-form group."""

    axes: tuple
    normalized: bool
    nodes: np.ndarray = field(init=False)   # (N, d)
    weights: np.ndarray = field(init=False)  # (N,)

    def __post_init__(self):
        grids = np.meshgrid(*[a.nodes for a in self.axes], indexing="ij")
        self.nodes = np.stack([g.reshape(-1) for g in grids], axis=-1)
        ws = [a.prob_weights if self.normalized else a.weights for a in self.axes]
        w = ws[0]
        for wn in ws[1:]:
            w = np.multiply.outer(w, wn)
        self.weights = w.reshape(-1)

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def beta(self):
        return self.axes[0].beta

    def node_counts(self) -> tuple:
        return tuple(a.order for a in self.axes)


def tensor(axes: Sequence[Axis1D], normalized: bool = False) -> QuadratureRule:
    return QuadratureRule(tuple(axes), normalized)


def gauss_rule(
    rs: RootSystem,
    order: int = DEFAULT_ORDER,
    beta=1,
    normalized: bool = True,
    dps: Optional[int] = None,
) -> QuadratureRule:
    """Tensor rule matched to the group's per-axis multiplicities."""
    rs.require_numeric_measure("gauss rule")
    ks = _exact_axis_multiplicities(rs) if rs.exact else _float_axis_ks(rs)
    axes = [rule_1d(k, beta, order, dps) for k in ks]
    return tensor(axes, normalized)


def _float_axis_ks(rs: RootSystem) -> list:
    ks = [0.0] * rs.dim
    for alpha, k in zip(rs.positive_roots, rs.multiplicities):
        i = max(range(rs.dim), key=lambda j: abs(alpha[j]))
        ks[i] = float(k)
    return ks


def _values_on(f, nodes: np.ndarray) -> np.ndarray:
    if isinstance(f, Polynomial):
        return f.eval_grid(nodes)
    vals = f(nodes)
    return np.asarray(vals, dtype=float).reshape(nodes.shape[0])


def integrate_mk(rs: RootSystem, f, rule: QuadratureRule) -> float:
    """Integral against the normalized measure via a normalized rule."""
    if not rule.normalized:
        raise ValueError("integrate_mk needs a normalized rule")
    if rule.beta != 1:
        raise ValueError("the normalized measure uses beta = 1")
    if rule.dim != rs.dim:
        raise ValueError("rule dimension mismatch")
    return float(np.dot(rule.weights, _values_on(f, rule.nodes)))


def integrate_wk(rs: RootSystem, smooth, rule: QuadratureRule) -> float:
    """Integral of smooth(x) * |weight| * exp(-beta|x|^2/2) dx, unnormalized.

    The Gaussian factor and the reflection weight live in the rule; the
    caller supplies only the smooth prefactor.
    """
    if rule.normalized:
        raise ValueError("integrate_wk needs an unnormalized rule")
    if rule.dim != rs.dim:
        raise ValueError("rule dimension mismatch")
    return float(np.dot(rule.weights, _values_on(smooth, rule.nodes)))


def normalization_ck(rs: RootSystem) -> float:
    """Normalizing constant of the Gaussian-type measure (product groups)."""
    rs.require_numeric_measure("normalization constant")
    ks = _exact_axis_multiplicities(rs) if rs.exact else _float_axis_ks(rs)
    with locked_workdps(DEFAULT_DIGITS):
        inv = mp.mpf(1)
        for k in ks:
            km = _to_mpf(k)
            inv *= mp.mpf(2) ** (km + mp.mpf(1) / 2) * mp.gamma(km + mp.mpf(1) / 2)
        return float(1 / inv)
