"""The exponential kernel of the Dunkl derivative, rank one and products.

In rank one the kernel is the entire function E(x, y) = sum b_n (xy)^n whose
coefficients solve

    b_0 = 1,    theta(n) b_n = b_{n-1},
    theta(2m) = 2m,    theta(2m+1) = 2m + 1 + 2k,

equivalently the joint eigenfunction of the Dunkl derivative in x with
eigenvalue y.  For the sign-flip product groups the kernel factors over the
axes, which is validated numerically through the defining first-order system
(see ``defining_residual``).

Two evaluators are provided.  ``ek_1d`` sums the defining series in adaptive
extended precision and is the reference.  ``ek_log_1d_array`` is a fast
vectorized form for quadrature loops: the kernel is written as
exp(-|u|) * (confluent series with positive terms), so no cancellation
occurs for either sign of u and only the final exp/log is done in double.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import mpmath as mp

from .mputil import locked_workdps
import numpy as np

from .rootsys import CapabilityError, GroupKind, RootSystem
from .quadrature import _exact_axis_multiplicities, _float_axis_ks, _to_mpf

SERIES_MAX_TERMS = 200_000


def theta(n: int, k) -> Fraction:
    """Eigenvalue factor of the 1-d Dunkl derivative on monomials."""
    if n % 2 == 1:
        return n + 2 * (k if isinstance(k, Fraction) else Fraction(k))
    return Fraction(n)


@dataclass(frozen=True)
class KernelSeries:
    """Truncated coefficient table b_0..b_N of the rank-one kernel."""

    k: Union[Fraction, float]
    coefficients: tuple  # mpf values at build precision
    dps: int

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def tail_bound(self, u_abs: float) -> float:
        """Ratio-test bound on |sum_{n>N} b_n u^n| for |u| = u_abs < N + 1."""
        n = self.order
        r = u_abs / (n + 1)
        if r >= 1:
            raise ValueError(f"tail bound needs |u| < N + 1 = {n + 1}")
        with locked_workdps(self.dps):
            last = abs(self.coefficients[-1]) * mp.mpf(u_abs) ** n
            return float(last * r / (1 - r))

    def eval(self, u) -> mp.mpf:
        with locked_workdps(self.dps):
            um = _to_mpf(u)
            total = mp.mpf(0)
            for b in reversed(self.coefficients):
                total = total * um + b
            return total


def series_build(k, order: int, dps: int = 30) -> KernelSeries:
    """Coefficients via the defining recurrence, in extended precision."""
    if order < 0:
        raise ValueError("order must be >= 0")
    with locked_workdps(dps):
        km = _to_mpf(k)
        coeffs = [mp.mpf(1)]
        for n in range(1, order + 1):
            th = n + 2 * km if n % 2 == 1 else mp.mpf(n)
            coeffs.append(coeffs[-1] / th)
    return KernelSeries(k=k, coefficients=tuple(coeffs), dps=dps)


def ek_1d(k, u, rel_tol: float = 1e-15) -> float:
    """Rank-one kernel as a function of the product u = x*y.

    Sums the defining series with enough guard digits that alternating
    cancellation at u < 0 cannot hurt: the kernel always lies in
    [exp(-|u|), exp(|u|)], so the precision is set from |u|.
    """
    kf = float(k)
    if kf < 0:
        raise ValueError("multiplicity must be nonnegative")
    uf = float(u)
    if kf == 0:
        return math.exp(uf)
    v = abs(uf)
    dps = 30 + (int(math.ceil(0.87 * v)) if uf < 0 else 0)
    with locked_workdps(dps):
        km = _to_mpf(k)
        um = _to_mpf(u)
        floor = mp.e ** (-v)  # lower bound of the kernel, for relative control
        cutoff = floor * rel_tol / 4
        b = mp.mpf(1)
        term = mp.mpf(1)
        total = mp.mpf(1)
        n = 0
        while True:
            n += 1
            if n > SERIES_MAX_TERMS:
                raise ArithmeticError(
                    f"kernel series did not converge for k={k}, u={u}"
                )
            th = n + 2 * km if n % 2 == 1 else mp.mpf(n)
            b = b / th
            term = term * um
            t = b * term
            total += t
            if n > v and abs(t) < cutoff:
                break
        return float(total)


ASYMP_CUTOVER = 40.0


def _branch_log_series(a: float, b: float, v: np.ndarray) -> np.ndarray:
    """log of sum_m (a)_m/(b)_m (2v)^m/m! for v >= 0; positive terms only."""
    v = np.asarray(v, dtype=float)
    s = np.ones_like(v)
    t = np.ones_like(v)
    shift = np.zeros_like(v)
    two_v = 2.0 * v
    vmax = float(two_v.max()) if v.size else 0.0
    m = 0
    while True:
        t = t * (a + m) / ((b + m) * (m + 1)) * two_v
        s += t
        m += 1
        big = s > 1e280
        if big.any():
            s = np.where(big, s * 1e-280, s)
            t = np.where(big, t * 1e-280, t)
            shift = np.where(big, shift + 1.0, shift)
        if m > vmax + 12 and float((t / s).max(initial=0.0)) < 1e-18:
            break
        if m > SERIES_MAX_TERMS:
            raise ArithmeticError("vectorized kernel series did not converge")
    return np.log(s) + shift * (280.0 * math.log(10.0))


def _branch_log_asymp(a: float, b: float, v: np.ndarray) -> np.ndarray:
    """Large-argument form of the same sum, valid for v >= ASYMP_CUTOVER.

    The sum grows like Gamma(b)/Gamma(a) e^{2v} (2v)^{a-b}; the correction
    factor is an asymptotic series truncated at its smallest term, which is
    far below double rounding once 2v >= 80.  The exponentially small second
    branch of the expansion is ~e^{-2v} relative and is dropped.
    """
    two_v = 2.0 * np.asarray(v, dtype=float)
    corr = np.ones_like(two_v)
    term = np.ones_like(two_v)
    last = np.full_like(two_v, np.inf)
    for m in range(60):
        term = term * (b - a + m) * (1.0 - a + m) / ((m + 1.0) * two_v)
        mag = np.abs(term)
        # asymptotic series: stop at the smallest term or below rounding
        if not (mag < last).any() or float(mag.max()) < 1e-19:
            break
        grow = mag >= last
        term = np.where(grow, 0.0, term)
        last = np.where(grow, last, mag)
        corr += term
        if float(mag.max()) == 0.0:
            break
    return (
        math.lgamma(b)
        - math.lgamma(a)
        + two_v
        + (a - b) * np.log(two_v)
        + np.log(corr)
    )


def _branch_log(a: float, b: float, v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    out = np.empty_like(v)
    small = v < ASYMP_CUTOVER
    if small.any():
        out[small] = _branch_log_series(a, b, v[small])
    large = ~small
    if large.any():
        out[large] = _branch_log_asymp(a, b, v[large])
    return out


def ek_log_1d_array(k, u) -> np.ndarray:
    """log of the rank-one kernel over an array of arguments u = x*y."""
    kf = float(k)
    if kf < 0:
        raise ValueError("multiplicity must be nonnegative")
    u = np.asarray(u, dtype=float)
    flat = u.reshape(-1)
    if kf == 0:
        return u.copy()
    out = np.empty_like(flat)
    pos = flat >= 0
    if pos.any():
        vp = flat[pos]
        out[pos] = _branch_log(kf + 1.0, 2.0 * kf + 1.0, vp) - vp
    neg = ~pos
    if neg.any():
        vn = -flat[neg]
        out[neg] = _branch_log(kf, 2.0 * kf + 1.0, vn) - vn
    return out.reshape(u.shape)


def _axis_ks(rs: RootSystem) -> list:
    if rs.kind is GroupKind.SYMMETRIC:
        raise CapabilityError(
            f"no numeric kernel for sym:{rs.dim}; only the symbolic layer "
            "covers the permutation groups"
        )
    return _exact_axis_multiplicities(rs) if rs.exact else _float_axis_ks(rs)


def ek(rs: RootSystem, x: Sequence, y: Sequence) -> float:
    """Joint eigenfunction of the Dunkl derivatives; product over the axes."""
    return math.exp(ek_log(rs, x, y))


def ek_log(rs: RootSystem, x: Sequence, y: Sequence) -> float:
    if len(x) != rs.dim or len(y) != rs.dim:
        raise ValueError("point dimension mismatch")
    ks = _axis_ks(rs)
    total = 0.0
    for k, xi, yi in zip(ks, x, y):
        total += float(ek_log_1d_array(k, np.array([float(xi) * float(yi)]))[0])
    return total


def defining_residual(rs: RootSystem, x: Sequence, y: Sequence, axis: int,
                      h: float = 1e-4) -> float:
    """Residual of the defining system in direction e_axis at (x, y).

    Applies the Dunkl derivative in x to the kernel with a five-point
    stencil for the smooth part plus the exact reflection difference, and
    compares with multiplication by y_axis.  Relative to the kernel value.
    """
    ks = _axis_ks(rs)
    x = [float(v) for v in x]
    y = [float(v) for v in y]
    if abs(x[axis]) < 10 * h:
        raise ValueError("stay away from the reflection hyperplane")

    def e_at(xv):
        return ek(rs, xv, y)

    def shifted(delta):
        xv = list(x)
        xv[axis] += delta
        return e_at(xv)

    deriv = (-shifted(2 * h) + 8 * shifted(h) - 8 * shifted(-h) + shifted(-2 * h)) / (
        12 * h
    )
    xref = list(x)
    xref[axis] = -xref[axis]
    e0 = e_at(x)
    refl = float(ks[axis]) * (e0 - e_at(xref)) / x[axis]
    return abs(deriv + refl - y[axis] * e0) / abs(e0)
