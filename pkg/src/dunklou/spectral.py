"""Exact eigenstructure of the drifted generator on polynomials.

For the product groups the generator acts axis by axis, so the orthogonal
polynomial basis of the invariant measure is the tensor product of
one-dimensional bases.  Each one-dimensional basis comes from Gram-Schmidt
over the exact rational moments

    E[x^(2m)] = (2k+1)(2k+3)...(2k+2m-1),

hence every basis polynomial has Fraction coefficients and an exact squared
norm, and satisfies  L p = -deg(p) p  exactly (verified at build time).

A polynomial evolved by the semigroup is stored as its graded eigenparts
with the scalar factors exp(-n t) kept symbolic until evaluation, so
structural identities (commutation, the semigroup law, invariance of the
mean) can be checked exactly on the parts.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence

import numpy as np

from .polyalg import CrossPathError, Polynomial, ou_generator, dunkl_derivative
from .quadrature import _exact_axis_multiplicities, axis_moment_exact
from .rootsys import RootSystem


class EigenGateError(RuntimeError):
    """A basis element failed the exact eigenvalue identity."""


@dataclass(frozen=True)
class BasisElement:
    exponent: tuple
    degree: int
    poly: Polynomial
    norm_sq: Fraction


def _axis_basis(k: Fraction, max_degree: int):
    """Monic 1-d orthogonal polynomials as {degree: coeff} maps, with norms."""

    def inner(f: dict, g: dict) -> Fraction:
        total = Fraction(0)
        for a, ca in f.items():
            for b, cb in g.items():
                if (a + b) % 2 == 0:
                    total += ca * cb * axis_moment_exact(k, a + b)
        return total

    basis = []
    norms = []
    for m in range(max_degree + 1):
        cur = {m: Fraction(1)}
        for j in range(m - 1, -1, -1):
            # same-parity projections only; others vanish by symmetry
            if (m - j) % 2 == 1:
                continue
            c = inner(cur, basis[j]) / norms[j]
            if c == 0:
                continue
            for deg, v in basis[j].items():
                nv = cur.get(deg, Fraction(0)) - c * v
                if nv == 0:
                    cur.pop(deg, None)
                else:
                    cur[deg] = nv
        basis.append(cur)
        norms.append(inner(cur, cur))
    return basis, norms


class EigenBasis:
    """Tensor eigenbasis of the generator up to a total degree."""

    def __init__(self, rs: RootSystem, max_degree: int, verify: bool = True):
        ks = _exact_axis_multiplicities(rs)
        self.rs = rs
        self.max_degree = max_degree
        axis_polys = []
        axis_norms = []
        for k in ks:
            b, nsq = _axis_basis(k, max_degree)
            axis_polys.append(b)
            axis_norms.append(nsq)

        elements = []
        exps = sorted(
            (
                e
                for e in itertools.product(range(max_degree + 1), repeat=rs.dim)
                if sum(e) <= max_degree
            ),
            key=lambda e: (sum(e), e),
        )
        for nu in exps:
            terms: dict = {}
            for combo in itertools.product(
                *[axis_polys[i][nu[i]].items() for i in range(rs.dim)]
            ):
                exp = tuple(c[0] for c in combo)
                coeff = Fraction(1)
                for c in combo:
                    coeff *= c[1]
                terms[exp] = terms.get(exp, Fraction(0)) + coeff
            poly = Polynomial(rs.dim, terms)
            nrm = Fraction(1)
            for i in range(rs.dim):
                nrm *= axis_norms[i][nu[i]]
            elements.append(
                BasisElement(exponent=nu, degree=sum(nu), poly=poly, norm_sq=nrm)
            )
        self.elements = tuple(elements)
        self.position = {el.exponent: i for i, el in enumerate(elements)}
        if verify:
            self._verify_eigen()

    def _verify_eigen(self):
        for el in self.elements:
            image = ou_generator(self.rs, el.poly)
            if image != (-el.degree) * el.poly:
                raise EigenGateError(
                    f"basis element {el.exponent} on {self.rs.label()} is not "
                    f"an eigenfunction of the generator"
                )

    def __len__(self):
        return len(self.elements)


_basis_cache: dict = {}


def build_basis(rs: RootSystem, max_degree: int, verify: bool = True) -> EigenBasis:
    key = (rs.label(), max_degree, verify)
    basis = _basis_cache.get(key)
    if basis is None:
        basis = EigenBasis(rs, max_degree, verify)
        _basis_cache[key] = basis
    return basis


def expand(basis: EigenBasis, p: Polynomial) -> Dict[tuple, Fraction]:
    """Exact coefficients of p in the eigenbasis, by leading-term elimination.

    The basis is monic and triangular with respect to the graded
    lexicographic monomial order, so coefficients read off from the top.
    """
    if p.dim != basis.rs.dim:
        raise ValueError("polynomial dimension mismatch")
    if p.degree() > basis.max_degree:
        raise ValueError(
            f"degree {p.degree()} exceeds basis degree {basis.max_degree}"
        )
    coeffs: Dict[tuple, Fraction] = {}
    residual = p
    for el in reversed(basis.elements):
        c = residual.terms.get(el.exponent)
        if c:
            coeffs[el.exponent] = c
            residual = residual - c * el.poly
    if not residual.is_zero():
        raise CrossPathError("eigenbasis expansion left a nonzero residual")
    return coeffs


def graded_parts(basis: EigenBasis, p: Polynomial) -> Dict[int, Polynomial]:
    """Projections of p onto the eigenspaces, indexed by -eigenvalue."""
    parts: Dict[int, Polynomial] = {}
    for nu, c in expand(basis, p).items():
        n = sum(nu)
        el = basis.elements[basis.position[nu]]
        parts[n] = parts.get(n, Polynomial.zero(p.dim)) + c * el.poly
    return {n: q for n, q in parts.items() if not q.is_zero()}


def graded_weights(basis: EigenBasis, p: Polynomial) -> Dict[int, Fraction]:
    """Exact squared-norm mass of p per eigenspace: sum c_nu^2 |p_nu|^2."""
    out: Dict[int, Fraction] = {}
    for nu, c in expand(basis, p).items():
        el = basis.elements[basis.position[nu]]
        n = sum(nu)
        out[n] = out.get(n, Fraction(0)) + c * c * el.norm_sq
    return {n: v for n, v in out.items() if v != 0}


@dataclass(frozen=True)
class SemigroupImage:
    """A polynomial pushed through the semigroup, kept in graded form.

    The value at x is  sum_n exp(-n t) parts[n](x);  parts stay exact.
    """

    rs: RootSystem
    t: float
    parts: tuple  # ordered tuple of (n, Polynomial)

    @staticmethod
    def from_dict(rs: RootSystem, t: float, parts: Dict[int, Polynomial]):
        items = tuple(sorted((n, q) for n, q in parts.items() if not q.is_zero()))
        return SemigroupImage(rs=rs, t=t, parts=items)

    def part_dict(self) -> Dict[int, Polynomial]:
        return dict(self.parts)

    def eval(self, x) -> float:
        return float(
            sum(math.exp(-n * self.t) * float(q.eval(tuple(map(float, x)))) for n, q in self.parts)
        )

    def eval_grid(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, self.rs.dim)
        out = np.zeros(pts.shape[0])
        for n, q in self.parts:
            out += math.exp(-n * self.t) * q.eval_grid(pts)
        return out

    def evolve(self, dt: float) -> "SemigroupImage":
        if dt < 0:
            raise ValueError("time increment must be nonnegative")
        return SemigroupImage(rs=self.rs, t=self.t + dt, parts=self.parts)

    def mean_exact(self) -> Fraction:
        """Integral against the invariant measure: the eigenvalue-0 part."""
        for n, q in self.parts:
            if n == 0:
                return q.constant_term()
        return Fraction(0)

    def as_polynomial(self) -> Polynomial:
        """Only meaningful at t = 0, where the image is the original poly."""
        if self.t != 0:
            raise ValueError("exact polynomial form only exists at t = 0")
        out = Polynomial.zero(self.rs.dim)
        for _, q in self.parts:
            out = out + q
        return out


def ou_spectral(basis: EigenBasis, p: Polynomial, t: float) -> SemigroupImage:
    """Semigroup action on a polynomial through its eigen expansion."""
    if t < 0:
        raise ValueError("the semigroup is defined for t >= 0")
    return SemigroupImage.from_dict(basis.rs, float(t), graded_parts(basis, p))


def image_dunkl_derivative(img: SemigroupImage, axis: int) -> SemigroupImage:
    """Apply the Dunkl derivative to each graded part, keeping labels.

    The derivative maps the eigenspace of -n into the eigenspace of
    -(n-1); labels record the original n so scalar factors stay aligned.
    """
    parts = {}
    for n, q in img.parts:
        dq = dunkl_derivative(img.rs, q, axis)
        if not dq.is_zero():
            parts[n] = dq
    return SemigroupImage.from_dict(img.rs, img.t, parts)


def psi_moments(basis: EigenBasis, p: Polynomial, n_max: int):
    """Exact moments M_n = integral of p L^n p, n = 0..n_max.

    In the eigenbasis these are sums of c^2 |p_nu|^2 (-deg)^n, rational
    numbers with alternating signs.
    """
    weights = graded_weights(basis, p)
    out = []
    for n in range(n_max + 1):
        total = Fraction(0)
        for deg, w in weights.items():
            total += w * Fraction(-deg) ** n
        out.append(total)
    return out


def psi_value(basis: EigenBasis, p: Polynomial, t: float) -> float:
    """Second moment of the evolved polynomial: sum exp(-2 n t) S_n."""
    weights = graded_weights(basis, p)
    return float(sum(math.exp(-2 * n * t) * float(w) for n, w in weights.items()))


def gamma_integral_spectral(basis: EigenBasis, p: Polynomial, t: float) -> float:
    """Integral of the carre du champ of the evolved polynomial.

    Uses the exact identity: the integral of the carre du champ of any
    polynomial equals sum_n n S_n over its eigenspace masses; evolution
    multiplies each mass by exp(-2 n t).
    """
    weights = graded_weights(basis, p)
    return float(sum(n * math.exp(-2 * n * t) * float(w) for n, w in weights.items()))
