"""Exact multivariate polynomial arithmetic and reflection-aware operators.

Polynomials are sparse maps from exponent tuples to ``Fraction``
coefficients; the zero polynomial is the empty map.  All operator algebra
in this module is exact: divisions by the linear forms attached to roots
must leave a zero remainder, and the operators that admit two independent
formulas (the reflection Laplacian, the carre du champ) evaluate both and
abort on any mismatch instead of silently returning one of them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .rootsys import GroupKind, RootSystem

DEGREE_CAP = 64

Exponent = tuple
Coeff = Fraction


class ExactDivisionError(ArithmeticError):
    """A division that must be exact left a nonzero remainder."""


class CrossPathError(RuntimeError):
    """Two independent formulas for the same operator disagreed."""


class DegreeCapError(ValueError):
    """A product would exceed the supported total degree."""


def _coeff(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"coefficients must be rational, got {type(c).__name__}")


class Polynomial:
    """Immutable sparse polynomial with Fraction coefficients."""

    __slots__ = ("dim", "terms", "_hash")

    def __init__(self, dim: int, terms: Optional[dict] = None):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        self.dim = dim
        clean = {}
        if terms:
            for exp, c in terms.items():
                c = _coeff(c)
                if c == 0:
                    continue
                if len(exp) != dim or any(e < 0 for e in exp):
                    raise ValueError(f"bad exponent {exp} for dimension {dim}")
                clean[tuple(exp)] = c
        self.terms = clean
        self._hash = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(dim: int) -> "Polynomial":
        return Polynomial(dim)

    @staticmethod
    def const(dim: int, c) -> "Polynomial":
        return Polynomial(dim, {tuple([0] * dim): _coeff(c)})

    @staticmethod
    def variable(dim: int, i: int) -> "Polynomial":
        if not 0 <= i < dim:
            raise ValueError(f"variable index {i} out of range for dim {dim}")
        exp = [0] * dim
        exp[i] = 1
        return Polynomial(dim, {tuple(exp): Fraction(1)})

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.terms.get(tuple([0] * self.dim), Fraction(0))

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.dim == other.dim
            and self.terms == other.terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dim, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic ----------------------------------------------------------

    def _check_dim(self, other: "Polynomial"):
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(self.dim, other)
        self._check_dim(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = out.get(exp, Fraction(0)) + c
            if s == 0:
                out.pop(exp, None)
            else:
                out[exp] = s
        return Polynomial(self.dim, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.dim, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(self.dim, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _coeff(other)
            if c == 0:
                return Polynomial.zero(self.dim)
            return Polynomial(self.dim, {e: c * v for e, v in self.terms.items()})
        self._check_dim(other)
        if self.is_zero() or other.is_zero():
            return Polynomial.zero(self.dim)
        if self.degree() + other.degree() > DEGREE_CAP:
            raise DegreeCapError(
                f"product degree {self.degree() + other.degree()} exceeds cap {DEGREE_CAP}"
            )
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(exp, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(exp, None)
                else:
                    out[exp] = s
        return Polynomial(self.dim, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.const(self.dim, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- evaluation ----------------------------------------------------------

    def eval(self, x: Sequence):
        """Exact for rational points, float for float points."""
        if len(x) != self.dim:
            raise ValueError("point dimension mismatch")
        exact = all(isinstance(v, (int, Fraction)) for v in x)
        total = Fraction(0) if exact else 0.0
        for exp, c in self.terms.items():
            term = c if exact else float(c)
            for v, e in zip(x, exp):
                if e:
                    term = term * v**e
            total = total + term
        return total

    def eval_grid(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at an (N, dim) float array of points."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, self.dim)
        if pts.shape[1] != self.dim:
            raise ValueError("point array dimension mismatch")
        out = np.zeros(pts.shape[0])
        for exp, c in self.terms.items():
            term = np.full(pts.shape[0], float(c))
            for j, e in enumerate(exp):
                if e:
                    term = term * pts[:, j] ** e
            out += term
        return out

    # -- calculus ------------------------------------------------------------

    def partial(self, j: int) -> "Polynomial":
        out = {}
        for exp, c in self.terms.items():
            e = exp[j]
            if e == 0:
                continue
            nexp = exp[:j] + (e - 1,) + exp[j + 1 :]
            out[nexp] = out.get(nexp, Fraction(0)) + c * e
        return Polynomial(self.dim, out)

    def __repr__(self):
        return f"Polynomial({poly_str(self)!r})"


@dataclass(frozen=True)
class PolyVector:
    """One polynomial per coordinate, e.g. a gradient."""

    components: tuple

    def __post_init__(self):
        dims = {p.dim for p in self.components}
        if len(dims) > 1:
            raise ValueError("mixed dimensions in polynomial vector")

    @property
    def dim(self) -> int:
        return self.components[0].dim

    def eval(self, x):
        return tuple(p.eval(x) for p in self.components)

    def norm_sq_poly(self) -> Polynomial:
        out = Polynomial.zero(self.dim)
        for p in self.components:
            out = out + p * p
        return out


# -- text round-trip --------------------------------------------------------


def poly_str(p: Polynomial) -> str:
    """Render as e.g. '3/2*x1^2*x2 - x3 + 1'; graded-lex term order."""
    if p.is_zero():
        return "0"
    keys = sorted(p.terms, key=lambda e: (sum(e), e), reverse=True)
    pieces = []
    for exp in keys:
        c = p.terms[exp]
        factors = []
        for j, e in enumerate(exp):
            if e == 1:
                factors.append(f"x{j + 1}")
            elif e > 1:
                factors.append(f"x{j + 1}^{e}")
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = str(mag) + "*" + "*".join(factors)
        if not pieces:
            pieces.append(body if c > 0 else "-" + body)
        else:
            pieces.append((" + " if c > 0 else " - ") + body)
    return "".join(pieces)


def parse_poly(text: str, dim: Optional[int] = None) -> Polynomial:
    """Inverse of poly_str; dimension inferred from variable indices if absent."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial string")
    # split into signed chunks
    chunks = []
    sign = 1
    cur = ""
    for ch in s:
        if ch in "+-" and cur != "" and not cur.endswith(("*", "^", "/")):
            chunks.append((sign, cur))
            sign = 1 if ch == "+" else -1
            cur = ""
        elif ch in "+-" and cur == "":
            sign = sign * (1 if ch == "+" else -1)
        else:
            cur += ch
    if cur == "":
        raise ValueError(f"dangling sign in {text!r}")
    chunks.append((sign, cur))

    parsed = []
    max_idx = 0
    for sign, chunk in chunks:
        coeff = Fraction(sign)
        powers: dict = {}
        for factor in chunk.split("*"):
            if factor == "":
                raise ValueError(f"empty factor in {text!r}")
            if factor[0] == "x":
                if "^" in factor:
                    var, _, exp_s = factor.partition("^")
                    e = int(exp_s)
                else:
                    var, e = factor, 1
                idx = int(var[1:])
                if idx < 1 or e < 0:
                    raise ValueError(f"bad factor {factor!r}")
                powers[idx - 1] = powers.get(idx - 1, 0) + e
                max_idx = max(max_idx, idx)
            else:
                coeff *= Fraction(factor)
        parsed.append((coeff, powers))

    d = dim if dim is not None else max(max_idx, 1)
    if max_idx > d:
        raise ValueError(f"variable x{max_idx} exceeds dimension {d}")
    out = Polynomial.zero(d)
    for coeff, powers in parsed:
        exp = [0] * d
        for j, e in powers.items():
            exp[j] = e
        out = out + Polynomial(d, {tuple(exp): coeff})
    return out


# -- reflections -------------------------------------------------------------


def _root_pattern(alpha: Sequence[Fraction]):
    """Classify a root: ('axis', i), ('swap', i, j) or ('general', None)."""
    nz = [(i, c) for i, c in enumerate(alpha) if c != 0]
    if len(nz) == 1:
        return ("axis", nz[0][0], None)
    if len(nz) == 2 and nz[0][1] == -nz[1][1]:
        return ("swap", nz[0][0], nz[1][0])
    return ("general", None, None)


def reflect_poly(rs: RootSystem, root_index: int, p: Polynomial) -> Polynomial:
    """Compose p with the reflection attached to one positive root."""
    if p.dim != rs.dim:
        raise ValueError("polynomial dimension does not match the group")
    alpha = rs.positive_roots[root_index]
    kind, i, j = _root_pattern(alpha)
    if kind == "axis":
        out = {}
        for exp, c in p.terms.items():
            out[exp] = -c if exp[i] % 2 else c
        return Polynomial(p.dim, out)
    if kind == "swap":
        out = {}
        for exp, c in p.terms.items():
            le = list(exp)
            le[i], le[j] = le[j], le[i]
            out[tuple(le)] = c
        return Polynomial(p.dim, out)
    images = []
    nn = Fraction(sum(a * a for a in alpha))
    for m in range(rs.dim):
        # x_m - 2 alpha_m <alpha, x> / |alpha|^2
        t = {}
        em = [0] * rs.dim
        em[m] = 1
        t[tuple(em)] = Fraction(1)
        img = Polynomial(rs.dim, t)
        for l in range(rs.dim):
            if alpha[l] == 0:
                continue
            el = [0] * rs.dim
            el[l] = 1
            img = img - Polynomial(rs.dim, {tuple(el): 2 * alpha[m] * alpha[l] / nn})
        images.append(img)
    return substitute(p, images)


def substitute(p: Polynomial, images: Sequence[Polynomial]) -> Polynomial:
    """p(images[0], ..., images[d-1]); exact composition."""
    if len(images) != p.dim:
        raise ValueError("need one image polynomial per variable")
    dim_out = images[0].dim
    cache: dict = {}

    def power(j: int, e: int) -> Polynomial:
        key = (j, e)
        if key not in cache:
            cache[key] = images[j] ** e
        return cache[key]

    out = Polynomial.zero(dim_out)
    for exp, c in p.terms.items():
        term = Polynomial.const(dim_out, c)
        for j, e in enumerate(exp):
            if e:
                term = term * power(j, e)
        out = out + term
    return out


# -- exact division by a linear form -----------------------------------------


def exact_div_linear(p: Polynomial, coeffs: Sequence) -> Polynomial:
    """Divide p by the linear form sum_j coeffs[j] * x_j, exactly.

    Synthetic division in a pivot variable; the remainder is the evaluation
    at the root hyperplane and must vanish.
    """
    coeffs = [_coeff(c) for c in coeffs]
    if len(coeffs) != p.dim:
        raise ValueError("linear form dimension mismatch")
    pivot = next((i for i, c in enumerate(coeffs) if c != 0), None)
    if pivot is None:
        raise ValueError("zero linear form")
    if p.is_zero():
        return p

    # p = sum_m A_m(x_other) * x_pivot^m  with A_m stored at pivot exponent 0
    layers: dict = {}
    top = 0
    for exp, c in p.terms.items():
        m = exp[pivot]
        stripped = exp[:pivot] + (0,) + exp[pivot + 1 :]
        layers.setdefault(m, {})[stripped] = c
        top = max(top, m)

    # root of the form in the pivot variable: x_pivot = r0(x_other)
    r0_terms = {}
    for j, c in enumerate(coeffs):
        if j == pivot or c == 0:
            continue
        e = [0] * p.dim
        e[j] = 1
        r0_terms[tuple(e)] = -c / coeffs[pivot]
    r0 = Polynomial(p.dim, r0_terms)

    def layer_poly(m: int) -> Polynomial:
        return Polynomial(p.dim, layers.get(m, {}))

    q_layers = [Polynomial.zero(p.dim)] * top  # q'_0 .. q'_{top-1}
    carry = layer_poly(top)
    for m in range(top - 1, -1, -1):
        q_layers[m] = carry
        carry = layer_poly(m) + r0 * carry
    if not carry.is_zero():
        raise ExactDivisionError(
            f"nonzero remainder {poly_str(carry)} dividing {poly_str(p)}"
        )

    out = {}
    inv = 1 / coeffs[pivot]
    for m, qp in enumerate(q_layers):
        for exp, c in qp.terms.items():
            nexp = exp[:pivot] + (exp[pivot] + m,) + exp[pivot + 1 :]
            out[nexp] = out.get(nexp, Fraction(0)) + c * inv
    return Polynomial(p.dim, out)


def divided_difference(rs: RootSystem, root_index: int, p: Polynomial) -> Polynomial:
    """(p - p o sigma_alpha) / <alpha, x> for one positive root."""
    diff = p - reflect_poly(rs, root_index, p)
    if diff.is_zero():
        return Polynomial.zero(p.dim)
    return exact_div_linear(diff, rs.positive_roots[root_index])


# -- differential-difference operators ----------------------------------------


def _direction_vector(rs: RootSystem, direction) -> list:
    if isinstance(direction, int):
        if not 0 <= direction < rs.dim:
            raise ValueError(f"axis {direction} out of range")
        v = [Fraction(0)] * rs.dim
        v[direction] = Fraction(1)
        return v
    v = [_coeff(c) for c in direction]
    if len(v) != rs.dim:
        raise ValueError("direction dimension mismatch")
    return v


def dunkl_derivative(rs: RootSystem, p: Polynomial, direction) -> Polynomial:
    """Dunkl derivative: directional derivative plus weighted difference terms.

    direction may be an axis index or a rational vector xi; the result is
    d_xi p + sum_alpha k(alpha) <alpha, xi> (p - sigma_alpha p) / <alpha, x>.
    """
    rs.require_exact("dunkl derivative")
    if p.dim != rs.dim:
        raise ValueError("polynomial dimension does not match the group")
    xi = _direction_vector(rs, direction)
    out = Polynomial.zero(p.dim)
    for j, c in enumerate(xi):
        if c != 0:
            out = out + c * p.partial(j)
    for i, alpha in enumerate(rs.positive_roots):
        k = rs.multiplicities[i]
        if k == 0:
            continue
        pairing = sum(a * x for a, x in zip(alpha, xi))
        if pairing == 0:
            continue
        out = out + (k * pairing) * divided_difference(rs, i, p)
    return out


def dunkl_gradient(rs: RootSystem, p: Polynomial) -> PolyVector:
    return PolyVector(tuple(dunkl_derivative(rs, p, j) for j in range(rs.dim)))


def dunkl_gradient_norm_sq(rs: RootSystem, p: Polynomial) -> Polynomial:
    """Squared euclidean norm of the Dunkl gradient."""
    return dunkl_gradient(rs, p).norm_sq_poly()


def _laplacian_classic(p: Polynomial) -> Polynomial:
    out = Polynomial.zero(p.dim)
    for j in range(p.dim):
        out = out + p.partial(j).partial(j)
    return out


def dunkl_laplacian(rs: RootSystem, p: Polynomial) -> Polynomial:
    """Reflection-group Laplacian, computed by two independent routes.

    Route one is the sum of squared Dunkl derivatives along the axes.
    Route two adds to the classical Laplacian, for each positive root,
    k(alpha) * (2 <grad p, alpha> - |alpha|^2 h_alpha) / <alpha, x>
    with h_alpha the divided difference of p.  The two must agree exactly.
    """
    rs.require_exact("dunkl laplacian")
    via_squares = Polynomial.zero(p.dim)
    for j in range(rs.dim):
        via_squares = via_squares + dunkl_derivative(rs, dunkl_derivative(rs, p, j), j)

    via_expression = _laplacian_classic(p)
    grad = [p.partial(j) for j in range(p.dim)]
    for i, alpha in enumerate(rs.positive_roots):
        k = rs.multiplicities[i]
        if k == 0:
            continue
        h = divided_difference(rs, i, p)
        directional = Polynomial.zero(p.dim)
        for j, a in enumerate(alpha):
            if a != 0:
                directional = directional + a * grad[j]
        nn = Fraction(sum(a * a for a in alpha))
        inner = 2 * directional - nn * h
        if inner.is_zero():
            continue
        via_expression = via_expression + k * exact_div_linear(inner, alpha)

    if via_squares != via_expression:
        raise CrossPathError(
            "laplacian paths disagree on "
            f"{rs.label()}: squares={poly_str(via_squares)} "
            f"expression={poly_str(via_expression)}"
        )
    return via_squares


def ou_generator(rs: RootSystem, p: Polynomial) -> Polynomial:
    """Drifted generator: dunkl_laplacian(p) - x . grad p."""
    out = dunkl_laplacian(rs, p)
    for j in range(p.dim):
        xj = Polynomial.variable(p.dim, j)
        out = out - xj * p.partial(j)
    return out


def carre_du_champ(
    rs: RootSystem, p: Polynomial, q: Optional[Polynomial] = None
) -> Polynomial:
    """Carre du champ of the drifted generator.

    Defined as (L(pq) - p Lq - q Lp) / 2.  For p == q the independent
    gradient-plus-differences formula

        |grad p|^2 + (1/2) sum_alpha k(alpha) |alpha|^2 h_alpha(p)^2

    is evaluated as well and exact agreement is enforced.
    """
    rs.require_exact("carre du champ")
    same = q is None or q == p
    if q is None:
        q = p
    via_def = ou_generator(rs, p * q) - p * ou_generator(rs, q) - q * ou_generator(rs, p)
    via_def = Fraction(1, 2) * via_def
    if same:
        alt = PolyVector(tuple(p.partial(j) for j in range(p.dim))).norm_sq_poly()
        for i, alpha in enumerate(rs.positive_roots):
            k = rs.multiplicities[i]
            if k == 0:
                continue
            h = divided_difference(rs, i, p)
            nn = Fraction(sum(a * a for a in alpha))
            alt = alt + (k * nn / 2) * (h * h)
        if alt != via_def:
            raise CrossPathError(
                "carre du champ paths disagree on "
                f"{rs.label()}: definition={poly_str(via_def)} gradient={poly_str(alt)}"
            )
    return via_def


def carre_du_champ_pair_gradient_form(
    rs: RootSystem, p: Polynomial, q: Polynomial
) -> Polynomial:
    """Bilinear gradient-form carre du champ (polarized variant)."""
    rs.require_exact("carre du champ")
    out = Polynomial.zero(p.dim)
    for j in range(p.dim):
        out = out + p.partial(j) * q.partial(j)
    for i, alpha in enumerate(rs.positive_roots):
        k = rs.multiplicities[i]
        if k == 0:
            continue
        hp = divided_difference(rs, i, p)
        hq = divided_difference(rs, i, q)
        nn = Fraction(sum(a * a for a in alpha))
        out = out + (k * nn / 2) * (hp * hq)
    return out
