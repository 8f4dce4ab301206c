"""Finite reflection groups used by the rest of the package.

A group is described by its positive roots and a reflection-invariant
multiplicity function k >= 0.  Three families are supported:

* ``rank1``   -- the sign flip on the line, positive root e_1;
* ``z2:d``    -- independent sign flips on R^d, positive roots e_1..e_d,
                 one multiplicity per axis;
* ``sym:d``   -- coordinate permutations on R^d, positive roots e_i - e_j
                 (i < j), a single multiplicity.

Root coordinates and rational multiplicities are kept as ``Fraction`` so the
symbolic operator layer stays exact.  Float multiplicities are accepted but
disable the exact paths.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence, Union

Scalar = Union[Fraction, float]
Vector = tuple


class GroupKind(Enum):
    RANK1 = "rank1"
    Z2POWER = "z2"
    SYMMETRIC = "sym"


class CapabilityError(RuntimeError):
    """Requested operation is not available for this group family."""


def _as_scalar(v) -> Scalar:
    """Coerce a user-supplied multiplicity to Fraction when it is exact."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)  # accepts "1/2" and "0.5"
    if isinstance(v, float):
        return v
    raise TypeError(f"unsupported multiplicity value {v!r}")


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return sum(a * b for a, b in zip(u, v))


@dataclass(frozen=True)
class RootSystem:
    """Positive roots plus multiplicities for one reflection group."""

    kind: GroupKind
    dim: int
    positive_roots: tuple
    multiplicities: tuple

    def __post_init__(self):
        if len(self.positive_roots) != len(self.multiplicities):
            raise ValueError("one multiplicity per positive root required")
        for alpha in self.positive_roots:
            if len(alpha) != self.dim:
                raise ValueError("root dimension mismatch")
        for k in self.multiplicities:
            if (isinstance(k, Fraction) and k < 0) or (isinstance(k, float) and k < 0):
                raise ValueError("multiplicities must be nonnegative")
        _check_invariance(self)

    # -- basic quantities -------------------------------------------------

    @property
    def exact(self) -> bool:
        """True when every multiplicity is a Fraction (exact symbolic mode)."""
        return all(isinstance(k, Fraction) for k in self.multiplicities)

    @property
    def gamma(self) -> Scalar:
        """Sum of multiplicities over positive roots (weight degree / 2)."""
        total = Fraction(0) if self.exact else 0.0
        for k in self.multiplicities:
            total = total + k
        return total

    @property
    def num_positive_roots(self) -> int:
        return len(self.positive_roots)

    def root_norm_sq(self, i: int):
        alpha = self.positive_roots[i]
        return dot(alpha, alpha)

    def require_exact(self, what: str) -> None:
        if not self.exact:
            raise CapabilityError(
                f"{what} needs rational multiplicities, got floats"
            )

    def require_numeric_measure(self, what: str) -> None:
        if self.kind is GroupKind.SYMMETRIC:
            raise CapabilityError(
                f"{what} is unavailable for sym:{self.dim}: "
                "the weight normalization has no product form here"
            )

    # -- geometry ---------------------------------------------------------

    def reflect(self, i: int, x: Sequence) -> tuple:
        """Image of x under the reflection in the hyperplane of root i."""
        alpha = self.positive_roots[i]
        # exact when x is rational: Fraction arithmetic throughout
        scale = 2 * dot(alpha, x) / dot(alpha, alpha)
        return tuple(xj - scale * aj for xj, aj in zip(x, alpha))

    def weight(self, x: Sequence) -> float:
        """Product of |<alpha, x>|^(2 k(alpha)) over positive roots."""
        w = 1.0
        for alpha, k in zip(self.positive_roots, self.multiplicities):
            w *= abs(float(dot(alpha, x))) ** (2 * float(k))
        return w

    def root_orbits(self) -> list:
        """Orbits of the positive roots under the generated group.

        Roots are identified up to sign.  Returned as a list of lists of
        root indices.
        """
        reps = [_sign_normalize(alpha) for alpha in self.positive_roots]
        index = {rep: i for i, rep in enumerate(reps)}
        seen = set()
        orbits = []
        for start in range(len(reps)):
            if start in seen:
                continue
            orbit = {start}
            frontier = [self.positive_roots[start]]
            while frontier:
                v = frontier.pop()
                for j in range(len(reps)):
                    img = _sign_normalize(self.reflect(j, v))
                    i = index.get(img)
                    if i is None:
                        raise ValueError(
                            "positive roots are not closed under the group "
                            f"(image {img} of a root is not a root)"
                        )
                    if i not in orbit:
                        orbit.add(i)
                        frontier.append(self.positive_roots[i])
            seen |= orbit
            orbits.append(sorted(orbit))
        return orbits

    # -- presentation -----------------------------------------------------

    def label(self) -> str:
        ks = ",".join(_fmt_scalar(k) for k in self.multiplicities)
        if self.kind is GroupKind.RANK1:
            return f"rank1:k={ks}"
        if self.kind is GroupKind.Z2POWER:
            return f"z2:{self.dim}:k={ks}"
        return f"sym:{self.dim}:k={_fmt_scalar(self.multiplicities[0])}"

    def __repr__(self):
        return f"RootSystem({self.label()})"


def _sign_normalize(v) -> tuple:
    """Canonical representative of {v, -v}: first nonzero entry positive."""
    for c in v:
        if c != 0:
            return tuple(v) if c > 0 else tuple(-a for a in v)
    return tuple(v)


def _check_invariance(rs: RootSystem) -> None:
    """Multiplicities must be constant on root orbits."""
    for orbit in rs.root_orbits():
        ks = {rs.multiplicities[i] for i in orbit}
        if len(ks) > 1:
            raise ValueError(
                f"multiplicity not constant on root orbit {orbit}: {sorted(map(float, ks))}"
            )


def _fmt_scalar(k: Scalar) -> str:
    if isinstance(k, Fraction):
        if k.denominator == 1:
            return str(k.numerator)
        # prefer decimal when it is exact and short, else a/b
        f = float(k)
        if Fraction(str(f)) == k and len(str(f)) <= 6:
            return str(f)
        return f"{k.numerator}/{k.denominator}"
    return repr(k)


# -- constructors ----------------------------------------------------------


def rank1(k) -> RootSystem:
    """The sign-flip group on R^1 with multiplicity k."""
    return RootSystem(GroupKind.RANK1, 1, ((Fraction(1),),), (_as_scalar(k),))


def z2power(d: int, ks) -> RootSystem:
    """Sign flips per axis on R^d; ks is one multiplicity per axis."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if not isinstance(ks, (list, tuple)):
        ks = [ks] * d
    if len(ks) != d:
        raise ValueError(f"expected {d} multiplicities, got {len(ks)}")
    roots = tuple(
        tuple(Fraction(1) if j == i else Fraction(0) for j in range(d))
        for i in range(d)
    )
    return RootSystem(GroupKind.Z2POWER, d, roots, tuple(_as_scalar(k) for k in ks))


def symmetric_group(d: int, k) -> RootSystem:
    """Coordinate permutations of R^d with equal multiplicity on e_i - e_j."""
    if d < 2:
        raise ValueError("dimension must be >= 2")
    roots = []
    for i in range(d):
        for j in range(i + 1, d):
            v = [Fraction(0)] * d
            v[i] = Fraction(1)
            v[j] = Fraction(-1)
            roots.append(tuple(v))
    km = _as_scalar(k)
    return RootSystem(GroupKind.SYMMETRIC, d, tuple(roots), tuple([km] * len(roots)))


def parse_group(spec: str) -> RootSystem:
    """Parse a group string: rank1:k=1 | z2:<d>:k=<k1,..,kd> | sym:<d>:k=<k>."""
    parts = spec.strip().split(":")
    try:
        if parts[0] == "rank1":
            if len(parts) != 2 or not parts[1].startswith("k="):
                raise ValueError
            return rank1(parts[1][2:])
        if parts[0] == "z2":
            if len(parts) != 3 or not parts[2].startswith("k="):
                raise ValueError
            d = int(parts[1])
            ks = [s for s in parts[2][2:].split(",") if s != ""]
            if len(ks) == 1:
                ks = ks * d
            return z2power(d, ks)
        if parts[0] == "sym":
            if len(parts) != 3 or not parts[2].startswith("k="):
                raise ValueError
            return symmetric_group(int(parts[1]), parts[2][2:])
        raise ValueError
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(
            f"cannot parse group {spec!r}; expected rank1:k=K, z2:D:k=K1,..,KD "
            "or sym:D:k=K"
        ) from exc
