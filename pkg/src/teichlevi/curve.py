"""Exact hyperelliptic curves y^2 = prod(x - lambda_i) in the even-degree model.

The ordered tuple of 2g+2 branch points is the marking.  Two points lie over
x = infinity and neither is a branch point, so the pole-order bookkeeping at
infinity is the same for both sheets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import poly
from .gaussian import ONE, ZERO, GaussianRational, exact, format_gaussian, gaussian_sqrt


class CurveError(ValueError):
    """Invalid curve data."""


class DuplicateBranchPoint(CurveError):
    pass


class TooFewBranchPoints(CurveError):
    pass


class OddDegreeModel(CurveError):
    pass


class BranchPointAtInfinity(CurveError):
    pass


@dataclass(frozen=True)
class HyperellipticCurve:
    branch_points: tuple[GaussianRational, ...]

    def __post_init__(self):
        pts = tuple(GaussianRational.coerce(p) for p in self.branch_points)
        object.__setattr__(self, "branch_points", pts)
        if len(pts) % 2:
            raise OddDegreeModel(
                f"{len(pts)} branch points: the even-degree model needs an even count "
                "(send one branch point to infinity's complement with mobius_transform)"
            )
        if len(pts) < 6:
            raise TooFewBranchPoints(f"{len(pts)} branch points give genus < 2")
        if len(set(pts)) != len(pts):
            seen, dup = set(), None
            for p in pts:
                if p in seen:
                    dup = p
                    break
                seen.add(p)
            raise DuplicateBranchPoint(f"branch point {dup} appears more than once")

    @property
    def genus(self) -> int:
        return (len(self.branch_points) - 2) // 2

    @cached_property
    def f_poly(self) -> poly.Poly:
        """F(x) = prod (x - lambda_i), monic of degree 2g+2."""
        return poly.from_roots(self.branch_points)

    @cached_property
    def branch_set(self) -> frozenset:
        return frozenset(self.branch_points)

    def is_branch_point(self, x) -> bool:
        return exact(x) in self.branch_set

    def complex_points(self) -> np.ndarray:
        return np.array([complex(p) for p in self.branch_points])

    def to_json(self) -> dict:
        return {"branch_points": [format_gaussian(p) for p in self.branch_points]}

    @classmethod
    def from_json(cls, payload: dict) -> "HyperellipticCurve":
        if "branch_points" not in payload:
            raise CurveError("curve JSON needs a 'branch_points' list")
        return new_curve(payload["branch_points"])


def new_curve(branch_points: Iterable) -> HyperellipticCurve:
    return HyperellipticCurve(tuple(GaussianRational.coerce(p) for p in branch_points))


@dataclass(frozen=True)
class Differential:
    """numerator(x) * (dx)^weight / y^y_power."""

    weight: int
    numerator: poly.Poly
    y_power: int

    def __post_init__(self):
        object.__setattr__(self, "numerator", poly.trim(self.numerator))

    @property
    def is_zero(self) -> bool:
        return not self.numerator

    def order_at_branch(self, curve: HyperellipticCurve, lam) -> int:
        # local parameter t with x - lam = t^2, dx = 2t dt, y = t * unit
        return 2 * poly.order_at(self.numerator, lam) + self.weight - self.y_power

    def order_at_infinity(self, curve: HyperellipticCurve) -> int:
        # t = 1/x, dx = -dt/t^2, y = +-t^-(g+1) * unit; same on both sheets
        g = curve.genus
        return -poly.degree(self.numerator) - 2 * self.weight + self.y_power * (g + 1)

    def is_holomorphic(self, curve: HyperellipticCurve) -> bool:
        if self.is_zero:
            return True
        if any(self.order_at_branch(curve, lam) < 0 for lam in curve.branch_points):
            return False
        return self.order_at_infinity(curve) >= 0

    def scaled(self, c) -> "Differential":
        return Differential(self.weight, poly.scale(self.numerator, exact(c)), self.y_power)

    def __str__(self):
        terms = []
        for k, c in enumerate(self.numerator):
            if c:
                terms.append(f"({format_gaussian(c)})x^{k}")
        num = " + ".join(terms) or "0"
        return f"[{num}] (dx)^{self.weight} / y^{self.y_power}"

    def to_json(self) -> dict:
        return {
            "weight": self.weight,
            "y_power": self.y_power,
            "numerator": [format_gaussian(c) for c in self.numerator],
        }


@dataclass(frozen=True)
class TangentDirection:
    """A tangent vector to Teichmueller space, in one of two encodings.

    ``qd_functional`` gives exact values on :func:`quadratic_basis`;
    ``branch_velocity`` gives velocities of the 2g-1 movable branch points in
    the chart where three branch points are pinned.
    """

    qd_functional: tuple | None = None
    branch_velocity: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        if (self.qd_functional is None) == (self.branch_velocity is None):
            raise ValueError("exactly one of qd_functional / branch_velocity must be given")
        if self.qd_functional is not None:
            object.__setattr__(self, "qd_functional", tuple(exact(c) for c in self.qd_functional))
        else:
            object.__setattr__(self, "branch_velocity", np.asarray(self.branch_velocity, dtype=complex))


def one_form_basis(curve: HyperellipticCurve) -> list[Differential]:
    return [Differential(1, poly.monomial(i), 1) for i in range(curve.genus)]


def k_differential_basis(curve: HyperellipticCurve, m: int) -> list[Differential]:
    """Monomial basis of H^0(K^m): y-even part first, then the y-odd part."""
    g = curve.genus
    if m < 1:
        raise ValueError("weight must be at least 1")
    even = [Differential(m, poly.monomial(j), m) for j in range(m * (g - 1) + 1)]
    odd_top = m * (g - 1) - (g + 1)
    odd = [Differential(m, poly.monomial(j), m - 1) for j in range(odd_top + 1)]
    return even + odd


def quadratic_basis(curve: HyperellipticCurve) -> list[Differential]:
    return k_differential_basis(curve, 2)


def k_differential_dims(curve: HyperellipticCurve, m: int) -> tuple[int, int]:
    """(#even, #odd) sizes of the monomial basis of H^0(K^m)."""
    g = curve.genus
    return m * (g - 1) + 1, max(0, m * (g - 1) - g)


def differential_coordinates(curve: HyperellipticCurve, d: Differential) -> list:
    """Coordinates of a holomorphic m-differential in :func:`k_differential_basis`."""
    m = d.weight
    n_even, n_odd = k_differential_dims(curve, m)
    if not d.is_holomorphic(curve):
        raise ValueError(f"{d} is not holomorphic")
    coords = [ZERO] * (n_even + n_odd)
    if d.y_power == m:
        for k, c in enumerate(d.numerator):
            coords[k] = c
    elif d.y_power == m - 1:
        for k, c in enumerate(d.numerator):
            coords[n_even + k] = c
    elif not d.is_zero:
        raise ValueError("only y-powers m and m-1 have monomial coordinates")
    return coords


@dataclass(frozen=True)
class MobiusMap:
    """Result of :func:`mobius_transform`.

    ``one_form_matrix[i]`` holds the coordinates of the image of ``x^i dx/y``
    in the new one-form basis, up to the common factor ``1/c`` where
    ``c**2 == c_squared``.  In ``quad_matrix`` the y-even block is exact and
    the y-odd block carries the same ``1/c`` factor.  When ``c`` is a Gaussian
    rational (always true for affine maps) the factors are already applied.
    """

    source: HyperellipticCurve
    curve: HyperellipticCurve
    coefficients: tuple
    one_form_matrix: list
    quad_matrix: list
    c_squared: GaussianRational
    c: GaussianRational | None

    def map_point(self, x):
        a, b, c, d = self.coefficients
        return (a * exact(x) + b) / (c * exact(x) + d)


def mobius_transform(curve: HyperellipticCurve, coefficients: Sequence) -> MobiusMap:
    """Push the curve forward along x' = (a x + b) / (c x + d)."""
    a, b, c, d = (exact(t) for t in coefficients)
    det = a * d - b * c
    if not det:
        raise ValueError("degenerate Mobius map (ad - bc = 0)")
    new_points = []
    for lam in curve.branch_points:
        den = c * lam + d
        if not den:
            raise BranchPointAtInfinity(f"branch point {lam} is sent to infinity")
        new_points.append((a * lam + b) / den)
    new_curve_ = new_curve(new_points)
    g = curve.genus
    c_sq = ONE
    for lam in curve.branch_points:
        c_sq = c_sq * (c * lam + d)
    root = gaussian_sqrt(c_sq)
    inv_c = root.inverse() if root is not None else ONE
    inv_c2 = c_sq.inverse()

    # x = (d x' - b) / (a - c x')
    num_lin = (-b, d)
    den_lin = (a, -c)

    def image(j: int, den_power: int) -> poly.Poly:
        return poly.mul(poly.power(num_lin, j), poly.power(den_lin, den_power))

    one_rows = []
    for j in range(g):
        p = poly.scale(image(j, g - 1 - j), det * inv_c)
        one_rows.append(_padded(p, g))
    n_even, n_odd = k_differential_dims(curve, 2)
    quad_rows = []
    for i in range(n_even):
        p = poly.scale(image(i, 2 * g - 2 - i), det * det * inv_c2)
        quad_rows.append(_padded(p, n_even) + [ZERO] * n_odd)
    for j in range(n_odd):
        p = poly.scale(image(j, g - 3 - j), det * det * inv_c)
        quad_rows.append([ZERO] * n_even + _padded(p, n_odd))
    return MobiusMap(curve, new_curve_, (a, b, c, d), one_rows, quad_rows, c_sq, root)


def _padded(p: poly.Poly, n: int) -> list:
    if len(p) > n:
        raise ValueError("polynomial exceeds basis size")
    return list(p) + [ZERO] * (n - len(p))


def inverse_mobius(coefficients: Sequence) -> tuple:
    a, b, c, d = (exact(t) for t in coefficients)
    return (d, -b, -c, a)
