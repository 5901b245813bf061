"""Divisors and exact Riemann-Roch spaces on hyperelliptic curves.

Functions on the curve are written (A(x) + y B(x)) / h(x).  For a divisor D we
clear the affine poles with a polynomial h, which leaves an element of the
coordinate ring k[x] + y k[x]; bounding its pole order at the two points over
infinity bounds deg A and deg B, and the remaining zero/pole requirements are
linear conditions on the coefficients, read off from local expansions.

Points over a Gaussian-rational x-coordinate have y = +-sqrt(F(x)), which may
need a quadratic extension.  Only fibres where the divisor treats the two
sheets differently need y at all, and those may involve at most one extension.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb
from typing import Iterable, Mapping, Sequence

from . import poly
from .curve import (
    Differential,
    HyperellipticCurve,
    k_differential_dims,
)
from .gaussian import (
    ONE,
    ZERO,
    GaussianRational,
    QuadraticField,
    exact,
    format_gaussian,
    gaussian_sqrt,
    parse_gaussian,
    to_base_if_possible,
)
from .linalg import nullspace, rank


class RiemannRochError(ArithmeticError):
    """Internal consistency failure of the Riemann-Roch engine."""


class UnsupportedSupport(ValueError):
    """Divisor support needs more than one quadratic extension of Q(i)."""


class ProductNotHolomorphic(ValueError):
    pass


# ---------------------------------------------------------------------------
# points and divisors


@dataclass(frozen=True)
class CurvePoint:
    """A point of the curve.

    ``x is None`` means a point over infinity; ``sheet`` is then the sign of
    y / x^(g+1) there.  Affine points carry ``sheet = +-1`` selecting
    y = sheet * sqrt(F(x)); branch points carry the canonical marker 0.
    """

    x: GaussianRational | None
    sheet: int

    @classmethod
    def infinity(cls, sheet: int = 1) -> "CurvePoint":
        if sheet not in (1, -1):
            raise ValueError("sheet must be +1 or -1")
        return cls(None, sheet)

    @classmethod
    def affine(cls, curve: HyperellipticCurve, x, sheet: int = 1) -> "CurvePoint":
        x = exact(x)
        if curve.is_branch_point(x):
            return cls(x, 0)
        if sheet not in (1, -1):
            raise ValueError("sheet must be +1 or -1")
        return cls(x, sheet)

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    @property
    def is_branch(self) -> bool:
        return self.x is not None and self.sheet == 0

    def conjugate(self) -> "CurvePoint":
        """Image under the hyperelliptic involution."""
        return CurvePoint(self.x, -self.sheet)

    def sort_key(self):
        if self.x is None:
            return (1, Fraction(0), Fraction(0), -self.sheet)
        return (0, self.x.re, self.x.im, -self.sheet)

    def to_json(self) -> dict:
        return {"x": "inf" if self.x is None else format_gaussian(self.x), "sheet": self.sheet}

    @classmethod
    def from_json(cls, curve: HyperellipticCurve, payload: Mapping) -> "CurvePoint":
        if payload["x"] == "inf":
            return cls.infinity(int(payload["sheet"]))
        return cls.affine(curve, parse_gaussian(payload["x"]), int(payload.get("sheet", 1)))

    def __str__(self):
        if self.x is None:
            return f"inf{'+' if self.sheet > 0 else '-'}"
        if self.sheet == 0:
            return f"W({format_gaussian(self.x)})"
        return f"({format_gaussian(self.x)}, {'+' if self.sheet > 0 else '-'})"


class Divisor:
    """Finite formal sum of curve points; zero multiplicities are pruned."""

    __slots__ = ("_m",)

    def __init__(self, mults: Mapping[CurvePoint, int] | Iterable[tuple[CurvePoint, int]] = ()):
        items = mults.items() if isinstance(mults, Mapping) else mults
        acc: dict[CurvePoint, int] = {}
        for pt, k in items:
            acc[pt] = acc.get(pt, 0) + int(k)
        self._m = {pt: k for pt, k in sorted(acc.items(), key=lambda kv: kv[0].sort_key()) if k}

    @classmethod
    def point(cls, pt: CurvePoint, k: int = 1) -> "Divisor":
        return cls({pt: k})

    def __getitem__(self, pt: CurvePoint) -> int:
        return self._m.get(pt, 0)

    def items(self):
        return self._m.items()

    def points(self) -> list[CurvePoint]:
        return list(self._m)

    @property
    def degree(self) -> int:
        return sum(self._m.values())

    def __add__(self, other: "Divisor") -> "Divisor":
        return Divisor(list(self._m.items()) + list(other._m.items()))

    def __neg__(self) -> "Divisor":
        return Divisor({p: -k for p, k in self._m.items()})

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __mul__(self, k: int) -> "Divisor":
        return Divisor({p: k * m for p, m in self._m.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Divisor) and self._m == other._m

    def __hash__(self):
        return hash(tuple(self._m.items()))

    def is_effective(self) -> bool:
        return all(k >= 0 for k in self._m.values())

    def __repr__(self):
        if not self._m:
            return "Divisor(0)"
        return "Divisor(" + " + ".join(f"{k}*{p}" for p, k in self._m.items()) + ")"

    def to_json(self) -> list:
        return [{"point": p.to_json(), "multiplicity": k} for p, k in self._m.items()]

    @classmethod
    def from_json(cls, curve: HyperellipticCurve, payload: Sequence) -> "Divisor":
        return cls([(CurvePoint.from_json(curve, e["point"]), int(e["multiplicity"])) for e in payload])


def canonical_divisor(curve: HyperellipticCurve) -> Divisor:
    """div(dx/y): dx/y is regular and nonvanishing on the affine part and
    vanishes to order g-1 at each point over infinity."""
    g = curve.genus
    return Divisor({CurvePoint.infinity(1): g - 1, CurvePoint.infinity(-1): g - 1})


def random_point(curve: HyperellipticCurve, rng, box: int = 50, denom: int = 7) -> CurvePoint:
    """A 'generic' affine point with Gaussian-rational x drawn from a box."""
    while True:
        re = Fraction(int(rng.integers(-box * denom, box * denom + 1)), denom)
        im = Fraction(int(rng.integers(-box * denom, box * denom + 1)), denom)
        x = GaussianRational(re, im)
        if curve.is_branch_point(x):
            continue
        sheet = 1 if rng.integers(0, 2) else -1
        return CurvePoint.affine(curve, x, sheet)


def random_divisor(curve: HyperellipticCurve, rng, degree: int | None = None) -> Divisor:
    """Random divisor mixing generic points, branch points and both points at infinity.

    One generic fibre carries independent multiplicities on its two sheets;
    a second generic fibre enters symmetrically, so at most one quadratic
    extension is needed.  With ``degree`` the multiplicity at infinity+ is
    adjusted to hit it.
    """
    p = random_point(curve, rng)
    q = random_point(curve, rng)
    parts = [
        (p, int(rng.integers(-2, 3))),
        (p.conjugate(), int(rng.integers(-2, 3))),
        (q, int(rng.integers(-1, 2))),
    ]
    parts.append((q.conjugate(), parts[-1][1]))
    for idx in rng.choice(len(curve.branch_points), size=2, replace=False):
        parts.append((CurvePoint(curve.branch_points[int(idx)], 0), int(rng.integers(-2, 4))))
    parts.append((CurvePoint.infinity(-1), int(rng.integers(-2, 3))))
    d = Divisor(parts)
    k_inf = int(rng.integers(-2, 3)) if degree is None else degree - d.degree
    return d + Divisor.point(CurvePoint.infinity(1), k_inf)


def affine_transform_divisor(curve: HyperellipticCurve, divisor: Divisor, a, b) -> tuple[HyperellipticCurve, Divisor]:
    """Image of a divisor under x' = a x + b, y' = a^(g+1) y.

    Points over infinity keep their sheet since y/x^(g+1) is unchanged.  When
    F(x0) is not a square in Q(i) the sheet label is kept: relabelling the
    generator of the extension is a field automorphism, so dimensions do not
    depend on it.
    """
    from .curve import mobius_transform

    a, b = exact(a), exact(b)
    image = mobius_transform(curve, (a, b, 0, 1)).curve
    g = curve.genus
    scale = a ** (g + 1)
    parts = []
    for pt, k in divisor.items():
        if pt.x is None:
            parts.append((pt, k))
            continue
        x1 = a * pt.x + b
        if pt.sheet == 0:
            parts.append((CurvePoint(x1, 0), k))
            continue
        root = gaussian_sqrt(poly.evaluate(curve.f_poly, pt.x))
        sheet = pt.sheet
        if root is not None:
            new_root = gaussian_sqrt(poly.evaluate(image.f_poly, x1))
            sheet = pt.sheet if scale * root == new_root else -pt.sheet
        parts.append((CurvePoint(x1, sheet), k))
    return image, Divisor(parts)


# ---------------------------------------------------------------------------
# y-coordinates


class FieldContext:
    """Exact y-coordinates for a set of affine points, in one common field."""

    def __init__(self, curve: HyperellipticCurve, points: Iterable[CurvePoint]):
        self.curve = curve
        self.field: QuadraticField | None = None
        self._root: dict[GaussianRational, object] = {}
        for pt in points:
            if pt.x is None or pt.sheet == 0 or pt.x in self._root:
                continue
            self._root[pt.x] = self._resolve(pt.x)

    def _resolve(self, x):
        val = poly.evaluate(self.curve.f_poly, x)
        r = gaussian_sqrt(val)
        if r is not None:
            return r
        if self.field is None:
            self.field = QuadraticField(val)
            return self.field.gen()
        ratio = gaussian_sqrt(val / self.field.c)
        if ratio is None:
            raise UnsupportedSupport(
                f"points over x={val} and over the generator sqrt({self.field.c}) "
                "need two independent square roots"
            )
        return self.field.gen() * ratio

    def y(self, pt: CurvePoint):
        if pt.x is None:
            raise ValueError("points at infinity have no finite y")
        if pt.sheet == 0:
            return ZERO
        if pt.x not in self._root:
            self._root[pt.x] = self._resolve(pt.x)
        return self._root[pt.x] * pt.sheet


# ---------------------------------------------------------------------------
# local expansions


def _inf_series(curve: HyperellipticCurve, n: int) -> list:
    """W(t) = sqrt(t^(2g+2) F(1/t)), so that y = +-t^-(g+1) W(t) near infinity."""
    rev = list(reversed(curve.f_poly))
    w = [ZERO] + rev[1:]
    return poly.series_sqrt_one_plus(w, n)


def _affine_y_series(curve: HyperellipticCurve, x0, y0, n: int) -> list:
    """y(x0 + t) as a power series, at a non-branch point with y(x0) = y0."""
    shifted = poly.shift(curve.f_poly, x0)
    f0 = shifted[0]
    w = [ZERO] + [c / f0 for c in shifted[1:]]
    s = poly.series_sqrt_one_plus(w, n)
    return [c * y0 for c in s]


def _shift_series(p: poly.Poly, x0, n: int) -> list:
    s = list(poly.shift(p, x0)) if p else []
    return (s + [ZERO] * n)[:n]


def local_order(curve: HyperellipticCurve, a: poly.Poly, b: poly.Poly, pt: CurvePoint, ctx: FieldContext | None = None) -> int | None:
    """Order of vanishing of A(x) + y B(x) at ``pt`` (None for the zero function)."""
    a, b = poly.trim(a), poly.trim(b)
    if not a and not b:
        return None
    g = curve.genus
    if pt.is_branch:
        oa = 2 * poly.order_at(a, pt.x) if a else None
        ob = 2 * poly.order_at(b, pt.x) + 1 if b else None
        return min(v for v in (oa, ob) if v is not None)
    top = max(poly.degree(a), poly.degree(b) + g + 1 if b else -1)
    n = 2 * top + 2
    if pt.is_infinity:
        w = _inf_series(curve, n + g + 2)
        lo = -top
        coeffs = [ZERO] * (n + top + 1)
        for j, c in enumerate(a):
            coeffs[-j - lo] = coeffs[-j - lo] + c
        for j, c in enumerate(b):
            for i in range(len(w)):
                e = i - j - g - 1
                if e - lo < len(coeffs) and w[i]:
                    coeffs[e - lo] = coeffs[e - lo] + c * w[i] * pt.sheet
        for k, c in enumerate(coeffs):
            if c:
                return k + lo
        raise RiemannRochError("nonzero function vanishes to impossible order at infinity")
    ctx = ctx or FieldContext(curve, [pt])
    y0 = ctx.y(pt)
    ys = _affine_y_series(curve, pt.x, y0, n)
    sa = _shift_series(a, pt.x, n)
    sb = _shift_series(b, pt.x, n)
    tot = [u + v for u, v in zip(sa, poly.truncated_mul(ys, sb, n))]
    for k, c in enumerate(tot):
        if c:
            return k
    raise RiemannRochError("nonzero function vanishes to impossible order")


# ---------------------------------------------------------------------------
# sections


@dataclass(frozen=True)
class Section:
    """Rational section (A + y B) / h * (dx/y)^weight of K^weight."""

    weight: int
    a: poly.Poly
    b: poly.Poly = ()
    h: poly.Poly = (ONE,)

    def __post_init__(self):
        object.__setattr__(self, "a", poly.trim(self.a))
        object.__setattr__(self, "b", poly.trim(self.b))
        object.__setattr__(self, "h", poly.trim(self.h))
        if not self.h:
            raise ZeroDivisionError("zero denominator")

    @property
    def is_zero(self) -> bool:
        return not self.a and not self.b

    def reduced(self) -> "Section":
        """Cancel the common polynomial factor of numerator and denominator."""
        if self.is_zero:
            return Section(self.weight, (), (), (ONE,))
        common = poly.gcd(poly.gcd(self.a, self.b) if self.b else self.a, self.h) if self.a else poly.gcd(self.b, self.h)
        lead = self.h[-1]
        if poly.degree(common) > 0:
            a = poly.exact_div(self.a, common) if self.a else ()
            b = poly.exact_div(self.b, common) if self.b else ()
            h = poly.exact_div(self.h, common)
        else:
            a, b, h = self.a, self.b, self.h
        lead = h[-1]
        inv = lead.inverse()
        return Section(self.weight, poly.scale(a, inv), poly.scale(b, inv), poly.scale(h, inv))

    def scaled(self, c) -> "Section":
        return Section(self.weight, poly.scale(self.a, c), poly.scale(self.b, c), self.h)

    def __str__(self):
        def fmt(p):
            return " + ".join(f"({_fmt_scalar(c)})x^{k}" for k, c in enumerate(p) if c) or "0"

        txt = f"[{fmt(self.a)}] + y[{fmt(self.b)}]"
        if poly.degree(self.h) > 0 or self.h[0] != ONE:
            txt = f"({txt}) / ({fmt(self.h)})"
        return f"{txt} * (dx/y)^{self.weight}"

    def to_json(self) -> dict:
        return {
            "weight": self.weight,
            "a": [_fmt_scalar(c) for c in self.a],
            "b": [_fmt_scalar(c) for c in self.b],
            "h": [_fmt_scalar(c) for c in self.h],
        }


def _fmt_scalar(c) -> str:
    c = to_base_if_possible(c)
    if isinstance(c, GaussianRational):
        return format_gaussian(c)
    return f"{format_gaussian(c.a)} + ({format_gaussian(c.b)})*sqrt({format_gaussian(c.field.c)})"


def _y_power(curve: HyperellipticCurve, e: int) -> Section:
    """y^e as a weight-0 section."""
    F = curve.f_poly
    if e >= 0:
        fp = poly.power(F, e // 2)
        return Section(0, fp, ()) if e % 2 == 0 else Section(0, (), fp)
    e = -e
    den = poly.power(F, (e + 1) // 2)
    return Section(0, (ONE,), (), den) if e % 2 == 0 else Section(0, (), (ONE,), den)


def section_from_differential(curve: HyperellipticCurve, d: Differential) -> Section:
    yp = _y_power(curve, d.weight - d.y_power)
    return Section(d.weight, poly.mul(yp.a, d.numerator), poly.mul(yp.b, d.numerator), yp.h)


def as_section(curve: HyperellipticCurve, obj) -> Section:
    if isinstance(obj, Section):
        return obj
    if isinstance(obj, Differential):
        return section_from_differential(curve, obj)
    raise TypeError(f"expected Section or Differential, got {type(obj).__name__}")


def section_mul(curve: HyperellipticCurve, s: Section, t: Section) -> Section:
    F = curve.f_poly
    a = poly.add(poly.mul(s.a, t.a), poly.mul(F, poly.mul(s.b, t.b)))
    b = poly.add(poly.mul(s.a, t.b), poly.mul(s.b, t.a))
    return Section(s.weight + t.weight, a, b, poly.mul(s.h, t.h))


def section_add(s: Section, t: Section) -> Section:
    if s.weight != t.weight:
        raise ValueError("cannot add sections of different weights")
    if s.h == t.h:
        return Section(s.weight, poly.add(s.a, t.a), poly.add(s.b, t.b), s.h)
    a = poly.add(poly.mul(s.a, t.h), poly.mul(t.a, s.h))
    b = poly.add(poly.mul(s.b, t.h), poly.mul(t.b, s.h))
    return Section(s.weight, a, b, poly.mul(s.h, t.h)).reduced()


def section_coordinates(curve: HyperellipticCurve, s: Section) -> list:
    """Coordinates of a holomorphic section of K^m in the monomial basis of H^0(K^m).

    (P + yQ) (dx/y)^m = P dx^m / y^m + Q dx^m / y^(m-1).
    """
    m = s.weight
    n_even, n_odd = k_differential_dims(curve, m)
    if s.is_zero:
        return [ZERO] * (n_even + n_odd)
    p = poly.exact_div(s.a, s.h) if s.a else ()
    q = poly.exact_div(s.b, s.h) if s.b else ()
    if p is None or q is None:
        raise ProductNotHolomorphic(f"{s} has affine poles")
    if len(p) > n_even or len(q) > n_odd:
        raise ProductNotHolomorphic(f"{s} has poles at infinity")
    return list(p) + [ZERO] * (n_even - len(p)) + list(q) + [ZERO] * (n_odd - len(q))


def section_order(curve: HyperellipticCurve, s: Section, pt: CurvePoint, ctx: FieldContext | None = None) -> int | None:
    """Order of the section at a point (None for the zero section)."""
    if s.is_zero:
        return None
    num = local_order(curve, s.a, s.b, pt, ctx)
    den = local_order(curve, s.h, (), pt, ctx)
    extra = s.weight * (curve.genus - 1) if pt.is_infinity else 0
    return num - den + extra


# ---------------------------------------------------------------------------
# Riemann-Roch spaces


@dataclass
class LinearSystem:
    """Basis of L(D) = {f : div f + D >= 0} as functions (A + yB)/h."""

    divisor: Divisor
    dimension: int
    basis: list[Section] = field(default_factory=list)
    field: QuadraticField | None = None
    dual_dimension: int | None = None

    def as_sections(self, weight: int) -> list[Section]:
        """Same functions viewed as f * (dx/y)^weight."""
        return [Section(weight, f.a, f.b, f.h) for f in self.basis]


def h0(curve: HyperellipticCurve, divisor: Divisor, check: bool = True) -> LinearSystem:
    """Exact dimension and basis of L(D).

    With ``check`` the dual space L(K - D) is computed as well and the
    Riemann-Roch identity l(D) - l(K - D) = deg D - g + 1 is enforced.
    """
    g = curve.genus
    inf_mult = {1: divisor[CurvePoint.infinity(1)], -1: divisor[CurvePoint.infinity(-1)]}

    groups: dict[GaussianRational, dict[int, int]] = {}
    for pt, k in divisor.items():
        if pt.x is not None:
            groups.setdefault(pt.x, {})[pt.sheet] = k

    # y-coordinates are only needed on fibres where the two sheets differ
    ctx = FieldContext(
        curve,
        [CurvePoint(x0, 1) for x0, sh in groups.items() if 0 not in sh and sh.get(1, 0) != sh.get(-1, 0)],
    )
    h: poly.Poly = (ONE,)
    exps: dict[GaussianRational, int] = {}
    for x0, sheets in groups.items():
        if 0 in sheets:
            e = ceil(max(0, sheets[0]) / 2)
        else:
            e = max(0, *sheets.values())
        exps[x0] = e
        if e:
            h = poly.mul(h, poly.power((-x0, ONE), e))
    dh = poly.degree(h)
    top = max(inf_mult.values()) + dh

    if top < 0:
        result = LinearSystem(divisor, 0, [], ctx.field)
    else:
        n_a = top + 1
        n_b = max(0, top - g)
        rows = _conditions(curve, ctx, groups, exps, inf_mult, dh, top, n_a, n_b)
        vecs = nullspace(rows, n_a + n_b) if rows else nullspace([], n_a + n_b)
        basis = [Section(0, poly.trim(v[:n_a]), poly.trim(v[n_a:]), h) for v in vecs]
        result = LinearSystem(divisor, len(basis), basis, ctx.field)

    if check:
        dual = h0(curve, canonical_divisor(curve) - divisor, check=False)
        result.dual_dimension = dual.dimension
        if result.dimension - dual.dimension != divisor.degree - g + 1:
            raise RiemannRochError(
                f"l(D)={result.dimension}, l(K-D)={dual.dimension}, deg D={divisor.degree}, g={g}"
            )
    return result


def _taylor_rows(x0, count: int, offset: int, size: int, ncols: int) -> list[list]:
    """Rows forcing (x - x0)^count to divide the polynomial in columns offset..offset+size."""
    powers = [ONE]
    for _ in range(size):
        powers.append(powers[-1] * x0)
    rows = []
    for k in range(count):
        row = [ZERO] * ncols
        for j in range(k, size):
            row[offset + j] = powers[j - k] * comb(j, k)
        rows.append(row)
    return rows


def _conditions(curve, ctx, groups, exps, inf_mult, dh, top, n_a, n_b) -> list[list]:
    g = curve.genus
    ncols = n_a + n_b
    rows: list[list] = []
    for x0, sheets in groups.items():
        e = exps[x0]
        if 0 in sheets:
            # ord(A + yB) = min(2 ord A, 2 ord B + 1) at a branch point
            r = 2 * e - sheets[0]
            rows += _taylor_rows(x0, max(0, ceil(r / 2)), 0, n_a, ncols)
            rows += _taylor_rows(x0, max(0, ceil((r - 1) / 2)), n_a, n_b, ncols)
            continue
        need = {s: e - sheets.get(s, 0) for s in (1, -1)}
        # vanishing to order r on both sheets means (x - x0)^r divides A and B
        common = max(0, min(need.values()))
        rows += _taylor_rows(x0, common, 0, n_a, ncols)
        rows += _taylor_rows(x0, common, n_a, n_b, ncols)
        for sheet in (1, -1):
            r = need[sheet]
            if r <= common:
                continue
            y0 = ctx.y(CurvePoint(x0, sheet))
            ys = _affine_y_series(curve, x0, y0, r)
            cols = [_shift_series(poly.monomial(j), x0, r) for j in range(n_a)]
            for j in range(n_b):
                cols.append(poly.truncated_mul(ys, _shift_series(poly.monomial(j), x0, r), r))
            for k in range(common, r):
                rows.append([col[k] for col in cols])
    # at infinity x^j = t^-j and y x^j = +-t^(-j-g-1) W(t)
    lowest = min(inf_mult.values()) + dh
    w = _inf_series(curve, max(1, top - lowest + 1)) if lowest < top else None
    for sheet in (1, -1):
        need = inf_mult[sheet] + dh  # ord >= -need
        if need >= top:
            continue
        for ex in range(-top, -need):
            row = [ZERO] * ncols
            if 0 <= -ex < n_a:
                row[-ex] = ONE
            for j in range(n_b):
                i = ex + j + g + 1
                if 0 <= i < len(w):
                    row[n_a + j] = w[i] * sheet
            rows.append(row)
    return rows


def l_dimension(curve: HyperellipticCurve, divisor: Divisor) -> int:
    return h0(curve, divisor, check=False).dimension


# ---------------------------------------------------------------------------
# products of linear systems


def product_vectors(curve: HyperellipticCurve, left: Sequence, right: Sequence) -> list[list]:
    """QD-basis coordinates of every pairwise product left[i] * right[j]."""
    rows = []
    for s in left:
        s = as_section(curve, s)
        for t in right:
            t = as_section(curve, t)
            prod = section_mul(curve, s, t)
            if prod.weight != 2:
                raise ProductNotHolomorphic(f"product has weight {prod.weight}, expected 2")
            rows.append(section_coordinates(curve, prod))
    return rows


def product_space_dim(curve: HyperellipticCurve, left: Sequence, right: Sequence) -> int:
    """Exact dimension of span{a * b} inside H^0(K^2)."""
    rows = product_vectors(curve, left, right)
    if not rows:
        return 0
    return rank(rows, len(rows[0]))


def basis_differentials(system: LinearSystem, curve: HyperellipticCurve) -> list[Differential]:
    """Reduce each basis function f of L(K - D) to the polynomial 1-form f dx/y.

    Works when every basis function is a polynomial in x with Gaussian-rational
    coefficients, which holds for L(K - p).
    """
    out = []
    for f in system.basis:
        if f.b:
            raise ValueError("basis function has a y-odd part; not a monomial 1-form")
        q = poly.exact_div(f.a, f.h)
        if q is None:
            raise ValueError("basis function has affine poles")
        coeffs = [to_base_if_possible(c) for c in q]
        if any(not isinstance(c, GaussianRational) for c in coeffs):
            raise ValueError("basis function has irrational coefficients")
        out.append(Differential(1, tuple(coeffs), 1))
    return out
