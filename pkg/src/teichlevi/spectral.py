"""Characteristic polynomials of Higgs fields, Hitchin base dimensions, and the
rank-two spectral-curve smoothness test.

For rank two the spectral curve eta^2 + p1 eta + p2 = 0 in the total space of
K becomes (eta + p1/2)^2 = D/4 after completing the square, D = p1^2 - 4 p2.
It is smooth exactly when the quadratic differential D has simple zeros, and
reducible exactly when D is the square of a holomorphic 1-form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import poly
from .curve import Differential, HyperellipticCurve, k_differential_dims
from .gaussian import ONE, ZERO, GaussianRational, format_gaussian
from .riemann_roch import (
    CurvePoint,
    Section,
    as_section,
    canonical_divisor,
    h0,
    local_order,
    section_add,
    section_coordinates,
    section_mul,
)


class ZeroDiscriminant(ValueError):
    """p1^2 - 4 p2 vanishes identically: the spectral curve is not reduced."""


# ---------------------------------------------------------------------------
# characteristic polynomial


@dataclass
class HitchinPoint:
    coefficients: list[Section]  # p_1, ..., p_n with weight(p_i) = i
    coordinates: list[list]  # exact coordinates in the monomial basis of H^0(K^i)

    @property
    def rank(self) -> int:
        return len(self.coefficients)

    @property
    def is_zero(self) -> bool:
        return all(not any(v) for v in self.coordinates)

    def to_json(self) -> list:
        return [[format_gaussian(c) for c in v] for v in self.coordinates]


def _twist_vector(weights: dict[tuple[int, int], int], n: int) -> list[int]:
    """t with weight(r, c) = 1 + t_r - t_c for every nonzero entry."""
    t: list[int | None] = [None] * n
    adj: dict[int, list[tuple[int, int]]] = {i: [] for i in range(n)}
    for (r, c), w in weights.items():
        adj[c].append((r, w - 1))  # t_r = t_c + w - 1
        adj[r].append((c, 1 - w))
    for root in range(n):
        if t[root] is not None:
            continue
        t[root] = 0
        stack = [root]
        while stack:
            i = stack.pop()
            for j, delta in adj[i]:
                if t[j] is None:
                    t[j] = t[i] + delta
                    stack.append(j)
                elif t[j] != t[i] + delta:
                    raise ValueError("entry weights are not those of a twisted Higgs field")
    return [int(v) for v in t]


def _function(s: Section | None) -> Section:
    if s is None:
        return Section(0, (), (), (ONE,))
    return Section(0, s.a, s.b, s.h)


def characteristic_coefficients(curve: HyperellipticCurve, matrix: Sequence[Sequence]) -> list[Section]:
    """Coefficients p_i of det(x - phi) = x^n + p_1 x^(n-1) + ... + p_n.

    Entries are Sections, Differentials or None; entry (r, c) may have any
    weight 1 + t_r - t_c (a conjugate of a K-valued field).  Uses the
    Faddeev-LeVerrier recursion over the function field.
    """
    n = len(matrix)
    entries: dict[tuple[int, int], Section] = {}
    for r in range(n):
        for c in range(n):
            e = matrix[r][c]
            if e is None:
                continue
            s = as_section(curve, e)
            if not s.is_zero:
                entries[(r, c)] = s
    _twist_vector({k: s.weight for k, s in entries.items()}, n)
    a = [[_function(entries.get((r, c))) for c in range(n)] for r in range(n)]
    zero = Section(0, (), (), (ONE,))
    ident = [[Section(0, (ONE,), (), (ONE,)) if r == c else zero for c in range(n)] for r in range(n)]

    def matmul(x, y):
        out = []
        for r in range(n):
            row = []
            for c in range(n):
                acc = zero
                for k in range(n):
                    if x[r][k].is_zero or y[k][c].is_zero:
                        continue
                    acc = section_add(acc, section_mul(curve, x[r][k], y[k][c]))
                row.append(acc.reduced())
            out.append(row)
        return out

    coeffs = []
    m = ident
    for k in range(1, n + 1):
        am = matmul(a, m)
        tr = zero
        for i in range(n):
            tr = section_add(tr, am[i][i])
        ck = tr.scaled(GaussianRational(Fraction(-1, k))).reduced()
        coeffs.append(Section(k, ck.a, ck.b, ck.h))
        m = [[section_add(am[r][c], ck if r == c else zero).reduced() for c in range(n)] for r in range(n)]
    return coeffs


def hitchin_map(bundle_or_matrix, curve: HyperellipticCurve | None = None) -> HitchinPoint:
    """Characteristic coefficients of a Higgs field, as a point of the Hitchin base."""
    if curve is None:
        curve = bundle_or_matrix.curve
        matrix = bundle_or_matrix.higgs_matrix()
    else:
        matrix = bundle_or_matrix
    coeffs = characteristic_coefficients(curve, matrix)
    return HitchinPoint(coeffs, [section_coordinates(curve, c) for c in coeffs])


def hitchin_base_dim(curve: HyperellipticCurve, n: int, cross_check: bool = True) -> int:
    """dim of H^0(K) + ... + H^0(K^n) = n^2 (g-1) + 1."""
    if n < 1:
        raise ValueError("rank must be positive")
    g = curve.genus
    closed = n * n * (g - 1) + 1
    if cross_check:
        k = canonical_divisor(curve)
        total = sum(h0(curve, k * i, check=False).dimension for i in range(1, n + 1))
        if total != closed:
            raise ArithmeticError(f"h0 sum {total} disagrees with n^2(g-1)+1 = {closed}")
    return closed


# ---------------------------------------------------------------------------
# rank-two smoothness


@dataclass(frozen=True)
class SmoothnessVerdict:
    smooth: bool
    reason: str  # "smooth" | "double_zero" | "reducible"
    point: str | None = None

    def to_json(self) -> dict:
        return {"verdict": "smooth" if self.smooth else "not_smooth", "reason": self.reason, "point": self.point}


def _qd_section(curve: HyperellipticCurve, obj, weight: int) -> Section:
    if obj is None:
        return Section(weight, (), (), (ONE,))
    if isinstance(obj, (Section, Differential)):
        s = as_section(curve, obj)
    else:
        coords = list(obj)
        n_even, n_odd = k_differential_dims(curve, weight)
        if len(coords) != n_even + n_odd:
            raise ValueError(f"expected {n_even + n_odd} coordinates for weight {weight}")
        s = Section(weight, tuple(coords[:n_even]), tuple(coords[n_even:]), (ONE,))
    if s.weight != weight:
        raise ValueError(f"expected weight {weight}, got {s.weight}")
    return s


def discriminant(curve: HyperellipticCurve, p1, p2) -> tuple[poly.Poly, poly.Poly]:
    """(P, Q) with p1^2 - 4 p2 = (P + yQ) (dx/y)^2."""
    s1 = _qd_section(curve, p1, 1)
    s2 = _qd_section(curve, p2, 2)
    d = section_add(section_mul(curve, s1, s1), s2.scaled(GaussianRational(-4)))
    coords = section_coordinates(curve, d.reduced())
    n_even, _ = k_differential_dims(curve, 2)
    return poly.trim(coords[:n_even]), poly.trim(coords[n_even:])


def _is_square_up_to_constant(p: poly.Poly) -> bool:
    """Every root of p has even multiplicity (Yun's square-free decomposition)."""
    p = poly.monic(p)
    i = 1
    dp = poly.derivative(p)
    c = poly.gcd(p, dp)
    w = poly.exact_div(p, c)
    while poly.degree(w) > 0:
        y = poly.gcd(w, c)
        z = poly.exact_div(w, y)
        if poly.degree(z) > 0 and i % 2:
            return False
        w, c = y, poly.exact_div(c, y)
        i += 1
    return True


def _strip_root(p: poly.Poly, x0) -> poly.Poly:
    lin = (-x0, ONE)
    while p:
        q = poly.exact_div(p, lin)
        if q is None:
            return p
        p = q
    return p


def smoothness_n2(curve: HyperellipticCurve, p1, p2) -> SmoothnessVerdict:
    """Smoothness and irreducibility of the rank-two spectral curve of (p1, p2)."""
    P, Q = discriminant(curve, p1, p2)
    if not P and not Q:
        raise ZeroDiscriminant("p1^2 - 4 p2 = 0: the spectral curve is non-reduced")
    g = curve.genus
    if not Q and _is_square_up_to_constant(P):
        return SmoothnessVerdict(False, "reducible")
    for lam in curve.branch_points:
        if not poly.evaluate(P, lam) and not poly.evaluate(Q, lam):
            return SmoothnessVerdict(False, "double_zero", f"branch point {format_gaussian(lam)}")
    for sheet in (1, -1):
        ord_inf = local_order(curve, P, Q, CurvePoint.infinity(sheet)) + 2 * (g - 1)
        if ord_inf >= 2:
            return SmoothnessVerdict(False, "double_zero", f"infinity{'+' if sheet > 0 else '-'}")
    F = curve.f_poly
    d = poly.gcd(P, Q) if Q else poly.monic(P)
    p_red = poly.exact_div(P, d) if P else ()
    q_red = poly.exact_div(Q, d) if Q else ()
    norm = poly.sub(poly.mul(p_red, p_red), poly.mul(F, poly.mul(q_red, q_red)))
    w = poly.mul(d, norm)
    for lam in curve.branch_points:
        w = _strip_root(w, lam)
    if poly.degree(w) > 0:
        rep = poly.gcd(w, poly.derivative(w))
        if poly.degree(rep) > 0:
            coeffs = ", ".join(format_gaussian(c) for c in rep)
            return SmoothnessVerdict(False, "double_zero", f"root of polynomial [{coeffs}] (low degree first)")
    return SmoothnessVerdict(True, "smooth")


def random_quadratic_differential(curve: HyperellipticCurve, rng, box: int = 20) -> list:
    """Coordinates with small random Gaussian-integer entries."""
    n_even, n_odd = k_differential_dims(curve, 2)
    return [
        GaussianRational(int(rng.integers(-box, box + 1)), int(rng.integers(-box, box + 1)))
        for _ in range(n_even + n_odd)
    ]
