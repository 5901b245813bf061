"""Homology bases, periods of x^j dx/y, and the Riemann period matrix.

Cuts join consecutive branch points (P0,P1), (P2,P3), ...; the segments
(P1,P2), (P3,P4), ... between them are the gaps.  On the plane slit along the
cuts the branch

    y(x) = prod_l s_l(x),   s_l(x) = (x - m_l) * sqrt((x - a_l)(x - b_l) / (x - m_l)^2)

(principal square root, m_l the midpoint of cut l) is analytic: each factor
is analytic off its own segment and behaves like x - m_l at infinity.  With
this explicit branch no continuation bookkeeping is needed.

Elementary cycles: alpha_k encircles cut k counterclockwise; gamma_c runs
along gap c on one sheet and back on the other.  Their only intersections
are alpha_j . gamma_c = delta_{jc} - delta_{j,c+1}, which gives a symplectic
basis A_c = alpha_c, B_c = gamma_c + ... + gamma_{g-1}.

Every segment integral uses x = m + r sin(theta), which absorbs the inverse
square-root endpoint behaviour, followed by Gauss-Legendre quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.integrate import quad_vec
from scipy.special import roots_legendre

from .curve import HyperellipticCurve
from .gaussian import GaussianRational


class PeriodError(ArithmeticError):
    pass


class QuadratureNonConvergent(PeriodError):
    def __init__(self, message: str, segment: str | None = None, drift: float | None = None):
        super().__init__(message)
        self.segment = segment
        self.drift = drift


class InvalidCutConfiguration(ValueError):
    """The branch-point polyline P0-P1-...-P(2g+1) intersects itself."""


# ---------------------------------------------------------------------------
# homology


@dataclass(frozen=True)
class HomologyBasis:
    """Symplectic basis written as integer words in the elementary cycles.

    Elementary cycles are ordered (alpha_0, ..., alpha_g, gamma_0, ..., gamma_{g-1}).
    """

    genus: int
    cuts: tuple[tuple[int, int], ...]
    gaps: tuple[tuple[int, int], ...]
    a_words: np.ndarray = field(compare=False)
    b_words: np.ndarray = field(compare=False)

    @property
    def words(self) -> np.ndarray:
        return np.vstack([self.a_words, self.b_words])

    def elementary_intersections(self) -> np.ndarray:
        g = self.genus
        n = 2 * g + 1
        e = np.zeros((n, n), dtype=np.int64)
        for j in range(g + 1):
            for c in range(g):
                v = int(j == c) - int(j == c + 1)
                e[j, g + 1 + c] = v
                e[g + 1 + c, j] = -v
        return e

    def intersection_matrix(self) -> np.ndarray:
        w = self.words
        return w @ self.elementary_intersections() @ w.T

    def transformed(self, m: np.ndarray) -> "HomologyBasis":
        """New basis (A'; B') = M (A; B) for an integer symplectic M."""
        m = np.asarray(m, dtype=np.int64)
        _check_symplectic(m)
        w = m @ self.words
        g = self.genus
        return HomologyBasis(g, self.cuts, self.gaps, w[:g], w[g:])

    def to_json(self) -> dict:
        return {
            "cuts": [list(c) for c in self.cuts],
            "gaps": [list(c) for c in self.gaps],
            "elementary_order": [f"alpha_{k}" for k in range(self.genus + 1)]
            + [f"gamma_{k}" for k in range(self.genus)],
            "a_words": self.a_words.tolist(),
            "b_words": self.b_words.tolist(),
        }


def standard_symplectic(g: int) -> np.ndarray:
    j = np.zeros((2 * g, 2 * g), dtype=np.int64)
    j[:g, g:] = np.eye(g, dtype=np.int64)
    j[g:, :g] = -np.eye(g, dtype=np.int64)
    return j


def _check_symplectic(m: np.ndarray) -> None:
    g = m.shape[0] // 2
    j = standard_symplectic(g)
    if m.shape != (2 * g, 2 * g) or not np.array_equal(m @ j @ m.T, j):
        raise ValueError("matrix is not integer symplectic")


def build_homology(curve: HyperellipticCurve) -> HomologyBasis:
    g = curve.genus
    _check_polyline(curve.branch_points)
    cuts = tuple((2 * k, 2 * k + 1) for k in range(g + 1))
    gaps = tuple((2 * c + 1, 2 * c + 2) for c in range(g))
    a = np.zeros((g, 2 * g + 1), dtype=np.int64)
    b = np.zeros((g, 2 * g + 1), dtype=np.int64)
    for c in range(g):
        a[c, c] = 1
        b[c, g + 1 + c :] = 1
    basis = HomologyBasis(g, cuts, gaps, a, b)
    if not np.array_equal(basis.intersection_matrix(), standard_symplectic(g)):
        raise AssertionError("homology bookkeeping is not symplectic")
    return basis


def _orient(p: GaussianRational, q: GaussianRational, r: GaussianRational) -> int:
    v = (q.re - p.re) * (r.im - p.im) - (q.im - p.im) * (r.re - p.re)
    return (v > 0) - (v < 0)


def _on_segment(p, q, r) -> bool:
    return min(p.re, q.re) <= r.re <= max(p.re, q.re) and min(p.im, q.im) <= r.im <= max(p.im, q.im)


def _segments_meet(p1, p2, q1, q2) -> bool:
    o1, o2 = _orient(p1, p2, q1), _orient(p1, p2, q2)
    o3, o4 = _orient(q1, q2, p1), _orient(q1, q2, p2)
    if o1 != o2 and o3 != o4:
        return True
    return (
        (o1 == 0 and _on_segment(p1, p2, q1))
        or (o2 == 0 and _on_segment(p1, p2, q2))
        or (o3 == 0 and _on_segment(q1, q2, p1))
        or (o4 == 0 and _on_segment(q1, q2, p2))
    )


def _check_polyline(points) -> None:
    """Exact test that the polyline through the branch points is simple."""
    segs = [(points[i], points[i + 1]) for i in range(len(points) - 1)]
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            p1, p2 = segs[i]
            q1, q2 = segs[j]
            if j == i + 1:
                # adjacent segments share p2 == q1; they must not fold back
                if _orient(p1, p2, q2) == 0 and _on_segment(p1, p2, q2) or (
                    _orient(q1, q2, p1) == 0 and _on_segment(q1, q2, p1)
                ):
                    raise InvalidCutConfiguration(f"segments {i} and {j} overlap")
                continue
            if _segments_meet(p1, p2, q1, q2):
                raise InvalidCutConfiguration(
                    f"segments {i} and {j} of the branch-point polyline intersect; reorder the branch points"
                )


def polyline_is_simple(points) -> bool:
    try:
        _check_polyline([GaussianRational.coerce(p) for p in points])
    except InvalidCutConfiguration:
        return False
    return True


# ---------------------------------------------------------------------------
# quadrature


@lru_cache(maxsize=32)
@lru_cache(maxsize=32)
def _nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    # O(n) Newton-based rule; numpy's leggauss is cubic in n
    t, w = roots_legendre(n)
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


def _factor(xm, xa, xb):
    return xm * np.sqrt(xa * xb / (xm * xm))


# below this relative precision double-precision integrands cannot do better
ADAPTIVE_FLOOR = 1e-14


def _segment_integrands(points: np.ndarray):
    """One callable per elementary cycle (alpha_0..alpha_g, gamma_0..gamma_{g-1}).

    Each maps Gauss parameters t in [-1, 1] to the g x len(t) integrand of
    x^j dx/y after the substitution x = mid + r sin(pi t / 2); integrating
    against dt over [-1, 1] gives the period.
    """
    points = np.asarray(points, dtype=complex)
    g = (len(points) - 2) // 2
    a_end, b_end = points[0::2], points[1::2]
    mids = 0.5 * (a_end + b_end)
    jpow = np.arange(g)[:, None]

    def loop(k):
        r = 0.5 * (b_end[k] - a_end[k])

        def f(t):
            x = mids[k] + r * np.sin(0.5 * np.pi * t)
            q = np.ones_like(x)
            for l in range(g + 1):
                if l != k:
                    q *= _factor(x - mids[l], x - a_end[l], x - b_end[l])
            # boundary value of s_k on the right of a_k -> b_k is -i r cos(theta)
            return 2j * (0.5 * np.pi) * x[None, :] ** jpow / q[None, :]

        return f

    def gap(c):
        start, end = b_end[c], a_end[c + 1]
        gm = 0.5 * (start + end)
        gr = 0.5 * (end - start)

        def f(t):
            u, v = 1.0 - t, 1.0 + t
            x = gm + gr * np.sin(0.5 * np.pi * t)
            cos_t = np.sin(0.5 * np.pi * np.minimum(u, v))
            d_start = 2.0 * gr * np.sin(0.25 * np.pi * v) ** 2
            d_end = -2.0 * gr * np.sin(0.25 * np.pi * u) ** 2
            y = _factor(x - mids[c], x - a_end[c], d_start) * _factor(x - mids[c + 1], d_end, x - b_end[c + 1])
            for l in range(g + 1):
                if l not in (c, c + 1):
                    y *= _factor(x - mids[l], x - a_end[l], x - b_end[l])
            return 2.0 * (0.5 * np.pi) * x[None, :] ** jpow * (gr * cos_t / y)[None, :]

        return f

    return [loop(k) for k in range(g + 1)] + [gap(c) for c in range(g)]


def elementary_periods(points: np.ndarray, n: int) -> np.ndarray:
    """Periods of x^j dx/y over (alpha_0..alpha_g, gamma_0..gamma_{g-1}) with n nodes.

    Returns a g x (2g+1) complex array (rows = monomial forms).
    """
    t, w = _nodes(n)
    return np.stack([f(t) @ w for f in _segment_integrands(points)], axis=1)


def adaptive_elementary_periods(points: np.ndarray, precision: float) -> tuple[np.ndarray, int, float]:
    """Globally adaptive Gauss-Kronrod per segment, for branch points close to a segment."""
    cols, evals, err = [], 0, 0.0
    g = (len(points) - 2) // 2
    for idx, f in enumerate(_segment_integrands(points)):
        def vec(t, f=f):
            z = f(np.array([t]))[:, 0]
            return np.concatenate([z.real, z.imag])

        res = quad_vec(vec, -1.0, 1.0, epsabs=0.0, epsrel=precision, limit=20000, full_output=True)
        val, est, info = res[0], res[1], res[2]
        if not info.success:
            raise QuadratureNonConvergent(
                f"adaptive quadrature failed on {_segment_name(g, idx)} (error estimate {est:.3g})",
                segment=_segment_name(g, idx),
                drift=float(est),
            )
        cols.append(val[:g] + 1j * val[g:])
        evals += int(info.neval)
        err = max(err, float(est))
    out = np.stack(cols, axis=1)
    return out, evals, err / max(1.0, float(np.max(np.abs(out))))


def _segment_name(g: int, idx: int) -> str:
    return f"alpha_{idx}" if idx <= g else f"gamma_{idx - g - 1}"


def converged_elementary_periods(
    points: np.ndarray, precision: float = 1e-12, start: int = 24, max_nodes: int = 6144
) -> tuple[np.ndarray, int, float]:
    """Double the node count until every elementary period moves by < precision (relative)."""
    g = (len(points) - 2) // 2
    n = start
    prev = elementary_periods(points, n)
    while True:
        n2 = 2 * n
        cur = elementary_periods(points, n2)
        scale = max(1.0, float(np.max(np.abs(cur))))
        diff = np.abs(cur - prev)
        drift = float(np.max(diff)) / scale
        if drift < precision:
            return cur, n2, drift
        if n2 >= max_nodes:
            worst = int(np.unravel_index(np.argmax(diff), diff.shape)[1])
            raise QuadratureNonConvergent(
                f"periods did not converge to {precision:g} with {n2} nodes "
                f"(drift {drift:.3g}, worst segment {_segment_name(g, worst)})",
                segment=_segment_name(g, worst),
                drift=drift,
            )
        n, prev = n2, cur


# ---------------------------------------------------------------------------
# period data


@dataclass
class PeriodData:
    """Raw periods of the monomial 1-forms and the normalized period matrix.

    ``a_periods[j, c]`` is the integral of x^j dx/y over A_c; likewise for B.
    ``orientation`` is the sign applied to the gap cycles so that Im tau > 0.
    """

    basis: HomologyBasis
    a_periods: np.ndarray
    b_periods: np.ndarray
    tau: np.ndarray
    error_estimate: float
    nodes: int
    orientation: int
    symmetry_residual: float
    bilinear_residual: float
    min_im_eig: float
    rule: str = "gauss"  # "gauss": fixed n-node rule; "adaptive": Gauss-Kronrod, n = evaluations

    @property
    def genus(self) -> int:
        return self.tau.shape[0]

    @property
    def im_tau(self) -> np.ndarray:
        return 0.5 * (self.tau.imag + self.tau.imag.T)

    @property
    def re_tau(self) -> np.ndarray:
        return 0.5 * (self.tau.real + self.tau.real.T)

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "homology": self.basis.to_json(),
            "a_periods": complex_matrix_json(self.a_periods),
            "b_periods": complex_matrix_json(self.b_periods),
            "tau": complex_matrix_json(self.tau),
            "error_estimate": self.error_estimate,
            "nodes": self.nodes,
            "rule": self.rule,
            "orientation": self.orientation,
            "symmetry_residual": self.symmetry_residual,
            "bilinear_residual": self.bilinear_residual,
            "min_im_tau_eigenvalue": self.min_im_eig,
        }


def complex_matrix_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.atleast_2d(m)]


def _assemble(basis: HomologyBasis, elem: np.ndarray, orientation: int):
    signs = np.ones(elem.shape[1])
    signs[basis.genus + 1 :] = orientation
    e = elem * signs[None, :]
    pa = e @ basis.a_words.T.astype(float)
    pb = e @ basis.b_words.T.astype(float)
    tau = np.linalg.solve(pa, pb)
    return pa, pb, tau


def period_matrix(
    curve: HyperellipticCurve | np.ndarray,
    basis: HomologyBasis | None = None,
    precision: float = 1e-12,
    tol_sym: float = 1e-8,
    nodes: int | None = None,
) -> PeriodData:
    """Periods and tau for the curve.

    ``curve`` may also be a complex array of branch points (the numeric lab
    moves branch points off the Gaussian-rational lattice); then ``basis``
    defaults to the consecutive pairing.  With ``nodes`` given, a fixed rule
    is used and the error estimate compares against half as many nodes.
    """
    if isinstance(curve, HyperellipticCurve):
        points = curve.complex_points()
        if basis is None:
            basis = build_homology(curve)
    else:
        points = np.asarray(curve, dtype=complex)
        if basis is None:
            basis = _default_basis((len(points) - 2) // 2)
    rule = "gauss"
    if nodes is None:
        try:
            elem, n, drift = converged_elementary_periods(points, precision)
        except QuadratureNonConvergent:
            if precision < ADAPTIVE_FLOOR:
                raise
            elem, n, drift = adaptive_elementary_periods(points, precision)
            rule = "adaptive"
    else:
        n = int(nodes)
        elem = elementary_periods(points, n)
        coarse = elementary_periods(points, max(4, n // 2))
        drift = float(np.max(np.abs(elem - coarse))) / max(1.0, float(np.max(np.abs(elem))))

    pa, pb, tau = _assemble(basis, elem, 1)
    orientation = 1
    if np.linalg.eigvalsh(0.5 * (tau.imag + tau.imag.T))[0] <= 0:
        pa, pb, tau = _assemble(basis, elem, -1)
        orientation = -1

    sym = float(np.max(np.abs(tau - tau.T)))
    scale = max(1.0, float(np.max(np.abs(pa))), float(np.max(np.abs(pb)))) ** 2
    bil = float(np.max(np.abs(pa @ pb.T - pb @ pa.T))) / scale
    im_eig = float(np.linalg.eigvalsh(0.5 * (tau.imag + tau.imag.T))[0])
    if sym > tol_sym:
        raise QuadratureNonConvergent(f"tau symmetry residual {sym:.3g} exceeds {tol_sym:g}", drift=drift)
    if im_eig <= 0:
        raise QuadratureNonConvergent(f"Im tau not positive definite (min eigenvalue {im_eig:.3g})")
    return PeriodData(basis, pa, pb, tau, drift, n, orientation, sym, bil, im_eig, rule)


@lru_cache(maxsize=16)
def _default_basis_cached(g: int) -> HomologyBasis:
    a = np.zeros((g, 2 * g + 1), dtype=np.int64)
    b = np.zeros((g, 2 * g + 1), dtype=np.int64)
    for c in range(g):
        a[c, c] = 1
        b[c, g + 1 + c :] = 1
    return HomologyBasis(
        g,
        tuple((2 * k, 2 * k + 1) for k in range(g + 1)),
        tuple((2 * c + 1, 2 * c + 2) for c in range(g)),
        a,
        b,
    )


def _default_basis(g: int) -> HomologyBasis:
    return _default_basis_cached(g)


def transform_periods(data: PeriodData, m: np.ndarray, tol_sym: float = 1e-8) -> PeriodData:
    """Re-express the periods in the basis (A'; B') = M (A; B)."""
    m = np.asarray(m, dtype=np.int64)
    _check_symplectic(m)
    g = data.genus
    pi = np.hstack([data.a_periods, data.b_periods]) @ m.T.astype(float)
    pa, pb = pi[:, :g], pi[:, g:]
    tau = np.linalg.solve(pa, pb)
    sym = float(np.max(np.abs(tau - tau.T)))
    im_eig = float(np.linalg.eigvalsh(0.5 * (tau.imag + tau.imag.T))[0])
    scale = max(1.0, float(np.max(np.abs(pa))), float(np.max(np.abs(pb)))) ** 2
    bil = float(np.max(np.abs(pa @ pb.T - pb @ pa.T))) / scale
    return PeriodData(
        data.basis.transformed(m), pa, pb, tau, data.error_estimate, data.nodes, data.orientation, sym, bil, im_eig,
        data.rule,
    )


def character_periods(data: PeriodData, hol_coeffs, normalized: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """A- and B-periods of sum_i c_i omega_i.

    With ``normalized`` the coefficients refer to the A-normalized basis
    (whose A-periods are the identity and B-periods are tau); otherwise to
    the monomial basis x^i dx/y.
    """
    c = np.asarray(hol_coeffs, dtype=complex)
    if normalized:
        return c.copy(), data.tau @ c
    return c @ data.a_periods, c @ data.b_periods


def normalized_forms(data: PeriodData) -> np.ndarray:
    """Row i holds the monomial coefficients of the i-th A-normalized form."""
    return np.linalg.inv(data.a_periods)


def exact_fraction_points(points) -> list[GaussianRational]:
    """Round complex floats to nearby Gaussian rationals (for display and curve files)."""
    out = []
    for z in points:
        z = complex(z)
        out.append(
            GaussianRational(Fraction(z.real).limit_denominator(10**6), Fraction(z.imag).limit_denominator(10**6))
        )
    return out
