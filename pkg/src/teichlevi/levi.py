"""Finite-difference Levi form of the energy in branch-point coordinates.

Three branch points are pinned (0, 1, -1 when present, otherwise the first
three) and the remaining 2g-1 are complex coordinates z_j = x_j + i y_j.
With H the real Hessian in (x, y),

    L_jk = d^2 E / (d zbar_j d z_k) = (H_xx + H_yy)_jk / 4 + i (H_yx - H_xy)_jk / 4,

so that the Levi form is v^H L v.  Every energy evaluation is a full period
computation with a fixed Gauss-Legendre rule, which keeps the quadrature
error a smooth function of the stencil point.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .abelian import AbelianCharacter, PredictedKernel, energy, predicted_kernel_map, solve_phi
from .curve import HyperellipticCurve
from .periods import PeriodData, period_matrix


class LeviError(ArithmeticError):
    pass


class StencilCollision(LeviError):
    pass


class AmbiguousKernel(LeviError):
    pass


class DegenerateDirection(LeviError):
    pass


PINNED_VALUES = (0, 1, -1)


def chart(points) -> tuple[np.ndarray, list[int], list[int]]:
    """(complex points, pinned indices, movable indices)."""
    z = np.asarray(points, dtype=complex)
    pinned = []
    for v in PINNED_VALUES:
        hits = np.flatnonzero(np.abs(z - v) == 0)
        if hits.size:
            pinned.append(int(hits[0]))
    if len(pinned) < 3:
        pinned = [0, 1, 2]
    movable = [i for i in range(z.size) if i not in pinned]
    return z, sorted(pinned), movable


def _points(curve) -> np.ndarray:
    if isinstance(curve, HyperellipticCurve):
        return curve.complex_points()
    return np.asarray(curve, dtype=complex)


def diameter(points: np.ndarray) -> float:
    return float(np.max(np.abs(points[:, None] - points[None, :])))


def _check_collision(points: np.ndarray, h: float) -> None:
    d = np.abs(points[:, None] - points[None, :])
    np.fill_diagonal(d, np.inf)
    if d.min() <= 4.0 * h:
        raise StencilCollision(f"step {h:.3g} is too large for minimal branch-point separation {d.min():.3g}")


@dataclass
class LeviReport:
    points: np.ndarray
    character: AbelianCharacter
    step: float
    step_abs: float
    nodes: int
    energy: float
    levi: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    hermitian_residual: float
    tol_psd: float
    tol_ker: float
    movable: list[int]
    dtau: np.ndarray | None = None
    period_data: PeriodData | None = field(default=None, repr=False)
    angles: list[float] = field(default_factory=list)
    kappa: list[float] = field(default_factory=list)

    @property
    def norm(self) -> float:
        return float(np.max(np.abs(self.eigenvalues))) if self.eigenvalues.size else 0.0

    @property
    def near_zero(self) -> np.ndarray:
        return np.flatnonzero(np.abs(self.eigenvalues) < self.tol_ker * self.norm)

    @property
    def kernel_vectors(self) -> np.ndarray:
        return self.eigenvectors[:, self.near_zero]

    @property
    def psd(self) -> bool:
        return bool(self.eigenvalues[0] >= -self.tol_psd * self.norm)

    @property
    def degenerate(self) -> bool:
        return self.norm == 0.0 or self.character.is_trivial

    def to_json(self) -> dict:
        return {
            "branch_points": [[float(z.real), float(z.imag)] for z in self.points],
            "movable": self.movable,
            "character": self.character.to_json(),
            "step_relative": self.step,
            "step_absolute": self.step_abs,
            "nodes": self.nodes,
            "energy": self.energy,
            "levi_matrix": [[[float(z.real), float(z.imag)] for z in row] for row in self.levi],
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "hermitian_residual": self.hermitian_residual,
            "norm": self.norm,
            "near_zero_count": int(self.near_zero.size),
            "psd": self.psd,
            "degenerate": self.degenerate,
            "tol_psd": self.tol_psd,
            "tol_ker": self.tol_ker,
            "kernel_angles": self.angles,
            "kappa": self.kappa,
        }


def _energy_at(points: np.ndarray, chi: AbelianCharacter, nodes: int) -> float:
    return energy(period_matrix(points, nodes=nodes), chi)


def real_hessian(f, x0: np.ndarray, h: float) -> np.ndarray:
    """Central-difference Hessian: 3-point diagonal, 4-point mixed."""
    n = x0.size
    f0 = f(x0)
    hess = np.zeros((n, n))
    plus, minus = np.empty(n), np.empty(n)
    for a in range(n):
        e = np.zeros(n)
        e[a] = h
        plus[a], minus[a] = f(x0 + e), f(x0 - e)
        hess[a, a] = (plus[a] - 2.0 * f0 + minus[a]) / (h * h)
    for a in range(n):
        for b in range(a + 1, n):
            ea = np.zeros(n)
            eb = np.zeros(n)
            ea[a] = h
            eb[b] = h
            val = (f(x0 + ea + eb) - f(x0 + ea - eb) - f(x0 - ea + eb) + f(x0 - ea - eb)) / (4.0 * h * h)
            hess[a, b] = hess[b, a] = val
    return hess


def levi_from_hessian(hess: np.ndarray) -> np.ndarray:
    n = hess.shape[0] // 2
    hxx, hyy = hess[:n, :n], hess[n:, n:]
    hxy, hyx = hess[:n, n:], hess[n:, :n]
    return 0.25 * (hxx + hyy) + 0.25j * (hyx - hxy)


def _base(curve, precision: float, nodes: int | None):
    points = _points(curve)
    base = period_matrix(curve, precision=precision) if nodes is None else period_matrix(points, nodes=nodes)
    if nodes is None and base.rule == "adaptive":
        # no fixed rule reaches the precision; stencil points re-run the adaptive path
        return points, base, None
    return points, base, base.nodes if nodes is None else nodes


def levi_form(
    curve,
    chi: AbelianCharacter,
    h: float = 1e-3,
    precision: float = 1e-13,
    nodes: int | None = None,
    tol_psd: float = 1e-4,
    tol_ker: float = 1e-3,
    with_dtau: bool = True,
) -> LeviReport:
    """Levi matrix of E at the curve, step ``h`` relative to the branch-point diameter."""
    points, base, n_nodes = _base(curve, precision, nodes)
    z, _, movable = chart(points)
    step = h * diameter(z)
    _check_collision(z, step)
    m = len(movable)

    def f(xy: np.ndarray) -> float:
        pts = z.copy()
        pts[movable] = xy[:m] + 1j * xy[m:]
        return _energy_at(pts, chi, n_nodes)

    x0 = np.concatenate([z[movable].real, z[movable].imag])
    hess = real_hessian(f, x0, step)
    lev = levi_from_hessian(hess)
    herm = float(np.max(np.abs(lev - lev.conj().T)))
    lev_h = 0.5 * (lev + lev.conj().T)
    evals, evecs = np.linalg.eigh(lev_h)
    dtau = tau_derivatives(points, step, n_nodes, movable) if with_dtau else None
    return LeviReport(
        points=z,
        character=chi,
        step=h,
        step_abs=step,
        nodes=n_nodes,
        energy=energy(base, chi),
        levi=lev_h,
        eigenvalues=evals,
        eigenvectors=evecs,
        hermitian_residual=herm,
        tol_psd=tol_psd,
        tol_ker=tol_ker,
        movable=movable,
        dtau=dtau,
        period_data=base,
    )


def tau_derivatives(points, step: float, nodes: int, movable: list[int] | None = None) -> np.ndarray:
    """d tau / d lambda_j by central differences along each movable branch point."""
    z = np.asarray(points, dtype=complex)
    if movable is None:
        movable = chart(z)[2]
    out = []
    for j in movable:
        zp, zm = z.copy(), z.copy()
        zp[j] += step
        zm[j] -= step
        tp = period_matrix(zp, nodes=nodes).tau
        tm = period_matrix(zm, nodes=nodes).tau
        out.append((tp - tm) / (2.0 * step))
    return np.array(out)


def predicted_kernel(report: LeviReport) -> PredictedKernel:
    rep = solve_phi(report.period_data, report.character)
    return predicted_kernel_map(report.period_data, rep.u, report.dtau)


def principal_angle(v: np.ndarray, subspace: np.ndarray) -> float:
    """Angle in [0, pi/2] between the line C v and the column span of ``subspace``."""
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    q, _ = np.linalg.qr(np.asarray(subspace, dtype=complex).reshape(v.size, -1))
    c = min(1.0, float(np.linalg.norm(q.conj().T @ v)))
    return float(np.arccos(c))


def kernel_match(report: LeviReport, predicted: PredictedKernel | None = None) -> float:
    """Angle between the numeric near-kernel eigenvector and the predicted kernel."""
    near = report.near_zero
    if report.degenerate or near.size > 1:
        raise AmbiguousKernel(f"{near.size} near-zero eigenvalues; the kernel line is not determined")
    predicted = predicted_kernel(report) if predicted is None else predicted
    if predicted.kernel.shape[1] == 0:
        raise AmbiguousKernel("the predicted kernel is trivial")
    idx = int(near[0]) if near.size else 0
    angle = principal_angle(report.eigenvectors[:, idx], predicted.kernel)
    report.angles.append(angle)
    return angle


@dataclass
class KappaStats:
    samples: list[float]
    excluded: int
    mean: float
    spread: float  # (max - min) / |mean|

    def to_json(self) -> dict:
        return {"samples": self.samples, "excluded": self.excluded, "mean": self.mean, "relative_spread": self.spread}


def theta_proportionality(
    report: LeviReport, directions: int | np.ndarray = 10, rng: np.random.Generator | None = None, q_floor: float = 1e-6
) -> KappaStats:
    """kappa(v) = v^H L v / Q(v) over random (or given) directions v."""
    pk = predicted_kernel(report)
    if isinstance(directions, int):
        rng = rng or np.random.default_rng(0)
        m = report.levi.shape[0]
        vs = rng.standard_normal((directions, m)) + 1j * rng.standard_normal((directions, m))
    else:
        vs = np.atleast_2d(np.asarray(directions, dtype=complex))
    qs = np.array([pk.q(v) for v in vs])
    levs = np.array([float(np.real(np.conj(v) @ report.levi @ v)) for v in vs])
    keep = qs > q_floor * np.max(qs) if np.max(qs) > 0 else np.zeros(qs.size, bool)
    if not np.any(keep):
        raise DegenerateDirection("every direction has Q(v) ~ 0")
    kappa = levs[keep] / qs[keep]
    mean = float(np.mean(kappa))
    spread = float((kappa.max() - kappa.min()) / abs(mean))
    report.kappa = [float(k) for k in kappa]
    return KappaStats([float(k) for k in kappa], int((~keep).sum()), mean, spread)


def step_convergence(curve, chi: AbelianCharacter, h: float = 1e-3, **kw) -> dict:
    """Levi matrices at h and h/2 and their maximal relative entry change."""
    r1 = levi_form(curve, chi, h=h, with_dtau=False, **kw)
    r2 = levi_form(curve, chi, h=h / 2, nodes=r1.nodes, with_dtau=False, **{k: v for k, v in kw.items() if k != "nodes"})
    scale = max(np.max(np.abs(r1.levi)), 1e-300)
    change = float(np.max(np.abs(r1.levi - r2.levi)) / scale)
    return {"h": h, "h_half": h / 2, "relative_change": change, "eigenvalues_h": r1.eigenvalues.tolist(), "eigenvalues_h_half": r2.eigenvalues.tolist()}


def random_branch_points(
    rng: np.random.Generator, g: int = 2, box: float = 3.0, min_sep: float = 0.3, tries: int = 200
) -> list:
    """Branch points containing -1, 0, 1 whose polyline is simple and well separated.

    Well separated means pairwise distances and distances to non-incident
    polyline segments are at least ``min_sep``.

    Free points are drawn on a 1/8 grid in a box; after ``tries`` rejections
    the free points are arranged left and right of the pinned ones with
    monotone real parts, which always gives a simple polyline.
    """
    from fractions import Fraction

    from .gaussian import GaussianRational
    from .periods import polyline_is_simple

    pinned = [GaussianRational(-1), GaussianRational(0), GaussianRational(1)]
    grid = int(box * 8)

    def draw() -> GaussianRational:
        re = Fraction(int(rng.integers(-grid, grid + 1)), 8)
        im = Fraction(int(rng.integers(-grid, grid + 1)), 8)
        return GaussianRational(re, im)

    def separated(pts) -> bool:
        z = np.array([complex(p) for p in pts])
        d = np.abs(z[:, None] - z[None, :])
        np.fill_diagonal(d, np.inf)
        if d.min() < min_sep:
            return False
        # keep every point clear of the polyline segments it is not on
        for k in range(len(z) - 1):
            a, b = z[k], z[k + 1]
            t = np.clip(((z - a) * np.conj(b - a)).real / abs(b - a) ** 2, 0.0, 1.0)
            dist = np.abs(z - (a + t * (b - a)))
            dist[[k, k + 1]] = np.inf
            if dist.min() < min_sep:
                return False
        return True

    for _ in range(tries):
        pts = pinned + [draw() for _ in range(2 * g - 1)]
        if separated(pts) and polyline_is_simple(pts):
            return pts
    while True:
        left, right = [], []
        left_re, right_re = Fraction(-1), Fraction(1)
        for k in range(2 * g - 1):
            im = Fraction(int(rng.integers(-grid, grid + 1)), 8)
            step = Fraction(int(rng.integers(3, 9)), 8)
            if k % 2 == 0:
                right_re += step
                right.append(GaussianRational(right_re, im))
            else:
                left_re -= step
                left.append(GaussianRational(left_re, im))
        pts = list(reversed(left)) + pinned + right
        if separated(pts) and polyline_is_simple(pts):
            return pts
