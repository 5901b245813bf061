"""Rank-one theory: energy of a character, its holomorphic representative, and
the exact annihilator of phi * H^0(K) inside the dual of H^0(K^2).

A character is described by the periods (a, b) of the real class it defines
over the A- and B-cycles.  The unique holomorphic form phi = sum u_i zeta_i
(zeta the A-normalized basis) with Re(phi) in that class has

    Re u = a,  Re(tau u) = b   =>   u = a + i Y^-1 (X a - b),   tau = X + iY,

and the energy is the L^2 norm u^H Y u.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .curve import Differential, HyperellipticCurve, one_form_basis, quadratic_basis
from .gaussian import GaussianRational, format_gaussian
from .linalg import nullspace, rank
from .periods import PeriodData, normalized_forms
from .riemann_roch import product_vectors


class SingularImTau(ArithmeticError):
    """Im tau is not safely invertible, which points to a failed period computation."""


class ZeroForm(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class AbelianCharacter:
    a: np.ndarray
    b: np.ndarray
    angles: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float).reshape(-1)
        b = np.asarray(self.b, dtype=float).reshape(-1)
        if a.shape != b.shape:
            raise ValueError("a and b must have the same length")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("character periods must be finite")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __eq__(self, other):
        if not isinstance(other, AbelianCharacter):
            return NotImplemented
        return np.array_equal(self.a, other.a) and np.array_equal(self.b, other.b)

    def __hash__(self):
        return hash((self.a.tobytes(), self.b.tobytes()))

    @property
    def genus(self) -> int:
        return self.a.size

    @property
    def is_trivial(self) -> bool:
        return not (np.any(self.a) or np.any(self.b))

    def scaled(self, t: float) -> "AbelianCharacter":
        return AbelianCharacter(t * self.a, t * self.b)

    def transformed(self, m: np.ndarray) -> "AbelianCharacter":
        """Periods over the basis (A'; B') = M (A; B)."""
        v = np.asarray(m, dtype=float) @ np.concatenate([self.a, self.b])
        g = self.genus
        return AbelianCharacter(v[:g], v[g:])

    def to_json(self) -> dict:
        return {"a": self.a.tolist(), "b": self.b.tolist()}

    @classmethod
    def from_json(cls, payload: dict) -> "AbelianCharacter":
        return cls(payload["a"], payload["b"])

    @classmethod
    def random(cls, g: int, rng: np.random.Generator, scale: float = 1.0) -> "AbelianCharacter":
        return cls(scale * rng.standard_normal(g), scale * rng.standard_normal(g))


@dataclass(frozen=True)
class HarmonicRepresentative:
    u: np.ndarray
    s: np.ndarray
    residual: float


def _im_tau(periods: PeriodData) -> np.ndarray:
    y = periods.im_tau
    eig = np.linalg.eigvalsh(y)
    if eig[0] <= 0 or eig[0] < 1e-12 * eig[-1]:
        raise SingularImTau(f"Im tau has eigenvalues {eig}")
    return y


def solve_phi(periods: PeriodData, chi: AbelianCharacter) -> HarmonicRepresentative:
    if chi.genus != periods.genus:
        raise ValueError("character genus does not match the period data")
    y = _im_tau(periods)
    s = np.linalg.solve(y, periods.re_tau @ chi.a - chi.b)
    u = chi.a + 1j * s
    residual = float(np.max(np.abs((periods.tau @ u).real - chi.b), initial=0.0))
    return HarmonicRepresentative(u, s, residual)


def energy(periods: PeriodData, chi: AbelianCharacter) -> float:
    rep = solve_phi(periods, chi)
    y = _im_tau(periods)
    return float(np.real(np.conj(rep.u) @ y @ rep.u))


def phi_coefficients(periods: PeriodData, u: np.ndarray) -> np.ndarray:
    """Monomial coefficients of sum u_i zeta_i."""
    return np.asarray(u, dtype=complex) @ normalized_forms(periods)


def rational_phi(coeffs: Sequence[complex], max_denominator: int = 10**6) -> Differential:
    """Round numeric monomial coefficients to a Gaussian-rational 1-form."""
    out = []
    for z in coeffs:
        z = complex(z)
        out.append(
            GaussianRational(
                Fraction(z.real).limit_denominator(max_denominator),
                Fraction(z.imag).limit_denominator(max_denominator),
            )
        )
    return Differential(1, tuple(out), 1)


# ---------------------------------------------------------------------------
# exact annihilator


@dataclass
class Annihilator:
    dimension: int
    basis: list[list]
    product_rank: int
    zero_form: bool = False

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "product_rank": self.product_rank,
            "zero_form": self.zero_form,
            "basis": [[format_gaussian(c) for c in v] for v in self.basis],
        }


def multiplication_matrix(curve: HyperellipticCurve, phi: Differential) -> list[list]:
    """g x (3g-3) matrix: row i = QD coordinates of phi * x^i dx/y."""
    return product_vectors(curve, [phi], one_form_basis(curve))


def kernel_annihilator(curve: HyperellipticCurve, phi: Differential) -> Annihilator:
    """Functionals on QD(S) vanishing on phi * H^0(K), exactly."""
    if phi.weight != 1 or not phi.is_holomorphic(curve):
        raise ValueError("phi must be a holomorphic 1-form")
    n = len(quadratic_basis(curve))
    if phi.is_zero:
        return Annihilator(n, nullspace([], n), 0, zero_form=True)
    rows = multiplication_matrix(curve, phi)
    basis = nullspace(rows, n)
    return Annihilator(len(basis), basis, rank(rows, n))


# ---------------------------------------------------------------------------
# predicted kernel in branch coordinates


@dataclass
class PredictedKernel:
    matrix: np.ndarray  # g x (2g-1): column j is (d tau / d lambda_j) u
    singular_values: np.ndarray
    kernel: np.ndarray  # columns span {v : (nabla_v tau) u = 0}
    im_tau_inv: np.ndarray

    def q(self, v: np.ndarray) -> float:
        w = self.matrix @ np.asarray(v, dtype=complex)
        return float(np.real(np.conj(w) @ self.im_tau_inv @ w))


def predicted_kernel_map(
    periods: PeriodData, u: np.ndarray, dtau: np.ndarray, rel_tol: float = 1e-6
) -> PredictedKernel:
    """Linear map v -> (nabla_v tau) u and its kernel.

    ``dtau[j]`` is d tau / d lambda_j for the j-th movable branch point.
    Singular values below ``rel_tol * ||dtau|| * ||u||`` count as zero.
    """
    dtau = np.asarray(dtau, dtype=complex)
    u = np.asarray(u, dtype=complex)
    nvar = dtau.shape[0]
    d = np.stack([dtau[j] @ u for j in range(nvar)], axis=1)
    y_inv = np.linalg.inv(_im_tau(periods))
    _, sv, vh = np.linalg.svd(d)
    scale = float(np.linalg.norm(dtau.reshape(nvar, -1)) * np.linalg.norm(u))
    full = np.zeros(nvar)
    full[: sv.size] = sv
    if scale == 0:
        kernel = np.eye(nvar, dtype=complex)
    else:
        null = [k for k in range(nvar) if full[k] <= rel_tol * scale]
        kernel = vh.conj().T[:, null]
    return PredictedKernel(d, full, kernel, y_inv)
