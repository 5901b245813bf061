"""Command-line front end.

    teichlevi curve-info --curve curve.json
    teichlevi kernel     --curve curve.json --character chi.json
    teichlevi higgs      --genus 4 --n 3 --seed 7
    teichlevi spectral   --genus 2 --samples 100
    teichlevi levi       --curve g2.json --step 1e-3
    teichlevi sweep      --what kernel --genera 2 3 4 --count 20

Every command writes ``report.json`` into ``--out`` (plus ``eigenvalues.csv``
and ``spectrum.svg`` for ``levi``).  Exit codes: 0 pass, 1 acceptance check
failed, 2 input error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import warnings
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from .abelian import (
    AbelianCharacter,
    SingularImTau,
    energy,
    kernel_annihilator,
    phi_coefficients,
    rational_phi,
    solve_phi,
)
from .curve import (
    CurveError,
    Differential,
    HyperellipticCurve,
    new_curve,
    one_form_basis,
    quadratic_basis,
)
from .gaussian import GaussianRational, parse_gaussian
from .higgs import (
    GenusTooSmall,
    HiggsError,
    construct_even,
    construct_odd,
    kernel_dimension,
    stability_certificate,
)
from .levi import (
    AmbiguousKernel,
    DegenerateDirection,
    LeviError,
    kernel_match,
    levi_form,
    random_branch_points,
    step_convergence,
    theta_proportionality,
)
from .periods import InvalidCutConfiguration, PeriodError, period_matrix
from .riemann_roch import (
    CurvePoint,
    RiemannRochError,
    UnsupportedSupport,
    canonical_divisor,
    h0,
    random_divisor,
    random_point,
)
from .spectral import (
    ZeroDiscriminant,
    hitchin_base_dim,
    hitchin_map,
    random_quadratic_differential,
    smoothness_n2,
)

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3

INPUT_ERRORS = (CurveError, InvalidCutConfiguration, UnsupportedSupport, HiggsError, FileNotFoundError, ValueError, KeyError)
NUMERIC_ERRORS = (PeriodError, SingularImTau, LeviError, RiemannRochError, ArithmeticError, np.linalg.LinAlgError)


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# io helpers


def load_curve(args) -> HyperellipticCurve:
    if args.curve:
        path = Path(args.curve)
        try:
            payload = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON ({exc})") from exc
        return HyperellipticCurve.from_json(payload)
    rng = np.random.default_rng([args.seed, 1])
    return new_curve(random_branch_points(rng, args.genus))


def load_character(args, g: int) -> AbelianCharacter:
    if getattr(args, "character", None):
        payload = json.loads(Path(args.character).read_text())
        chi = AbelianCharacter.from_json(payload)
        if chi.genus != g:
            raise InputError(f"character has {chi.genus} periods per cycle family, curve genus is {g}")
        return chi
    if getattr(args, "zero_character", False):
        return AbelianCharacter(np.zeros(g), np.zeros(g))
    return AbelianCharacter.random(g, np.random.default_rng([args.seed, 2]))


def config_echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "func"}


def _clean(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def write_report(out: Path, report: dict) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    path = out / "report.json"
    path.write_text(json.dumps(_clean(report), indent=2, sort_keys=True) + "\n")
    return path


def write_eigen_csv(out: Path, eigenvalues, norm: float) -> Path:
    path = out / "eigenvalues.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "eigenvalue", "relative"])
        for i, v in enumerate(eigenvalues):
            w.writerow([i, repr(float(v)), repr(float(v) / norm) if norm else "nan"])
    return path


def write_spectrum_svg(out: Path, eigenvalues, norm: float, tol_ker: float) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "teichlevi"
    rel = np.abs(np.asarray(eigenvalues, dtype=float)) / (norm or 1.0)
    fig, ax = plt.subplots(figsize=(4.5, 3.0))
    ax.bar(range(len(rel)), np.maximum(rel, 1e-18), color="#4477aa")
    ax.axhline(tol_ker, color="#cc3311", lw=1, ls="--", label="kernel threshold")
    ax.set_yscale("log")
    ax.set_xlabel("eigenvalue index")
    ax.set_ylabel("|eigenvalue| / ||L||")
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    path = out / "spectrum.svg"
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def _basis_json(forms: list[Differential]) -> list:
    return [d.to_json() for d in forms]


def _periods_json(curve, args) -> dict:
    data = period_matrix(curve, precision=args.precision)
    return data.to_json()


# ---------------------------------------------------------------------------
# commands


def cmd_curve_info(args) -> tuple[dict, int]:
    curve = load_curve(args)
    report = {
        "tag": "curve-model",
        "curve": curve.to_json(),
        "genus": curve.genus,
        "one_form_basis": _basis_json(one_form_basis(curve)),
        "quadratic_basis": _basis_json(quadratic_basis(curve)),
        "quadratic_dimension": len(quadratic_basis(curve)),
        "canonical_divisor": canonical_divisor(curve).to_json(),
        "canonical_degree": canonical_divisor(curve).degree,
        "periods": _periods_json(curve, args),
    }
    return report, EXIT_PASS


def _parse_phi(text: str) -> Differential:
    coeffs = [parse_gaussian(t.strip()) for t in text.split(",") if t.strip()]
    return Differential(1, tuple(coeffs), 1)


def cmd_kernel(args) -> tuple[dict, int]:
    curve = load_curve(args)
    g = curve.genus
    report: dict = {"tag": "Prop1.3", "curve": curve.to_json(), "genus": g}
    if args.phi:
        phi = _parse_phi(args.phi)
        if len(phi.numerator) > g:
            raise InputError(f"phi has degree {len(phi.numerator) - 1} > g-1 = {g - 1}")
        report["phi_source"] = "exact"
    else:
        chi = load_character(args, g)
        data = period_matrix(curve, precision=args.precision)
        rep = solve_phi(data, chi)
        coeffs = phi_coefficients(data, rep.u)
        phi = rational_phi(coeffs, args.max_denominator)
        report.update(
            {
                "phi_source": "character",
                "character": chi.to_json(),
                "energy": energy(data, chi),
                "u": rep.u,
                "phi_residual": rep.residual,
                "phi_numeric": coeffs,
                "rationalized_max_denominator": args.max_denominator,
            }
        )
    ann = kernel_annihilator(curve, phi)
    expected = 3 * g - 3 if ann.zero_form else 2 * g - 3
    report.update(
        {
            "phi": phi.to_json(),
            "annihilator": ann.to_json(),
            "degenerate": ann.zero_form,
            "expected_dimension": expected,
            "pass": ann.dimension == expected,
        }
    )
    return report, EXIT_PASS if report["pass"] else EXIT_FAIL


def _base_point(curve: HyperellipticCurve, args) -> CurvePoint:
    if args.x0:
        return CurvePoint.affine(curve, parse_gaussian(args.x0), args.sheet)
    return random_point(curve, np.random.default_rng([args.seed, 3]))


def cmd_higgs(args) -> tuple[dict, int]:
    curve = load_curve(args)
    g = curve.genus
    p = _base_point(curve, args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", GenusTooSmall)
        bundle = construct_odd(curve, p, args.n) if args.n % 2 else construct_even(curve, p, args.n)
    cert = stability_certificate(bundle)
    kern = kernel_dimension(bundle, override=True)
    hp = hitchin_map(bundle)
    parity = "odd" if args.n % 2 else "even"
    if parity == "odd":
        ok = cert.is_stable and kern.dimension == 2 * g - 3
    elif args.n == 2:
        ok = cert.status == "not_stable" and cert.witness is not None and cert.witness["degree"] == 0
    else:
        ok = cert.is_stable and kern.dimension >= g - 3
    ok = ok and hp.is_zero
    report = {
        "tag": f"S7.2-{parity}",
        "curve": curve.to_json(),
        "genus": g,
        "bundle": bundle.to_json(),
        "stability": cert.to_json(),
        "kernel": kern.to_json(),
        "hitchin_point": hp.to_json(),
        "nilpotent": hp.is_zero,
        "warnings": [str(w.message) for w in caught],
        "pass": ok,
    }
    if cert.note:
        report["discrepancy"] = cert.note
    return report, EXIT_PASS if ok else EXIT_FAIL


def cmd_spectral(args) -> tuple[dict, int]:
    curve = load_curve(args)
    rng = np.random.default_rng([args.seed, 4])
    dims = {str(n): hitchin_base_dim(curve, n) for n in range(1, args.max_rank + 1)}
    try:
        smoothness_n2(curve, None, None)
        zero_rejected = False
    except ZeroDiscriminant:
        zero_rejected = True
    verdicts = [smoothness_n2(curve, None, random_quadratic_differential(curve, rng)) for _ in range(args.samples)]
    n_smooth = sum(v.smooth for v in verdicts)
    reasons: dict[str, int] = {}
    for v in verdicts:
        reasons[v.reason] = reasons.get(v.reason, 0) + 1
    ok = zero_rejected and n_smooth >= 0.95 * args.samples
    report = {
        "tag": "S2.1.1",
        "curve": curve.to_json(),
        "genus": curve.genus,
        "hitchin_base_dimensions": dims,
        "zero_point_rejected": zero_rejected,
        "samples": args.samples,
        "smooth": n_smooth,
        "reasons": reasons,
        "pass": ok,
    }
    return report, EXIT_PASS if ok else EXIT_FAIL


def cmd_levi(args) -> tuple[dict, int]:
    curve = load_curve(args)
    g = curve.genus
    chi = load_character(args, g)
    rep = levi_form(curve, chi, h=args.step, precision=args.precision, tol_psd=args.tol_psd, tol_ker=args.tol_ker)
    out = Path(args.out)
    report: dict = {
        "tags": ["Toledo-psh", "Prop1.3", "Thm1.8"],
        "curve": curve.to_json(),
        "genus": g,
        "mode": "verification" if g == 2 else "exploratory",
    }
    checks: dict[str, bool] = {"psd": rep.psd}
    if rep.degenerate:
        report["degenerate"] = True
        checks = {}
    else:
        report["degenerate"] = False
        checks["one_near_zero"] = int(rep.near_zero.size) == 1
        try:
            angle = kernel_match(rep)
            report["kernel_angle"] = angle
            checks["kernel_angle"] = angle < args.angle_tol
        except AmbiguousKernel as exc:
            report["kernel_angle_error"] = str(exc)
            checks["kernel_angle"] = False
        try:
            stats = theta_proportionality(rep, args.directions, np.random.default_rng([args.seed, 5]))
            report["kappa"] = stats.to_json()
            checks["kappa_spread"] = stats.spread < 0.01 and stats.mean > 0
        except DegenerateDirection as exc:
            report["kappa_error"] = str(exc)
            checks["kappa_spread"] = False
        if args.convergence:
            report["convergence"] = step_convergence(curve, chi, h=args.step, precision=args.precision)
    report["levi"] = rep.to_json()
    report["checks"] = checks
    ok = all(checks.values()) if g == 2 else True
    report["pass"] = ok
    out.mkdir(parents=True, exist_ok=True)
    write_eigen_csv(out, rep.eigenvalues, rep.norm)
    write_spectrum_svg(out, rep.eigenvalues, rep.norm, args.tol_ker)
    return report, EXIT_PASS if ok else EXIT_FAIL


def _sweep_kernel(g: int, rng) -> dict:
    pts = set()
    while len(pts) < 2 * g + 2:
        pts.add(GaussianRational(int(rng.integers(-30, 31)), int(rng.integers(-30, 31))))
    curve = new_curve(sorted(pts, key=lambda z: z.sort_key()))
    while True:
        coeffs = [GaussianRational(int(rng.integers(-9, 10)), int(rng.integers(-9, 10))) for _ in range(g)]
        if any(coeffs):
            break
    ann = kernel_annihilator(curve, Differential(1, tuple(coeffs), 1))
    return {"value": ann.dimension, "expected": 2 * g - 3}


def _sweep_rr(g: int, rng) -> dict:
    curve = new_curve(random_branch_points(rng, g))
    d = random_divisor(curve, rng, int(rng.integers(-3, 2 * g + 4)))
    sys_ = h0(curve, d)
    return {"value": sys_.dimension - sys_.dual_dimension, "expected": d.degree - g + 1}


def _sweep_higgs(g: int, rng) -> dict:
    pts = [GaussianRational(k) for k in range(-g - 1, g + 1)]
    curve = new_curve(pts)
    p = random_point(curve, rng)
    b = construct_odd(curve, p, 3)
    return {"value": kernel_dimension(b).dimension, "expected": 2 * g - 3}


SWEEPS: dict[str, Callable] = {"kernel": _sweep_kernel, "rr": _sweep_rr, "higgs-odd": _sweep_higgs}


def cmd_sweep(args) -> tuple[dict, int]:
    fn = SWEEPS[args.what]
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GenusTooSmall)
        for g in args.genera:
            rng = np.random.default_rng([args.seed, g])
            results = [fn(g, rng) for _ in range(args.count)]
            hits = sum(r["value"] == r["expected"] for r in results)
            rows.append({"genus": g, "count": args.count, "matches": hits, "values": sorted({r["value"] for r in results})})
    ok = all(r["matches"] == r["count"] for r in rows)
    tag = {"kernel": "Prop1.3", "rr": "riemann-roch", "higgs-odd": "S7.2-odd"}[args.what]
    return {"tag": tag, "what": args.what, "rows": rows, "pass": ok}, EXIT_PASS if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--curve", help="curve JSON file {\"branch_points\": [...]}")
    common.add_argument("--genus", type=int, default=2, help="genus of the seeded random curve when --curve is absent")
    common.add_argument("--precision", type=float, default=1e-12)
    common.add_argument("--step", type=float, default=1e-3, help="Levi stencil step relative to the branch-point diameter")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default="out")
    common.add_argument("--tol-psd", type=float, default=1e-4)
    common.add_argument("--tol-ker", type=float, default=1e-3)

    parser = argparse.ArgumentParser(prog="teichlevi", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curve-info", parents=[common], help="genus, bases, canonical divisor, periods")
    p.set_defaults(func=cmd_curve_info)

    p = sub.add_parser("kernel", parents=[common], help="exact annihilator of phi * H^0(K)")
    p.add_argument("--character", help="JSON {\"a\": [...], \"b\": [...]}")
    p.add_argument("--zero-character", action="store_true")
    p.add_argument("--phi", help="comma-separated Gaussian-rational coefficients of phi in x^i dx/y")
    p.add_argument("--max-denominator", type=int, default=10**6)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("higgs", parents=[common], help="graded nilpotent Higgs bundle checks")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--x0", help="x-coordinate of the base point (random when absent)")
    p.add_argument("--sheet", type=int, default=1, choices=(1, -1))
    p.set_defaults(func=cmd_higgs)

    p = sub.add_parser("spectral", parents=[common], help="Hitchin base and rank-two smoothness sampling")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--max-rank", type=int, default=4)
    p.set_defaults(func=cmd_spectral)

    p = sub.add_parser("levi", parents=[common], help="finite-difference Levi form lab")
    p.add_argument("--character", help="JSON {\"a\": [...], \"b\": [...]}")
    p.add_argument("--zero-character", action="store_true")
    p.add_argument("--directions", type=int, default=10)
    p.add_argument("--angle-tol", type=float, default=1e-2)
    p.add_argument("--convergence", action="store_true", help="also compare against step/2")
    p.set_defaults(func=cmd_levi)

    p = sub.add_parser("sweep", parents=[common], help="seeded exact sweeps")
    p.add_argument("--what", choices=sorted(SWEEPS), default="kernel")
    p.add_argument("--genera", type=int, nargs="+", default=[2, 3, 4])
    p.add_argument("--count", type=int, default=10)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Path(args.out)
    config = config_echo(args)
    try:
        report, code = args.func(args)
    except Exception as exc:
        if isinstance(exc, NUMERIC_ERRORS):
            code = EXIT_NUMERIC
        elif isinstance(exc, INPUT_ERRORS):
            code = EXIT_INPUT
        else:
            raise
        report = {"error": type(exc).__name__, "message": str(exc)}
    report["config"] = config
    report["exit_code"] = code
    path = write_report(out, report)
    status = {EXIT_PASS: "PASS", EXIT_FAIL: "FAIL", EXIT_INPUT: "INPUT ERROR", EXIT_NUMERIC: "NUMERIC FAILURE"}[code]
    msg = f"{args.command}: {status} -> {path}"
    if "error" in report:
        msg += f" ({report['error']}: {report['message']})"
    print(msg, file=sys.stderr if code >= EXIT_INPUT else sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
