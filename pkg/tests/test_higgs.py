from __future__ import annotations

import warnings

import numpy as np
import pytest

from teichlevi.curve import Differential
from teichlevi.higgs import (
    GenusTooSmall,
    GradedHiggsBundle,
    HiggsError,
    NotStable,
    ZeroSection,
    construct_even,
    construct_odd,
    default_psi,
    even_exponents,
    kernel_dimension,
    odd_exponents,
    omega_section,
    stability_certificate,
)
from teichlevi.riemann_roch import CurvePoint, Divisor, Section, canonical_divisor, h0, random_point

from _support import integer_curve, random_exact_curve
from test_riemann_roch import numeric_product_rank


@pytest.fixture(scope="module")
def g4():
    return integer_curve(4)


@pytest.fixture(scope="module")
def g5():
    return integer_curve(5)


def point(curve, seed=0):
    return random_point(curve, np.random.default_rng(seed))


def test_exponent_patterns():
    assert odd_exponents(3) == (1, 0, -1)
    assert odd_exponents(5) == (2, 1, 0, -1, -2)
    assert even_exponents(2) == (0, 0)
    assert even_exponents(4) == (1, 0, 0, -1)
    assert even_exponents(6) == (2, 1, 0, 0, -1, -2)


def test_constructions(g4):
    p = point(g4)
    b3 = construct_odd(g4, p, 3)
    assert b3.exponents == (1, 0, -1) and b3.maps[0] == b3.maps[1]
    b6 = construct_even(g4, p, 6)
    assert b6.exponents == (2, 1, 0, 0, -1, -2)
    assert b6.maps[2] == omega_section() and b6.maps[0] == default_psi(g4, p)
    for b in (b3, b6):
        assert sum(b.exponents) == 0
        m = b.higgs_matrix()
        assert all(m[i][i] is None for i in range(b.rank))  # traceless, strictly lower triangular
        assert all(m[r][c] is None for r in range(b.rank) for c in range(b.rank) if r <= c)


def test_zero_section(g4):
    p = point(g4)
    with pytest.raises(ZeroSection):
        construct_odd(g4, p, 3, psi=Differential(1, (), 1))
    with pytest.raises(ZeroSection):
        construct_even(g4, p, 4, omega=Section(1, ()))


def test_bad_rank(g4):
    p = point(g4)
    with pytest.raises(HiggsError):
        construct_odd(g4, p, 4)
    with pytest.raises(HiggsError):
        construct_even(g4, p, 3)


def test_genus_too_small_warns():
    c = integer_curve(3)
    with pytest.warns(GenusTooSmall):
        b = construct_odd(c, point(c), 3)
    assert b.warnings


def test_no_warning_at_genus_four(g4):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        construct_odd(g4, point(g4), 3)


def test_invariant_checks(g4):
    p = point(g4)
    omega = omega_section()
    with pytest.raises(HiggsError):
        GradedHiggsBundle(g4, p, (1, 0), (omega,))  # exponents do not sum to zero
    with pytest.raises(HiggsError):
        GradedHiggsBundle(g4, p, (1, -1), (omega,))  # dx/y does not vanish at p
    with pytest.raises(HiggsError):
        GradedHiggsBundle(g4, p, (1, 0, -1), (omega,))  # wrong number of maps


def test_psi_vanishes_at_p(g4):
    p = point(g4, 3)
    psi = default_psi(g4, p)
    k = canonical_divisor(g4)
    assert psi in h0(g4, k - Divisor.point(p)).as_sections(1)


# -- stability ----------------------------------------------------------------------


def test_stability_examples(g4):
    p = point(g4)
    cert = stability_certificate(construct_odd(g4, p, 3))
    assert cert.status == "stable" and cert.tail_degrees == (-1, -1)
    cert2 = stability_certificate(construct_even(g4, p, 2))
    assert cert2.status == "not_stable"
    assert cert2.witness["degree"] == 0 and cert2.witness["tail_start"] == 2
    assert "verbatim" in cert2.note
    for n in (4, 6):
        assert stability_certificate(construct_even(g4, p, n)).is_stable


def test_destabilizing_custom_bundle(g4):
    p = point(g4)
    b = GradedHiggsBundle(g4, p, (-1, 1), (omega_section(),))
    cert = stability_certificate(b)
    assert cert.status == "not_stable" and cert.witness["degree"] == 1 and cert.note is None


def test_indeterminate_when_a_map_vanishes(g4):
    p = point(g4)
    b = GradedHiggsBundle(g4, p, (1, 0, -1), (default_psi(g4, p), Section(1, ())))
    cert = stability_certificate(b)
    assert cert.status == "indeterminate"
    with pytest.raises(NotStable):
        kernel_dimension(b)


def test_tail_degrees_oracle(g4):
    p = point(g4)
    for n in (3, 5, 7):
        b = construct_odd(g4, p, n)
        e = b.exponents
        assert stability_certificate(b).tail_degrees == tuple(sum(e[i:]) for i in range(1, n))
        assert all(d < 0 for d in stability_certificate(b).tail_degrees)


# -- kernel dimension ------------------------------------------------------------


def test_kernel_odd_examples(g4, g5):
    k3 = kernel_dimension(construct_odd(g4, point(g4), 3))
    assert k3.dimension == 5 and k3.matches_claim and k3.relation == "=="
    k5 = kernel_dimension(construct_odd(g5, point(g5), 5))
    assert k5.dimension == 7


def test_kernel_odd_numeric_oracle(g4):
    p = point(g4, 9)
    b = construct_odd(g4, p, 3)
    cert = kernel_dimension(b)
    dual = h0(g4, canonical_divisor(g4) + Divisor.point(p)).as_sections(1)
    assert len(dual) == 4
    assert 9 - numeric_product_rank(g4, [b.maps[0]], dual) == cert.dimension


def test_kernel_even(g5):
    p = point(g5)
    cert = kernel_dimension(construct_even(g5, p, 4))
    assert cert.dimension >= 2 and cert.relation == ">=" and cert.matches_claim
    assert len(cert.components) == 2
    payload = cert.to_json()
    assert payload["h0_K_minus_p"]["computed"] == 4 and payload["h0_K_minus_p"]["claimed_value"] == "g-2"


def test_kernel_n2_requires_override(g5):
    b = construct_even(g5, point(g5), 2)
    with pytest.raises(NotStable):
        kernel_dimension(b)
    cert = kernel_dimension(b, override=True)
    assert cert.override and not cert.stable
    assert cert.dimension == 2 * 5 - 3  # only omega * H^0(K) contributes


def test_kernel_independent_of_rank():
    rng = np.random.default_rng(1)
    c = random_exact_curve(4, rng)
    p = random_point(c, rng)
    dims = {n: kernel_dimension(construct_odd(c, p, n)).dimension for n in (3, 5, 7)}
    assert set(dims.values()) == {5}


def test_bundle_json(g4):
    b = construct_odd(g4, point(g4), 3)
    payload = b.to_json()
    assert payload["exponents"] == [1, 0, -1] and payload["parity"] == "odd"
    assert CurvePoint.from_json(g4, payload["p"]) == b.base_point
